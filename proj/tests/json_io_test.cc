#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "persuasion/error.h"
#include "persuasion/harness.h"
#include "persuasion/json_io.h"

namespace persuasion {
namespace {

void ExpectBitIdentical(const Distribution& f, const Distribution& g) {
  ASSERT_EQ(f.atoms().size(), g.atoms().size());
  ASSERT_EQ(f.uniforms().size(), g.uniforms().size());
  for (size_t k = 0; k < f.atoms().size(); ++k) {
    EXPECT_EQ(f.atoms()[k].x, g.atoms()[k].x);
    EXPECT_EQ(f.atoms()[k].w, g.atoms()[k].w);
  }
  for (size_t k = 0; k < f.uniforms().size(); ++k) {
    EXPECT_EQ(f.uniforms()[k].from, g.uniforms()[k].from);
    EXPECT_EQ(f.uniforms()[k].to, g.uniforms()[k].to);
    EXPECT_EQ(f.uniforms()[k].w, g.uniforms()[k].w);
  }
}

void ExpectBitIdentical(const Payoff& u, const Payoff& v) {
  ASSERT_EQ(u.segments().size(), v.segments().size());
  for (size_t k = 0; k < u.segments().size(); ++k) {
    const PayoffSegment &a = u.segments()[k], &b = v.segments()[k];
    EXPECT_EQ(a.from, b.from);
    EXPECT_EQ(a.to, b.to);
    EXPECT_EQ(a.poly.coeffs(), b.poly.coeffs());
    EXPECT_EQ(a.curvature, b.curvature);
    EXPECT_EQ(a.outer, b.outer);
  }
}

Distribution ThroughText(const Distribution& f) {
  return DistributionFromJson(Json::parse(ToJson(f).dump()));
}

Payoff ThroughText(const Payoff& u) { return PayoffFromJson(Json::parse(ToJson(u).dump(2))); }

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInvalidArgument;
}

TEST(DistributionJson, SchemaExample) {
  const Json j = Json::parse(R"({"atoms":[{"x":0.5,"w":1.0}],"uniforms":[{"from":0.0,"to":1.0,"w":0.0}]})");
  const Distribution f = DistributionFromJson(j);
  ASSERT_EQ(f.atoms().size(), 1u);
  EXPECT_TRUE(f.uniforms().empty());
  EXPECT_EQ(f.atoms()[0].x, 0.5);
  EXPECT_EQ(f.atoms()[0].w, 1.0);
}

TEST(DistributionJson, GeneratedPriorsRoundTripExactly) {
  for (PriorFamily fam : {PriorFamily::kAtomless, PriorFamily::kAtoms, PriorFamily::kMixed,
                          PriorFamily::kTwoPoint}) {
    for (uint64_t seed = 1; seed <= 25; ++seed) {
      InstanceSpec spec;
      spec.seed = seed;
      spec.prior = fam;
      spec.prior_pieces = 4;
      const Distribution f = GenPrior(spec);
      ExpectBitIdentical(f, ThroughText(f));
    }
  }
}

TEST(DistributionJson, DerivedDistributionsRoundTripExactly) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    const double a = unit(rng), b = unit(rng), c = unit(rng), total = a + b + c;
    const Distribution f =
        Distribution::Create({{0.1 + 0.3 * unit(rng), a / total}, {0.6 + 0.3 * unit(rng), b / total}},
                             {{0.05, 0.95, c / total}});
    const Distribution g = UpperCensorship(f, 0.2 + 0.6 * unit(rng));
    const Distribution h = Discretize(f, GridSpec(37));
    for (const Distribution& d : {f, g, h, Meet(f, h), Join(g, h)}) {
      ExpectBitIdentical(d, ThroughText(d));
    }
  }
}

TEST(DistributionJson, EmittedTwiceIsStable) {
  const Distribution f = Distribution::Create({{0.3, 1.0 / 3.0}}, {{0.0, 1.0, 2.0 / 3.0}});
  EXPECT_EQ(ToJson(f).dump(), ToJson(ThroughText(f)).dump());
}

TEST(DistributionJson, Rejects) {
  EXPECT_EQ(KindOf([] { DistributionFromJson(Json::parse("[1, 2]")); }), ErrorKind::kParseError);
  EXPECT_EQ(KindOf([] { DistributionFromJson(Json::parse(R"({"atoms":[{"x":0.5}]})")); }),
            ErrorKind::kParseError);
  EXPECT_EQ(KindOf([] { DistributionFromJson(Json::parse(R"({"atoms":[{"x":"a","w":1}]})")); }),
            ErrorKind::kParseError);
  EXPECT_EQ(KindOf([] { DistributionFromJson(Json::parse(R"({"atoms":[{"x":0.5,"w":0.4}]})")); }),
            ErrorKind::kParseError);
  EXPECT_EQ(KindOf([] { DistributionFromJson(Json::parse(R"({"atoms":[{"x":1.5,"w":1}]})")); }),
            ErrorKind::kParseError);
  EXPECT_EQ(KindOf([] { DistributionFromJson(Json::parse("{}")); }), ErrorKind::kParseError);
}

TEST(PayoffJson, SchemaExample) {
  const Json j = Json::parse(R"({"segments":[
      {"from":0.0,"to":0.5,"coeffs":[0,0,3,-2],"curvature":"convex"},
      {"from":0.5,"to":1.0,"coeffs":[0,0,3,-2],"curvature":"concave"}]})");
  const Payoff u = PayoffFromJson(j);
  ASSERT_EQ(u.segments().size(), 2u);
  EXPECT_EQ(u.segments()[0].curvature, Curvature::kConvex);
  EXPECT_DOUBLE_EQ(u.Eval(0.25), 3 * 0.0625 - 2 * 0.015625);
  EXPECT_TRUE(CheckRegular(u).regular);
}

TEST(PayoffJson, UntaggedSegmentsAreTagged) {
  const Payoff u = PayoffFromJson(Json::parse(R"({"segments":[{"from":0,"to":1,"coeffs":[0,0,3,-2]}]})"));
  ASSERT_EQ(u.segments().size(), 2u);
  EXPECT_EQ(u.segments()[0].curvature, Curvature::kConvex);
  EXPECT_EQ(u.segments()[1].curvature, Curvature::kConcave);
  EXPECT_EQ(u.segments()[0].to, 0.5);
}

TEST(PayoffJson, RoundTripsExactly) {
  std::vector<Payoff> all = {SinFit(0.65, 1.75)};
  for (ExperimentKind k : {ExperimentKind::kDuality, ExperimentKind::kThm1Suff,
                           ExperimentKind::kThm2Suff, ExperimentKind::kThm2Nec}) {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      const InstanceSpec spec = MakeInstance(k, seed);
      all.push_back(GenPayoff(spec));
      if (k == ExperimentKind::kThm1Suff) all.push_back(GenPartner(all.back(), PartnerRoute::kExp, seed));
    }
  }
  for (const Payoff& u : all) ExpectBitIdentical(u, ThroughText(u));
}

TEST(PayoffJson, OuterTransform) {
  const Payoff v = PayoffFromJson(Json::parse(
      R"({"segments":[{"from":0,"to":1,"coeffs":[0,1],"curvature":"convex","outer":"exp"}]})"));
  EXPECT_EQ(v.segments()[0].outer, OuterTransform::kExp);
  EXPECT_NEAR(v.Eval(0.5), std::exp(0.5), 1e-15);
  EXPECT_EQ(ToJson(v)["segments"][0]["outer"], "exp");
  EXPECT_FALSE(ToJson(Payoff::FromPolynomial(Polynomial({1.0}), Curvature::kAffine))["segments"][0]
                   .contains("outer"));
}

TEST(PayoffJson, Rejects) {
  // Segments must cover [0, 1].
  EXPECT_EQ(KindOf([] {
              PayoffFromJson(Json::parse(R"({"segments":[{"from":0,"to":0.5,"coeffs":[1]}]})"));
            }),
            ErrorKind::kParseError);
  EXPECT_EQ(KindOf([] {
              PayoffFromJson(
                  Json::parse(R"({"segments":[{"from":0,"to":1,"coeffs":[1],"curvature":"wavy"}]})"));
            }),
            ErrorKind::kParseError);
  EXPECT_EQ(KindOf([] {
              PayoffFromJson(Json::parse(R"({"segments":[{"from":0,"to":1,"coeffs":[]}]})"));
            }),
            ErrorKind::kParseError);
  EXPECT_EQ(KindOf([] {
              PayoffFromJson(
                  Json::parse(R"({"segments":[{"from":0,"to":1,"coeffs":[1],"outer":"log"}]})"));
            }),
            ErrorKind::kParseError);
  EXPECT_EQ(KindOf([] { PayoffFromJson(Json::parse(R"({"segments":[]})")); }),
            ErrorKind::kParseError);
}

TEST(ReportJson, SolveReport) {
  const Payoff u = PayoffFromJson(Json::parse(R"({"segments":[{"from":0,"to":1,"coeffs":[0,1,-1]}]})"));
  const SolveReport r = Solve(u, Distribution::Uniform(0.0, 1.0), GridSpec(21));
  const Json j = ToJson(r);
  EXPECT_EQ(j["n"], 21);
  EXPECT_DOUBLE_EQ(j["value"].get<double>(), r.value);
  EXPECT_EQ(j["masses"].size(), 21u);
  EXPECT_EQ(j["prices"]["values"].size(), 21u);
  EXPECT_TRUE(j["slackness"]["pass"].get<bool>());
  ExpectBitIdentical(DistributionFromJson(j["optimizer"]), r.optimizer);
}

TEST(ReportJson, Verdicts) {
  const Payoff usq = Payoff::FromPolynomial(Polynomial({0.0, 0.0, 1.0}), Curvature::kConvex);
  const Payoff ulin = Payoff::FromPolynomial(Polynomial({0.0, 1.0}), Curvature::kAffine);
  const Json olc = ToJson(IsOrdinallyLessConvex(usq, ulin, GridSpec(21)));
  EXPECT_FALSE(olc["holds"].get<bool>());
  EXPECT_TRUE(olc["witness"].contains("alpha"));
  const Json ok = ToJson(IsOrdinallyLessConvex(ulin, usq, GridSpec(21)));
  EXPECT_TRUE(ok["holds"].get<bool>());
  EXPECT_TRUE(ok["witness"].is_null());
  const Json crater = ToJson(CheckCrater(SinFit(0.65, 1.75)));
  EXPECT_FALSE(crater["holds"].get<bool>());
  EXPECT_TRUE(crater["witness"]["reason"].is_string());
}

TEST(ReportJson, CraterCounterexample) {
  const GridSpec grid(401);
  const CraterCounterexample cx = BuildCraterCounterexample(SinFit(0.65, 1.75), grid);
  const Json j = ToJson(cx);
  for (const char* key : {"f0", "v", "f", "u", "X", "kappa", "left", "right"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  ExpectBitIdentical(DistributionFromJson(j["f0"]), cx.f0);
  ExpectBitIdentical(DistributionFromJson(j["f"]), cx.f);
  ExpectBitIdentical(PayoffFromJson(j["v"]), cx.v);
  const Json nc = ToJson(VerifyNecessity(cx, grid));
  EXPECT_TRUE(nc["pass"].get<bool>());
}

TEST(ReportJson, ExperimentReport) {
  ExperimentOptions o;
  o.kind = ExperimentKind::kProp1;
  o.count = 3;
  const Json j = ToJson(RunExperiment(o));
  EXPECT_EQ(j["kind"], "prop1");
  EXPECT_EQ(j["instances"].size(), 3u);
  EXPECT_EQ(j["passes"], 3);
  EXPECT_FALSE(j["instances"][0].contains("error"));
}

}  // namespace
}  // namespace persuasion
