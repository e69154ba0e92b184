#include <gtest/gtest.h>

#include <cmath>

#include "persuasion/error.h"
#include "persuasion/harness.h"
#include "persuasion/measures.h"
#include "persuasion/solver.h"

namespace persuasion {
namespace {

Payoff Poly(std::vector<double> c) {
  return AutoTagged(
      Payoff::FromPolynomial(Polynomial(std::move(c)), Curvature::kUnclassified).segments());
}

void ExpectSamePayoff(const Payoff& a, const Payoff& b) {
  ASSERT_EQ(a.segments().size(), b.segments().size());
  for (size_t k = 0; k < a.segments().size(); ++k) {
    EXPECT_EQ(a.segments()[k].from, b.segments()[k].from);
    EXPECT_EQ(a.segments()[k].to, b.segments()[k].to);
    EXPECT_EQ(a.segments()[k].poly.coeffs(), b.segments()[k].poly.coeffs());
    EXPECT_EQ(a.segments()[k].curvature, b.segments()[k].curvature);
  }
}

void ExpectSameDistribution(const Distribution& f, const Distribution& g) {
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

TEST(ExperimentKinds, NamesRoundTrip) {
  for (ExperimentKind k : AllExperimentKinds()) {
    const auto parsed = ParseExperimentKind(ExperimentKindName(k));
    ASSERT_TRUE(parsed.has_value());
    EXPECT_EQ(*parsed, k);
  }
  EXPECT_EQ(ParseExperimentKind("thm1-suff"), ExperimentKind::kThm1Suff);
  EXPECT_FALSE(ParseExperimentKind("thm3").has_value());
}

TEST(Generators, SameSeedSameInstance) {
  for (ExperimentKind k : AllExperimentKinds()) {
    if (k == ExperimentKind::kLattice) continue;
    for (uint64_t seed : {1u, 7u, 123u}) {
      const InstanceSpec a = MakeInstance(k, seed), b = MakeInstance(k, seed);
      EXPECT_EQ(a.payoff, b.payoff);
      EXPECT_EQ(a.prior, b.prior);
      EXPECT_EQ(a.partner, b.partner);
      EXPECT_EQ(a.grid_n, b.grid_n);
      ExpectSamePayoff(GenPayoff(a), GenPayoff(b));
      ExpectSameDistribution(GenPrior(a), GenPrior(b));
    }
  }
}

TEST(Generators, DifferentSeedsDiffer) {
  const InstanceSpec a = MakeInstance(ExperimentKind::kDuality, 1);
  const InstanceSpec b = MakeInstance(ExperimentKind::kDuality, 2);
  const Payoff u = GenPayoff(a), v = GenPayoff(b);
  double diff = 0.0;
  for (int i = 0; i <= 20; ++i) diff = std::max(diff, std::abs(u.Eval(i / 20.0) - v.Eval(i / 20.0)));
  EXPECT_GT(diff, 1e-6);
}

TEST(Generators, SShapeHasOneInflection) {
  for (int sign : {1, -1}) {
    InstanceSpec spec;
    spec.seed = 1;
    spec.payoff = PayoffFamily::kSShape;
    spec.sign = sign;
    const Payoff u = GenPayoff(spec);
    const auto runs = CurvatureRuns(u);
    ASSERT_EQ(runs.size(), 2u);
    EXPECT_EQ(runs[0].convex, sign < 0);
    EXPECT_TRUE(CheckRegular(u).regular);
  }
}

TEST(Generators, PayoffsAreRegular) {
  for (ExperimentKind k : {ExperimentKind::kThm1Suff, ExperimentKind::kThm2Suff,
                           ExperimentKind::kThm2Nec, ExperimentKind::kCensorship}) {
    for (uint64_t seed = 1; seed <= 20; ++seed) {
      const Payoff u = GenPayoff(MakeInstance(k, seed));
      if (k == ExperimentKind::kThm1Suff &&
          (MakeInstance(k, seed).payoff == PayoffFamily::kStep ||
           MakeInstance(k, seed).payoff == PayoffFamily::kPiecewiseLinear)) {
        continue;
      }
      EXPECT_TRUE(CheckRegular(u).regular) << ExperimentKindName(k) << " seed " << seed;
    }
  }
}

TEST(Generators, CraterFamiliesMatchTheirVerdict) {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    InstanceSpec spec;
    spec.seed = seed;
    spec.payoff = PayoffFamily::kCraterCompliant;
    EXPECT_TRUE(CheckCrater(GenPayoff(spec)).holds);
    spec.payoff = PayoffFamily::kCraterViolating;
    EXPECT_FALSE(CheckCrater(GenPayoff(spec)).holds);
  }
}

TEST(Generators, PriorsAreValid) {
  for (PriorFamily f : {PriorFamily::kAtomless, PriorFamily::kAtoms, PriorFamily::kMixed,
                        PriorFamily::kTwoPoint}) {
    for (uint64_t seed = 1; seed <= 20; ++seed) {
      InstanceSpec spec;
      spec.seed = seed;
      spec.prior = f;
      const Distribution p = GenPrior(spec);
      EXPECT_NEAR(p.TotalMass(), 1.0, 1e-12);
      EXPECT_GE(p.SupportMin(), 0.0);
      EXPECT_LE(p.SupportMax(), 1.0);
      if (f == PriorFamily::kAtomless) EXPECT_TRUE(p.atoms().empty());
      if (f == PriorFamily::kTwoPoint) {
        EXPECT_EQ(p.atoms().size(), 2u);
        EXPECT_TRUE(p.IsOnGrid(GridSpec(spec.grid_n)));
      }
    }
  }
}

TEST(Partners, ExpOfAffineIsStrictlyConvex) {
  const Payoff u = Poly({0.2, 0.5});
  const Payoff v = GenPartner(u, PartnerRoute::kExp, 1);
  for (int i = 1; i < 20; ++i) {
    const double a = (i - 1) / 20.0, m = i / 20.0, b = (i + 1) / 20.0;
    EXPECT_LT(v.Eval(m), 0.5 * (v.Eval(a) + v.Eval(b)));
  }
  EXPECT_NEAR(v.Eval(0.4), std::exp(0.4), 1e-12);
}

TEST(Partners, EveryRouteIsOrdinallyMoreConvex) {
  const GridSpec grid(101);
  for (PartnerRoute r : {PartnerRoute::kExp, PartnerRoute::kCubic, PartnerRoute::kAddConvex}) {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
      InstanceSpec spec;
      spec.seed = seed;
      spec.payoff = PayoffFamily::kSpline;
      const Payoff u = GenPayoff(spec);
      const Payoff v = GenPartner(u, r, seed);
      EXPECT_TRUE(IsOrdinallyLessConvex(u, v, grid).holds) << PartnerRouteName(r) << " " << seed;
    }
  }
}

TEST(Partners, RejectsNestedOuterTransform) {
  const Payoff v = GenPartner(Poly({0.0, 1.0}), PartnerRoute::kExp, 1);
  try {
    GenPartner(v, PartnerRoute::kExp, 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
  }
}

TEST(Certify, PointMassForConcavePayoff) {
  const Payoff u = Poly({0.0, 1.0, -1.0});
  const Distribution f0 = Distribution::Uniform(0.0, 1.0);
  const Certificate c = CertifyOptimality(u, f0, Distribution::PointMass(0.5), GridSpec(101));
  EXPECT_TRUE(c.feasible);
  EXPECT_TRUE(c.certified);
  EXPECT_NEAR(c.gap, 0.0, 1e-9);
  EXPECT_NEAR(c.lower, 0.25, 1e-12);
}

TEST(Certify, FullRevelationForConcavePayoffIsSuboptimal) {
  const Payoff u = Poly({0.0, 1.0, -1.0});
  const Distribution f0 = Distribution::Uniform(0.0, 1.0);
  const Certificate c = CertifyOptimality(u, f0, f0, GridSpec(101));
  EXPECT_TRUE(c.feasible);
  EXPECT_FALSE(c.certified);
  // u(1/2) - E u = 1/4 - 1/6
  EXPECT_NEAR(c.gap, 1.0 / 12.0, 1e-9);
}

TEST(Certify, InfeasibleCandidate) {
  const Payoff u = Poly({0.0, 1.0});
  const Distribution f0 = Distribution::Uniform(0.2, 0.8);
  EXPECT_FALSE(CertifyOptimality(u, f0, Distribution::PointMass(0.4), GridSpec(51)).feasible);
  EXPECT_FALSE(
      CertifyOptimality(u, f0, Distribution::TwoPoint(0.0, 0.5, 1.0), GridSpec(51)).feasible);
}

TEST(Certify, CensorshipForSShapeAt801) {
  const Payoff v = Poly({0.0, 0.0, 3.0, -2.0});
  const Distribution f0 = Distribution::Uniform(0.0, 1.0);
  const CensorshipSolution cs = UpperCensorshipSolve(v, f0);
  const Certificate c = CertifyOptimality(v, f0, cs.f, GridSpec(801), 2e-3);
  EXPECT_TRUE(c.feasible);
  EXPECT_TRUE(c.certified);
  EXPECT_LE(c.gap, 2e-3);
  EXPECT_GE(c.gap, -1e-9);
}

TEST(Certify, GridOptimumOfDiscretizedPrior) {
  const InstanceSpec spec = MakeInstance(ExperimentKind::kDuality, 3);
  const GridSpec grid(101);
  const Payoff u = GenPayoff(spec);
  const Distribution f0 = Discretize(GenPrior(spec), grid);
  const SolveReport s = Solve(u, f0, grid, nullptr, false);
  const Certificate c = CertifyOptimality(u, f0, s.optimizer, grid);
  EXPECT_TRUE(c.feasible);
  EXPECT_LE(std::abs(c.lower - s.value), 1e-9);
  EXPECT_GE(c.gap, -1e-9);
}

TEST(RunExperiment, SmallBatchOfEveryKindPasses) {
  for (ExperimentKind k : AllExperimentKinds()) {
    ExperimentOptions o;
    o.kind = k;
    o.count = k == ExperimentKind::kCensorship ? 2 : 4;
    o.seed = 11;
    const ExperimentReport r = RunExperiment(o);
    EXPECT_EQ(r.count, o.count);
    ASSERT_EQ(static_cast<int>(r.instances.size()), o.count);
    EXPECT_EQ(r.passes + r.failures + r.errors, o.count);
    EXPECT_EQ(r.passes, o.count) << ExperimentKindName(k);
    for (int i = 0; i < o.count; ++i) {
      EXPECT_EQ(r.instances[i].index, i);
      EXPECT_EQ(r.instances[i].seed, o.seed + i);
    }
  }
}

TEST(RunExperiment, ThreadCountDoesNotChangeResults) {
  ExperimentOptions o;
  o.kind = ExperimentKind::kThm1Suff;
  o.count = 6;
  o.seed = 40;
  o.threads = 1;
  const ExperimentReport a = RunExperiment(o);
  o.threads = 3;
  const ExperimentReport b = RunExperiment(o);
  ASSERT_EQ(a.instances.size(), b.instances.size());
  for (size_t i = 0; i < a.instances.size(); ++i) {
    EXPECT_EQ(a.instances[i].pass, b.instances[i].pass);
    EXPECT_EQ(a.instances[i].residual, b.instances[i].residual);
    EXPECT_EQ(a.instances[i].detail, b.instances[i].detail);
  }
  EXPECT_EQ(a.worst_residual, b.worst_residual);
}

TEST(RunExperiment, BinaryStepInstance) {
  const InstanceResult r = RunInstance(ExperimentKind::kBinary, 0, 1, 201, 8);
  EXPECT_TRUE(r.pass);
  EXPECT_NE(r.detail.find("cav=0.6"), std::string::npos);
}

TEST(RunExperiment, RejectsNegativeCount) {
  ExperimentOptions o;
  o.count = -1;
  EXPECT_THROW(RunExperiment(o), Error);
}

TEST(RunExperiment, EmptyBatch) {
  ExperimentOptions o;
  o.count = 0;
  const ExperimentReport r = RunExperiment(o);
  EXPECT_EQ(r.passes, 0);
  EXPECT_TRUE(r.instances.empty());
}

}  // namespace
}  // namespace persuasion
