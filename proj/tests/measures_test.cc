#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "persuasion/error.h"
#include "persuasion/measures.h"

namespace persuasion {
namespace {

// Direct evaluation of the integral of the CDF, used as an oracle.
double BruteC(const Distribution& f, double x) {
  double c = 0.0;
  for (const Atom& a : f.atoms()) c += a.w * std::max(0.0, x - a.x);
  for (const UniformPiece& u : f.uniforms()) {
    const double d = u.w / (u.to - u.from);
    if (x <= u.from) continue;
    const double r = std::min(x, u.to);
    // integral over t in [from, r] of (x - t) d
    c += d * ((x - u.from) * (x - u.from) - (x - r) * (x - r)) / 2.0;
  }
  return c;
}

Distribution RandomAtomic(std::mt19937_64& rng, int atoms, double mean) {
  // Random atoms, then shifted mass to hit the requested mean exactly via a
  // two-point correction around it.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Atom> a;
  double total = 0.0;
  for (int i = 0; i < atoms; ++i) {
    const double w = 0.1 + unit(rng);
    a.push_back({unit(rng), w});
    total += w;
  }
  for (Atom& x : a) x.w /= total;
  Distribution f = Distribution::Create(a, {});
  const double m = f.Mean();
  // Mix with an atom that restores the mean.
  const double target = mean;
  double lam = 0.5;
  double y = (target - (1 - lam) * m) / lam;
  while (y < 0.0 || y > 1.0) {
    lam = std::min(1.0, lam * 1.5);
    y = (target - (1 - lam) * m) / lam;
    if (lam >= 1.0) break;
  }
  std::vector<Atom> out;
  for (const Atom& x : f.atoms()) out.push_back({x.x, (1 - lam) * x.w});
  out.push_back({std::clamp(y, 0.0, 1.0), lam});
  std::sort(out.begin(), out.end(), [](const Atom& p, const Atom& q) { return p.x < q.x; });
  return Distribution::Create(out, {});
}

TEST(IntegratedCdf, PointMass) {
  const IntegratedCdf c = IntegrateCdf(Distribution::PointMass(0.5));
  for (double x : {0.0, 0.2, 0.5, 0.7, 1.0}) EXPECT_NEAR(c(x), std::max(0.0, x - 0.5), 1e-15);
}

TEST(IntegratedCdf, BinaryExtremes) {
  const IntegratedCdf c = IntegrateCdf(Distribution::TwoPoint(0.0, 0.5, 1.0));
  for (double x : {0.0, 0.3, 0.99}) EXPECT_NEAR(c(x), x / 2, 1e-15);
  EXPECT_NEAR(c(1.0), 0.5, 1e-15);
}

TEST(IntegratedCdf, Uniform) {
  const IntegratedCdf c = IntegrateCdf(Distribution::Uniform(0, 1));
  for (double x = 0; x <= 1.0; x += 0.125) EXPECT_NEAR(c(x), x * x / 2, 1e-15);
}

TEST(IntegratedCdf, EndpointsAndRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Atom> atoms;
    for (int i = 0; i < 3; ++i) atoms.push_back({unit(rng), 0.1 + unit(rng)});
    std::sort(atoms.begin(), atoms.end(), [](auto& p, auto& q) { return p.x < q.x; });
    double lo = 0.6 * unit(rng);
    std::vector<UniformPiece> un{{lo, lo + 0.05 + 0.3 * unit(rng), 0.5 + unit(rng)}};
    double total = un[0].w;
    for (auto& a : atoms) total += a.w;
    for (auto& a : atoms) a.w /= total;
    un[0].w /= total;
    const Distribution f = Distribution::Create(atoms, un);
    const IntegratedCdf c = IntegrateCdf(f);
    EXPECT_NEAR(c(0.0), 0.0, 1e-15);
    EXPECT_NEAR(c(1.0), 1.0 - f.Mean(), 1e-12);
    for (double x = 0; x <= 1.0; x += 0.01) EXPECT_NEAR(c(x), BruteC(f, x), 1e-12);
    const Distribution back = c.ToDistribution();
    EXPECT_LT(SupDistance(IntegrateCdf(back), c), 1e-12);
    EXPECT_NEAR(back.Mean(), f.Mean(), 1e-12);
    EXPECT_EQ(back.atoms().size(), f.atoms().size());
  }
}

TEST(LessInformative, PointMassBelowEverything) {
  const Distribution g = Distribution::Create({{0.1, 0.3}, {0.8, 0.7}}, {});
  EXPECT_TRUE(LessInformative(Distribution::PointMass(g.Mean()), g).holds);
}

TEST(LessInformative, ReversedOrderWitness) {
  const OrderCheck r =
      LessInformative(Distribution::TwoPoint(0.0, 0.5, 1.0), Distribution::PointMass(0.5));
  EXPECT_FALSE(r.holds);
  EXPECT_NEAR(r.witness, 0.5, 1e-12);
}

TEST(LessInformative, QuarterPointsBelowUniform) {
  EXPECT_TRUE(
      LessInformative(Distribution::TwoPoint(0.25, 0.5, 0.75), Distribution::Uniform(0, 1)).holds);
  EXPECT_FALSE(
      LessInformative(Distribution::Uniform(0, 1), Distribution::TwoPoint(0.25, 0.5, 0.75)).holds);
}

TEST(LessInformative, CatchesViolationInsideQuadraticPiece) {
  // C_U - C_G on [0.42, 0.58] is a quadratic with its minimum at 0.5, which
  // is not a knot of either distribution.
  const Distribution u = Distribution::Uniform(0.4, 0.6);
  const Distribution g = Distribution::Create({{0.42, 0.5}, {0.58, 0.5}}, {});
  const OrderCheck r = LessInformative(g, u);
  EXPECT_FALSE(r.holds);
  EXPECT_NEAR(r.witness, 0.5, 1e-9);
  EXPECT_NEAR(r.violation, 0.04 - 0.025, 1e-12);
  EXPECT_FALSE(LessInformative(u, g).holds);
}

TEST(LessInformative, DifferentMeansFail) {
  EXPECT_FALSE(LessInformative(Distribution::PointMass(0.4), Distribution::Uniform(0, 1)).holds);
}

TEST(Lattice, Idempotence) {
  const Distribution f = Distribution::Create({{0.2, 0.5}, {0.7, 0.5}}, {});
  EXPECT_LT(SupDistance(IntegrateCdf(Join(f, f)), IntegrateCdf(f)), 1e-12);
  EXPECT_LT(SupDistance(IntegrateCdf(Meet(f, f)), IntegrateCdf(f)), 1e-12);
}

TEST(Lattice, JoinWithPointMass) {
  const Distribution f0 = Distribution::Uniform(0, 1);
  const Distribution j = Join(Distribution::PointMass(0.5), f0);
  EXPECT_LT(SupDistance(IntegrateCdf(j), IntegrateCdf(f0)), 1e-12);
}

TEST(Lattice, MeetOfNestedBinaries) {
  const Distribution m =
      Meet(Distribution::TwoPoint(0.0, 0.5, 1.0), Distribution::TwoPoint(0.25, 0.5, 0.75));
  ASSERT_EQ(m.atoms().size(), 2u);
  EXPECT_NEAR(m.atoms()[0].x, 0.25, 1e-12);
  EXPECT_NEAR(m.atoms()[1].x, 0.75, 1e-12);
  EXPECT_NEAR(m.atoms()[0].w, 0.5, 1e-12);
}

TEST(Lattice, MeanMismatchThrows) {
  try {
    Join(Distribution::PointMass(0.3), Distribution::PointMass(0.6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMeanMismatch);
  }
}

TEST(Lattice, RandomPairsSatisfyBoundLaws) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.2, 0.8);
  for (int trial = 0; trial < 200; ++trial) {
    const double mean = unit(rng);
    const Distribution f = RandomAtomic(rng, 3, mean);
    const Distribution g = RandomAtomic(rng, 4, mean);
    const Distribution j = Join(f, g);
    const Distribution m = Meet(f, g);
    EXPECT_TRUE(LessInformative(f, j).holds);
    EXPECT_TRUE(LessInformative(g, j).holds);
    EXPECT_TRUE(LessInformative(m, f).holds);
    EXPECT_TRUE(LessInformative(m, g).holds);
    EXPECT_TRUE(LessInformative(m, j).holds);
  }
}

TEST(Order, ReflexiveAntisymmetricTransitive) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Distribution f = RandomAtomic(rng, 3, 0.5);
    EXPECT_TRUE(LessInformative(f, f).holds);
    // A contraction of f: pool its two lowest atoms.
    const auto& a = f.atoms();
    if (a.size() < 3) continue;
    const double w = a[0].w + a[1].w;
    std::vector<Atom> pooled{{(a[0].x * a[0].w + a[1].x * a[1].w) / w, w}};
    for (size_t i = 2; i < a.size(); ++i) pooled.push_back(a[i]);
    std::sort(pooled.begin(), pooled.end(), [](auto& p, auto& q) { return p.x < q.x; });
    const Distribution g = Distribution::Create(pooled, {});
    const Distribution h = Distribution::PointMass(f.Mean());
    EXPECT_TRUE(LessInformative(g, f).holds);
    EXPECT_TRUE(LessInformative(h, g).holds);
    EXPECT_TRUE(LessInformative(h, f).holds);
    EXPECT_FALSE(LessInformative(f, g).holds);
  }
}

TEST(ConditionalMean, Examples) {
  EXPECT_NEAR(ConditionalMean(Distribution::Uniform(0, 1), 0.5, 1.0), 0.75, 1e-15);
  EXPECT_NEAR(ConditionalMean(Distribution::PointMass(0.3), 0.0, 1.0), 0.3, 1e-15);
  const Distribution mix = Distribution::Create({{0.9, 0.5}}, {{0.0, 0.5, 0.5}});
  EXPECT_NEAR(ConditionalMean(mix, 0.4, 1.0), 0.495 / 0.6, 1e-14);
  // Riemann cross-check of the mixture's uniform part.
  double mass = 0.5, moment = 0.45;
  const int steps = 100000;
  for (int k = 0; k < steps; ++k) {
    const double t = 0.4 + 0.1 * (k + 0.5) / steps;
    mass += 1.0 * 0.1 / steps;
    moment += t * 0.1 / steps;
  }
  EXPECT_NEAR(ConditionalMean(mix, 0.4, 1.0), moment / mass, 1e-9);
}

TEST(ConditionalMean, NullEvent) {
  try {
    ConditionalMean(Distribution::PointMass(0.3), 0.5, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNullEvent);
  }
}

TEST(UpperCensorship, Examples) {
  const Distribution u = Distribution::Uniform(0, 1);
  const Distribution pooled = UpperCensorship(u, 0.0);
  ASSERT_EQ(pooled.atoms().size(), 1u);
  EXPECT_NEAR(pooled.atoms()[0].x, 0.5, 1e-15);
  const Distribution half = UpperCensorship(u, 0.5);
  ASSERT_EQ(half.atoms().size(), 1u);
  EXPECT_NEAR(half.atoms()[0].x, 0.75, 1e-15);
  EXPECT_NEAR(half.atoms()[0].w, 0.5, 1e-15);
  EXPECT_NEAR(half.MassIn(0.0, 0.5), 0.5, 1e-15);
  EXPECT_LT(SupDistance(IntegrateCdf(UpperCensorship(u, 1.0 - 1e-12)), IntegrateCdf(u)), 1e-9);
}

TEST(UpperCensorship, AlwaysContraction) {
  const Distribution f0 = Distribution::Create({{0.3, 0.2}}, {{0.1, 0.6, 0.5}, {0.7, 1.0, 0.3}});
  for (double a = 0.0; a < 1.0; a += 0.05) {
    EXPECT_TRUE(LessInformative(UpperCensorship(f0, a), f0).holds) << a;
  }
}

TEST(Discretize, OnGridUnchanged) {
  const GridSpec grid(11);
  const Distribution f = Distribution::Create({{0.3, 0.4}, {0.9, 0.6}}, {});
  const Distribution d = Discretize(f, grid);
  ASSERT_EQ(d.atoms().size(), 2u);
  EXPECT_NEAR(d.atoms()[0].x, 0.3, 1e-15);
  EXPECT_NEAR(d.atoms()[1].w, 0.6, 1e-15);
  const Distribution p = Discretize(Distribution::PointMass(0.3), grid);
  ASSERT_EQ(p.atoms().size(), 1u);
  EXPECT_NEAR(p.atoms()[0].w, 1.0, 1e-15);
}

TEST(Discretize, UniformOnThreePoints) {
  // Each half-cell slice splits its mean between its two ends: the slice
  // [0, 1/2] (mass 1/2, mean 1/4) puts 1/4 on 0 and 1/4 on 1/2.
  const std::vector<double> m = DiscretizeMasses(Distribution::Uniform(0, 1), GridSpec(3));
  ASSERT_EQ(m.size(), 3u);
  EXPECT_NEAR(m[0], 0.25, 1e-15);
  EXPECT_NEAR(m[1], 0.5, 1e-15);
  EXPECT_NEAR(m[2], 0.25, 1e-15);
}

TEST(Discretize, PreservesMeanAndConverges) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = 0.5 * unit(rng);
    const Distribution f =
        Distribution::Create({{unit(rng), 0.3}}, {{a, a + 0.1 + 0.4 * unit(rng), 0.7}});
    for (int n : {5, 21, 101}) {
      const GridSpec grid(n);
      const Distribution d = Discretize(f, grid);
      EXPECT_NEAR(d.TotalMass(), 1.0, 1e-12);
      EXPECT_NEAR(d.Mean(), f.Mean(), 1e-12);
      EXPECT_TRUE(d.IsOnGrid(grid));
      EXPECT_LE(SupDistance(IntegrateCdf(d), IntegrateCdf(f)), 1.0 / (n - 1));
      EXPECT_TRUE(LessInformative(f, d).holds);
    }
  }
}

TEST(Distribution, ValidatesMass) {
  EXPECT_THROW(Distribution::Create({{0.5, 0.5}}, {}), Error);
  EXPECT_THROW(Distribution::Create({{1.5, 1.0}}, {}), Error);
}

}  // namespace
}  // namespace persuasion
