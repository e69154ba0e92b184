#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "persuasion/error.h"
#include "persuasion/solver.h"

namespace persuasion {
namespace {

Payoff Poly(std::vector<double> c) {
  return AutoTagged(
      Payoff::FromPolynomial(Polynomial(std::move(c)), Curvature::kUnclassified).segments());
}

Payoff Step() {
  return Payoff::Create({{0.0, 0.5, Polynomial({0.0}), Curvature::kAffine},
                         {0.5, 1.0, Polynomial({1.0}), Curvature::kAffine}});
}

Payoff RandomSpline(std::mt19937_64& rng, int knots) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> t, s;
  for (int k = 0; k <= knots; ++k) {
    t.push_back(static_cast<double>(k) / knots);
    s.push_back(8.0 * unit(rng));
  }
  return SplineFromCurvature(t, s, unit(rng), unit(rng));
}

Distribution RandomPrior(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Atom> atoms;
  for (int k = 0; k < 2; ++k) atoms.push_back({std::round(unit(rng) * 20) / 20, 0.2});
  if (atoms[0].x == atoms[1].x) atoms.pop_back();
  std::sort(atoms.begin(), atoms.end(), [](auto& a, auto& b) { return a.x < b.x; });
  double mass = 0.0;
  for (auto& a : atoms) mass += a.w;
  const double lo = 0.5 * unit(rng);
  return Distribution::Create(atoms, {{lo, lo + 0.2 + 0.3 * unit(rng), 1.0 - mass}});
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

TEST(Solve, ConvexRevealsEverything) {
  const GridSpec grid(101);
  const Distribution f0 = Discretize(Distribution::Uniform(0, 1), grid);
  const Payoff u = Poly({0, -0.3, 1.0});
  const SolveReport r = Solve(u, f0, grid);
  EXPECT_NEAR(r.value, u.Expectation(f0), 1e-10);
  EXPECT_LT(SupDistance(IntegrateCdf(r.optimizer), IntegrateCdf(f0)), 1e-10);
  EXPECT_NEAR(r.gap, 0.0, 1e-8);
  for (int i = 0; i < grid.n(); ++i) EXPECT_NEAR(r.prices.values[i], r.u_grid[i], 1e-8);
  EXPECT_TRUE(r.slackness.pass);
}

TEST(Solve, ConcavePoolsAtMean) {
  const GridSpec grid(101);
  const Distribution f0 = Discretize(Distribution::Uniform(0.1, 0.7), grid);
  const Payoff u = Poly({0, 1.0, -1.0});
  const SolveReport r = Solve(u, f0, grid);
  EXPECT_NEAR(r.value, u.Eval(0.4), 1e-10);
  ASSERT_EQ(r.optimizer.atoms().size(), 1u);
  EXPECT_NEAR(r.optimizer.atoms()[0].x, 0.4, 1e-12);
  EXPECT_NEAR(r.gap, 0.0, 1e-8);
  EXPECT_LT(r.prices.MaxSecondDifferenceViolation(), 1e-9);
  // The price is affine with integral u(mu).
  for (int i = 1; i + 1 < grid.n(); ++i) {
    EXPECT_NEAR(r.prices.values[i - 1] - 2 * r.prices.values[i] + r.prices.values[i + 1], 0.0,
                1e-9);
  }
  EXPECT_NEAR(r.prices.Integrate(f0), u.Eval(0.4), 1e-9);
  EXPECT_TRUE(r.slackness.pass);
}

TEST(Solve, StepPayoffPoolsAtThreshold) {
  const GridSpec grid(101);
  const SolveReport r = Solve(Step(), Discretize(Distribution::Uniform(0, 1), grid), grid);
  EXPECT_NEAR(r.value, 1.0, 1e-10);
  ASSERT_EQ(r.optimizer.atoms().size(), 1u);
  EXPECT_NEAR(r.optimizer.atoms()[0].x, 0.5, 1e-12);
}

TEST(Solve, RejectsOffGridDiscontinuity) {
  try {
    Solve(Step(), Distribution::PointMass(0.5), GridSpec(100));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDomainError);
  }
}

TEST(Solve, IntervalModeWithEqualBoundsReturnsPrior) {
  const GridSpec grid(41);
  const Distribution f0 = Discretize(Distribution::Uniform(0, 1), grid);
  const SolveReport r = Solve(Poly({0, 1, -1}), f0, grid, &f0);
  EXPECT_NEAR(r.value, Poly({0, 1, -1}).Expectation(f0), 1e-10);
  EXPECT_LT(SupDistance(IntegrateCdf(r.optimizer), IntegrateCdf(f0)), 1e-10);
  EXPECT_NEAR(r.gap, 0.0, 1e-8);
}

TEST(Solve, InconsistentIntervalIsInfeasible) {
  const GridSpec grid(21);
  const Distribution f0 = Distribution::PointMass(0.5);
  const Distribution g0 = Distribution::TwoPoint(0.0, 0.5, 1.0);
  try {
    Solve(Poly({0, 1}), f0, grid, &g0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
  }
}

TEST(Solve, DualityAndSlacknessOnRandomInstances) {
  std::mt19937_64 rng(101);
  const GridSpec grid(101);
  int pass = 0;
  const int count = 200;
  for (int trial = 0; trial < count; ++trial) {
    const Payoff u = RandomSpline(rng, 6);
    const Distribution f0 = RandomPrior(rng);
    const SolveReport r = Solve(u, f0, grid);
    EXPECT_GE(r.gap, -1e-8);
    EXPECT_LE(std::abs(r.gap), 1e-8) << trial;
    EXPECT_NEAR(r.multiplier_dual_value, r.value, 1e-8);
    EXPECT_LT(r.prices.MaxSecondDifferenceViolation(), 1e-9);
    for (int i = 0; i < grid.n(); ++i) EXPECT_GE(r.prices.values[i], r.u_grid[i] - 1e-9);
    pass += r.slackness.pass;
  }
  EXPECT_GE(pass, count * 99 / 100);
}

TEST(Solve, ScaleShiftEquivariance) {
  std::mt19937_64 rng(7);
  const GridSpec grid(61);
  for (int trial = 0; trial < 20; ++trial) {
    const Payoff u = RandomSpline(rng, 5);
    const Distribution f0 = RandomPrior(rng);
    const SolveReport a = Solve(u, f0, grid);
    const SolveReport b = Solve(u.Scaled(2.5, -0.7), f0, grid);
    EXPECT_NEAR(b.value, 2.5 * a.value - 0.7, 1e-9);
    // Same optimal face: a's optimizer is optimal for the scaled payoff.
    EXPECT_NEAR(Dot(b.u_grid, a.masses), b.value, 1e-9);
  }
}

TEST(Solve, MoreInformationNeverHurts) {
  std::mt19937_64 rng(9);
  const GridSpec grid(61);
  for (int trial = 0; trial < 20; ++trial) {
    const Payoff u = RandomSpline(rng, 5);
    const Distribution f0 = Discretize(RandomPrior(rng), grid);
    const double a = f0.SupportMin() + (f0.SupportMax() - f0.SupportMin()) * (trial % 5) / 5.0;
    const Distribution f = UpperCensorship(f0, a);
    const Distribution fg = Discretize(f, grid);
    EXPECT_LE(Solve(u, fg, grid).value, Solve(u, f0, grid).value + 1e-10);
  }
}

TEST(Solve, GridRefinementConverges) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Payoff u = RandomSpline(rng, 4);
    const Distribution f0 = Distribution::Uniform(0.0, 1.0);
    double worst = 0.0;
    for (int n : {21, 41, 81}) {
      const double a = Solve(u, f0, GridSpec(n), nullptr, false).value;
      const double b = Solve(u, f0, GridSpec(2 * n - 1), nullptr, false).value;
      worst = std::max(worst, std::abs(a - b) * (n - 1));
    }
    EXPECT_LT(worst, 10.0);
  }
}

TEST(DualPrices, CensorshipCrossCheck) {
  const Payoff v = Poly({0, 0, 3, -2});
  const Distribution f0 = Distribution::Uniform(0, 1);
  const CensorshipSolution cs = UpperCensorshipSolve(v, f0);
  const PriceFunction p = DualPrices(v, f0, GridSpec(801));
  EXPECT_NEAR(p.objective, v.Expectation(cs.f), 2e-3);
  EXPECT_NEAR(p.Integrate(f0), p.objective, 1e-6);
}

TEST(UpperCensorship, SmoothSShape) {
  // Residual of the tangency condition at the cutoff, on Uniform[0, 1]:
  // b = (1 + a) / 2 and v'(b)(b - a) = v(b) - v(a) gives a = 1/4.
  const Payoff v = Poly({0, 0, 3, -2});
  const CensorshipSolution cs = UpperCensorshipSolve(v, Distribution::Uniform(0, 1));
  EXPECT_FALSE(cs.no_root);
  EXPECT_NEAR(cs.a, 0.25, 1e-10);
  EXPECT_NEAR(cs.b, 0.625, 1e-10);
  EXPECT_LE(std::abs(cs.residual), 1e-10);
}

TEST(UpperCensorship, ConvexIsFullRevelation) {
  const Distribution f0 = Distribution::Uniform(0, 1);
  const CensorshipSolution cs = UpperCensorshipSolve(Poly({0, 0, 1}), f0);
  EXPECT_TRUE(cs.no_root);
  EXPECT_NEAR(cs.a, 1.0, 1e-12);
  EXPECT_LT(SupDistance(IntegrateCdf(cs.f), IntegrateCdf(f0)), 1e-12);
}

TEST(UpperCensorship, QuadraticThenAffine) {
  // v = m^2 on [0, k], tangent line after k. With b on the line the
  // residual is 2k(b - a) - (2kb - k^2 - a^2) = (a - k)^2, a double root, so
  // the cutoff is only located to about the square root of the noise floor.
  const double k = 0.4;
  const Payoff v = Payoff::Create({{0.0, k, Polynomial({0, 0, 1}), Curvature::kConvex},
                                   {k, 1.0, Polynomial({-k * k, 2 * k}), Curvature::kAffine}});
  const CensorshipSolution cs = UpperCensorshipSolve(v, Distribution::Uniform(0, 1));
  EXPECT_NEAR(cs.a, k, 1e-6);
  EXPECT_NEAR(cs.b, (1 + k) / 2, 1e-6);
  EXPECT_LE(std::abs(cs.residual), 1e-10);
}

TEST(ProbeArgmax, StrictlyConcaveIsUnique) {
  const GridSpec grid(41);
  const ArgmaxProbe p =
      ProbeArgmax(Poly({0, 1, -1}), Discretize(Distribution::Uniform(0, 1), grid), grid,
                  nullptr, 8, 1);
  ASSERT_EQ(p.members.size(), 1u);
  EXPECT_EQ(p.least, p.most);
}

TEST(ProbeArgmax, AffineSpansVertices) {
  const GridSpec grid(21);
  const ArgmaxProbe p = ProbeArgmax(Poly({0.1, 1}), Discretize(Distribution::Uniform(0, 1), grid),
                                    grid, nullptr, 8, 1);
  EXPECT_GT(p.members.size(), 2u);
  EXPECT_EQ(p.members[p.least].atoms().size(), 1u);
  for (const Distribution& m : p.members) EXPECT_NEAR(m.Mean(), 0.5, 1e-12);
}

TEST(ProbeArgmax, StepWithBinaryPrior) {
  const GridSpec grid(21);
  const ArgmaxProbe p =
      ProbeArgmax(Step(), Distribution::TwoPoint(0.0, 0.7, 1.0), grid, nullptr, 8, 3);
  EXPECT_NEAR(p.value, 0.6, 1e-10);
  for (const std::vector<double>& m : p.masses) EXPECT_NEAR(m[10], 0.6, 1e-10);
}

TEST(ProbeArgmax, DeterministicPerSeed) {
  std::mt19937_64 rng(5);
  const GridSpec grid(31);
  const Payoff u = Poly({0.1, 1});
  const Distribution f0 = Discretize(RandomPrior(rng), grid);
  const ArgmaxProbe a = ProbeArgmax(u, f0, grid, nullptr, 6, 42);
  const ArgmaxProbe b = ProbeArgmax(u, f0, grid, nullptr, 6, 42);
  ASSERT_EQ(a.masses.size(), b.masses.size());
  for (size_t k = 0; k < a.masses.size(); ++k) EXPECT_EQ(a.masses[k], b.masses[k]);
}

TEST(PriceFunction, IntegrateMatchesGridAndCells) {
  PriceFunction p;
  p.n = 3;
  p.values = {1.0, 0.0, 2.0};
  EXPECT_DOUBLE_EQ(p.Eval(0.25), 0.5);
  EXPECT_NEAR(p.Integrate(Distribution::Uniform(0, 1)), 0.5 * 0.5 + 0.5 * 1.0, 1e-15);
  EXPECT_NEAR(p.Integrate(Distribution::PointMass(0.75)), 1.0, 1e-15);
}

}  // namespace
}  // namespace persuasion
