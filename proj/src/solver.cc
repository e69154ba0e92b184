#include "persuasion/solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "persuasion/error.h"
#include "persuasion/simplex.h"

namespace persuasion {
namespace {

void ThrowOnStatus(DenseSimplex::Status st, const DenseSimplex& lp, const char* what) {
  switch (st) {
    case DenseSimplex::Status::kOptimal:
      return;
    case DenseSimplex::Status::kInfeasible:
      throw Error(ErrorKind::kInfeasible, std::string(what) + ": constraints inconsistent");
    default: {
      std::ostringstream msg;
      msg << what << ": simplex stopped (status " << static_cast<int>(st) << ", "
          << lp.iterations() << " pivots, refinement residual " << lp.refinement_residual()
          << ")";
      throw Error(ErrorKind::kNumericFailure, msg.str());
    }
  }
}

}  // namespace

double PriceFunction::Eval(double m) const {
  const double h = 1.0 / (n - 1);
  const int i = std::clamp(static_cast<int>(std::floor(m / h)), 0, n - 2);
  const double t = (m - i * h) / h;
  return values[i] + t * (values[i + 1] - values[i]);
}

double PriceFunction::Integrate(const Distribution& f) const {
  double total = 0.0;
  for (const Atom& a : f.atoms()) total += a.w * Eval(a.x);
  const double h = 1.0 / (n - 1);
  for (const UniformPiece& u : f.uniforms()) {
    const double density = u.w / (u.to - u.from);
    const int first = std::clamp(static_cast<int>(std::floor(u.from / h)), 0, n - 2);
    const int last = std::clamp(static_cast<int>(std::floor(u.to / h)), 0, n - 2);
    for (int i = first; i <= last; ++i) {
      const double lo = std::max(u.from, i * h), hi = std::min(u.to, (i + 1) * h);
      if (hi > lo) total += density * (hi - lo) * Eval(0.5 * (lo + hi));
    }
  }
  return total;
}

double PriceFunction::MaxSecondDifferenceViolation() const {
  double worst = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    worst = std::max(worst, -(values[i - 1] - 2 * values[i] + values[i + 1]));
  }
  return worst;
}

std::vector<double> PayoffOnGrid(const Payoff& u, const GridSpec& grid) {
  for (double b : u.Discontinuities()) {
    if (grid.IndexOf(b) < 0) {
      std::ostringstream msg;
      msg << "payoff discontinuity at " << b << " is not a grid point";
      throw Error(ErrorKind::kDomainError, msg.str());
    }
  }
  return u.OnGrid(grid);
}

std::vector<double> IntegratedCdfOnGrid(const Distribution& f, const GridSpec& grid) {
  const IntegratedCdf c = IntegrateCdf(f);
  std::vector<double> out(grid.n());
  for (int j = 0; j < grid.n(); ++j) out[j] = c(grid.point(j));
  return out;
}

std::vector<double> GridIntegratedCdf(const std::vector<double>& masses, const GridSpec& grid) {
  std::vector<double> c(grid.n(), 0.0);
  double cdf = 0.0;
  for (int j = 0; j + 1 < grid.n(); ++j) {
    cdf += masses[j];
    c[j + 1] = c[j] + grid.step() * cdf;
  }
  return c;
}

PersuasionLp::PersuasionLp(const std::vector<double>& u, const std::vector<double>& c0,
                           const std::vector<double>* cg0, const GridSpec& grid)
    : grid_(grid), u_(u) {
  const int n = grid.n();
  lp_ = std::make_unique<DenseSimplex>(n);
  lp_->AddRow(std::vector<double>(n, 1.0), RowType::kEq, 1.0);
  std::vector<double> row(n);
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < n; ++i) row[i] = i < j ? grid.point(j) - grid.point(i) : 0.0;
    if (j == n - 1) {
      lp_->AddRow(row, RowType::kEq, c0[j]);
    } else {
      lp_->AddRow(row, RowType::kLe, c0[j]);
      if (cg0 != nullptr) lp_->AddRow(row, RowType::kGe, (*cg0)[j]);
    }
  }
  lp_->SetObjective(u);
}

PersuasionLp::~PersuasionLp() = default;

double PersuasionLp::Solve() {
  ThrowOnStatus(lp_->Solve(), *lp_, "persuasion LP");
  return lp_->objective_value();
}

std::vector<double> PersuasionLp::masses() const { return lp_->solution(); }

std::vector<double> PersuasionLp::OptimizeOnFace(const std::vector<double>& secondary) {
  ThrowOnStatus(lp_->OptimizeOnFace(secondary), *lp_, "optimal-face LP");
  return lp_->solution();
}

double PersuasionLp::ValueOf(const std::vector<double>& masses) const {
  double v = 0.0;
  for (size_t i = 0; i < masses.size(); ++i) v += u_[i] * masses[i];
  return v;
}

std::vector<double> PersuasionLp::Multipliers() const { return lp_->RowMultipliers(); }

int PersuasionLp::iterations() const { return lp_->iterations(); }

double MaxValue(const std::vector<double>& u, const std::vector<double>& c_upper,
                const std::vector<double>* c_lower, const GridSpec& grid) {
  PersuasionLp lp(u, c_upper, c_lower, grid);
  return lp.Solve();
}

PriceFunction DualPrices(const Payoff& u, const Distribution& f0, const GridSpec& grid) {
  const int n = grid.n();
  const std::vector<double> uu = PayoffOnGrid(u, grid);
  const std::vector<double> c0 = IntegratedCdfOnGrid(f0, grid);
  const double top = *std::max_element(uu.begin(), uu.end());
  // Variables: a'+, a'-, beta+, beta-, lambda_1..lambda_{n-2}, with
  // a = top + a'. Rows -p_i <= -u_i keep the slack basis feasible.
  const int nv = 4 + (n - 2);
  DenseSimplex lp(nv);
  std::vector<double> row(nv);
  for (int i = 0; i < n; ++i) {
    const double xi = grid.point(i);
    row[0] = -1.0;
    row[1] = 1.0;
    row[2] = -(1.0 - xi);
    row[3] = 1.0 - xi;
    for (int j = 1; j < n - 1; ++j) row[3 + j] = -std::max(0.0, grid.point(j) - xi);
    lp.AddRow(row, RowType::kLe, top - uu[i]);
  }
  std::vector<double> c(nv);
  c[0] = -1.0;
  c[1] = 1.0;
  c[2] = -c0[n - 1];
  c[3] = c0[n - 1];
  for (int j = 1; j < n - 1; ++j) c[3 + j] = -c0[j];
  lp.SetObjective(c);
  ThrowOnStatus(lp.Solve(), lp, "dual price LP");
  const std::vector<double>& x = lp.solution();
  PriceFunction p;
  p.n = n;
  p.a = top + x[0] - x[1];
  p.beta = x[2] - x[3];
  p.kinks.assign(n, 0.0);
  for (int j = 1; j < n - 1; ++j) p.kinks[j] = x[3 + j];
  p.values.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double xi = grid.point(i);
    double v = p.a + p.beta * (1.0 - xi);
    for (int j = i + 1; j < n - 1; ++j) v += p.kinks[j] * (grid.point(j) - xi);
    p.values[i] = v;
  }
  p.objective = top - lp.objective_value();
  return p;
}

SlacknessReport CheckSlackness(const SolveReport& report, double tol) {
  SlacknessReport s;
  const int n = report.n;
  const GridSpec grid(n);
  const std::vector<double> cf = GridIntegratedCdf(report.masses, grid);
  const std::vector<double>& p = report.prices.values;
  for (int j = 1; j + 1 < n; ++j) {
    if (cf[j] < report.c0_grid[j] - tol) {
      const double d2 = std::abs(p[j - 1] - 2 * p[j] + p[j + 1]);
      s.affine_residual = std::max(s.affine_residual, d2);
      if (d2 > tol) {
        std::ostringstream msg;
        msg << "price not affine at x=" << grid.point(j) << " (second difference " << d2
            << ") where C_F < C_F0";
        s.violations.push_back(msg.str());
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (report.masses[i] >= tol) {
      const double gap = p[i] - report.u_grid[i];
      s.support_residual = std::max(s.support_residual, std::abs(gap));
      if (std::abs(gap) > tol) {
        std::ostringstream msg;
        msg << "price differs from payoff by " << gap << " at support point x="
            << grid.point(i);
        s.violations.push_back(msg.str());
      }
    }
  }
  s.pass = s.violations.empty();
  return s;
}

SolveReport Solve(const Payoff& u, const Distribution& f0, const GridSpec& grid,
                  const Distribution* g0, bool with_dual) {
  SolveReport r;
  r.n = grid.n();
  r.u_grid = PayoffOnGrid(u, grid);
  r.c0_grid = IntegratedCdfOnGrid(f0, grid);
  if (g0 != nullptr) r.cg0_grid = IntegratedCdfOnGrid(*g0, grid);
  PersuasionLp lp(r.u_grid, r.c0_grid, g0 != nullptr ? &r.cg0_grid : nullptr, grid);
  r.value = lp.Solve();
  r.masses = lp.masses();
  r.iterations = lp.iterations();
  r.optimizer = Distribution::FromGrid(grid, r.masses, 1e-12);
  const std::vector<double> y = lp.Multipliers();
  {
    // Multipliers of the primal rows give a second dual objective.
    double d = y[0];
    size_t row = 1;
    for (int j = 1; j < grid.n(); ++j) {
      d += y[row++] * r.c0_grid[j];
      if (g0 != nullptr && j < grid.n() - 1) d += y[row++] * r.cg0_grid[j];
    }
    r.multiplier_dual_value = d;
  }
  if (with_dual && g0 == nullptr) {
    r.prices = DualPrices(u, f0, grid);
    r.dual_value = r.prices.objective;
    r.gap = r.dual_value - r.value;
    r.slackness = CheckSlackness(r, 1e-6);
  } else {
    r.dual_value = r.multiplier_dual_value;
    r.gap = r.dual_value - r.value;
  }
  return r;
}

CensorshipSolution UpperCensorshipSolve(const Payoff& v, const Distribution& f0) {
  const double lo = f0.SupportMin(), hi = f0.SupportMax();
  auto residual = [&](double a) {
    const double b = ConditionalMean(f0, a, 1.0);
    return v.Deriv(b) * (b - a) - (v.Eval(b) - v.Eval(a));
  };
  double scale = 1.0;
  for (int k = 0; k <= 16; ++k) {
    const double m = lo + (hi - lo) * k / 16.0;
    scale = std::max({scale, std::abs(v.Eval(m)), std::abs(v.Deriv(m))});
  }
  const double zero = 1e-14 * scale;
  auto positive = [&](double a) { return residual(a) > zero; };
  CensorshipSolution s;
  const int samples = 400;
  double left = lo;
  bool left_pos = positive(lo);
  int change = -1;
  for (int k = 1; k < samples; ++k) {
    const double a = lo + (hi - lo) * k / samples;
    const bool pos = positive(a);
    if (left_pos && !pos) {
      change = k;
      break;
    }
    left = a;
    left_pos = pos;
  }
  if (change < 0) {
    s.no_root = true;
    if (left_pos) {
      // Residual positive throughout: revealing everything is best.
      s.a = hi;
      s.b = hi;
      s.f = f0;
      s.residual = 0.0;
    } else {
      s.a = lo;
      s.b = f0.Mean();
      s.f = UpperCensorship(f0, lo);
      s.residual = residual(lo);
    }
    return s;
  }
  double right = lo + (hi - lo) * change / samples;
  for (int it = 0; it < 200 && right - left > 1e-15; ++it) {
    const double mid = 0.5 * (left + right);
    if (positive(mid)) {
      left = mid;
    } else {
      right = mid;
    }
  }
  const double a = std::abs(residual(left)) < std::abs(residual(right)) ? left : right;
  s.a = a;
  s.b = ConditionalMean(f0, a, 1.0);
  s.residual = residual(a);
  s.f = UpperCensorship(f0, a);
  return s;
}

ArgmaxProbe ProbeArgmax(const Payoff& u, const Distribution& f0, const GridSpec& grid,
                        const Distribution* g0, int k, uint64_t seed) {
  const int n = grid.n();
  const std::vector<double> uu = PayoffOnGrid(u, grid);
  const std::vector<double> c0 = IntegratedCdfOnGrid(f0, grid);
  std::vector<double> cg;
  if (g0 != nullptr) cg = IntegratedCdfOnGrid(*g0, grid);
  PersuasionLp lp(uu, c0, g0 != nullptr ? &cg : nullptr, grid);
  ArgmaxProbe probe;
  probe.n = n;
  probe.value = lp.Solve();
  auto add = [&](const std::vector<double>& m) {
    if (lp.ValueOf(m) < probe.value - 1e-8) {
      throw Error(ErrorKind::kNumericFailure, "probe member left the optimal face");
    }
    for (size_t q = 0; q < probe.masses.size(); ++q) {
      double diff = 0.0;
      for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(m[i] - probe.masses[q][i]));
      if (diff <= 1e-9) return static_cast<int>(q);
    }
    probe.masses.push_back(m);
    probe.members.push_back(Distribution::FromGrid(grid, m, 1e-12));
    return static_cast<int>(probe.masses.size()) - 1;
  };
  add(lp.masses());
  // Sum over j of C_F(x_j) is linear in the masses.
  std::vector<double> spread(n);
  for (int i = 0; i < n; ++i) spread[i] = grid.step() * 0.5 * (n - 1 - i) * (n - i);
  std::vector<double> neg(n);
  for (int i = 0; i < n; ++i) neg[i] = -spread[i];
  probe.least = add(lp.OptimizeOnFace(neg));
  probe.most = add(lp.OptimizeOnFace(spread));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(-1.0, 1.0);
  std::vector<double> obj(n);
  for (int s = 0; s < k; ++s) {
    for (double& c : obj) c = coin(rng);
    add(lp.OptimizeOnFace(obj));
  }
  return probe;
}

}  // namespace persuasion
