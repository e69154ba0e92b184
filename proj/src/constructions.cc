#include "persuasion/constructions.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <tuple>

#include "persuasion/error.h"
#include "persuasion/orders.h"

namespace persuasion {

const char* ChordCaseName(ChordCase c) {
  return c == ChordCase::kVAtChord ? "v_at_chord" : "v_above_chord";
}

const char* CraterCaseName(CraterCase c) {
  return c == CraterCase::kTwoTangents ? "two_tangents" : "tangent_and_affine";
}

ChordCounterexample BuildChordCounterexample(const Payoff& u, const Payoff& v,
                                             const ChordWitness& witness,
                                             const GridSpec& grid) {
  if (!VerifyChordWitness(u, v, grid, witness)) {
    throw Error(ErrorKind::kInvalidWitness, "chord witness does not re-verify");
  }
  const int i = witness.i, k = witness.k;
  const std::vector<double> uu = u.OnGrid(grid), vv = v.OnGrid(grid);
  double sv = 1.0, su = 1.0;
  for (int j = i; j <= k; ++j) {
    sv = std::max(sv, std::abs(vv[j]));
    su = std::max(su, std::abs(uu[j]));
  }
  const double span = k - i;
  auto chord = [&](const std::vector<double>& f, int j) {
    const double a = (k - j) / span;
    return a * f[i] + (1 - a) * f[k];
  };

  ChordCounterexample cx;
  cx.witness = witness;
  bool below = true;
  for (int j = i + 1; j < k; ++j) below = below && vv[j] <= chord(vv, j) + 1e-11 * sv;
  int m = witness.j;
  if (below) {
    cx.kase = ChordCase::kVAtChord;
  } else {
    cx.kase = ChordCase::kVAboveChord;
    std::vector<HullPoint> pts;
    for (int j = i; j <= k; ++j) pts.push_back({grid.point(j), vv[j]});
    const std::vector<HullPoint> hull = UpperHullOfPoints(pts, false);
    // The interior vertex with the sharpest kink.
    double best = -1.0;
    for (size_t q = 1; q + 1 < hull.size(); ++q) {
      const double sl = (hull[q].y - hull[q - 1].y) / (hull[q].x - hull[q - 1].x);
      const double sr = (hull[q + 1].y - hull[q].y) / (hull[q + 1].x - hull[q].x);
      if (sl - sr > best) {
        best = sl - sr;
        m = grid.IndexOf(hull[q].x);
      }
    }
    if (best <= 0.0 || m < 0) {
      throw Error(ErrorKind::kInvalidWitness, "v rises above the chord but has no hull vertex");
    }
  }
  cx.mean_index = m;
  cx.mean = grid.point(m);
  cx.weight = (k - m) / span;
  cx.prior = Distribution::TwoPoint(grid.point(i), cx.weight, grid.point(k));
  cx.u_prior_value = chord(uu, m);
  cx.u_mean_value = uu[m];
  cx.v_prior_value = chord(vv, m);
  cx.v_mean_value = vv[m];
  std::vector<HullPoint> pts;
  for (int j = i; j <= k; ++j) pts.push_back({grid.point(j), vv[j]});
  cx.v_best_value = InterpolateVertices(UpperHullOfPoints(pts, false), cx.mean);
  cx.u_chord_slack = std::numeric_limits<double>::infinity();
  for (int j = i; j <= k; ++j) cx.u_chord_slack = std::min(cx.u_chord_slack, chord(uu, j) - uu[j]);
  if (cx.u_chord_slack < -1e-11 * su) {
    throw Error(ErrorKind::kInvalidWitness, "u rises above the witness chord");
  }
  return cx;
}

Distribution SplitPrior(double x_left, double x, double X, double w, double w_right) {
  if (!(x_left < x && x < X && X < w && w < w_right)) {
    throw Error(ErrorKind::kDomainError, "split prior needs x' < x < X < w < w'");
  }
  const double A = (w - X) / (w - x), B = 1.0 - A;
  const double lam = (X - x) / (X - x_left);
  const double lam_r = (w - X) / (w_right - X);
  return Distribution::Create({}, {{x_left, x, A * lam},
                                   {x, X, A * (1.0 - lam)},
                                   {X, w, B * (1.0 - lam_r)},
                                   {w, w_right, B * lam_r}});
}

namespace {

[[noreturn]] void Fail(const std::string& stage, const std::string& what) {
  throw Error(ErrorKind::kConstructionFailure, "stage " + stage + ": " + what);
}

struct Pattern {
  double xbar, y, z, wbar;
  bool left_affine, right_affine;
};

Pattern FindPattern(const Payoff& u, const CraterWitness& cw) {
  const std::vector<CurvatureRun> runs = CurvatureRuns(u);
  for (size_t p = 1; p + 1 < runs.size(); ++p) {
    if (runs[p].from == cw.y && runs[p].to == cw.z) {
      return {runs[p - 1].from, runs[p].from, runs[p].to, runs[p + 1].to,
              runs[p - 1].affine, runs[p + 1].affine};
    }
  }
  Fail("pattern", "crater witness does not match a concave-convex-concave run");
}

Pattern Reflect(const Pattern& p) {
  return {1.0 - p.wbar, 1.0 - p.z, 1.0 - p.y, 1.0 - p.xbar, p.right_affine, p.left_affine};
}

double Curv(const Payoff& u, double m, double h) {
  const double a = std::max(0.0, m - h), b = std::min(1.0, m + h);
  return std::max(std::abs(u.Deriv(b) - u.Deriv(a)) / (b - a), 1e-12);
}

// Geometry chosen on the grid: p = left on [x', X], right on [X, w'].
struct Geometry {
  int il, i, j, k, ir;
  AffineFunction left, right;
  double est;  // estimated, later exact, continuum shortfall
};

double GridShortfall(const Payoff& u, const GridSpec& grid, const Geometry& g) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int q = g.il; q <= g.ir; ++q) {
    const double m = grid.point(q);
    const double p = q <= g.j ? g.left(m) : g.right(m);
    worst = std::max(worst, u.Eval(m) - p);
  }
  return worst;
}

double ContinuumShortfall(const Payoff& u, const GridSpec& grid, const Geometry& g) {
  const double xl = grid.point(g.il), X = grid.point(g.j), wr = grid.point(g.ir);
  const Excess a = MaxExcessOverLine(u, xl, X, g.left.intercept, g.left.slope);
  const Excess b = MaxExcessOverLine(u, X, wr, g.right.intercept, g.right.slope);
  return std::max(a.value, b.value);
}

AffineFunction Through(double x, double y, double slope) { return {y - slope * x, slope}; }

// Candidates whose slope snapping leaves p above u at every grid point and
// (if possible) within 1e-10 of u in the continuum, spread over the set.
std::vector<Geometry> Viable(const Payoff& u, const GridSpec& grid, std::vector<Geometry> cands) {
  if (cands.empty()) Fail("geometry", "no grid configuration with the crossing inside");
  std::sort(cands.begin(), cands.end(),
            [](const Geometry& a, const Geometry& b) { return a.est < b.est; });
  size_t good = 0;
  while (good < cands.size() && cands[good].est <= 1e-10) ++good;
  std::vector<Geometry> pool;
  if (good == 0) {
    pool.assign(cands.begin(), cands.begin() + std::min<size_t>(cands.size(), 40));
  } else {
    std::sort(cands.begin(), cands.begin() + good, [](const Geometry& a, const Geometry& b) {
      return std::tie(a.i, a.k, a.j) < std::tie(b.i, b.k, b.j);
    });
    const size_t stride = std::max<size_t>(1, good / 60);
    for (size_t q = 0; q < good; q += stride) pool.push_back(cands[q]);
  }
  double scale = 1.0;
  for (int q = 0; q < grid.n(); ++q) scale = std::max(scale, std::abs(u.Eval(grid.point(q))));
  std::vector<Geometry> out;
  double least = std::numeric_limits<double>::infinity();
  for (Geometry& g : pool) {
    if (GridShortfall(u, grid, g) > 1e-13 * scale) continue;
    g.est = std::max(0.0, ContinuumShortfall(u, grid, g));
    least = std::min(least, g.est);
    out.push_back(g);
  }
  if (out.empty()) Fail("geometry", "no candidate keeps p above u at the grid points");
  std::erase_if(out, [&](const Geometry& g) { return g.est > std::max(1e-10, 10.0 * least); });
  return out;
}

// u not affine on either concave piece: two tangents crossing above u inside
// the convex piece.
std::vector<Geometry> TwoTangentGeometry(const Payoff& u, const GridSpec& grid,
                                         const Pattern& pt, int il, int ir) {
  const double h = grid.step();
  std::vector<Geometry> cands;
  for (int i = il + 1; i < ir && grid.point(i) <= pt.y; ++i) {
    const double x = grid.point(i), ux = u.Eval(x), s1 = u.Deriv(x);
    const double cx = Curv(u, x, h);
    for (int k = ir - 1; k > i && grid.point(k) >= pt.z; --k) {
      const double w = grid.point(k), uw = u.Eval(w), s2 = u.Deriv(w);
      if (!(s2 - s1 > 1e-9 * (1.0 + std::abs(s1) + std::abs(s2)))) continue;
      const double xs = (uw - s2 * w - ux + s1 * x) / (s1 - s2);
      const int j0 = static_cast<int>(std::floor(xs / h));
      for (int j = j0; j <= j0 + 1; ++j) {
        if (j <= i || j >= k) continue;
        const double X = grid.point(j);
        if (X < pt.y || X > pt.z) continue;
        const double uX = u.Eval(X);
        // Keep the tangent at x and re-aim the line through w at (X, Y).
        const double ya = ux + s1 * (X - x);
        const double s2a = (uw - ya) / (w - X);
        if (ya > uX && s2a > s1) {
          const double d = s2a - s2;
          cands.push_back({il, i, j, k, ir, Through(x, ux, s1), Through(w, uw, s2a),
                           d * d / (2.0 * Curv(u, w, h))});
        }
        const double yb = uw + s2 * (X - w);
        const double s1b = (yb - ux) / (X - x);
        if (yb > uX && s2 > s1b) {
          const double d = s1b - s1;
          cands.push_back({il, i, j, k, ir, Through(x, ux, s1b), Through(w, uw, s2),
                           d * d / (2.0 * cx)});
        }
      }
    }
  }
  return Viable(u, grid, std::move(cands));
}

// u affine on the right concave piece: the tangent at x meets the affine
// piece at X beyond the convex piece.
std::vector<Geometry> TangentAffineGeometry(const Payoff& u, const GridSpec& grid,
                                            const Pattern& pt, int il, int ir) {
  const double h = grid.step();
  const AffineFunction L = Tangent(u, 0.5 * (pt.z + pt.wbar));
  std::vector<Geometry> cands;
  for (int i = il + 1; i < ir && grid.point(i) <= pt.y; ++i) {
    const double x = grid.point(i), ux = u.Eval(x), s1 = u.Deriv(x);
    if (!(s1 < L.slope - 1e-12 * (1.0 + std::abs(L.slope)))) continue;
    const double xs = (L.intercept - ux + s1 * x) / (s1 - L.slope);
    const int j0 = static_cast<int>(std::floor(xs / h));
    for (int j = j0; j <= j0 + 1; ++j) {
      if (j <= i || j > ir - 2) continue;
      const double X = grid.point(j);
      if (!(X > pt.z)) continue;
      const double s1a = (L(X) - ux) / (X - x);
      if (!(s1a < L.slope)) continue;
      const double d = s1a - s1;
      const int k = (j + ir) / 2;
      cands.push_back({il, i, j, k, ir, Through(x, ux, s1a), L, d * d / (2.0 * Curv(u, x, h))});
    }
  }
  return Viable(u, grid, std::move(cands));
}

double MinGap(const Polynomial& q, const Payoff& u, double a, double b) {
  double worst = std::numeric_limits<double>::infinity();
  for (const PayoffSegment& s : u.SegmentsIn(a, b)) {
    if (s.outer == OuterTransform::kIdentity) {
      const Polynomial d = q - s.poly;
      std::vector<double> c = RealRootsIn(d.Derivative(), s.from, s.to);
      c.push_back(s.from);
      c.push_back(s.to);
      for (double m : c) worst = std::min(worst, d(m));
    } else {
      const int samples = 4000;
      for (int t = 0; t <= samples; ++t) {
        const double m = s.from + (s.to - s.from) * t / samples;
        worst = std::min(worst, q(m) - s.Value(m));
      }
    }
  }
  return worst;
}

// v = u on [X, 1] and a strictly convex quadratic above u on [0, X], matching
// value and slope at X; kappa doubles until v >= u.
Payoff QuadraticLeftPartner(const Payoff& u, double X, double* kappa_out) {
  const double uX = u.Eval(X), dX = u.Deriv(X);
  double scale = 1.0;
  for (int t = 0; t <= 1000; ++t) scale = std::max(scale, std::abs(u.Eval(t / 1000.0)));
  const double tol = 1e-12 * scale;
  for (double kappa = std::ldexp(1.0, -10); kappa <= std::ldexp(1.0, 40); kappa *= 2.0) {
    const Polynomial q({uX - dX * X + kappa * X * X, dX - 2.0 * kappa * X, kappa});
    bool ok = true;
    for (double m = 0.0; m < X && ok; m += 1e-3) ok = q(m) >= u.Eval(m) - tol;
    if (!ok || MinGap(q, u, 0.0, X) < -tol) continue;
    std::vector<PayoffSegment> segs = {{0.0, X, q, Curvature::kConvex}};
    for (const PayoffSegment& s : u.SegmentsIn(X, 1.0)) segs.push_back(s);
    *kappa_out = kappa;
    return Payoff::Create(std::move(segs));
  }
  Fail("v", "kappa reached 2^40 without v >= u on [0, X]");
}

// Affine (equal to L) on [z, w'], strictly convex quadratic continuations
// outside.
Payoff AffineMiddlePartner(const AffineFunction& L, double z, double w_right, double kappa) {
  std::vector<PayoffSegment> segs;
  if (z > 0.0) {
    // L(m) + kappa (z - m)^2
    segs.push_back({0.0, z,
                    Polynomial({L.intercept + kappa * z * z, L.slope - 2.0 * kappa * z, kappa}),
                    Curvature::kConvex});
  }
  segs.push_back({z, w_right, Polynomial::Linear(L.intercept, L.slope), Curvature::kAffine});
  if (w_right < 1.0) {
    segs.push_back({w_right, 1.0,
                    Polynomial({L.intercept + kappa * w_right * w_right,
                                L.slope - 2.0 * kappa * w_right, kappa}),
                    Curvature::kConvex});
  }
  return Payoff::Create(std::move(segs));
}

CraterCounterexample BuildFrom(const Payoff& u, const Pattern& pt, const GridSpec& grid,
                               const Geometry& g, CraterCase kase) {
  CraterCounterexample cx;
  cx.kase = kase;
  cx.grid_n = grid.n();
  cx.u = u;
  cx.x_left = grid.point(g.il);
  cx.x = grid.point(g.i);
  cx.X = grid.point(g.j);
  cx.w = grid.point(g.k);
  cx.w_right = grid.point(g.ir);
  cx.y = pt.y;
  cx.z = pt.z;
  cx.left = g.left;
  cx.right = g.right;
  cx.Y = g.left(cx.X);
  cx.p_shortfall = g.est;
  cx.f0 = SplitPrior(cx.x_left, cx.x, cx.X, cx.w, cx.w_right);
  if (kase == CraterCase::kTwoTangents) {
    cx.v = QuadraticLeftPartner(u, cx.X, &cx.kappa);
    const CensorshipSolution cs = UpperCensorshipSolve(cx.v, cx.f0);
    if (cs.no_root) Fail("F", "no interior upper-censorship cutoff for v");
    cx.f = cs.f;
    cx.cutoff = cs.a;
    cx.pool = cs.b;
  } else {
    cx.kappa = 1.0;
    cx.v = AffineMiddlePartner(g.right, pt.z, cx.w_right, cx.kappa);
    cx.f = PoolConcave(cx.f0, cx.v);
    cx.cutoff = pt.z;
    cx.pool = ConditionalMean(cx.f0, pt.z, cx.w_right);
  }
  cx.c_f0_at_X = IntegrateCdf(cx.f0)(cx.X);
  cx.c_f_at_X = IntegrateCdf(cx.f)(cx.X);
  return cx;
}

// Among the viable geometries, the one whose v-optimizer drops C_F(X) the
// most below C_F0(X).
CraterCounterexample BuildNormalized(const Payoff& u, const Pattern& pt, const GridSpec& grid) {
  const double h = grid.step();
  const int il = static_cast<int>(std::ceil(pt.xbar / h - 1e-9));
  const int ir = static_cast<int>(std::floor(pt.wbar / h + 1e-9));
  const CraterCase kase =
      pt.right_affine ? CraterCase::kTangentAndAffine : CraterCase::kTwoTangents;
  const std::vector<Geometry> geoms = kase == CraterCase::kTwoTangents
                                          ? TwoTangentGeometry(u, grid, pt, il, ir)
                                          : TangentAffineGeometry(u, grid, pt, il, ir);
  std::optional<CraterCounterexample> best;
  std::string last_error;
  for (const Geometry& g : geoms) {
    try {
      CraterCounterexample cx = BuildFrom(u, pt, grid, g, kase);
      if (!best || cx.c_f0_at_X - cx.c_f_at_X > best->c_f0_at_X - best->c_f_at_X) {
        best = std::move(cx);
      }
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  if (!best) Fail("F", "every candidate geometry failed; last: " + last_error);
  return *best;
}

AffineFunction ReflectLine(const AffineFunction& l) {
  return {l.intercept + l.slope, -l.slope};
}

}  // namespace

CraterCounterexample BuildCraterCounterexample(const Payoff& u, const GridSpec& grid) {
  const CraterVerdict verdict = CheckCrater(u);
  if (verdict.holds) throw Error(ErrorKind::kNotAViolation, "u satisfies the crater property");
  const Pattern pt = FindPattern(u, *verdict.witness);
  if (pt.left_affine && pt.right_affine) {
    Fail("pattern", "both concave pieces affine, yet the crater check failed");
  }
  CraterCounterexample cx;
  if (pt.left_affine) {
    const CraterCounterexample r = BuildNormalized(u.Reflected(), Reflect(pt), grid);
    const int n1 = grid.n() - 1;
    auto back = [&](double m) { return grid.point(n1 - grid.IndexOf(m)); };
    cx = r;
    cx.reflected = true;
    cx.u = u;
    cx.x_left = back(r.w_right);
    cx.x = back(r.w);
    cx.X = back(r.X);
    cx.w = back(r.x);
    cx.w_right = back(r.x_left);
    cx.y = pt.y;
    cx.z = pt.z;
    cx.left = ReflectLine(r.right);
    cx.right = ReflectLine(r.left);
    cx.Y = cx.left(cx.X);
    cx.f0 = SplitPrior(cx.x_left, cx.x, cx.X, cx.w, cx.w_right);
    cx.v = r.v.Reflected();
    cx.f = r.f.Reflected();
    cx.cutoff = 1.0 - r.cutoff;
    cx.pool = 1.0 - r.pool;
  } else {
    cx = BuildNormalized(u, pt, grid);
  }

  cx.c_f0_at_X = IntegrateCdf(cx.f0)(cx.X);
  cx.c_f_at_X = IntegrateCdf(cx.f)(cx.X);
  if (!LessInformative(cx.f, cx.f0).holds) Fail("F", "v-optimizer is not feasible");
  if (!(cx.c_f_at_X < cx.c_f0_at_X - 1e-9)) {
    Fail("F", "v-optimizer does not pool across X");
  }
  const RegularityReport reg = CheckRegular(cx.v);
  if (!reg.regular) Fail("v", "partner is not regular: " + reg.reason);
  if (!IsOrdinallyLessConvex(u, cx.v, GridSpec(201)).holds) {
    Fail("v", "u is not ordinally less convex than the partner");
  }
  return cx;
}

NecessityCheck VerifyNecessity(const CraterCounterexample& cx, const GridSpec& grid,
                               double tol) {
  if (!(cx.left.slope < cx.right.slope)) {
    throw Error(ErrorKind::kPreconditionFailed, "p needs a strictly larger slope right of X");
  }
  const int jx = grid.IndexOf(cx.X);
  if (jx < 0) throw Error(ErrorKind::kPreconditionFailed, "X is not a grid point");
  const std::vector<double> uu = PayoffOnGrid(cx.u, grid);
  const std::vector<double> c0 = IntegratedCdfOnGrid(cx.f0, grid);
  PersuasionLp lp(uu, c0, nullptr, grid);
  NecessityCheck out;
  out.value = lp.Solve();
  std::vector<double> sec(grid.n()), neg(grid.n());
  for (int i = 0; i < grid.n(); ++i) {
    sec[i] = std::max(0.0, cx.X - grid.point(i));
    neg[i] = -sec[i];
  }
  auto cf_at = [&](const std::vector<double>& masses) {
    double c = 0.0;
    for (int i = 0; i < grid.n(); ++i) c += masses[i] * sec[i];
    return c;
  };
  out.max_cf = cf_at(lp.OptimizeOnFace(sec));
  out.min_cf = cf_at(lp.OptimizeOnFace(neg));
  out.target = c0[jx];
  out.gap = std::max(std::abs(out.max_cf - out.target), std::abs(out.min_cf - out.target));
  out.v_drop = out.target - IntegrateCdf(cx.f)(cx.X);
  out.pass = out.gap <= tol && out.v_drop > tol;
  return out;
}

namespace {

// Points of [a, b] where line - u <= tol: whole segments where the two agree,
// otherwise the local minima of the gap.
PointSet ContactOnLine(const Payoff& u, const AffineFunction& line, double a, double b,
                       double tol) {
  PointSet out;
  auto add_point = [&](double m) {
    if (line(m) - u.Eval(m) <= tol) out.points.push_back(m);
  };
  add_point(a);
  add_point(b);
  for (const PayoffSegment& s : u.SegmentsIn(a, b)) {
    add_point(s.from);
    add_point(s.to);
    double worst = 0.0;
    for (int t = 0; t <= 16; ++t) {
      const double m = s.from + (s.to - s.from) * t / 16.0;
      worst = std::max(worst, std::abs(line(m) - s.Value(m)));
    }
    if (worst <= tol) {
      out.intervals.push_back({s.from, s.to});
      continue;
    }
    std::vector<double> cand;
    if (s.outer == OuterTransform::kIdentity) {
      cand = RealRootsIn((Polynomial::Linear(line.intercept, line.slope) - s.poly).Derivative(),
                         s.from, s.to);
    } else {
      const int samples = 512;
      auto gap = [&](double m) { return line(m) - s.Value(m); };
      for (int t = 1; t < samples; ++t) {
        const double m0 = s.from + (s.to - s.from) * (t - 1) / samples;
        const double m1 = s.from + (s.to - s.from) * t / samples;
        const double m2 = s.from + (s.to - s.from) * (t + 1) / samples;
        if (gap(m1) <= gap(m0) && gap(m1) <= gap(m2)) {
          double lo = m0, hi = m2;
          for (int it = 0; it < 100; ++it) {
            const double p = lo + (hi - lo) * 0.381966, q = hi - (hi - lo) * 0.381966;
            if (gap(p) < gap(q)) {
              hi = q;
            } else {
              lo = p;
            }
          }
          cand.push_back(0.5 * (lo + hi));
        }
      }
    }
    for (double m : cand) {
      if (line(m) - s.Value(m) <= tol) out.points.push_back(m);
    }
  }
  std::sort(out.points.begin(), out.points.end());
  std::vector<double> pts;
  for (double p : out.points) {
    const bool covered = std::any_of(out.intervals.begin(), out.intervals.end(), [&](auto& iv) {
      return p >= iv.first - 1e-12 && p <= iv.second + 1e-12;
    });
    if (!covered && (pts.empty() || p - pts.back() > 1e-12)) pts.push_back(p);
  }
  out.points = pts;
  std::vector<std::pair<double, double>> merged;
  for (const auto& iv : out.intervals) {
    if (!merged.empty() && iv.first <= merged.back().second + 1e-12) {
      merged.back().second = std::max(merged.back().second, iv.second);
    } else {
      merged.push_back(iv);
    }
  }
  out.intervals = merged;
  return out;
}

bool PieceAffine(const Hull& hull, const HullPiece& p) {
  return p.arc < 0 || hull.arcs()[p.arc].affine;
}

double PieceSlope(const HullPiece& p) { return (p.yb - p.ya) / (p.b - p.a); }

bool SameSlope(double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a)); }

// Maximal interval containing mu on which the concave envelope is affine;
// [mu, mu] at a kink or inside a strictly concave arc.
std::pair<double, double> AffineSpan(const Hull& hull, double mu) {
  std::vector<HullPiece> ps;
  for (const HullPiece& p : hull.pieces()) {
    if (p.b - p.a > 1e-15) ps.push_back(p);
  }
  const int n = static_cast<int>(ps.size());
  int k = 0;
  while (k + 1 < n && ps[k].b < mu) ++k;
  int lo = -1, hi = -1;
  const bool at_boundary = k + 1 < n && std::abs(ps[k].b - mu) <= 1e-12;
  if (!at_boundary) {
    if (!PieceAffine(hull, ps[k])) return {mu, mu};
    lo = hi = k;
  } else {
    const bool la = PieceAffine(hull, ps[k]), ra = PieceAffine(hull, ps[k + 1]);
    if (la && ra) {
      if (!SameSlope(PieceSlope(ps[k]), PieceSlope(ps[k + 1]))) return {mu, mu};
      lo = k;
      hi = k + 1;
    } else if (la) {
      lo = hi = k;
    } else if (ra) {
      lo = hi = k + 1;
    } else {
      return {mu, mu};
    }
  }
  const double slope = PieceSlope(ps[lo]);
  while (lo > 0 && PieceAffine(hull, ps[lo - 1]) && SameSlope(PieceSlope(ps[lo - 1]), slope)) {
    --lo;
  }
  while (hi + 1 < n && PieceAffine(hull, ps[hi + 1]) &&
         SameSlope(PieceSlope(ps[hi + 1]), slope)) {
    ++hi;
  }
  return {ps[lo].a, ps[hi].b};
}

Distribution TwoPointWithMean(double a, double b, double mu) {
  if (b - a <= 1e-12) return Distribution::PointMass(mu);
  return Distribution::TwoPoint(a, (b - mu) / (b - a), b);
}

}  // namespace

namespace {

BinarySolution BinarySolveOn(const Payoff& u, double mu, double lo, double hi) {
  const Concavification cav = ConcaveEnvelope(u, lo, hi);
  BinarySolution s;
  s.mu = mu;
  s.lo = lo;
  s.hi = hi;
  s.value = cav(mu);
  const auto [x, w] = AffineSpan(cav.hull, mu);
  s.x = x;
  s.w = w;
  if (w - x <= 1e-15) {
    s.contact.points = {mu};
    s.y = s.z = mu;
  } else {
    const AffineFunction line{cav(x) - (cav(w) - cav(x)) / (w - x) * x,
                              (cav(w) - cav(x)) / (w - x)};
    double scale = 1.0;
    for (int t = 0; t <= 64; ++t) scale = std::max(scale, std::abs(u.Eval(x + (w - x) * t / 64)));
    s.contact = ContactOnLine(u, line, x, w, 1e-9 * scale);
    s.y = x;
    s.z = w;
    for (double p : s.contact.points) {
      if (p <= mu) s.y = std::max(s.y, p);
      if (p >= mu) s.z = std::min(s.z, p);
    }
    for (const auto& [a, b] : s.contact.intervals) {
      if (a <= mu) s.y = std::max(s.y, std::min(b, mu));
      if (b >= mu) s.z = std::min(s.z, std::max(a, mu));
    }
  }
  s.g = TwoPointWithMean(s.y, s.z, mu);
  s.h = TwoPointWithMean(s.x, s.w, mu);
  return s;
}

}  // namespace

BinarySolution BinarySolve(const Payoff& u, double mu) {
  if (!(mu > 0.0 && mu < 1.0)) throw Error(ErrorKind::kDomainError, "mu must lie in (0, 1)");
  return BinarySolveOn(u, mu, 0.0, 1.0);
}

BinarySolution BinarySolve(const Payoff& u, const Distribution& prior) {
  if (!prior.uniforms().empty() || prior.atoms().size() > 2) {
    throw Error(ErrorKind::kDomainError, "prior is not binary");
  }
  const double mu = prior.Mean();
  const double a = prior.SupportMin(), b = prior.SupportMax();
  if (b - a <= 1e-15) {
    BinarySolution s;
    s.mu = mu;
    s.lo = a;
    s.hi = b;
    s.x = s.y = s.z = s.w = mu;
    s.contact.points = {mu};
    s.g = s.h = Distribution::PointMass(mu);
    s.value = u.Eval(mu);
    return s;
  }
  return BinarySolveOn(u, std::clamp(mu, a, b), a, b);
}

BinaryComparison CompareBinarySolutions(const Payoff& u, const Payoff& v, double mu,
                                        double tol) {
  BinaryComparison c;
  c.u = BinarySolve(u, mu);
  c.v = BinarySolve(v, mu);
  auto need = [&](bool ok, const char* what) {
    if (!ok) {
      c.pass = false;
      c.failures.push_back(what);
    }
  };
  need(c.v.x <= c.u.x + tol, "x' <= x");
  need(c.u.w <= c.v.w + tol, "w <= w'");
  need(c.v.y <= c.u.y + tol, "y' <= y");
  need(c.u.z <= c.v.z + tol, "z <= z'");
  return c;
}

}  // namespace persuasion
