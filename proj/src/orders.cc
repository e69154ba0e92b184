#include "persuasion/orders.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "persuasion/error.h"

namespace persuasion {
namespace {

using Span = std::pair<double, double>;

double PieceEval(const IntegratedCdf::Piece& p, double x) { return p.Eval(x); }

std::vector<Span> MergeSpans(std::vector<Span> spans, double gap) {
  std::sort(spans.begin(), spans.end());
  std::vector<Span> out;
  for (const Span& s : spans) {
    if (!out.empty() && s.first <= out.back().second + gap) {
      out.back().second = std::max(out.back().second, s.second);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

// Parts of the uniform piece lying outside every (sorted, disjoint) closed
// span.
std::vector<UniformPiece> UniformOutside(const UniformPiece& u, const std::vector<Span>& spans) {
  std::vector<UniformPiece> out;
  const double density = u.w / (u.to - u.from);
  double start = u.from;
  for (const Span& s : spans) {
    if (s.second <= start || s.first >= u.to) continue;
    if (s.first > start) out.push_back({start, s.first, density * (s.first - start)});
    start = std::max(start, s.second);
  }
  if (u.to > start) out.push_back({start, u.to, density * (u.to - start)});
  return out;
}

std::vector<double> GridC(const std::vector<double>& masses, const GridSpec& grid) {
  return GridIntegratedCdf(masses, grid);
}

bool GridBelow(const std::vector<double>& a, const std::vector<double>& b) {
  for (size_t j = 0; j < a.size(); ++j) {
    if (a[j] > b[j] + 1e-10) return false;
  }
  return std::abs(a.back() - b.back()) <= 1e-10;
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

IntervalFamily IntervalFamilyOf(const Distribution& f, const Distribution& h, double tol) {
  const OrderCheck order = LessInformative(f, h);
  if (!order.holds) {
    std::ostringstream msg;
    msg << "F is not less informative than H (fails at x=" << order.witness << ")";
    throw Error(ErrorKind::kNotComparable, msg.str());
  }
  const std::vector<IntegratedCdf::Piece> d = Difference(IntegrateCdf(h), IntegrateCdf(f));
  std::vector<Span> zeros = {{0.0, 0.0}, {1.0, 1.0}};
  for (const IntegratedCdf::Piece& p : d) {
    const double l = p.left, r = p.right;
    const double dl = PieceEval(p, l), dr = PieceEval(p, r);
    double vertex = std::numeric_limits<double>::quiet_NaN();
    if (p.c2 > 0.0) {
      const double v = l - p.c1 / (2.0 * p.c2);
      if (v > l && v < r) vertex = v;
    }
    double peak = std::max(std::abs(dl), std::abs(dr));
    if (!std::isnan(vertex)) peak = std::max(peak, std::abs(PieceEval(p, vertex)));
    if (peak <= tol) {
      zeros.push_back({l, r});
      continue;
    }
    if (std::abs(dl) <= tol) zeros.push_back({l, l});
    if (std::abs(dr) <= tol) zeros.push_back({r, r});
    if (!std::isnan(vertex) && std::abs(PieceEval(p, vertex)) <= tol) {
      zeros.push_back({vertex, vertex});
    }
  }
  zeros = MergeSpans(std::move(zeros), 1e-12);
  IntervalFamily family;
  for (size_t k = 0; k + 1 < zeros.size(); ++k) {
    const double a = zeros[k].second, b = zeros[k + 1].first;
    if (b - a > 1e-12) family.intervals.push_back({a, b});
  }
  return family;
}

DominanceVerdict IntervalDominanceCheck(const Payoff& u, const Distribution& f,
                                        const Distribution& h, DominanceMode mode,
                                        const GridSpec* grid, double tol) {
  const IntervalFamily family = IntervalFamilyOf(f, h);
  DominanceVerdict verdict;
  if (mode == DominanceMode::kGrid) {
    if (grid == nullptr || !h.IsOnGrid(*grid) || !h.uniforms().empty()) {
      throw Error(ErrorKind::kDomainError, "grid mode needs H supported on grid points");
    }
  }
  for (const auto& [a, b] : family.intervals) {
    PointSet x;
    for (const Atom& at : h.atoms()) {
      if (at.x >= a - 1e-12 && at.x <= b + 1e-12) x.points.push_back(std::clamp(at.x, a, b));
    }
    for (const UniformPiece& up : h.uniforms()) {
      const double l = std::max(up.from, a), r = std::min(up.to, b);
      if (r > l) x.intervals.push_back({l, r});
    }
    if (x.empty()) continue;
    auto fail = [&](double at, double shortfall) {
      if (!verdict.holds && shortfall <= verdict.shortfall) return;
      verdict.holds = false;
      verdict.interval = {a, b};
      verdict.at = at;
      verdict.shortfall = shortfall;
    };
    if (mode == DominanceMode::kGrid) {
      std::vector<HullPoint> pts;
      for (double p : x.points) pts.push_back({p, u.Eval(p)});
      const std::vector<HullPoint> hull = LowerHullOfPoints(pts, false);
      for (int j = 0; j < grid->n(); ++j) {
        const double m = grid->point(j);
        if (m < hull.front().x - 1e-12 || m > hull.back().x + 1e-12) continue;
        const double env = InterpolateVertices(hull, std::clamp(m, hull.front().x, hull.back().x));
        const double s = u.Eval(m) - env;
        if (s > tol) fail(m, s);
      }
      continue;
    }
    const RestrictedEnvelope env = RestrictedConvexEnvelope(u, x);
    for (const HullPiece& hp : env.hull().pieces()) {
      if (hp.arc >= 0) {
        for (double m : {hp.a, hp.b}) {
          const double s = u.Eval(m) - env(m);
          if (s > tol) fail(m, s);
        }
        continue;
      }
      const double slope = hp.b > hp.a ? (hp.yb - hp.ya) / (hp.b - hp.a) : 0.0;
      const Excess e = MaxExcessOverLine(u, hp.a, hp.b, hp.ya - slope * hp.a, slope);
      if (e.value > tol) fail(e.at, e.value);
    }
  }
  return verdict;
}

WsoVerdict WsoCompare(const Payoff& u, const ArgmaxProbe& pu, const Payoff& v,
                      const ArgmaxProbe& pv, const Distribution& f0, const GridSpec& grid,
                      const Distribution* g0, double tol) {
  const std::vector<double> uu = PayoffOnGrid(u, grid), vv = PayoffOnGrid(v, grid);
  const std::vector<double> c0 = IntegratedCdfOnGrid(f0, grid);
  std::vector<double> cg0;
  if (g0 != nullptr) cg0 = IntegratedCdfOnGrid(*g0, grid);
  const std::vector<double>* lower_bound = g0 != nullptr ? &cg0 : nullptr;
  std::vector<std::vector<double>> cu, cv;
  for (const auto& m : pu.masses) cu.push_back(GridC(m, grid));
  for (const auto& m : pv.masses) cv.push_back(GridC(m, grid));
  const double tu = tol * (1.0 + std::abs(pu.value)), tv = tol * (1.0 + std::abs(pv.value));

  WsoVerdict out;
  out.u_value = pu.value;
  out.v_value = pv.value;
  out.u_members = static_cast<int>(pu.masses.size());
  out.v_members = static_cast<int>(pv.masses.size());

  // For a member with integrated CDF c of one probe, is there an optimizer of
  // the other payoff above (up = true) or below it? Exact via an interval LP.
  auto exists = [&](const std::vector<double>& payoff, double target, double t,
                    const std::vector<double>& member, const std::vector<double>& c,
                    const std::vector<std::vector<double>>& others, bool up,
                    double* best) {
    *best = Dot(payoff, member);
    if (*best >= target - t) return true;
    for (const auto& o : others) {
      if (up ? GridBelow(c, o) : GridBelow(o, c)) {
        *best = target;
        return true;
      }
    }
    *best = up ? MaxValue(payoff, c0, &c, grid) : MaxValue(payoff, c, lower_bound, grid);
    return *best >= target - t;
  };

  bool lower = true, higher = true;
  double best = 0.0;
  for (size_t k = 0; k < pu.masses.size(); ++k) {
    if (!exists(vv, pv.value, tv, pu.masses[k], cu[k], cv, true, &best)) {
      lower = false;
      out.lower_failures.push_back({"u", static_cast<int>(k), best, pv.value});
    }
    if (!exists(vv, pv.value, tv, pu.masses[k], cu[k], cv, false, &best)) {
      higher = false;
      out.higher_failures.push_back({"u", static_cast<int>(k), best, pv.value});
    }
  }
  for (size_t k = 0; k < pv.masses.size(); ++k) {
    if (!exists(uu, pu.value, tu, pv.masses[k], cv[k], cu, false, &best)) {
      lower = false;
      out.lower_failures.push_back({"v", static_cast<int>(k), best, pu.value});
    }
    if (!exists(uu, pu.value, tu, pv.masses[k], cv[k], cu, true, &best)) {
      higher = false;
      out.higher_failures.push_back({"v", static_cast<int>(k), best, pu.value});
    }
  }
  out.lower = lower;
  out.higher = higher;
  out.strictly_lower = lower && !higher;
  out.strictly_higher = higher && !lower;
  return out;
}

Distribution PoolConcave(const Distribution& g, const Payoff& u) {
  const RegularityReport reg = CheckRegular(u);
  if (!reg.regular) throw Error(ErrorKind::kNotRegular, reg.reason);
  std::vector<Span> spans;
  for (const auto& s : ConcavityIntervals(u)) {
    if (s.second > s.first) spans.push_back(s);
  }
  std::vector<Atom> atoms;
  for (const Atom& a : g.atoms()) {
    const bool inside = std::any_of(spans.begin(), spans.end(), [&](const Span& s) {
      return a.x >= s.first && a.x <= s.second;
    });
    if (!inside) atoms.push_back(a);
  }
  for (const Span& s : spans) {
    const double mass = g.MassIn(s.first, s.second);
    if (mass <= 1e-15) continue;
    atoms.push_back({g.MomentIn(s.first, s.second) / mass, mass});
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  std::vector<UniformPiece> uniforms;
  for (const UniformPiece& up : g.uniforms()) {
    for (const UniformPiece& part : UniformOutside(up, spans)) uniforms.push_back(part);
  }
  return Distribution::Create(std::move(atoms), std::move(uniforms));
}

Distribution SpreadConvex(const Distribution& h, const Payoff& v, const Distribution& f0) {
  const RegularityReport reg = CheckRegular(v);
  if (!reg.regular) throw Error(ErrorKind::kNotRegular, reg.reason);
  const OrderCheck order = LessInformative(h, f0);
  if (!order.holds) {
    throw Error(ErrorKind::kNotComparable, "H is not less informative than F0");
  }
  const IntegratedCdf ch = IntegrateCdf(h), c0 = IntegrateCdf(f0);
  std::vector<Span> spans;
  for (const auto& s : ConvexityIntervals(v)) {
    if (s.second > s.first) spans.push_back(s);
  }
  if (spans.empty()) return h;
  std::vector<IntegratedCdf::Piece> pieces;
  double start = 0.0;
  for (const Span& s : spans) {
    if (s.first > start) {
      for (const auto& p : ch.PiecesIn(start, s.first)) pieces.push_back(p);
    }
    for (const auto& p : c0.PiecesIn(s.first, s.second)) pieces.push_back(p);
    start = s.second;
  }
  if (start < 1.0) {
    for (const auto& p : ch.PiecesIn(start, 1.0)) pieces.push_back(p);
  }
  return ConvexEnvelopeOfPieces(pieces).ToDistribution();
}

}  // namespace persuasion
