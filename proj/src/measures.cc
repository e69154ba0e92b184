#include "persuasion/measures.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "persuasion/envelope.h"
#include "persuasion/error.h"

namespace persuasion {
namespace {

constexpr double kLocTol = 1e-15;

// Real roots of c0 + c1 t + c2 t^2 strictly inside (0, len).
std::vector<double> QuadraticRootsInside(double c0, double c1, double c2, double len) {
  std::vector<double> roots;
  const double scale = std::abs(c0) + std::abs(c1) * len + std::abs(c2) * len * len;
  if (scale == 0.0) return roots;
  if (std::abs(c2) * len * len <= 1e-15 * scale) {
    if (c1 != 0.0) roots.push_back(-c0 / c1);
  } else {
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) {
      // Tangency within rounding is reported at the vertex.
      if (-disc <= 1e-14 * c1 * c1 + 1e-300) roots.push_back(-c1 / (2.0 * c2));
    } else {
      const double sq = std::sqrt(disc);
      const double q = -0.5 * (c1 + std::copysign(sq, c1));
      if (q != 0.0) roots.push_back(q / c2);
      if (q != 0.0) roots.push_back(c0 / q);
      if (q == 0.0) roots.push_back(0.0);
    }
  }
  std::vector<double> inside;
  for (double r : roots) {
    if (r > 1e-14 * len && r < len * (1.0 - 1e-14)) inside.push_back(r);
  }
  std::sort(inside.begin(), inside.end());
  return inside;
}

IntegratedCdf::Piece Reexpand(const IntegratedCdf::Piece& p, double s, double t) {
  return {s, t, p.Eval(s), p.Slope(s), p.c2};
}

std::vector<double> MergedKnots(const IntegratedCdf& a, const IntegratedCdf& b) {
  std::vector<double> k = a.Knots();
  const std::vector<double> kb = b.Knots();
  k.insert(k.end(), kb.begin(), kb.end());
  std::sort(k.begin(), k.end());
  std::vector<double> out;
  for (double x : k) {
    if (out.empty() || x > out.back() + 1e-15) out.push_back(x);
  }
  return out;
}

const IntegratedCdf::Piece& PieceAt(const IntegratedCdf& c, double mid) {
  const auto& ps = c.pieces();
  auto it = std::upper_bound(ps.begin(), ps.end(), mid,
                             [](double v, const IntegratedCdf::Piece& p) { return v < p.left; });
  size_t k = it == ps.begin() ? 0 : static_cast<size_t>(it - ps.begin()) - 1;
  return ps[std::min(k, ps.size() - 1)];
}

// Pointwise max (sign = +1) or min (sign = -1) of two piecewise quadratics.
std::vector<IntegratedCdf::Piece> Extremum(const IntegratedCdf& a, const IntegratedCdf& b,
                                           double sign) {
  std::vector<IntegratedCdf::Piece> out;
  const std::vector<double> knots = MergedKnots(a, b);
  // Inputs whose means differ slightly leave near-tangencies with slivers of
  // depth about the mean difference; those count as ties.
  const double tie = 1e-11 + 2.0 * std::abs(a(1.0) - b(1.0));
  int carry = -1;
  for (size_t k = 0; k + 1 < knots.size(); ++k) {
    const double s = knots[k], t = knots[k + 1];
    const double mid = 0.5 * (s + t);
    const auto pa = Reexpand(PieceAt(a, mid), s, t);
    const auto pb = Reexpand(PieceAt(b, mid), s, t);
    std::vector<double> cuts = {0.0};
    for (double r : QuadraticRootsInside(pa.c0 - pb.c0, pa.c1 - pb.c1, pa.c2 - pb.c2, t - s)) {
      cuts.push_back(r);
    }
    cuts.push_back(t - s);
    // 1: take a, 0: take b, -1: tie, follow a neighbour.
    std::vector<int> choice;
    for (size_t j = 0; j + 1 < cuts.size(); ++j) {
      const double l = s + cuts[j], r = s + cuts[j + 1];
      const double m = 0.5 * (l + r);
      const double gap = std::max({std::abs(pa.Eval(l) - pb.Eval(l)),
                                   std::abs(pa.Eval(m) - pb.Eval(m)),
                                   std::abs(pa.Eval(r) - pb.Eval(r))});
      if (gap <= tie) {
        choice.push_back(-1);
      } else {
        choice.push_back(sign * (pa.Eval(m) - pb.Eval(m)) >= 0.0 ? 1 : 0);
      }
    }
    if (choice[0] < 0) choice[0] = carry;
    for (size_t j = 1; j < choice.size(); ++j) {
      if (choice[j] < 0) choice[j] = choice[j - 1];
    }
    for (size_t j = choice.size(); j-- > 1;) {
      if (choice[j - 1] < 0) choice[j - 1] = choice[j];
    }
    carry = choice.back();
    for (size_t j = 0; j < choice.size();) {
      size_t e = j + 1;
      while (e < choice.size() && choice[e] == choice[j]) ++e;
      const double l = s + cuts[j], r = s + cuts[e];
      if (r > l) out.push_back(Reexpand(choice[j] != 0 ? pa : pb, l, r));
      j = e;
    }
  }
  return out;
}

}  // namespace

GridSpec::GridSpec(int n) : n_(n) {
  if (n < 3) throw Error(ErrorKind::kDomainError, "grid needs at least 3 points");
}

std::vector<double> GridSpec::points() const {
  std::vector<double> p(n_);
  for (int i = 0; i < n_; ++i) p[i] = point(i);
  return p;
}

int GridSpec::IndexOf(double x, double tol) const {
  const long i = std::lround(x * (n_ - 1));
  if (i < 0 || i >= n_) return -1;
  return std::abs(point(static_cast<int>(i)) - x) <= tol ? static_cast<int>(i) : -1;
}

int GridSpec::CellOf(double x) const {
  const int i = static_cast<int>(std::floor(x * (n_ - 1)));
  return std::clamp(i, 0, n_ - 2);
}

Distribution Distribution::Create(std::vector<Atom> atoms,
                                  std::vector<UniformPiece> uniforms) {
  Distribution d;
  double total = 0.0;
  for (Atom a : atoms) {
    if (!std::isfinite(a.x) || !std::isfinite(a.w) || a.x < -1e-12 || a.x > 1 + 1e-12 ||
        a.w < -1e-12) {
      throw Error(ErrorKind::kDomainError, "atom outside [0,1] or negative mass");
    }
    a.x = std::clamp(a.x, 0.0, 1.0);
    if (a.w <= 0.0) continue;
    d.atoms_.push_back(a);
    total += a.w;
  }
  for (UniformPiece u : uniforms) {
    if (!std::isfinite(u.from) || !std::isfinite(u.to) || !std::isfinite(u.w) ||
        u.from < -1e-12 || u.to > 1 + 1e-12 || u.to < u.from || u.w < -1e-12) {
      throw Error(ErrorKind::kDomainError, "invalid uniform segment");
    }
    u.from = std::clamp(u.from, 0.0, 1.0);
    u.to = std::clamp(u.to, 0.0, 1.0);
    if (u.w <= 0.0) continue;
    if (u.to - u.from <= kLocTol) {
      d.atoms_.push_back({0.5 * (u.from + u.to), u.w});
    } else {
      d.uniforms_.push_back(u);
    }
    total += u.w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::kDomainError,
                "total mass " + std::to_string(total) + " differs from 1");
  }
  std::sort(d.atoms_.begin(), d.atoms_.end(),
            [](const Atom& p, const Atom& q) { return p.x < q.x; });
  std::vector<Atom> merged;
  for (const Atom& a : d.atoms_) {
    if (!merged.empty() && a.x - merged.back().x <= kLocTol) {
      merged.back().w += a.w;
    } else {
      merged.push_back(a);
    }
  }
  d.atoms_ = std::move(merged);
  std::sort(d.uniforms_.begin(), d.uniforms_.end(),
            [](const UniformPiece& p, const UniformPiece& q) {
              return p.from < q.from || (p.from == q.from && p.to < q.to);
            });
  // Totals within rounding are kept as given so that stored weights read back unchanged.
  if (std::abs(total - 1.0) > 1e-14) {
    for (Atom& a : d.atoms_) a.w /= total;
    for (UniformPiece& u : d.uniforms_) u.w /= total;
  }
  return d;
}

Distribution Distribution::PointMass(double x) { return Create({{x, 1.0}}); }

Distribution Distribution::Uniform(double a, double b) { return Create({}, {{a, b, 1.0}}); }

Distribution Distribution::TwoPoint(double x, double wx, double z) {
  return Create({{x, wx}, {z, 1.0 - wx}});
}

Distribution Distribution::FromGrid(const GridSpec& grid, std::span<const double> masses,
                                    double drop_tol) {
  if (static_cast<int>(masses.size()) != grid.n()) {
    throw Error(ErrorKind::kDomainError, "mass vector does not match grid");
  }
  std::vector<Atom> atoms;
  double total = 0.0;
  for (int i = 0; i < grid.n(); ++i) {
    if (masses[i] > drop_tol) {
      atoms.push_back({grid.point(i), masses[i]});
      total += masses[i];
    }
  }
  if (total <= 0.0) throw Error(ErrorKind::kNumericFailure, "grid masses vanish");
  for (Atom& a : atoms) a.w /= total;
  return Create(std::move(atoms));
}

double Distribution::TotalMass() const {
  double t = 0.0;
  for (const Atom& a : atoms_) t += a.w;
  for (const UniformPiece& u : uniforms_) t += u.w;
  return t;
}

double Distribution::Mean() const {
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.x * a.w;
  for (const UniformPiece& u : uniforms_) m += 0.5 * (u.from + u.to) * u.w;
  return m;
}

double Distribution::MassIn(double a, double b) const {
  double m = 0.0;
  for (const Atom& at : atoms_) {
    if (at.x >= a && at.x <= b) m += at.w;
  }
  for (const UniformPiece& u : uniforms_) {
    const double lo = std::max(a, u.from), hi = std::min(b, u.to);
    if (hi > lo) m += u.w * (hi - lo) / (u.to - u.from);
  }
  return m;
}

double Distribution::MassInHalfOpen(double a, double b) const {
  double m = 0.0;
  for (const Atom& at : atoms_) {
    if (at.x >= a && at.x < b) m += at.w;
  }
  for (const UniformPiece& u : uniforms_) {
    const double lo = std::max(a, u.from), hi = std::min(b, u.to);
    if (hi > lo) m += u.w * (hi - lo) / (u.to - u.from);
  }
  return m;
}

double Distribution::MomentIn(double a, double b) const {
  double m = 0.0;
  for (const Atom& at : atoms_) {
    if (at.x >= a && at.x <= b) m += at.x * at.w;
  }
  for (const UniformPiece& u : uniforms_) {
    const double lo = std::max(a, u.from), hi = std::min(b, u.to);
    if (hi > lo) m += u.w * 0.5 * (hi - lo) * (hi + lo) / (u.to - u.from);
  }
  return m;
}

double Distribution::Cdf(double x) const {
  return MassIn(-std::numeric_limits<double>::infinity(), x);
}

double Distribution::SupportMin() const {
  double m = 1.0;
  for (const Atom& a : atoms_) m = std::min(m, a.x);
  for (const UniformPiece& u : uniforms_) m = std::min(m, u.from);
  return m;
}

double Distribution::SupportMax() const {
  double m = 0.0;
  for (const Atom& a : atoms_) m = std::max(m, a.x);
  for (const UniformPiece& u : uniforms_) m = std::max(m, u.to);
  return m;
}

bool Distribution::IsOnGrid(const GridSpec& grid) const {
  if (!uniforms_.empty()) return false;
  return std::all_of(atoms_.begin(), atoms_.end(),
                     [&grid](const Atom& a) { return grid.IndexOf(a.x) >= 0; });
}

std::vector<double> Distribution::GridMasses(const GridSpec& grid) const {
  if (!IsOnGrid(grid)) {
    throw Error(ErrorKind::kDomainError, "distribution is not supported on the grid");
  }
  std::vector<double> m(grid.n(), 0.0);
  for (const Atom& a : atoms_) m[grid.IndexOf(a.x)] += a.w;
  return m;
}

Distribution Distribution::Reflected() const {
  std::vector<Atom> atoms;
  for (const Atom& a : atoms_) atoms.push_back({1.0 - a.x, a.w});
  std::vector<UniformPiece> us;
  for (const UniformPiece& u : uniforms_) us.push_back({1.0 - u.to, 1.0 - u.from, u.w});
  return Create(std::move(atoms), std::move(us));
}

IntegratedCdf::IntegratedCdf(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw Error(ErrorKind::kDomainError, "empty integrated CDF");
}

int IntegratedCdf::PieceIndex(double x) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const Piece& p) { return v < p.left; });
  int k = static_cast<int>(it - pieces_.begin()) - 1;
  return std::clamp(k, 0, static_cast<int>(pieces_.size()) - 1);
}

double IntegratedCdf::operator()(double x) const {
  x = std::clamp(x, pieces_.front().left, pieces_.back().right);
  return pieces_[PieceIndex(x)].Eval(x);
}

double IntegratedCdf::RightSlope(double x) const {
  if (x >= pieces_.back().right) return LeftSlope(x);
  return pieces_[PieceIndex(x)].Slope(std::max(x, pieces_.front().left));
}

double IntegratedCdf::LeftSlope(double x) const {
  if (x <= pieces_.front().left) return RightSlope(x);
  auto it = std::lower_bound(pieces_.begin(), pieces_.end(), x,
                             [](const Piece& p, double v) { return p.left < v; });
  int k = static_cast<int>(it - pieces_.begin()) - 1;
  k = std::clamp(k, 0, static_cast<int>(pieces_.size()) - 1);
  return pieces_[k].Slope(std::min(x, pieces_[k].right));
}

std::vector<double> IntegratedCdf::Knots() const {
  std::vector<double> k;
  for (const Piece& p : pieces_) k.push_back(p.left);
  k.push_back(pieces_.back().right);
  return k;
}

Distribution IntegratedCdf::ToDistribution() const {
  std::vector<Atom> jumps;
  std::vector<UniformPiece> uniforms;
  // Slivers left by near-ties between pieces carry no resolvable mass; their
  // slope change goes into the atom at the junction.
  std::vector<const Piece*> kept;
  for (const Piece& p : pieces_) {
    if (p.right - p.left >= 1e-9) kept.push_back(&p);
  }
  if (kept.empty()) kept.push_back(&pieces_.front());
  jumps.push_back({pieces_.front().left, kept.front()->c1});
  for (size_t k = 0; k < kept.size(); ++k) {
    const Piece& p = *kept[k];
    const double len = p.right - p.left;
    if (p.c2 < -1e-7 / std::max(len, 1e-12)) {
      throw Error(ErrorKind::kNumericFailure, "integrated CDF is not convex");
    }
    const double mass = 2.0 * p.c2 * len;
    if (mass > 1e-14) uniforms.push_back({p.left, p.right, mass});
    if (k + 1 < kept.size()) {
      jumps.push_back({kept[k + 1]->left, kept[k + 1]->c1 - p.Slope(p.right)});
    } else {
      jumps.push_back({pieces_.back().right, 1.0 - p.Slope(p.right)});
    }
  }
  // Signed slope jumps closer than 1e-7 are one atom split by rounding.
  std::vector<Atom> atoms;
  for (size_t k = 0; k < jumps.size();) {
    Atom a = jumps[k];
    double big = std::abs(a.w);
    size_t e = k + 1;
    for (; e < jumps.size() && jumps[e].x - jumps[e - 1].x < 1e-7; ++e) {
      if (std::abs(jumps[e].w) > big) {
        big = std::abs(jumps[e].w);
        a.x = jumps[e].x;
      }
      a.w += jumps[e].w;
    }
    if (a.w < -1e-7) {
      throw Error(ErrorKind::kNumericFailure, "integrated CDF is not convex");
    }
    if (a.w > 1e-14) atoms.push_back(a);
    k = e;
  }
  double total = 0.0;
  for (const Atom& a : atoms) total += a.w;
  for (const UniformPiece& u : uniforms) total += u.w;
  for (Atom& a : atoms) a.w /= total;
  for (UniformPiece& u : uniforms) u.w /= total;
  return Distribution::Create(std::move(atoms), std::move(uniforms));
}

IntegratedCdf IntegrateCdf(const Distribution& f) {
  std::vector<double> knots = {0.0, 1.0};
  for (const Atom& a : f.atoms()) knots.push_back(a.x);
  for (const UniformPiece& u : f.uniforms()) {
    knots.push_back(u.from);
    knots.push_back(u.to);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::vector<IntegratedCdf::Piece> pieces;
  const auto& atoms = f.atoms();
  size_t ai = 0;
  double atom_mass = 0.0;
  double c = 0.0;
  for (size_t k = 0; k + 1 < knots.size(); ++k) {
    const double s = knots[k], t = knots[k + 1];
    while (ai < atoms.size() && atoms[ai].x <= s) atom_mass += atoms[ai++].w;
    double cdf = atom_mass;
    double density = 0.0;
    for (const UniformPiece& u : f.uniforms()) {
      const double len = u.to - u.from;
      if (s >= u.to) {
        cdf += u.w;
      } else if (s > u.from) {
        cdf += u.w * (s - u.from) / len;
      }
      if (u.from <= s && u.to >= t) density += u.w / len;
    }
    pieces.push_back({s, t, c, cdf, 0.5 * density});
    c = pieces.back().Eval(t);
  }
  return IntegratedCdf(std::move(pieces));
}

std::vector<IntegratedCdf::Piece> Difference(const IntegratedCdf& a, const IntegratedCdf& b) {
  std::vector<IntegratedCdf::Piece> out;
  const std::vector<double> knots = MergedKnots(a, b);
  for (size_t k = 0; k + 1 < knots.size(); ++k) {
    const double s = knots[k], t = knots[k + 1];
    const double mid = 0.5 * (s + t);
    const auto pa = Reexpand(PieceAt(a, mid), s, t);
    const auto pb = Reexpand(PieceAt(b, mid), s, t);
    out.push_back({s, t, pa.c0 - pb.c0, pa.c1 - pb.c1, pa.c2 - pb.c2});
  }
  return out;
}

OrderCheck LessInformative(const IntegratedCdf& cf, const IntegratedCdf& cg, double tol) {
  OrderCheck result;
  double worst = 0.0, where = 0.0;
  auto visit = [&](double x, double d) {
    if (d < worst) {
      worst = d;
      where = x;
    }
  };
  for (const auto& p : Difference(cg, cf)) {
    const double len = p.right - p.left;
    visit(p.left, p.c0);
    visit(p.right, p.Eval(p.right));
    if (p.c2 > 0.0) {
      const double t = -p.c1 / (2.0 * p.c2);
      if (t > 0.0 && t < len) visit(p.left + t, p.Eval(p.left + t));
    }
  }
  const double end_gap = cg(1.0) - cf(1.0);
  if (worst < -tol) {
    result.holds = false;
    result.witness = where;
    result.violation = -worst;
  } else if (std::abs(end_gap) > tol) {
    result.holds = false;
    result.witness = 1.0;
    result.violation = std::abs(end_gap);
  }
  return result;
}

OrderCheck LessInformative(const Distribution& f, const Distribution& g, double tol) {
  return LessInformative(IntegrateCdf(f), IntegrateCdf(g), tol);
}

IntegratedCdf PointwiseMax(const IntegratedCdf& a, const IntegratedCdf& b) {
  return IntegratedCdf(Extremum(a, b, 1.0));
}

IntegratedCdf ConvexEnvelopeOfPieces(const std::vector<IntegratedCdf::Piece>& lower) {
  std::vector<HullArc> arcs;
  for (size_t k = 0; k < lower.size(); ++k) {
    const IntegratedCdf::Piece p = lower[k];
    if (p.right < p.left) continue;
    HullArc arc;
    arc.a = p.left;
    arc.b = p.right;
    arc.f = [p](double x) { return p.Eval(x); };
    arc.df = [p](double x) { return p.Slope(x); };
    arc.affine = p.c2 == 0.0;
    arc.tag = static_cast<int>(k);
    arcs.push_back(std::move(arc));
  }
  const Hull hull = Hull::Compute(0.0, 1.0, {}, std::move(arcs), Hull::Side::kLower);
  std::vector<IntegratedCdf::Piece> pieces;
  for (const HullPiece& hp : hull.pieces()) {
    if (hp.b <= hp.a) continue;
    if (hp.arc >= 0) {
      pieces.push_back(Reexpand(lower[hull.arcs()[hp.arc].tag], hp.a, hp.b));
    } else {
      pieces.push_back({hp.a, hp.b, hp.ya, (hp.yb - hp.ya) / (hp.b - hp.a), 0.0});
    }
  }
  return IntegratedCdf(std::move(pieces));
}

IntegratedCdf ConvexEnvelopeOfMin(const IntegratedCdf& a, const IntegratedCdf& b) {
  return ConvexEnvelopeOfPieces(Extremum(a, b, -1.0));
}

std::vector<IntegratedCdf::Piece> IntegratedCdf::PiecesIn(double a, double b) const {
  std::vector<Piece> out;
  for (const Piece& p : pieces_) {
    const double l = std::max(a, p.left), r = std::min(b, p.right);
    if (r > l) out.push_back(Reexpand(p, l, r));
  }
  if (out.empty() && b >= a) {
    const Piece& p = pieces_[PieceIndex(a)];
    out.push_back(Reexpand(p, a, b));
  }
  return out;
}

Distribution Join(const Distribution& f, const Distribution& g, double tol) {
  if (std::abs(f.Mean() - g.Mean()) > tol) {
    throw Error(ErrorKind::kMeanMismatch, "join of distributions with different means");
  }
  return PointwiseMax(IntegrateCdf(f), IntegrateCdf(g)).ToDistribution();
}

Distribution Meet(const Distribution& f, const Distribution& g, double tol) {
  if (std::abs(f.Mean() - g.Mean()) > tol) {
    throw Error(ErrorKind::kMeanMismatch, "meet of distributions with different means");
  }
  return ConvexEnvelopeOfMin(IntegrateCdf(f), IntegrateCdf(g)).ToDistribution();
}

double ConditionalMean(const Distribution& f, double a, double b) {
  const double mass = f.MassIn(a, b);
  if (mass <= 1e-15) throw Error(ErrorKind::kNullEvent, "conditioning on a null event");
  return f.MomentIn(a, b) / mass;
}

Distribution UpperCensorship(const Distribution& f0, double a) {
  const double mass = f0.MassIn(a, 1.0);
  if (mass <= 1e-15) throw Error(ErrorKind::kNullEvent, "no mass above the cutoff");
  const double b = f0.MomentIn(a, 1.0) / mass;
  std::vector<Atom> atoms;
  for (const Atom& at : f0.atoms()) {
    if (at.x < a) atoms.push_back(at);
  }
  atoms.push_back({b, mass});
  std::vector<UniformPiece> us;
  for (const UniformPiece& u : f0.uniforms()) {
    const double hi = std::min(u.to, a);
    if (hi > u.from) us.push_back({u.from, hi, u.w * (hi - u.from) / (u.to - u.from)});
  }
  return Distribution::Create(std::move(atoms), std::move(us));
}

std::vector<double> DiscretizeMasses(const Distribution& f, const GridSpec& grid) {
  std::vector<double> m(grid.n(), 0.0);
  const double h = grid.step();
  auto split = [&](double x, double w) {
    const int on = grid.IndexOf(x, 1e-14);
    if (on >= 0) {
      m[on] += w;
      return;
    }
    const int i = grid.CellOf(x);
    const double t = std::clamp((x - grid.point(i)) / h, 0.0, 1.0);
    m[i] += w * (1.0 - t);
    m[i + 1] += w * t;
  };
  for (const Atom& a : f.atoms()) split(a.x, a.w);
  for (const UniformPiece& u : f.uniforms()) {
    const double density = u.w / (u.to - u.from);
    const int first = grid.CellOf(u.from), last = grid.CellOf(u.to);
    for (int i = first; i <= last; ++i) {
      const double lo = std::max(u.from, grid.point(i));
      const double hi = std::min(u.to, grid.point(i + 1));
      if (hi <= lo) continue;
      const double w = density * (hi - lo);
      const double t = std::clamp((0.5 * (lo + hi) - grid.point(i)) / h, 0.0, 1.0);
      m[i] += w * (1.0 - t);
      m[i + 1] += w * t;
    }
  }
  return m;
}

Distribution Discretize(const Distribution& f, const GridSpec& grid) {
  const std::vector<double> m = DiscretizeMasses(f, grid);
  return Distribution::FromGrid(grid, m, 0.0);
}

double SupDistance(const IntegratedCdf& a, const IntegratedCdf& b) {
  double worst = 0.0;
  for (const auto& p : Difference(a, b)) {
    const double len = p.right - p.left;
    worst = std::max({worst, std::abs(p.c0), std::abs(p.Eval(p.right))});
    if (p.c2 != 0.0) {
      const double t = -p.c1 / (2.0 * p.c2);
      if (t > 0.0 && t < len) worst = std::max(worst, std::abs(p.Eval(p.left + t)));
    }
  }
  return worst;
}

}  // namespace persuasion
