#include "persuasion/payoffs.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "persuasion/error.h"

namespace persuasion {
namespace {

constexpr double kPi = 3.14159265358979323846;

// 10-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 5> kGlNodes = {0.1488743389816312, 0.4333953941292472,
                                            0.6794095682990244, 0.8650633666889845,
                                            0.9739065285171717};
constexpr std::array<double, 5> kGlWeights = {0.2955242247147529, 0.2692667193099963,
                                              0.2190863625159820, 0.1494513491505806,
                                              0.0666713443086881};

double IntegrateSegment(const PayoffSegment& s, double a, double b) {
  if (b <= a) return 0.0;
  if (s.outer == OuterTransform::kIdentity) {
    const auto& c = s.poly.coeffs();
    double pa = 0.0, pb = 0.0;
    for (size_t k = c.size(); k-- > 0;) {
      pa = pa * a + c[k] / (k + 1);
      pb = pb * b + c[k] / (k + 1);
    }
    return pb * b - pa * a;
  }
  const int parts = 16;
  double total = 0.0;
  for (int p = 0; p < parts; ++p) {
    const double l = a + (b - a) * p / parts, r = a + (b - a) * (p + 1) / parts;
    const double mid = 0.5 * (l + r), half = 0.5 * (r - l);
    for (size_t q = 0; q < kGlNodes.size(); ++q) {
      total += kGlWeights[q] * half *
               (s.Value(mid - half * kGlNodes[q]) + s.Value(mid + half * kGlNodes[q]));
    }
  }
  return total;
}

bool PolyIsAffine(const Polynomial& p) {
  double scale = 0.0;
  for (double c : p.coeffs()) scale += std::abs(c);
  for (size_t k = 2; k < p.coeffs().size(); ++k) {
    if (std::abs(p.coeffs()[k]) > 1e-14 * (1.0 + scale)) return false;
  }
  return true;
}

bool SegmentIsAffine(const PayoffSegment& s) {
  if (s.outer == OuterTransform::kIdentity) return PolyIsAffine(s.poly);
  return s.poly.degree() <= 0;
}

// Points strictly inside (from, to) where the segment's second derivative
// changes sign.
std::vector<double> CurvatureSignChanges(const PayoffSegment& s) {
  if (SegmentIsAffine(s)) return {};
  std::vector<double> cuts;
  if (s.outer == OuterTransform::kIdentity) {
    const Polynomial d2 = s.poly.Derivative().Derivative();
    for (double r : RealRootsIn(d2, s.from, s.to)) {
      if (r <= s.from || r >= s.to) continue;
      const double eps = 1e-7 * (s.to - s.from);
      const double l = d2(std::max(s.from, r - eps)), h = d2(std::min(s.to, r + eps));
      if ((l > 0 && h < 0) || (l < 0 && h > 0)) cuts.push_back(r);
    }
  } else {
    cuts = SignChanges([&s](double m) { return s.Second(m); }, s.from, s.to, 256);
  }
  return cuts;
}

Curvature ClassifyPiece(const PayoffSegment& s, double a, double b) {
  if (SegmentIsAffine(s)) return Curvature::kAffine;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int k = 1; k < 32; ++k) {
    const double v = s.Second(a + (b - a) * k / 32.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double tol = 1e-12 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
  if (hi <= tol && lo >= -tol) return Curvature::kAffine;
  if (lo >= -tol) return Curvature::kConvex;
  if (hi <= tol) return Curvature::kConcave;
  return Curvature::kUnclassified;
}

// Sub-pieces of each segment with a definite curvature.
struct SubPiece {
  int segment;
  double a;
  double b;
  Curvature curvature;
};

std::vector<SubPiece> SubPieces(const Payoff& u) {
  std::vector<SubPiece> out;
  const auto& segs = u.segments();
  for (int k = 0; k < static_cast<int>(segs.size()); ++k) {
    const PayoffSegment& s = segs[k];
    if (s.curvature != Curvature::kUnclassified) {
      out.push_back({k, s.from, s.to, s.curvature});
      continue;
    }
    std::vector<double> cuts = CurvatureSignChanges(s);
    cuts.insert(cuts.begin(), s.from);
    cuts.push_back(s.to);
    for (size_t j = 0; j + 1 < cuts.size(); ++j) {
      if (cuts[j + 1] > cuts[j]) {
        out.push_back({k, cuts[j], cuts[j + 1], ClassifyPiece(s, cuts[j], cuts[j + 1])});
      }
    }
  }
  return out;
}

HullArc ArcOf(const PayoffSegment& s, double a, double b, bool affine) {
  HullArc arc;
  arc.a = a;
  arc.b = b;
  arc.f = [s](double m) { return s.Value(m); };
  arc.df = [s](double m) { return s.Deriv(m); };
  arc.affine = affine;
  return arc;
}

}  // namespace

const char* CurvatureName(Curvature c) {
  switch (c) {
    case Curvature::kAffine: return "affine";
    case Curvature::kConvex: return "convex";
    case Curvature::kConcave: return "concave";
    case Curvature::kUnclassified: return "unclassified";
  }
  return "unclassified";
}

const char* CraterReasonName(CraterReason r) {
  switch (r) {
    case CraterReason::kEqualSlopes: return "equal-slopes";
    case CraterReason::kCrossingOutside: return "crossing-outside-[y,z]";
    case CraterReason::kCrossingAbove: return "crossing-above-u";
  }
  return "unknown";
}

namespace {

// Value, first and second derivative of a polynomial by Horner's scheme.
void Horner(const std::vector<double>& c, double m, double* p, double* d1, double* d2) {
  double v = 0.0, d = 0.0, dd = 0.0;
  for (size_t k = c.size(); k-- > 0;) {
    dd = dd * m + 2.0 * d;
    d = d * m + v;
    v = v * m + c[k];
  }
  *p = v;
  *d1 = d;
  *d2 = dd;
}

}  // namespace

double PayoffSegment::Value(double m) const {
  const double p = poly(m);
  return outer == OuterTransform::kExp ? std::exp(p) : p;
}

double PayoffSegment::Deriv(double m) const {
  double p, d, dd;
  Horner(poly.coeffs(), m, &p, &d, &dd);
  return outer == OuterTransform::kExp ? std::exp(p) * d : d;
}

double PayoffSegment::Second(double m) const {
  double p, d, dd;
  Horner(poly.coeffs(), m, &p, &d, &dd);
  if (outer == OuterTransform::kIdentity) return dd;
  return std::exp(p) * (d * d + dd);
}

long double PayoffSegment::ValueExtended(long double m) const {
  const long double p = poly.EvalExtended(m);
  return outer == OuterTransform::kExp ? std::exp(p) : p;
}

Payoff Payoff::Create(std::vector<PayoffSegment> segments) {
  if (segments.empty()) throw Error(ErrorKind::kDomainError, "payoff without segments");
  std::sort(segments.begin(), segments.end(),
            [](const PayoffSegment& a, const PayoffSegment& b) { return a.from < b.from; });
  if (std::abs(segments.front().from) > 1e-12 || std::abs(segments.back().to - 1.0) > 1e-12) {
    throw Error(ErrorKind::kDomainError, "segments must cover [0,1]");
  }
  segments.front().from = 0.0;
  segments.back().to = 1.0;
  for (size_t k = 0; k < segments.size(); ++k) {
    if (k + 1 < segments.size()) {
      if (std::abs(segments[k].to - segments[k + 1].from) > 1e-12) {
        throw Error(ErrorKind::kDomainError, "segments must be contiguous");
      }
      segments[k].to = segments[k + 1].from;
    }
    if (!(segments[k].to > segments[k].from)) {
      throw Error(ErrorKind::kDomainError, "degenerate payoff segment");
    }
    for (double c : segments[k].poly.coeffs()) {
      if (!std::isfinite(c)) throw Error(ErrorKind::kDomainError, "non-finite coefficient");
    }
  }
  Payoff u;
  u.segments_ = std::move(segments);
  return u;
}

Payoff Payoff::FromPolynomial(const Polynomial& p, Curvature tag) {
  return Create({{0.0, 1.0, p, tag}});
}

int Payoff::SegmentIndex(double m) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), m,
                             [](double v, const PayoffSegment& s) { return v < s.from; });
  int k = static_cast<int>(it - segments_.begin()) - 1;
  return std::clamp(k, 0, static_cast<int>(segments_.size()) - 1);
}

double Payoff::Eval(double m) const {
  if (!(m >= -1e-12 && m <= 1.0 + 1e-12)) {
    throw Error(ErrorKind::kDomainError, "payoff evaluated outside [0,1]");
  }
  m = std::clamp(m, 0.0, 1.0);
  const int k = SegmentIndex(m);
  double v = segments_[k].Value(m);
  if (k > 0 && m == segments_[k].from) v = std::max(v, segments_[k - 1].Value(m));
  return v;
}

long double Payoff::EvalExtended(long double m) const {
  const double md = static_cast<double>(m);
  if (!(md >= -1e-12 && md <= 1.0 + 1e-12)) {
    throw Error(ErrorKind::kDomainError, "payoff evaluated outside [0,1]");
  }
  const int k = SegmentIndex(std::clamp(md, 0.0, 1.0));
  long double v = segments_[k].ValueExtended(m);
  if (k > 0 && md == segments_[k].from) v = std::max(v, segments_[k - 1].ValueExtended(m));
  return v;
}

double Payoff::Deriv(double m) const {
  if (!(m >= -1e-12 && m <= 1.0 + 1e-12)) {
    throw Error(ErrorKind::kDomainError, "payoff derivative outside [0,1]");
  }
  m = std::clamp(m, 0.0, 1.0);
  if (m >= 1.0) return segments_.back().Deriv(1.0);
  return segments_[SegmentIndex(m)].Deriv(m);
}

std::vector<double> Payoff::Breakpoints() const {
  std::vector<double> b;
  for (size_t k = 1; k < segments_.size(); ++k) b.push_back(segments_[k].from);
  return b;
}

std::vector<double> Payoff::Discontinuities(double tol) const {
  std::vector<double> out;
  for (size_t k = 1; k < segments_.size(); ++k) {
    const double b = segments_[k].from;
    const double l = segments_[k - 1].Value(b), r = segments_[k].Value(b);
    if (std::abs(l - r) > tol * (1.0 + std::max(std::abs(l), std::abs(r)))) out.push_back(b);
  }
  return out;
}

std::vector<double> Payoff::OnGrid(const GridSpec& grid) const {
  std::vector<double> v(grid.n());
  for (int i = 0; i < grid.n(); ++i) v[i] = Eval(grid.point(i));
  return v;
}

double Payoff::Expectation(const Distribution& f) const {
  double total = 0.0;
  for (const Atom& a : f.atoms()) total += a.w * Eval(a.x);
  for (const UniformPiece& u : f.uniforms()) {
    double integral = 0.0;
    for (const PayoffSegment& s : segments_) {
      integral += IntegrateSegment(s, std::max(s.from, u.from), std::min(s.to, u.to));
    }
    total += u.w * integral / (u.to - u.from);
  }
  return total;
}

Payoff Payoff::Reflected() const {
  std::vector<PayoffSegment> segs;
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
    PayoffSegment s = *it;
    s.from = 1.0 - it->to;
    s.to = 1.0 - it->from;
    s.poly = it->poly.ComposeAffine(1.0, -1.0);
    segs.push_back(s);
  }
  return Create(std::move(segs));
}

Payoff Payoff::Scaled(double alpha, double beta) const {
  if (!(alpha > 0.0)) throw Error(ErrorKind::kDomainError, "scale must be positive");
  std::vector<PayoffSegment> segs = segments_;
  for (PayoffSegment& s : segs) {
    if (s.outer == OuterTransform::kIdentity) {
      s.poly = s.poly * alpha + Polynomial::Constant(beta);
    } else {
      if (beta != 0.0) {
        throw Error(ErrorKind::kDomainError, "cannot shift an exponential segment");
      }
      s.poly = s.poly + Polynomial::Constant(std::log(alpha));
    }
  }
  return Create(std::move(segs));
}

std::vector<PayoffSegment> Payoff::SegmentsIn(double a, double b) const {
  std::vector<PayoffSegment> out;
  for (const PayoffSegment& s : segments_) {
    const double lo = std::max(a, s.from), hi = std::min(b, s.to);
    if (hi > lo) {
      PayoffSegment c = s;
      c.from = lo;
      c.to = hi;
      out.push_back(c);
    }
  }
  return out;
}

Payoff AutoTagged(const std::vector<PayoffSegment>& segments) {
  std::vector<PayoffSegment> out;
  for (const PayoffSegment& s : segments) {
    std::vector<double> cuts = CurvatureSignChanges(s);
    cuts.insert(cuts.begin(), s.from);
    cuts.push_back(s.to);
    for (size_t j = 0; j + 1 < cuts.size(); ++j) {
      if (!(cuts[j + 1] > cuts[j])) continue;
      PayoffSegment piece = s;
      piece.from = cuts[j];
      piece.to = cuts[j + 1];
      piece.curvature = ClassifyPiece(s, cuts[j], cuts[j + 1]);
      out.push_back(piece);
    }
  }
  return Payoff::Create(std::move(out));
}

Payoff SplineFromCurvature(const std::vector<double>& knots,
                           const std::vector<double>& second, double f0, double d0) {
  if (knots.size() < 2 || knots.size() != second.size()) {
    throw Error(ErrorKind::kDomainError, "spline needs matching knots and curvatures");
  }
  std::vector<PayoffSegment> segs;
  double value = f0, slope = d0;
  for (size_t k = 0; k + 1 < knots.size(); ++k) {
    const double t = knots[k], h = knots[k + 1] - t;
    const double s0 = second[k], s1 = second[k + 1];
    const Polynomial local({value, slope, 0.5 * s0, (s1 - s0) / (6.0 * h)});
    const Polynomial global = local.ComposeAffine(-t, 1.0);
    auto tag_of = [](double a, double b) {
      if (a == 0.0 && b == 0.0) return Curvature::kAffine;
      if (a >= 0.0 && b >= 0.0) return Curvature::kConvex;
      return Curvature::kConcave;
    };
    if ((s0 > 0.0 && s1 < 0.0) || (s0 < 0.0 && s1 > 0.0)) {
      const double cut = t + h * s0 / (s0 - s1);
      segs.push_back({t, cut, global, tag_of(s0, 0.0)});
      segs.push_back({cut, knots[k + 1], global, tag_of(0.0, s1)});
    } else {
      segs.push_back({t, knots[k + 1], global, tag_of(s0, s1)});
    }
    value = local(h);
    slope = slope + s0 * h + 0.5 * (s1 - s0) * h;
  }
  return Payoff::Create(std::move(segs));
}

Payoff SinFit(double start, double width, int knots) {
  std::vector<double> t;
  for (int k = 0; k <= knots; ++k) t.push_back(static_cast<double>(k) / knots);
  std::vector<double> zeros;
  for (int j = static_cast<int>(std::ceil(start)); j <= std::floor(start + width); ++j) {
    const double m = (j - start) / width;
    if (m > 0.0 && m < 1.0) zeros.push_back(m);
  }
  for (double z : zeros) {
    // Drop uniform knots that would leave a sliver next to an inflection.
    t.erase(std::remove_if(t.begin(), t.end(),
                           [z](double x) { return x > 0.0 && x < 1.0 && std::abs(x - z) < 1e-6; }),
            t.end());
    t.push_back(z);
  }
  std::sort(t.begin(), t.end());
  const double c = kPi * width;
  std::vector<double> s;
  for (double m : t) {
    const bool inflection =
        std::any_of(zeros.begin(), zeros.end(), [m](double z) { return z == m; });
    s.push_back(inflection ? 0.0 : -c * c * std::sin(kPi * (start + width * m)));
  }
  return SplineFromCurvature(t, s, std::sin(kPi * start), c * std::cos(kPi * start));
}

RegularityReport CheckRegular(const Payoff& u) {
  RegularityReport r;
  auto fail = [&r](const std::string& why) {
    r.regular = false;
    r.reason = why;
    return r;
  };
  const auto& segs = u.segments();
  for (size_t k = 1; k < segs.size(); ++k) {
    const double b = segs[k].from;
    const double l = segs[k - 1].Value(b), h = segs[k].Value(b);
    std::ostringstream where;
    where << b;
    if (std::abs(l - h) > 1e-10 * std::max(1.0, std::max(std::abs(l), std::abs(h)))) {
      return fail("discontinuity at " + where.str());
    }
    const double dl = segs[k - 1].Deriv(b), dh = segs[k].Deriv(b);
    if (std::abs(dl - dh) > 1e-10 * std::max(1.0, std::max(std::abs(dl), std::abs(dh)))) {
      return fail("derivative discontinuity at " + where.str());
    }
  }
  for (size_t k = 0; k < segs.size(); ++k) {
    const PayoffSegment& s = segs[k];
    std::ostringstream where;
    where << "[" << s.from << "," << s.to << "]";
    if (s.curvature == Curvature::kUnclassified) {
      return fail("unclassified curvature on " + where.str());
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, scale = 0.0;
    for (int j = 0; j <= 64; ++j) {
      const double m = s.from + (s.to - s.from) * (j + 0.5) / 65.0;
      const double d2 = s.Second(m);
      lo = std::min(lo, d2);
      hi = std::max(hi, d2);
      scale = std::max({scale, std::abs(s.Value(m)), std::abs(s.Deriv(m))});
    }
    const double tol = 1e-9 * (1.0 + scale);
    const double curv_tol = 1e-9 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
    bool ok = true;
    switch (s.curvature) {
      case Curvature::kAffine:
        ok = SegmentIsAffine(s) || (std::abs(lo) <= tol && std::abs(hi) <= tol);
        break;
      case Curvature::kConvex:
        ok = lo >= -curv_tol && hi > curv_tol;
        break;
      case Curvature::kConcave:
        ok = hi <= curv_tol && lo < -curv_tol;
        break;
      case Curvature::kUnclassified:
        ok = false;
        break;
    }
    if (!ok) {
      return fail(std::string("curvature tag ") + CurvatureName(s.curvature) +
                  " inconsistent on " + where.str());
    }
  }
  return r;
}

AffineFunction Tangent(const Payoff& u, double x) {
  const RegularityReport r = CheckRegular(u);
  if (!r.regular) throw Error(ErrorKind::kNotRegular, r.reason);
  const double d = u.Deriv(x);
  return {u.Eval(x) - d * x, d};
}

std::vector<CurvatureRun> CurvatureRuns(const Payoff& u) {
  std::vector<CurvatureRun> runs;
  for (const PayoffSegment& s : u.segments()) {
    const bool convex = s.curvature == Curvature::kConvex;
    const bool affine = s.curvature == Curvature::kAffine;
    if (!runs.empty() && runs.back().convex == convex) {
      runs.back().to = s.to;
      runs.back().affine = runs.back().affine && affine;
    } else {
      runs.push_back({s.from, s.to, convex, affine});
    }
  }
  return runs;
}

namespace {

std::vector<std::pair<double, double>> IntervalsWhere(const Payoff& u, Curvature keep) {
  std::vector<std::pair<double, double>> out;
  bool open = false;
  for (const PayoffSegment& s : u.segments()) {
    const bool in = s.curvature == keep || s.curvature == Curvature::kAffine;
    if (in && open) {
      out.back().second = s.to;
    } else if (in) {
      out.push_back({s.from, s.to});
    }
    open = in;
  }
  return out;
}

}  // namespace

std::vector<std::pair<double, double>> ConvexityIntervals(const Payoff& u) {
  return IntervalsWhere(u, Curvature::kConvex);
}

std::vector<std::pair<double, double>> ConcavityIntervals(const Payoff& u) {
  return IntervalsWhere(u, Curvature::kConcave);
}

bool IsSShaped(const Payoff& u) {
  const RegularityReport r = CheckRegular(u);
  if (!r.regular) throw Error(ErrorKind::kNotRegular, r.reason);
  const std::vector<CurvatureRun> runs = CurvatureRuns(u);
  return runs.size() == 2 && runs[0].convex != runs[1].convex;
}

Concavification ConcaveEnvelope(const Payoff& u, double lo, double hi) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) {
    throw Error(ErrorKind::kDomainError, "envelope window outside [0,1]");
  }
  std::vector<HullPoint> points = {{lo, u.Eval(lo)}, {hi, u.Eval(hi)}};
  for (double b : u.Breakpoints()) {
    if (b > lo && b < hi) points.push_back({b, u.Eval(b)});
  }
  std::vector<HullArc> arcs;
  for (const SubPiece& p : SubPieces(u)) {
    const double a = std::max(p.a, lo), b = std::min(p.b, hi);
    if (!(b > a)) continue;
    const PayoffSegment& s = u.segments()[p.segment];
    if (p.curvature == Curvature::kConcave || p.curvature == Curvature::kAffine) {
      arcs.push_back(ArcOf(s, a, b, p.curvature == Curvature::kAffine));
    } else {
      points.push_back({a, s.Value(a)});
      points.push_back({b, s.Value(b)});
    }
  }
  Concavification c{Hull::Compute(lo, hi, std::move(points), std::move(arcs),
                                  Hull::Side::kUpper),
                    {}};
  c.contact = c.hull.ContactSet();
  return c;
}

double RestrictedEnvelope::operator()(double m) const {
  if (m < lo_ - 1e-13 || m > hi_ + 1e-13) return std::numeric_limits<double>::infinity();
  return hull_(m);
}

RestrictedEnvelope RestrictedConvexEnvelope(const Payoff& u, const PointSet& x) {
  if (x.empty()) throw Error(ErrorKind::kEmptySet, "restricted envelope over an empty set");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::vector<HullPoint> points;
  for (double p : x.points) {
    points.push_back({p, u.Eval(p)});
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  std::vector<HullArc> arcs;
  const std::vector<SubPiece> pieces = SubPieces(u);
  for (const auto& [a, b] : x.intervals) {
    if (b < a) throw Error(ErrorKind::kDomainError, "reversed interval");
    lo = std::min(lo, a);
    hi = std::max(hi, b);
    points.push_back({a, u.Eval(a)});
    points.push_back({b, u.Eval(b)});
    for (double bp : u.Breakpoints()) {
      if (bp > a && bp < b) points.push_back({bp, u.Eval(bp)});
    }
    for (const SubPiece& p : pieces) {
      const double l = std::max(a, p.a), r = std::min(b, p.b);
      if (r <= l) continue;
      const PayoffSegment& s = u.segments()[p.segment];
      if (p.curvature == Curvature::kConvex || p.curvature == Curvature::kAffine) {
        arcs.push_back(ArcOf(s, l, r, p.curvature == Curvature::kAffine));
      } else {
        points.push_back({l, s.Value(l)});
        points.push_back({r, s.Value(r)});
      }
    }
  }
  RestrictedEnvelope env;
  env.lo_ = lo;
  env.hi_ = hi;
  env.hull_ = Hull::Compute(lo, hi, std::move(points), std::move(arcs), Hull::Side::kLower);
  return env;
}

Excess MaxExcessOverLine(const Payoff& u, double a, double b, double intercept,
                         double slope) {
  Excess best{-std::numeric_limits<double>::infinity(), a};
  auto visit = [&](double m, double value) {
    const double e = value - (intercept + slope * m);
    if (e > best.value) best = {e, m};
  };
  visit(a, u.Eval(a));
  visit(b, u.Eval(b));
  for (const PayoffSegment& s : u.segments()) {
    const double lo = std::max(a, s.from), hi = std::min(b, s.to);
    if (hi < lo) continue;
    visit(lo, s.Value(lo));
    visit(hi, s.Value(hi));
    if (hi <= lo) continue;
    if (s.outer == OuterTransform::kIdentity) {
      const Polynomial g = s.poly.Derivative() - Polynomial::Constant(slope);
      for (double r : RealRootsIn(g, lo, hi)) visit(r, s.Value(r));
    } else {
      for (double r : SignChanges([&](double m) { return s.Deriv(m) - slope; }, lo, hi, 64)) {
        visit(r, s.Value(r));
      }
    }
  }
  return best;
}

OlcVerdict IsOrdinallyLessConvex(const Payoff& u, const Payoff& v, const GridSpec& grid) {
  const int n = grid.n();
  const std::vector<double> uu = u.OnGrid(grid), vv = v.OnGrid(grid);
  double su = 1.0, sv = 1.0;
  for (int i = 0; i < n; ++i) {
    su = std::max(su, std::abs(uu[i]));
    sv = std::max(sv, std::abs(vv[i]));
  }
  const double eps_u = 1e-11 * su, eps_v = 1e-11 * sv;
  OlcVerdict verdict;
  verdict.grid_n = n;
  for (int i = 0; i < n; ++i) {
    for (int k = i + 2; k < n; ++k) {
      const double span = k - i;
      bool weak = true;
      for (int j = i + 1; j < k && weak; ++j) {
        const double alpha = (k - j) / span;
        weak = alpha * uu[i] + (1 - alpha) * uu[k] - uu[j] >= -eps_u;
      }
      if (!weak) continue;
      for (int j = i + 1; j < k; ++j) {
        const double alpha = (k - j) / span;
        const double gu = alpha * uu[i] + (1 - alpha) * uu[k] - uu[j];
        const double gv = alpha * vv[i] + (1 - alpha) * vv[k] - vv[j];
        const bool weak_fail = gv < -eps_v;
        const bool strict_fail = gu > eps_u && gv <= 0.0;
        if (weak_fail || strict_fail) {
          ChordWitness w{grid.point(i), grid.point(k), alpha, !weak_fail, i, j, k};
          if (VerifyChordWitness(u, v, grid, w)) {
            verdict.holds = false;
            verdict.witness = w;
            return verdict;
          }
        }
      }
    }
  }
  return verdict;
}

bool VerifyChordWitness(const Payoff& u, const Payoff& v, const GridSpec& grid,
                        const ChordWitness& w) {
  const int n1 = grid.n() - 1;
  if (w.i < 0 || w.k >= grid.n() || !(w.i < w.j && w.j < w.k)) return false;
  auto at = [n1](int i) { return static_cast<long double>(i) / n1; };
  const long double span = w.k - w.i;
  const long double ui = u.EvalExtended(at(w.i)), uk = u.EvalExtended(at(w.k));
  long double su = 1.0L;
  for (int j = w.i; j <= w.k; ++j) su = std::max(su, std::abs(u.EvalExtended(at(j))));
  for (int j = w.i + 1; j < w.k; ++j) {
    const long double alpha = (w.k - j) / span;
    if (alpha * ui + (1 - alpha) * uk - u.EvalExtended(at(j)) < -1e-11L * su) return false;
  }
  const long double alpha = (w.k - w.j) / span;
  const long double gu = alpha * ui + (1 - alpha) * uk - u.EvalExtended(at(w.j));
  const long double vi = v.EvalExtended(at(w.i)), vk = v.EvalExtended(at(w.k));
  const long double vj = v.EvalExtended(at(w.j));
  const long double gv = alpha * vi + (1 - alpha) * vk - vj;
  const long double sv = std::max({1.0L, std::abs(vi), std::abs(vk), std::abs(vj)});
  if (w.strict) return gu > 1e-11L * su && gv <= 1e-13L * sv;
  return gv < -1e-11L * sv;
}

CraterVerdict CheckCrater(const Payoff& u, int density) {
  const RegularityReport r = CheckRegular(u);
  if (!r.regular) throw Error(ErrorKind::kNotRegular, r.reason);
  CraterVerdict verdict;
  const std::vector<CurvatureRun> runs = CurvatureRuns(u);
  for (size_t p = 1; p + 1 < runs.size(); ++p) {
    if (!runs[p].convex || runs[p - 1].convex || runs[p + 1].convex) continue;
    const double xbar = runs[p - 1].from, y = runs[p].from;
    const double z = runs[p].to, wbar = runs[p + 1].to;
    std::vector<double> xs, ws;
    for (int a = 0; a < density; ++a) xs.push_back(xbar + (y - xbar) * a / density);
    for (int b = 1; b <= density; ++b) ws.push_back(z + (wbar - z) * b / density);
    std::vector<double> ux, dx, uw, dw;
    for (double x : xs) {
      ux.push_back(u.Eval(x));
      dx.push_back(u.Deriv(x));
    }
    for (double w : ws) {
      uw.push_back(u.Eval(w));
      dw.push_back(u.Deriv(w));
    }
    for (size_t a = 0; a < xs.size(); ++a) {
      for (size_t b = 0; b < ws.size(); ++b) {
        const double s1 = dx[a], s2 = dw[b];
        CraterWitness w{xs[a], y, z, ws[b], xbar, wbar, 0.0, 0.0, CraterReason::kEqualSlopes};
        if (std::abs(s1 - s2) <= 1e-12 * (1.0 + std::abs(s1) + std::abs(s2))) {
          verdict.holds = false;
          verdict.witness = w;
          return verdict;
        }
        // Tangent crossing in extended precision.
        const long double x = xs[a], wv = ws[b];
        const long double X = ((long double)uw[b] - s2 * wv - ux[a] + s1 * x) /
                              ((long double)s1 - s2);
        const long double Y = ux[a] + s1 * (X - x);
        w.cross_x = static_cast<double>(X);
        w.cross_y = static_cast<double>(Y);
        if (X < y - 1e-12 || X > z + 1e-12) {
          w.reason = CraterReason::kCrossingOutside;
          verdict.holds = false;
          verdict.witness = w;
          return verdict;
        }
        const long double uX = u.EvalExtended(std::clamp<long double>(X, 0.0L, 1.0L));
        if (Y > uX + 1e-10L) {
          w.reason = CraterReason::kCrossingAbove;
          verdict.holds = false;
          verdict.witness = w;
          return verdict;
        }
      }
    }
  }
  return verdict;
}

}  // namespace persuasion
