#include "persuasion/envelope.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "persuasion/error.h"

namespace persuasion {
namespace {

constexpr double kEpsX = 1e-13;
constexpr int kTangentIterations = 64;

struct SlopeHit {
  double slope = -std::numeric_limits<double>::infinity();
  double x = 0.0;
  double y = 0.0;
  bool found = false;
};

// Largest slope from (qx, qy) to a point of a concave arc with abscissa > qx.
SlopeHit MaxSlopeToArc(const HullArc& arc, double qx, double qy) {
  SlopeHit hit;
  const double s = std::max(arc.a, qx);
  const double t = arc.b;
  if (t <= qx + kEpsX) return hit;
  auto consider = [&](double r) {
    if (r <= qx + kEpsX) return;
    const double fr = arc.f(r);
    const double slope = (fr - qy) / (r - qx);
    if (!hit.found || slope > hit.slope) {
      hit = {slope, r, fr, true};
    }
  };
  if (arc.affine) {
    consider(s);
    consider(t);
    return hit;
  }
  // g is non-increasing on a concave arc and has the sign of the slope's
  // derivative.
  auto g = [&](double r) { return arc.df(r) * (r - qx) - (arc.f(r) - qy); };
  if (s > qx + kEpsX && g(s) <= 0.0) {
    consider(s);
  } else if (g(t) >= 0.0) {
    consider(t);
  } else {
    double lo = s, hi = t;
    for (int it = 0; it < kTangentIterations; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    consider(std::max(hi, qx + 2 * kEpsX));
  }
  return hit;
}

class UpperWrapper {
 public:
  UpperWrapper(double lo, double hi, std::vector<HullPoint> points,
               const std::vector<HullArc>& arcs)
      : lo_(lo), hi_(hi), points_(std::move(points)), arcs_(arcs) {
    std::sort(points_.begin(), points_.end(),
              [](const HullPoint& p, const HullPoint& q) { return p.x < q.x; });
    double scale = 1.0;
    for (const HullPoint& p : points_) scale = std::max(scale, std::abs(p.y));
    for (const HullArc& a : arcs_) {
      scale = std::max({scale, std::abs(a.f(a.a)), std::abs(a.f(a.b))});
    }
    tol_y_ = 1e-12 * scale;
  }

  std::vector<HullPiece> Run() {
    std::vector<HullPiece> pieces;
    double cx = lo_;
    double cy = ValueAt(lo_);
    int departed = -1;
    int guard = 0;
    const int max_steps = 8 * static_cast<int>(points_.size() + arcs_.size()) + 64;
    while (cx < hi_ - kEpsX) {
      if (++guard > max_steps) {
        throw Error(ErrorKind::kNumericFailure, "hull sweep did not terminate");
      }
      const int own = OwnArc(cx, cy, departed);
      SlopeHit best = BestCandidate(cx, cy, own, departed);
      double follow_slope = -std::numeric_limits<double>::infinity();
      if (own >= 0) follow_slope = arcs_[own].df(cx);
      const double top = std::max(best.slope, follow_slope);
      const double tol_s = 1e-10 * (1.0 + std::abs(top));
      if (own >= 0 && follow_slope >= top - tol_s) {
        const HullArc& arc = arcs_[own];
        const double end = std::min(arc.b, hi_);
        double q = end;
        if (!arc.affine && !Supports(own, end)) {
          double a = cx, b = end;
          for (int it = 0; it < kTangentIterations; ++it) {
            const double mid = 0.5 * (a + b);
            if (Supports(own, mid)) {
              a = mid;
            } else {
              b = mid;
            }
          }
          q = a;
        }
        if (q <= cx + kEpsX && !best.found) q = end;
        if (q > cx + kEpsX) {
          pieces.push_back({cx, q, cy, arc.f(q), own});
          cx = q;
          cy = arc.f(q);
        }
        departed = own;
        continue;
      }
      if (!best.found) {
        throw Error(ErrorKind::kNumericFailure, "hull sweep found no candidate");
      }
      const SlopeHit next = NearestWithin(cx, cy, own, departed, best.slope - tol_s);
      pieces.push_back({cx, next.x, cy, next.y, -1});
      cx = next.x;
      cy = next.y;
      departed = -1;
    }
    if (!pieces.empty()) pieces.back().b = hi_;
    return pieces;
  }

 private:
  double ValueAt(double x) const {
    double v = -std::numeric_limits<double>::infinity();
    for (const HullPoint& p : points_) {
      if (std::abs(p.x - x) <= kEpsX) v = std::max(v, p.y);
    }
    for (const HullArc& a : arcs_) {
      if (a.a <= x + kEpsX && a.b >= x - kEpsX) v = std::max(v, a.f(x));
    }
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kEmptySet, "hull input undefined at interval end");
    }
    return v;
  }

  int OwnArc(double cx, double cy, int departed) const {
    int own = -1;
    for (int k = 0; k < static_cast<int>(arcs_.size()); ++k) {
      if (k == departed) continue;
      const HullArc& a = arcs_[k];
      if (a.a <= cx + kEpsX && a.b > cx + kEpsX && a.f(cx) >= cy - tol_y_) {
        if (own < 0 || arcs_[k].df(cx) > arcs_[own].df(cx)) own = k;
      }
    }
    return own;
  }

  SlopeHit BestCandidate(double cx, double cy, int exclude, int exclude2) const {
    SlopeHit best;
    for (const HullPoint& p : points_) {
      if (p.x <= cx + kEpsX) continue;
      const double s = (p.y - cy) / (p.x - cx);
      if (!best.found || s > best.slope) best = {s, p.x, p.y, true};
    }
    for (int k = 0; k < static_cast<int>(arcs_.size()); ++k) {
      if (k == exclude || k == exclude2) continue;
      const SlopeHit h = MaxSlopeToArc(arcs_[k], cx, cy);
      if (h.found && (!best.found || h.slope > best.slope)) best = h;
    }
    return best;
  }

  SlopeHit NearestWithin(double cx, double cy, int exclude, int exclude2,
                         double threshold) const {
    SlopeHit pick;
    auto offer = [&](const SlopeHit& h) {
      if (!h.found || h.slope < threshold) return;
      if (!pick.found || h.x < pick.x - kEpsX ||
          (std::abs(h.x - pick.x) <= kEpsX && h.y > pick.y)) {
        pick = h;
      }
    };
    for (const HullPoint& p : points_) {
      if (p.x <= cx + kEpsX) continue;
      offer({(p.y - cy) / (p.x - cx), p.x, p.y, true});
    }
    for (int k = 0; k < static_cast<int>(arcs_.size()); ++k) {
      if (k == exclude || k == exclude2) continue;
      offer(MaxSlopeToArc(arcs_[k], cx, cy));
    }
    if (pick.found) {
      // Use the function's upper value at the chosen abscissa.
      pick.y = std::max(pick.y, ValueAt(pick.x));
    }
    return pick;
  }

  // True when the tangent of arc `own` at q dominates everything to its right.
  bool Supports(int own, double q) const {
    const HullArc& arc = arcs_[own];
    const double fq = arc.f(q);
    const double dq = arc.df(q);
    const double tol_s = 1e-10 * (1.0 + std::abs(dq));
    for (const HullPoint& p : points_) {
      if (p.x < q - kEpsX) continue;
      if (p.x <= q + kEpsX) {
        if (p.y > fq + tol_y_) return false;
        continue;
      }
      if ((p.y - fq) / (p.x - q) > dq + tol_s) return false;
    }
    for (int k = 0; k < static_cast<int>(arcs_.size()); ++k) {
      if (k == own) continue;
      const HullArc& other = arcs_[k];
      // Another piece defined at q itself (a jump in the function).
      if (other.a <= q + kEpsX && other.b >= q - kEpsX && other.f(q) > fq + tol_y_) {
        return false;
      }
      const SlopeHit h = MaxSlopeToArc(other, q, fq);
      if (h.found && h.slope > dq + tol_s) return false;
    }
    return true;
  }

  double lo_, hi_;
  std::vector<HullPoint> points_;
  const std::vector<HullArc>& arcs_;
  double tol_y_ = 1e-12;
};

HullArc Negated(const HullArc& arc) {
  HullArc n = arc;
  auto f = arc.f;
  auto df = arc.df;
  n.f = [f](double x) { return -f(x); };
  n.df = [df](double x) { return -df(x); };
  return n;
}

}  // namespace

Hull Hull::Compute(double lo, double hi, std::vector<HullPoint> points,
                   std::vector<HullArc> arcs, Side side) {
  if (!(hi >= lo)) throw Error(ErrorKind::kEmptySet, "empty hull domain");
  Hull hull;
  hull.lo_ = lo;
  hull.hi_ = hi;
  hull.side_ = side;
  std::vector<HullPoint> pts;
  for (const HullPoint& p : points) {
    if (p.x >= lo - kEpsX && p.x <= hi + kEpsX) {
      pts.push_back({std::clamp(p.x, lo, hi), side == Side::kUpper ? p.y : -p.y});
    }
  }
  std::vector<HullArc> kept;
  for (HullArc& a : arcs) {
    a.a = std::max(a.a, lo);
    a.b = std::min(a.b, hi);
    if (a.b > a.a) kept.push_back(std::move(a));
  }
  std::sort(kept.begin(), kept.end(),
            [](const HullArc& p, const HullArc& q) { return p.a < q.a; });
  hull.arcs_ = kept;
  std::vector<HullArc> work;
  work.reserve(kept.size());
  for (const HullArc& a : kept) {
    work.push_back(side == Side::kUpper ? a : Negated(a));
  }
  if (hi - lo <= kEpsX) {
    double v = -std::numeric_limits<double>::infinity();
    for (const HullPoint& p : pts) v = std::max(v, p.y);
    for (const HullArc& a : work) v = std::max(v, a.f(lo));
    if (!std::isfinite(v)) throw Error(ErrorKind::kEmptySet, "empty hull input");
    const double y = side == Side::kUpper ? v : -v;
    hull.pieces_.push_back({lo, hi, y, y, -1});
    return hull;
  }
  UpperWrapper wrapper(lo, hi, std::move(pts), work);
  hull.pieces_ = wrapper.Run();
  if (side == Side::kLower) {
    for (HullPiece& p : hull.pieces_) {
      p.ya = -p.ya;
      p.yb = -p.yb;
    }
  }
  return hull;
}

int Hull::PieceIndex(double x) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const HullPiece& p) { return v < p.a; });
  int k = static_cast<int>(it - pieces_.begin()) - 1;
  return std::clamp(k, 0, static_cast<int>(pieces_.size()) - 1);
}

double Hull::operator()(double x) const {
  if (x < lo_ - kEpsX || x > hi_ + kEpsX) {
    return side_ == Side::kLower ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity();
  }
  const HullPiece& p = pieces_[PieceIndex(x)];
  if (p.arc >= 0) return arcs_[p.arc].f(std::clamp(x, p.a, p.b));
  if (p.b - p.a <= 0.0) return p.ya;
  const double t = (x - p.a) / (p.b - p.a);
  return p.ya + t * (p.yb - p.ya);
}

double Hull::Slope(double x) const {
  int k = PieceIndex(x);
  if (x >= hi_ - kEpsX) k = static_cast<int>(pieces_.size()) - 1;
  const HullPiece& p = pieces_[k];
  if (p.arc >= 0) return arcs_[p.arc].df(std::clamp(x, p.a, p.b));
  if (p.b - p.a <= 0.0) return 0.0;
  return (p.yb - p.ya) / (p.b - p.a);
}

std::vector<std::pair<double, double>> Hull::ContactSet() const {
  std::vector<std::pair<double, double>> raw;
  for (const HullPiece& p : pieces_) {
    if (p.arc >= 0) {
      raw.push_back({p.a, p.b});
    } else {
      raw.push_back({p.a, p.a});
      raw.push_back({p.b, p.b});
    }
  }
  std::sort(raw.begin(), raw.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& r : raw) {
    if (!merged.empty() && r.first <= merged.back().second + 1e-12) {
      merged.back().second = std::max(merged.back().second, r.second);
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

namespace {

double Cross(const HullPoint& o, const HullPoint& a, const HullPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

std::vector<HullPoint> UpperHullOfPoints(std::vector<HullPoint> points,
                                         bool keep_collinear) {
  std::sort(points.begin(), points.end(), [](const HullPoint& p, const HullPoint& q) {
    return p.x < q.x || (p.x == q.x && p.y > q.y);
  });
  std::vector<HullPoint> dedup;
  for (const HullPoint& p : points) {
    if (dedup.empty() || p.x > dedup.back().x) dedup.push_back(p);
  }
  std::vector<HullPoint> hull;
  for (const HullPoint& p : dedup) {
    while (hull.size() >= 2) {
      const double c = Cross(hull[hull.size() - 2], hull.back(), p);
      const double scale = 1e-13 * (1.0 + std::abs(p.y) + std::abs(hull.back().y));
      if (c > scale || (!keep_collinear && c >= -scale)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  return hull;
}

std::vector<HullPoint> LowerHullOfPoints(std::vector<HullPoint> points,
                                         bool keep_collinear) {
  for (HullPoint& p : points) p.y = -p.y;
  std::vector<HullPoint> h = UpperHullOfPoints(std::move(points), keep_collinear);
  for (HullPoint& p : h) p.y = -p.y;
  return h;
}

double InterpolateVertices(const std::vector<HullPoint>& v, double x) {
  if (v.empty() || x < v.front().x - kEpsX || x > v.back().x + kEpsX) {
    return std::numeric_limits<double>::infinity();
  }
  if (v.size() == 1) return v.front().y;
  auto it = std::upper_bound(v.begin(), v.end(), x,
                             [](double t, const HullPoint& p) { return t < p.x; });
  size_t k = static_cast<size_t>(it - v.begin());
  k = std::clamp<size_t>(k, 1, v.size() - 1);
  const HullPoint& a = v[k - 1];
  const HullPoint& b = v[k];
  const double t = (x - a.x) / (b.x - a.x);
  return a.y + t * (b.y - a.y);
}

}  // namespace persuasion
