#ifndef PERSUASION_ENVELOPE_H_
#define PERSUASION_ENVELOPE_H_

#include <functional>
#include <vector>

namespace persuasion {

struct HullPoint {
  double x;
  double y;
};

// A smooth piece of the function whose hull is taken. For an upper hull the
// piece must be concave on [a, b]; for a lower hull, convex.
struct HullArc {
  double a;
  double b;
  std::function<double(double)> f;
  std::function<double(double)> df;
  bool affine = false;
  int tag = -1;
};

struct HullPiece {
  double a;
  double b;
  double ya;
  double yb;
  int arc = -1;  // -1 for a chord, else the arc the hull follows on [a, b]
};

// Upper (concave) or lower (convex) envelope over [lo, hi] of the function
// equal to the arcs on their intervals and to the listed points, computed by
// gift wrapping with tangent search on the arcs.
class Hull {
 public:
  enum class Side { kUpper, kLower };

  static Hull Compute(double lo, double hi, std::vector<HullPoint> points,
                      std::vector<HullArc> arcs, Side side);

  double operator()(double x) const;
  double Slope(double x) const;  // right derivative, left derivative at hi
  const std::vector<HullPiece>& pieces() const { return pieces_; }
  const std::vector<HullArc>& arcs() const { return arcs_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  Side side() const { return side_; }

  // Points and intervals where the hull touches the underlying function:
  // chord endpoints and followed arcs, merged into closed intervals.
  std::vector<std::pair<double, double>> ContactSet() const;

 private:
  int PieceIndex(double x) const;

  double lo_ = 0.0;
  double hi_ = 1.0;
  Side side_ = Side::kUpper;
  std::vector<HullArc> arcs_;
  std::vector<HullPiece> pieces_;
};

// Upper hull vertices of a finite point set, sorted by x. Collinear
// intermediate points are kept when keep_collinear is set.
std::vector<HullPoint> UpperHullOfPoints(std::vector<HullPoint> points,
                                         bool keep_collinear);
std::vector<HullPoint> LowerHullOfPoints(std::vector<HullPoint> points,
                                         bool keep_collinear);

// Piecewise-linear interpolation through sorted vertices; +inf outside.
double InterpolateVertices(const std::vector<HullPoint>& vertices, double x);

}  // namespace persuasion

#endif  // PERSUASION_ENVELOPE_H_
