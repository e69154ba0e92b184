#ifndef PERSUASION_PAYOFFS_H_
#define PERSUASION_PAYOFFS_H_

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "persuasion/envelope.h"
#include "persuasion/measures.h"
#include "persuasion/polynomial.h"

namespace persuasion {

enum class Curvature { kAffine, kConvex, kConcave, kUnclassified };
// Segment value is poly(m), or exp(poly(m)) for kExp.
enum class OuterTransform { kIdentity, kExp };

const char* CurvatureName(Curvature c);

struct PayoffSegment {
  double from;
  double to;
  Polynomial poly;
  Curvature curvature = Curvature::kUnclassified;
  OuterTransform outer = OuterTransform::kIdentity;

  double Value(double m) const;
  double Deriv(double m) const;
  double Second(double m) const;
  long double ValueExtended(long double m) const;
};

// Piecewise function on [0, 1]; at a breakpoint the value is the larger
// one-sided limit, so the payoff is upper semi-continuous.
class Payoff {
 public:
  static Payoff Create(std::vector<PayoffSegment> segments);
  static Payoff FromPolynomial(const Polynomial& p, Curvature tag);

  double Eval(double m) const;
  // Right derivative; left derivative at 1.
  double Deriv(double m) const;
  long double EvalExtended(long double m) const;

  const std::vector<PayoffSegment>& segments() const { return segments_; }
  std::vector<double> Breakpoints() const;
  // Interior breakpoints where the one-sided limits differ by more than tol.
  std::vector<double> Discontinuities(double tol = 1e-10) const;
  std::vector<double> OnGrid(const GridSpec& grid) const;
  double Expectation(const Distribution& f) const;

  Payoff Reflected() const;
  // alpha * u + beta with alpha > 0.
  Payoff Scaled(double alpha, double beta) const;
  // Restriction of u to [a, b], re-parametrized on the same coordinate.
  std::vector<PayoffSegment> SegmentsIn(double a, double b) const;

 private:
  int SegmentIndex(double m) const;
  std::vector<PayoffSegment> segments_;
};

// Splits segments where the second derivative changes sign and assigns
// curvature tags from its sign.
Payoff AutoTagged(const std::vector<PayoffSegment>& segments);

// C^2 piecewise cubic whose second derivative is the linear interpolant of
// `second` at `knots`, with value f0 and slope d0 at knots.front() = 0.
Payoff SplineFromCurvature(const std::vector<double>& knots,
                           const std::vector<double>& second, double f0, double d0);

// Cubic fit of m -> sin(pi (start + width m)) through its curvature, with the
// inflection points added to uniformly spaced knots.
Payoff SinFit(double start, double width, int knots = 100);

struct RegularityReport {
  bool regular = true;
  std::string reason;
};
RegularityReport CheckRegular(const Payoff& u);

struct AffineFunction {
  double intercept;
  double slope;
  double operator()(double m) const { return intercept + slope * m; }
};
AffineFunction Tangent(const Payoff& u, double x);

bool IsSShaped(const Payoff& u);

// Maximal intervals on which u is concave (affine or concave tags) or
// strictly convex (convex tags), in order.
struct CurvatureRun {
  double from;
  double to;
  bool convex;  // strictly convex run; otherwise concave (incl. affine)
  bool affine;  // every segment in the run is affine
};
std::vector<CurvatureRun> CurvatureRuns(const Payoff& u);
// Maximal intervals on which u is convex (affine segments included).
std::vector<std::pair<double, double>> ConvexityIntervals(const Payoff& u);
// Maximal intervals on which u is concave (affine segments included).
std::vector<std::pair<double, double>> ConcavityIntervals(const Payoff& u);

struct Concavification {
  Hull hull;
  double operator()(double m) const { return hull(m); }
  std::vector<std::pair<double, double>> contact;
};
// Envelope of u restricted to [lo, hi].
Concavification ConcaveEnvelope(const Payoff& u, double lo = 0.0, double hi = 1.0);

// A subset of [0, 1]: finitely many points and closed intervals.
struct PointSet {
  std::vector<double> points;
  std::vector<std::pair<double, double>> intervals;
  bool empty() const { return points.empty() && intervals.empty(); }
};

// Greatest convex minorant of the function equal to u on X and +inf off X.
class RestrictedEnvelope {
 public:
  double operator()(double m) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const Hull& hull() const { return hull_; }

 private:
  friend RestrictedEnvelope RestrictedConvexEnvelope(const Payoff& u, const PointSet& x);
  double lo_ = 0.0;
  double hi_ = 0.0;
  Hull hull_;
};
RestrictedEnvelope RestrictedConvexEnvelope(const Payoff& u, const PointSet& x);

// Largest value of u(m) - line(m) over [a, b].
struct Excess {
  double value;
  double at;
};
Excess MaxExcessOverLine(const Payoff& u, double a, double b, double intercept,
                         double slope);

struct ChordWitness {
  double x;
  double z;
  double alpha;
  // True when u is strictly below its chord at x_alpha z but v is not;
  // false when v rises above its chord while u stays weakly below.
  bool strict;
  int i, j, k;  // grid indices of x, x_alpha z, z
};

struct OlcVerdict {
  bool holds = true;
  int grid_n = 0;
  std::optional<ChordWitness> witness;
};
OlcVerdict IsOrdinallyLessConvex(const Payoff& u, const Payoff& v, const GridSpec& grid);
// Re-checks a witness in extended precision.
bool VerifyChordWitness(const Payoff& u, const Payoff& v, const GridSpec& grid,
                        const ChordWitness& w);

enum class CraterReason { kEqualSlopes, kCrossingOutside, kCrossingAbove };
const char* CraterReasonName(CraterReason r);

struct CraterWitness {
  double x, y, z, w;
  double pattern_left, pattern_right;  // ends of the two concave runs
  double cross_x, cross_y;
  CraterReason reason;
};

struct CraterVerdict {
  bool holds = true;
  std::optional<CraterWitness> witness;
};
CraterVerdict CheckCrater(const Payoff& u, int density = 400);

}  // namespace persuasion

#endif  // PERSUASION_PAYOFFS_H_
