#ifndef PERSUASION_MEASURES_H_
#define PERSUASION_MEASURES_H_

#include <span>
#include <vector>

namespace persuasion {

struct Atom {
  double x;
  double w;
};

struct UniformPiece {
  double from;
  double to;
  double w;
};

// Evenly spaced points x_i = i / (n - 1), i = 0..n-1.
class GridSpec {
 public:
  explicit GridSpec(int n);

  int n() const { return n_; }
  double point(int i) const { return static_cast<double>(i) / (n_ - 1); }
  double step() const { return 1.0 / (n_ - 1); }
  std::vector<double> points() const;
  // Index of the grid point equal to x within tol, or -1.
  int IndexOf(double x, double tol = 1e-12) const;
  // Largest index i with point(i) <= x (clamped to [0, n - 2]).
  int CellOf(double x) const;

 private:
  int n_;
};

// Finite mixture of atoms and uniform segments on [0, 1] with total mass 1.
class Distribution {
 public:
  // Validates and normalizes: sorts and merges atoms, drops zero masses,
  // rescales total mass to 1 if it is within 1e-9 of 1.
  static Distribution Create(std::vector<Atom> atoms,
                             std::vector<UniformPiece> uniforms = {});
  static Distribution PointMass(double x);
  static Distribution Uniform(double a, double b);
  static Distribution TwoPoint(double x, double wx, double z);
  // Atoms on grid points; masses below drop_tol are discarded and the rest
  // renormalized.
  static Distribution FromGrid(const GridSpec& grid, std::span<const double> masses,
                               double drop_tol = 1e-15);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<UniformPiece>& uniforms() const { return uniforms_; }

  double Mean() const;
  double TotalMass() const;
  // Mass and first moment of the closed interval [a, b].
  double MassIn(double a, double b) const;
  double MomentIn(double a, double b) const;
  // Mass of the half-open interval [a, b).
  double MassInHalfOpen(double a, double b) const;
  // CDF F(x) = mass of [0, x].
  double Cdf(double x) const;
  double SupportMin() const;
  double SupportMax() const;
  bool IsAtomless() const { return atoms_.empty(); }
  bool IsOnGrid(const GridSpec& grid) const;
  // Masses at grid points; requires IsOnGrid.
  std::vector<double> GridMasses(const GridSpec& grid) const;
  // Image under m -> 1 - m.
  Distribution Reflected() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<UniformPiece> uniforms_;
};

// C_F(x) = integral of F over [0, x], stored exactly as a piecewise quadratic:
// on piece k, C(x) = c0 + c1 (x - left) + c2 (x - left)^2.
class IntegratedCdf {
 public:
  struct Piece {
    double left;
    double right;
    double c0;
    double c1;
    double c2;
    double Eval(double x) const {
      const double t = x - left;
      return c0 + t * (c1 + t * c2);
    }
    double Slope(double x) const { return c1 + 2.0 * c2 * (x - left); }
  };

  IntegratedCdf() = default;
  explicit IntegratedCdf(std::vector<Piece> pieces);

  double operator()(double x) const;
  double RightSlope(double x) const;
  double LeftSlope(double x) const;
  const std::vector<Piece>& pieces() const { return pieces_; }
  std::vector<double> Knots() const;
  // Pieces restricted to [a, b], re-expanded at their new left ends.
  std::vector<Piece> PiecesIn(double a, double b) const;
  // Recovers the distribution from the right derivative of C.
  Distribution ToDistribution() const;

 private:
  int PieceIndex(double x) const;
  std::vector<Piece> pieces_;
};

IntegratedCdf IntegrateCdf(const Distribution& f);

// Piecewise-quadratic difference a - b re-expanded over the merged knots.
std::vector<IntegratedCdf::Piece> Difference(const IntegratedCdf& a,
                                             const IntegratedCdf& b);

struct OrderCheck {
  bool holds = true;
  double witness = 0.0;    // point where the comparison fails
  double violation = 0.0;  // size of the failure there
};

// F is a mean-preserving contraction of G: C_F <= C_G on [0, 1], equal at 1.
OrderCheck LessInformative(const Distribution& f, const Distribution& g,
                           double tol = 1e-9);
OrderCheck LessInformative(const IntegratedCdf& cf, const IntegratedCdf& cg,
                           double tol = 1e-9);

Distribution Join(const Distribution& f, const Distribution& g, double tol = 1e-9);
Distribution Meet(const Distribution& f, const Distribution& g, double tol = 1e-9);

// Pointwise max and the convex envelope of the pointwise min.
IntegratedCdf PointwiseMax(const IntegratedCdf& a, const IntegratedCdf& b);
IntegratedCdf ConvexEnvelopeOfMin(const IntegratedCdf& a, const IntegratedCdf& b);
// Convex envelope over [0, 1] of the function whose graph is the union of
// the given convex pieces.
IntegratedCdf ConvexEnvelopeOfPieces(const std::vector<IntegratedCdf::Piece>& pieces);

double ConditionalMean(const Distribution& f, double a, double b);

// F0 below a, with the mass of [a, 1] pooled at its conditional mean.
Distribution UpperCensorship(const Distribution& f0, double a);

// Atomic projection onto the grid; each atom and each per-cell slice of a
// uniform is split between the two enclosing grid points preserving its mean.
Distribution Discretize(const Distribution& f, const GridSpec& grid);
std::vector<double> DiscretizeMasses(const Distribution& f, const GridSpec& grid);

// Sup-norm distance between two integrated CDFs (exact on pieces).
double SupDistance(const IntegratedCdf& a, const IntegratedCdf& b);

}  // namespace persuasion

#endif  // PERSUASION_MEASURES_H_
