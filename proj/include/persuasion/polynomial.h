#ifndef PERSUASION_POLYNOMIAL_H_
#define PERSUASION_POLYNOMIAL_H_

#include <functional>
#include <vector>

namespace persuasion {

// Dense polynomial in one variable, coefficients in increasing degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial Constant(double c) { return Polynomial({c}); }
  static Polynomial Linear(double c0, double c1) { return Polynomial({c0, c1}); }

  double operator()(double x) const;
  long double EvalExtended(long double x) const;

  Polynomial Derivative() const;
  // Returns q with q(x) = p(a + b x).
  Polynomial ComposeAffine(double a, double b) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double s) const;

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  bool IsZero(double tol = 0.0) const;

 private:
  std::vector<double> coeffs_{0.0};
};

// Real roots of p in [a, b], sorted, via recursive isolation on the
// derivative's roots and bisection.
std::vector<double> RealRootsIn(const Polynomial& p, double a, double b);

// Points in (a, b) where f changes sign, located by sampling `samples`
// subintervals and bisecting to machine precision.
std::vector<double> SignChanges(const std::function<double(double)>& f,
                                double a, double b, int samples);

// Bisection for a root of f on [a, b] given f(a), f(b) of opposite sign or
// zero. Returns the point where the sign flips.
double Bisect(const std::function<double(double)>& f, double a, double b,
              int iterations = 200);

}  // namespace persuasion

#endif  // PERSUASION_POLYNOMIAL_H_
