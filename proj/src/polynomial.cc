#include "persuasion/polynomial.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "persuasion/error.h"

namespace persuasion {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMeanMismatch: return "MeanMismatch";
    case ErrorKind::kNullEvent: return "NullEvent";
    case ErrorKind::kDomainError: return "DomainError";
    case ErrorKind::kNotRegular: return "NotRegular";
    case ErrorKind::kEmptySet: return "EmptySet";
    case ErrorKind::kNotComparable: return "NotComparable";
    case ErrorKind::kInfeasible: return "Infeasible";
    case ErrorKind::kNumericFailure: return "NumericFailure";
    case ErrorKind::kInvalidWitness: return "InvalidWitness";
    case ErrorKind::kNotAViolation: return "NotAViolation";
    case ErrorKind::kConstructionFailure: return "ConstructionFailure";
    case ErrorKind::kPreconditionFailed: return "PreconditionFailed";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const {
  double r = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + *it;
  return r;
}

long double Polynomial::EvalExtended(long double x) const {
  long double r = 0.0L;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    r = r * x + static_cast<long double>(*it);
  }
  return r;
}

Polynomial Polynomial::Derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<double> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * k;
  return Polynomial(std::move(d));
}

Polynomial Polynomial::ComposeAffine(double a, double b) const {
  Polynomial result;
  Polynomial power = Constant(1.0);
  const Polynomial inner = Linear(a, b);
  for (double c : coeffs_) {
    result = result + power * c;
    power = power * inner;
  }
  return result;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  std::vector<double> c(std::max(coeffs_.size(), other.coeffs_.size()), 0.0);
  for (size_t k = 0; k < coeffs_.size(); ++k) c[k] += coeffs_[k];
  for (size_t k = 0; k < other.coeffs_.size(); ++k) c[k] += other.coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  return *this + other * -1.0;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  std::vector<double> c(coeffs_.size() + other.coeffs_.size() - 1, 0.0);
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    for (size_t j = 0; j < other.coeffs_.size(); ++j) {
      c[i + j] += coeffs_[i] * other.coeffs_[j];
    }
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> c = coeffs_;
  for (double& x : c) x *= s;
  return Polynomial(std::move(c));
}

bool Polynomial::IsZero(double tol) const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [tol](double c) { return std::abs(c) <= tol; });
}

double Bisect(const std::function<double(double)>& f, double a, double b,
              int iterations) {
  double fa = f(a);
  if (fa == 0.0) return a;
  for (int it = 0; it < iterations && b - a > 0.0; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> RealRootsIn(const Polynomial& p, double a, double b) {
  std::vector<double> roots;
  if (p.degree() <= 0 || a > b) return roots;
  if (p.degree() == 1) {
    const double r = -p.coeffs()[0] / p.coeffs()[1];
    if (r >= a && r <= b) roots.push_back(r);
    return roots;
  }
  double scale = 0.0;
  for (double c : p.coeffs()) scale = std::max(scale, std::abs(c));
  const double eps = 1e-13 * scale;
  std::vector<double> pts = RealRootsIn(p.Derivative(), a, b);
  pts.insert(pts.begin(), a);
  pts.push_back(b);
  auto f = [&p](double x) { return p(x); };
  for (size_t k = 0; k < pts.size(); ++k) {
    if (std::abs(p(pts[k])) <= eps) roots.push_back(pts[k]);
    if (k + 1 < pts.size()) {
      const double fl = p(pts[k]), fr = p(pts[k + 1]);
      if (std::abs(fl) > eps && std::abs(fr) > eps && (fl > 0) != (fr > 0)) {
        roots.push_back(Bisect(f, pts[k], pts[k + 1]));
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) { return std::abs(x - y) < 1e-12; }),
              roots.end());
  return roots;
}

std::vector<double> SignChanges(const std::function<double(double)>& f,
                                double a, double b, int samples) {
  std::vector<double> out;
  if (!(b > a)) return out;
  double xl = a, fl = f(a);
  for (int k = 1; k <= samples; ++k) {
    const double xr = (k == samples) ? b : a + (b - a) * k / samples;
    const double fr = f(xr);
    if (fl != 0.0 && fr != 0.0 && (fl > 0) != (fr > 0)) {
      out.push_back(Bisect(f, xl, xr));
    }
    if (fr != 0.0) {
      xl = xr;
      fl = fr;
    }
  }
  return out;
}

}  // namespace persuasion
