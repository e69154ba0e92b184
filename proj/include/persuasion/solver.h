#ifndef PERSUASION_SOLVER_H_
#define PERSUASION_SOLVER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/measures.h"
#include "persuasion/payoffs.h"

namespace persuasion {

class DenseSimplex;

// Convex piecewise-linear function given by its values at grid points:
// p(x) = a + beta (1 - x) + sum_j kinks[j] (x_j - x)^+.
struct PriceFunction {
  int n = 0;
  std::vector<double> values;
  double a = 0.0;
  double beta = 0.0;
  std::vector<double> kinks;  // indexed by grid point; zero at the ends
  double objective = 0.0;     // dual objective, equal to the integral against F0

  double Eval(double m) const;
  double Integrate(const Distribution& f) const;
  double MaxSecondDifferenceViolation() const;  // worst negative second difference
};

struct SlacknessReport {
  bool pass = true;
  double affine_residual = 0.0;   // worst |second difference| where C_F < C_F0
  double support_residual = 0.0;  // worst p - u on the optimizer's support
  std::vector<std::string> violations;
};

struct SolveReport {
  int n = 0;
  double value = 0.0;
  std::vector<double> masses;
  Distribution optimizer;
  PriceFunction prices;
  double dual_value = 0.0;
  double gap = 0.0;  // dual - primal
  double multiplier_dual_value = 0.0;
  SlacknessReport slackness;
  std::vector<double> u_grid;
  std::vector<double> c0_grid;
  std::vector<double> cg0_grid;  // empty unless interval mode
  int iterations = 0;
};

// Grid LP over mean-preserving contractions of F0 (optionally bounded below
// by G0), reusable for re-optimization over its optimal face.
class PersuasionLp {
 public:
  PersuasionLp(const std::vector<double>& u, const std::vector<double>& c0,
               const std::vector<double>* cg0, const GridSpec& grid);
  ~PersuasionLp();
  PersuasionLp(const PersuasionLp&) = delete;
  PersuasionLp& operator=(const PersuasionLp&) = delete;

  double Solve();
  std::vector<double> masses() const;
  // Maximizes `secondary` over the optimal face; returns the masses.
  std::vector<double> OptimizeOnFace(const std::vector<double>& secondary);
  double ValueOf(const std::vector<double>& masses) const;
  std::vector<double> Multipliers() const;
  int iterations() const;

 private:
  GridSpec grid_;
  std::vector<double> u_;
  std::unique_ptr<DenseSimplex> lp_;
};

// Payoff values on the grid after checking that every discontinuity of u is
// a grid point.
std::vector<double> PayoffOnGrid(const Payoff& u, const GridSpec& grid);
std::vector<double> IntegratedCdfOnGrid(const Distribution& f, const GridSpec& grid);

SolveReport Solve(const Payoff& u, const Distribution& f0, const GridSpec& grid,
                  const Distribution* g0 = nullptr, bool with_dual = true);

PriceFunction DualPrices(const Payoff& u, const Distribution& f0, const GridSpec& grid);

SlacknessReport CheckSlackness(const SolveReport& report, double tol);

struct CensorshipSolution {
  double a = 0.0;
  double b = 0.0;
  Distribution f;
  bool no_root = false;
  double residual = 0.0;
};
CensorshipSolution UpperCensorshipSolve(const Payoff& v, const Distribution& f0);

struct ArgmaxProbe {
  double value = 0.0;
  int n = 0;
  std::vector<std::vector<double>> masses;
  std::vector<Distribution> members;
  int least = -1;  // index of the least informative canonical member
  int most = -1;   // index of the most informative canonical member
};
ArgmaxProbe ProbeArgmax(const Payoff& u, const Distribution& f0, const GridSpec& grid,
                        const Distribution* g0, int k, uint64_t seed);

// Optimal value of the grid LP with the given integrated-CDF bounds.
double MaxValue(const std::vector<double>& u, const std::vector<double>& c_upper,
                const std::vector<double>* c_lower, const GridSpec& grid);

// C_F at grid points for a grid mass vector.
std::vector<double> GridIntegratedCdf(const std::vector<double>& masses, const GridSpec& grid);

}  // namespace persuasion

#endif  // PERSUASION_SOLVER_H_
