#ifndef PERSUASION_ORDERS_H_
#define PERSUASION_ORDERS_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "persuasion/measures.h"
#include "persuasion/payoffs.h"
#include "persuasion/solver.h"

namespace persuasion {

// Maximal closed intervals [x, z] with C_F < C_H inside and C_F = C_H at
// both ends.
struct IntervalFamily {
  std::vector<std::pair<double, double>> intervals;
};
IntervalFamily IntervalFamilyOf(const Distribution& f, const Distribution& h,
                                double tol = 1e-10);

enum class DominanceMode {
  kContinuum,  // majorization checked on all of each interval
  kGrid,       // H on the grid; majorization checked at grid points
};

struct DominanceVerdict {
  bool holds = true;
  std::pair<double, double> interval{0.0, 0.0};
  double at = 0.0;
  double shortfall = 0.0;  // u - envelope at `at`
};
// Criterion (b): the convex envelope of u over supp(H) within each interval
// of the family majorizes u on that interval.
DominanceVerdict IntervalDominanceCheck(const Payoff& u, const Distribution& f,
                                        const Distribution& h,
                                        DominanceMode mode = DominanceMode::kContinuum,
                                        const GridSpec* grid = nullptr, double tol = 1e-8);

struct WsoFailure {
  std::string side;  // "u" or "v": the probe holding the member
  int member = 0;
  double best = 0.0;    // best value reachable over the relevant interval
  double target = 0.0;  // optimal value of the other payoff
};

struct WsoVerdict {
  bool lower = false;
  bool strictly_lower = false;
  bool higher = false;
  bool strictly_higher = false;
  // Universal quantifiers range over the probe samples only.
  bool sampled = true;
  std::vector<WsoFailure> lower_failures;
  std::vector<WsoFailure> higher_failures;
  double u_value = 0.0;
  double v_value = 0.0;
  int u_members = 0;
  int v_members = 0;
};
// Compares the u-argmax (probe pu) with the v-argmax (probe pv) in the weak
// set order. Feasible sets are [G0, F0], with G0 = delta_mean when absent.
WsoVerdict WsoCompare(const Payoff& u, const ArgmaxProbe& pu, const Payoff& v,
                      const ArgmaxProbe& pv, const Distribution& f0, const GridSpec& grid,
                      const Distribution* g0 = nullptr, double tol = 1e-8);

// Pools G on each maximal concavity interval of u at its conditional mean.
Distribution PoolConcave(const Distribution& g, const Payoff& u);

// Distribution whose integrated CDF is the convex envelope of C_F0 on the
// convexity intervals of v and C_H elsewhere.
Distribution SpreadConvex(const Distribution& h, const Payoff& v, const Distribution& f0);

}  // namespace persuasion

#endif  // PERSUASION_ORDERS_H_
