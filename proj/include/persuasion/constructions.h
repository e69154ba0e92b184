#ifndef PERSUASION_CONSTRUCTIONS_H_
#define PERSUASION_CONSTRUCTIONS_H_

#include <string>
#include <vector>

#include "persuasion/measures.h"
#include "persuasion/payoffs.h"
#include "persuasion/solver.h"

namespace persuasion {

// Two-point prior on the ends of a failing chord under which the u-argmax is
// strictly higher than the v-argmax.
enum class ChordCase {
  kVAtChord,   // v weakly below the chord on the grid: weight alpha at x
  kVAboveChord,  // prior mean at a kink of the grid concave envelope of v
};
const char* ChordCaseName(ChordCase c);

struct ChordCounterexample {
  ChordCase kase = ChordCase::kVAtChord;
  ChordWitness witness{};
  Distribution prior;
  double weight = 0.0;  // mass at witness.x
  double mean = 0.0;
  int mean_index = -1;
  // Record: the prior attains the u value over the chord, the degenerate
  // distribution attains the best v value over the chord.
  double u_prior_value = 0.0;
  double u_mean_value = 0.0;
  double v_prior_value = 0.0;
  double v_mean_value = 0.0;
  double v_best_value = 0.0;  // grid concave envelope of v at the mean
  double u_chord_slack = 0.0;  // min over grid points of chord - u (>= -tol)
};

ChordCounterexample BuildChordCounterexample(const Payoff& u, const Payoff& v,
                                             const ChordWitness& witness,
                                             const GridSpec& grid);

enum class CraterCase {
  kTwoTangents,       // neither concave piece of the pattern is affine
  kTangentAndAffine,  // one concave piece is affine
};
const char* CraterCaseName(CraterCase c);

// Grid points x_left < x < X < w < w_right (all on the construction grid) and
// the piecewise-affine support function p, equal to `left` on [x_left, X] and
// to `right` on [X, w_right].
struct CraterCounterexample {
  CraterCase kase = CraterCase::kTwoTangents;
  bool reflected = false;
  int grid_n = 0;
  Payoff u;
  double x_left = 0.0, x = 0.0, X = 0.0, w = 0.0, w_right = 0.0;
  double y = 0.0, z = 0.0;  // ends of the convex piece
  AffineFunction left{0.0, 0.0};
  AffineFunction right{0.0, 0.0};
  double Y = 0.0;
  // Largest u - p over [x_left, w_right]; p >= u holds exactly at grid points
  // and the tangent slopes are snapped so that X is a grid point.
  double p_shortfall = 0.0;
  Distribution f0;
  Payoff v;
  double kappa = 0.0;
  Distribution f;  // v-optimal given f0
  double cutoff = 0.0;
  double pool = 0.0;  // pooling atom of f
  double c_f0_at_X = 0.0;
  double c_f_at_X = 0.0;

  double P(double m) const { return m <= X ? left(m) : right(m); }
};

// Builds the counterexample for a regular u failing the crater property.
// Throws NotAViolation when the property holds, ConstructionFailure naming
// the failed stage otherwise.
CraterCounterexample BuildCraterCounterexample(const Payoff& u,
                                               const GridSpec& grid = GridSpec(401));

// Atomless prior on [x_left, w_right] with mean X and conditional means x
// below X and w above it: two uniform pieces on each side.
Distribution SplitPrior(double x_left, double x, double X, double w, double w_right);

// Every u-optimizer on the grid keeps C_F(X) = C_F0(X): the extremes of C_F(X)
// over the optimal face, against the drop of the stored v-optimizer.
struct NecessityCheck {
  bool pass = false;
  double value = 0.0;
  double target = 0.0;  // C_F0(X)
  double min_cf = 0.0;
  double max_cf = 0.0;
  double gap = 0.0;     // max distance of the extremes from the target
  double v_drop = 0.0;  // C_F0(X) - C_F(X) for the v-optimizer
};
NecessityCheck VerifyNecessity(const CraterCounterexample& cx, const GridSpec& grid,
                               double tol = 1e-6);

// Representatives of the u-argmax for a binary prior with mean mu, in the
// coordinates of the prior's support [lo, hi].
struct BinarySolution {
  double mu = 0.0;
  double lo = 0.0, hi = 1.0;
  double x = 0.0, y = 0.0, z = 0.0, w = 0.0;
  PointSet contact;
  Distribution g;  // least informative: support {y, z}
  Distribution h;  // most informative: support {x, w}
  double value = 0.0;
};
BinarySolution BinarySolve(const Payoff& u, double mu);
BinarySolution BinarySolve(const Payoff& u, const Distribution& prior);

struct BinaryComparison {
  bool pass = true;
  std::vector<std::string> failures;
  BinarySolution u;
  BinarySolution v;
};
BinaryComparison CompareBinarySolutions(const Payoff& u, const Payoff& v, double mu,
                                        double tol = 1e-8);

}  // namespace persuasion

#endif  // PERSUASION_CONSTRUCTIONS_H_
