#ifndef PERSUASION_HARNESS_H_
#define PERSUASION_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/measures.h"
#include "persuasion/payoffs.h"

namespace persuasion {

enum class ExperimentKind {
  kThm1Suff,
  kThm1Nec,
  kThm1StarInterval,
  kThm2Suff,
  kThm2Nec,
  kProp1,
  kLemma4,
  kDuality,
  kBinary,
  kCensorship,
  kLattice,
};
const char* ExperimentKindName(ExperimentKind k);
std::optional<ExperimentKind> ParseExperimentKind(const std::string& name);
std::vector<ExperimentKind> AllExperimentKinds();

enum class PayoffFamily {
  kSShape,           // c0 + c1 m + k (m - t)^3
  kSpline,           // random curvature spline
  kConvex,
  kConcave,
  kCraterCompliant,  // concave-convex-concave spline satisfying the crater property
  kCraterViolating,  // concave-convex-concave spline failing it
  kPiecewiseLinear,  // continuous, kinks at multiples of 1/20
  kStep,             // affine pieces with jumps at multiples of 1/20
};
const char* PayoffFamilyName(PayoffFamily f);

enum class PriorFamily {
  kAtomless,  // contiguous uniform pieces
  kAtoms,
  kMixed,
  kTwoPoint,  // two grid points
};
const char* PriorFamilyName(PriorFamily f);

// Partner v with u ordinally less convex than v.
enum class PartnerRoute {
  kExp,        // exp(u)
  kCubic,      // phi(u), phi(t) = (t - lo) + (t - lo)^3 with lo below min u
  kAddConvex,  // u + c (m - a)^2
};
const char* PartnerRouteName(PartnerRoute r);

struct InstanceSpec {
  uint64_t seed = 1;
  ExperimentKind kind = ExperimentKind::kDuality;
  PayoffFamily payoff = PayoffFamily::kSpline;
  int segments = 5;
  int degree = 3;
  double curvature_scale = 8.0;
  int sign = 1;  // S-shape: +1 concave then convex, -1 convex then concave
  PriorFamily prior = PriorFamily::kAtomless;
  int prior_pieces = 3;
  PartnerRoute partner = PartnerRoute::kExp;
  int grid_n = 201;
};

int DefaultGrid(ExperimentKind kind);
// Families and parameters drawn from the seed as the experiment kind needs.
InstanceSpec MakeInstance(ExperimentKind kind, uint64_t seed, int grid_n = 0);

Payoff GenPayoff(const InstanceSpec& spec);
Distribution GenPrior(const InstanceSpec& spec);
Payoff GenPartner(const Payoff& u, PartnerRoute route, uint64_t seed);

struct Certificate {
  bool feasible = false;
  bool certified = false;
  double upper = 0.0;  // integral of the lifted grid prices against F0
  double lower = 0.0;  // continuum value of the candidate
  double lift = 0.0;   // largest excess of u over the grid prices
  double gap = 0.0;    // upper - lower
};
Certificate CertifyOptimality(const Payoff& u, const Distribution& f0,
                              const Distribution& candidate, const GridSpec& grid,
                              double tol = 1e-6);

struct InstanceResult {
  int index = 0;
  uint64_t seed = 0;
  bool pass = false;
  double residual = 0.0;
  double seconds = 0.0;
  std::string detail;
  std::string error;  // non-empty when the instance threw
};

struct ExperimentReport {
  ExperimentKind kind = ExperimentKind::kDuality;
  uint64_t seed = 1;
  int count = 0;
  int grid_n = 0;
  int probe_k = 8;
  int passes = 0;
  int failures = 0;
  int errors = 0;
  double worst_residual = 0.0;
  double seconds = 0.0;
  std::vector<InstanceResult> instances;  // in seed order
};

struct ExperimentOptions {
  ExperimentKind kind = ExperimentKind::kDuality;
  int count = 10;
  uint64_t seed = 1;
  int grid_n = 0;   // 0: the kind's default
  int probe_k = 8;
  int threads = 0;  // 0: hardware concurrency
};

// Instance i uses seed options.seed + i.
InstanceResult RunInstance(ExperimentKind kind, int index, uint64_t seed, int grid_n,
                           int probe_k);
ExperimentReport RunExperiment(const ExperimentOptions& options);

}  // namespace persuasion

#endif  // PERSUASION_HARNESS_H_
