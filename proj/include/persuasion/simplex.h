#ifndef PERSUASION_SIMPLEX_H_
#define PERSUASION_SIMPLEX_H_

#include <vector>

namespace persuasion {

enum class RowType { kLe, kEq, kGe };

// Dense two-phase tableau simplex maximizing c^T x subject to row
// constraints and x >= 0. Dantzig pricing with a switch to Bland's rule
// after a run of degenerate pivots; the final basis is re-solved by LU.
class DenseSimplex {
 public:
  enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericFailure };

  explicit DenseSimplex(int num_vars);

  void AddRow(const std::vector<double>& coeffs, RowType type, double rhs);
  void SetObjective(const std::vector<double>& c);

  Status Solve();
  // Keeps the current objective at its optimum (columns with a strictly
  // unfavourable reduced cost are fixed at zero) and maximizes `secondary`
  // over that face.
  Status OptimizeOnFace(const std::vector<double>& secondary);

  double objective_value() const { return objective_value_; }
  const std::vector<double>& solution() const { return x_; }
  // Row multipliers y = c_B B^{-1} of the last solve, for the original rows.
  std::vector<double> RowMultipliers() const;
  int iterations() const { return iterations_; }
  // Residual of the LU re-solve of the final basis.
  double refinement_residual() const { return refinement_residual_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }

 private:
  void Build();
  void Pivot(int r, int c);
  void LoadObjective(const std::vector<double>& full_cost);
  Status Iterate();
  Status IterateWithRefresh();
  bool Refine();
  void Rebuild();

  int n_;
  std::vector<std::vector<double>> rows_;
  std::vector<RowType> types_;
  std::vector<double> rhs_;
  std::vector<double> cost_;
  std::vector<double> row_sign_;

  // Working tableau: m rows of width N + 1 (last entry is the rhs).
  int m_ = 0;
  int width_ = 0;
  int num_artificial_ = 0;
  int first_artificial_ = 0;
  std::vector<double> tab_;
  std::vector<double> reduced_;  // width_ + 1; last entry is the objective
  std::vector<int> basis_;
  std::vector<char> barred_;
  std::vector<char> face_barred_;
  std::vector<double> full_cost_;

  std::vector<double> x_;
  double objective_value_ = 0.0;
  int iterations_ = 0;
  double refinement_residual_ = 0.0;
  bool built_ = false;
};

}  // namespace persuasion

#endif  // PERSUASION_SIMPLEX_H_
