#include "persuasion/simplex.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "persuasion/error.h"

namespace persuasion {
namespace {

constexpr double kPivotTol = 1e-7;
constexpr double kOptTol = 1e-10;
constexpr int kDegenerateRun = 50;

}  // namespace

DenseSimplex::DenseSimplex(int num_vars) : n_(num_vars), cost_(num_vars, 0.0) {}

void DenseSimplex::AddRow(const std::vector<double>& coeffs, RowType type, double rhs) {
  if (static_cast<int>(coeffs.size()) != n_) {
    throw Error(ErrorKind::kInvalidArgument, "row width does not match variable count");
  }
  rows_.push_back(coeffs);
  types_.push_back(type);
  rhs_.push_back(rhs);
  built_ = false;
}

void DenseSimplex::SetObjective(const std::vector<double>& c) {
  if (static_cast<int>(c.size()) != n_) {
    throw Error(ErrorKind::kInvalidArgument, "objective width does not match");
  }
  cost_ = c;
}

void DenseSimplex::Build() {
  m_ = static_cast<int>(rows_.size());
  row_sign_.assign(m_, 1.0);
  std::vector<RowType> types = types_;
  for (int r = 0; r < m_; ++r) {
    if (rhs_[r] < 0.0) {
      row_sign_[r] = -1.0;
      if (types[r] == RowType::kLe) {
        types[r] = RowType::kGe;
      } else if (types[r] == RowType::kGe) {
        types[r] = RowType::kLe;
      }
    }
  }
  int slacks = 0, arts = 0;
  for (RowType t : types) {
    if (t != RowType::kEq) ++slacks;
    if (t != RowType::kLe) ++arts;
  }
  width_ = n_ + slacks + arts;
  first_artificial_ = n_ + slacks;
  num_artificial_ = arts;
  tab_.assign(static_cast<size_t>(m_) * (width_ + 1), 0.0);
  basis_.assign(m_, -1);
  int next_slack = n_, next_art = first_artificial_;
  for (int r = 0; r < m_; ++r) {
    double* row = &tab_[static_cast<size_t>(r) * (width_ + 1)];
    for (int j = 0; j < n_; ++j) row[j] = row_sign_[r] * rows_[r][j];
    row[width_] = row_sign_[r] * rhs_[r];
    if (types[r] == RowType::kLe) {
      row[next_slack] = 1.0;
      basis_[r] = next_slack++;
    } else if (types[r] == RowType::kGe) {
      row[next_slack++] = -1.0;
      row[next_art] = 1.0;
      basis_[r] = next_art++;
    } else {
      row[next_art] = 1.0;
      basis_[r] = next_art++;
    }
  }
  barred_.assign(width_, 0);
  built_ = true;
}

void DenseSimplex::LoadObjective(const std::vector<double>& full_cost) {
  full_cost_ = full_cost;
  reduced_.assign(width_ + 1, 0.0);
  for (int j = 0; j < width_; ++j) reduced_[j] = -full_cost[j];
  for (int r = 0; r < m_; ++r) {
    const double cb = full_cost[basis_[r]];
    if (cb == 0.0) continue;
    const double* row = &tab_[static_cast<size_t>(r) * (width_ + 1)];
    for (int j = 0; j <= width_; ++j) reduced_[j] += cb * row[j];
  }
}

void DenseSimplex::Pivot(int r, int c) {
  const size_t stride = width_ + 1;
  double* pr = &tab_[r * stride];
  const double inv = 1.0 / pr[c];
  std::vector<int> nz;
  nz.reserve(stride);
  for (int j = 0; j <= width_; ++j) {
    if (pr[j] != 0.0) {
      pr[j] *= inv;
      nz.push_back(j);
    }
  }
  pr[c] = 1.0;
  for (int i = 0; i < m_; ++i) {
    if (i == r) continue;
    double* row = &tab_[i * stride];
    const double f = row[c];
    if (f == 0.0) continue;
    for (int j : nz) row[j] -= f * pr[j];
    row[c] = 0.0;
  }
  const double f = reduced_[c];
  if (f != 0.0) {
    for (int j : nz) reduced_[j] -= f * pr[j];
    reduced_[c] = 0.0;
  }
  basis_[r] = c;
  ++iterations_;
}

DenseSimplex::Status DenseSimplex::Iterate() {
  const size_t stride = width_ + 1;
  const int limit = iterations_ + 50 * (m_ + width_) + 1000;
  bool bland = false;
  int degenerate = 0;
  std::vector<char> is_basic(width_, 0);
  for (int b : basis_) is_basic[b] = 1;
  while (true) {
    if (iterations_ > limit) return Status::kIterationLimit;
    int c = -1;
    double best = -kOptTol;
    for (int j = 0; j < width_; ++j) {
      if (barred_[j] || is_basic[j]) continue;
      if (reduced_[j] < best) {
        c = j;
        if (bland) break;
        best = reduced_[j];
      }
    }
    if (c < 0) return Status::kOptimal;
    int r = -1;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m_; ++i) {
      const double a = tab_[i * stride + c];
      if (a <= kPivotTol) continue;
      const double ratio = std::max(0.0, tab_[i * stride + width_]) / a;
      if (r < 0 || ratio < min_ratio - 1e-12 * (1.0 + min_ratio)) {
        r = i;
        min_ratio = ratio;
      } else if (ratio <= min_ratio + 1e-12 * (1.0 + min_ratio)) {
        const bool better = bland ? basis_[i] < basis_[r]
                                  : a > tab_[r * stride + c];
        if (better) {
          r = i;
          min_ratio = std::min(min_ratio, ratio);
        }
      }
    }
    if (r < 0) return Status::kUnbounded;
    if (min_ratio <= 1e-13) {
      if (++degenerate > kDegenerateRun) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
    is_basic[basis_[r]] = 0;
    Pivot(r, c);
    is_basic[c] = 1;
  }
}

bool DenseSimplex::Refine() {
  Eigen::MatrixXd b(m_, m_);
  Eigen::VectorXd rhs(m_);
  for (int r = 0; r < m_; ++r) rhs(r) = row_sign_[r] * rhs_[r];
  // Original (sign-normalized) column j.
  auto column = [&](int j, Eigen::Ref<Eigen::VectorXd> out) {
    out.setZero();
    if (j < n_) {
      for (int r = 0; r < m_; ++r) out(r) = row_sign_[r] * rows_[r][j];
      return;
    }
    // Slack, surplus and artificial columns are signed unit vectors; read the
    // sign from the initial layout.
    int next_slack = n_, next_art = first_artificial_;
    for (int r = 0; r < m_; ++r) {
      RowType t = types_[r];
      if (row_sign_[r] < 0 && t != RowType::kEq) {
        t = t == RowType::kLe ? RowType::kGe : RowType::kLe;
      }
      if (t == RowType::kLe) {
        if (next_slack++ == j) out(r) = 1.0;
      } else if (t == RowType::kGe) {
        if (next_slack++ == j) out(r) = -1.0;
        if (next_art++ == j) out(r) = 1.0;
      } else {
        if (next_art++ == j) out(r) = 1.0;
      }
    }
  };
  Eigen::VectorXd col(m_);
  for (int r = 0; r < m_; ++r) {
    column(basis_[r], col);
    b.col(r) = col;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
  const Eigen::VectorXd xb = lu.solve(rhs);
  refinement_residual_ = (b * xb - rhs).cwiseAbs().maxCoeff();
  x_.assign(n_, 0.0);
  bool ok = refinement_residual_ <= 1e-9;
  for (int r = 0; r < m_; ++r) {
    if (xb(r) < -1e-9) ok = false;
    if (basis_[r] < n_) x_[basis_[r]] = std::max(0.0, xb(r));
  }
  objective_value_ = 0.0;
  for (int j = 0; j < n_; ++j) objective_value_ += full_cost_[j] * x_[j];
  return ok;
}

void DenseSimplex::Rebuild() {
  // Recompute the tableau B^{-1} [A b] from scratch for the current basis.
  const std::vector<int> basis = basis_;
  const std::vector<char> barred = barred_;
  const std::vector<double> cost = full_cost_;
  Build();
  Eigen::MatrixXd a(m_, width_ + 1);
  for (int r = 0; r < m_; ++r) {
    for (int j = 0; j <= width_; ++j) a(r, j) = tab_[static_cast<size_t>(r) * (width_ + 1) + j];
  }
  Eigen::MatrixXd b(m_, m_);
  for (int r = 0; r < m_; ++r) b.col(r) = a.col(basis[r]);
  const Eigen::MatrixXd t = Eigen::PartialPivLU<Eigen::MatrixXd>(b).solve(a);
  for (int r = 0; r < m_; ++r) {
    for (int j = 0; j <= width_; ++j) {
      double v = t(r, j);
      if (std::abs(v) < 1e-15) v = 0.0;
      tab_[static_cast<size_t>(r) * (width_ + 1) + j] = v;
    }
  }
  basis_ = basis;
  barred_ = barred;
  LoadObjective(cost);
}

DenseSimplex::Status DenseSimplex::IterateWithRefresh() {
  // Long pivot runs let the tableau drift; a basis only counts as optimal once
  // the freshly factored tableau prices out too.
  for (int attempt = 0; attempt < 4; ++attempt) {
    const Status st = Iterate();
    if (st != Status::kOptimal) return st;
    const bool feasible = Refine();
    const int before = iterations_;
    Rebuild();
    if (Iterate() != Status::kOptimal) continue;
    if (iterations_ == before && feasible) return Status::kOptimal;
  }
  return Status::kNumericFailure;
}

DenseSimplex::Status DenseSimplex::Solve() {
  Build();
  iterations_ = 0;
  Status st;
  if (num_artificial_ > 0) {
    std::vector<double> phase1(width_, 0.0);
    for (int j = first_artificial_; j < width_; ++j) phase1[j] = -1.0;
    LoadObjective(phase1);
    st = Iterate();
    if (st != Status::kOptimal) return st == Status::kUnbounded ? Status::kNumericFailure : st;
    double scale = 1.0;
    for (double v : rhs_) scale = std::max(scale, std::abs(v));
    if (reduced_[width_] < -1e-9 * scale) return Status::kInfeasible;
    const size_t stride = width_ + 1;
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < first_artificial_) continue;
      int best = -1;
      double best_abs = 1e-9;
      for (int j = 0; j < first_artificial_; ++j) {
        const double a = std::abs(tab_[r * stride + j]);
        if (a > best_abs &&
            std::find(basis_.begin(), basis_.end(), j) == basis_.end()) {
          best = j;
          best_abs = a;
        }
      }
      if (best >= 0) Pivot(r, best);
    }
    for (int j = first_artificial_; j < width_; ++j) barred_[j] = 1;
  }
  std::vector<double> full(width_, 0.0);
  std::copy(cost_.begin(), cost_.end(), full.begin());
  LoadObjective(full);
  st = IterateWithRefresh();
  if (st != Status::kOptimal) return st;
  // Nonbasic columns with a strictly positive reduced cost stay at zero on the
  // optimal face: for feasible x, c^T x = V - sum_j d_j x_j.
  face_barred_ = barred_;
  std::vector<char> is_basic(width_, 0);
  for (int b : basis_) is_basic[b] = 1;
  for (int j = 0; j < width_; ++j) {
    if (!is_basic[j] && reduced_[j] > 1e-9) face_barred_[j] = 1;
  }
  return Status::kOptimal;
}

DenseSimplex::Status DenseSimplex::OptimizeOnFace(const std::vector<double>& secondary) {
  if (static_cast<int>(secondary.size()) != n_) {
    throw Error(ErrorKind::kInvalidArgument, "secondary objective width does not match");
  }
  barred_ = face_barred_;
  std::vector<double> full(width_, 0.0);
  std::copy(secondary.begin(), secondary.end(), full.begin());
  LoadObjective(full);
  return IterateWithRefresh();
}

std::vector<double> DenseSimplex::RowMultipliers() const {
  Eigen::MatrixXd bt(m_, m_);
  // Rebuild B from the original rows.
  for (int r = 0; r < m_; ++r) {
    const int j = basis_[r];
    for (int i = 0; i < m_; ++i) {
      double v = 0.0;
      if (j < n_) {
        v = row_sign_[i] * rows_[i][j];
      }
      bt(r, i) = v;
    }
  }
  // Slack and artificial columns: identify by probing the built layout.
  int next_slack = n_, next_art = first_artificial_;
  for (int i = 0; i < m_; ++i) {
    RowType t = types_[i];
    if (row_sign_[i] < 0 && t != RowType::kEq) t = t == RowType::kLe ? RowType::kGe : RowType::kLe;
    auto set = [&](int col, double v) {
      for (int r = 0; r < m_; ++r) {
        if (basis_[r] == col) bt(r, i) = v;
      }
    };
    if (t == RowType::kLe) {
      set(next_slack++, 1.0);
    } else if (t == RowType::kGe) {
      set(next_slack++, -1.0);
      set(next_art++, 1.0);
    } else {
      set(next_art++, 1.0);
    }
  }
  Eigen::VectorXd cb(m_);
  for (int r = 0; r < m_; ++r) cb(r) = full_cost_[basis_[r]];
  const Eigen::VectorXd y = Eigen::PartialPivLU<Eigen::MatrixXd>(bt).solve(cb);
  std::vector<double> out(m_);
  for (int i = 0; i < m_; ++i) out[i] = row_sign_[i] * y(i);
  return out;
}

}  // namespace persuasion
