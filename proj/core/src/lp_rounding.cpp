#include "sdct/lp_rounding.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "sdct/error.hpp"

namespace sdct {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorEvery = 64;
constexpr int kMaxSteps = 2'000'000;

// Bounded-variable tableau for  A x = 0,  lower <= x <= upper.
class BoundedSimplex {
 public:
  BoundedSimplex(Matrix a, std::vector<double> lower, std::vector<double> upper,
                 std::vector<double> x, std::vector<int> basis)
      : a_(std::move(a)),
        lower_(std::move(lower)),
        upper_(std::move(upper)),
        x_(std::move(x)),
        basis_(std::move(basis)),
        in_basis_(static_cast<std::size_t>(a_.cols()), -1) {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      in_basis_[static_cast<std::size_t>(basis_[i])] = static_cast<int>(i);
    refactor();
  }

  void set_costs(std::vector<double> cost) {
    cost_ = std::move(cost);
    recompute_reduced_costs();
  }

  void fix_variable(int j, double lo, double hi) {
    lower_[static_cast<std::size_t>(j)] = lo;
    upper_[static_cast<std::size_t>(j)] = hi;
  }

  // Minimizes cost^T x. Returns false when unbounded.
  bool run(int& pivots, int& flips) {
    const auto cols = static_cast<int>(a_.cols());
    const auto rows = static_cast<int>(a_.rows());
    for (int step = 0; step < kMaxSteps; ++step) {
      // Bland: smallest improving index.
      int entering = -1;
      double dir = 0.0;
      for (int j = 0; j < cols; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (in_basis_[ju] >= 0 || upper_[ju] == lower_[ju]) continue;
        const bool at_upper = x_[ju] == upper_[ju];
        if (!at_upper && reduced_[ju] < -kCostTol) {
          entering = j;
          dir = 1.0;
          break;
        }
        if (at_upper && reduced_[ju] > kCostTol) {
          entering = j;
          dir = -1.0;
          break;
        }
      }
      if (entering < 0) return true;

      const auto eu = static_cast<std::size_t>(entering);
      double best = upper_[eu] - lower_[eu];
      int leave_row = -1;
      int leave_var = std::numeric_limits<int>::max();
      bool leave_to_upper = false;
      for (int i = 0; i < rows; ++i) {
        const double alpha = tableau_(i, entering);
        if (std::abs(alpha) <= kPivotTol) continue;
        const auto bi = static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)]);
        const double rate = -dir * alpha;
        double limit;
        bool to_upper;
        if (rate < 0.0) {
          if (lower_[bi] == -kInf) continue;
          limit = std::max(0.0, (x_[bi] - lower_[bi]) / -rate);
          to_upper = false;
        } else {
          if (upper_[bi] == kInf) continue;
          limit = std::max(0.0, (upper_[bi] - x_[bi]) / rate);
          to_upper = true;
        }
        if (limit < best || (limit == best && leave_row >= 0 && basis_[static_cast<std::size_t>(i)] < leave_var)) {
          best = limit;
          leave_row = i;
          leave_var = basis_[static_cast<std::size_t>(i)];
          leave_to_upper = to_upper;
        }
      }
      if (best == kInf) return false;

      for (int i = 0; i < rows; ++i) {
        const auto bi = static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)]);
        x_[bi] -= dir * best * tableau_(i, entering);
      }
      x_[eu] += dir * best;

      if (leave_row < 0) {
        x_[eu] = dir > 0 ? upper_[eu] : lower_[eu];
        ++flips;
        continue;
      }

      const auto lv = static_cast<std::size_t>(leave_var);
      x_[lv] = leave_to_upper ? upper_[lv] : lower_[lv];
      pivot(leave_row, entering);
      ++pivots;
      if (pivots % kRefactorEvery == 0) {
        refactor();
        recompute_reduced_costs();
      }
    }
    fail(ErrorCode::internal_error, "simplex iteration limit reached");
  }

  void refactor() {
    const auto rows = a_.rows();
    Matrix b(rows, rows);
    for (Eigen::Index i = 0; i < rows; ++i) b.col(i) = a_.col(basis_[static_cast<std::size_t>(i)]);
    Eigen::PartialPivLU<Matrix> lu(b);
    tableau_ = lu.solve(a_);
    // Basic values from A x = 0 with nonbasic variables at their bounds.
    Vector rhs = Vector::Zero(rows);
    for (Eigen::Index j = 0; j < a_.cols(); ++j)
      if (in_basis_[static_cast<std::size_t>(j)] < 0 && x_[static_cast<std::size_t>(j)] != 0.0)
        rhs -= a_.col(j) * x_[static_cast<std::size_t>(j)];
    const Vector xb = lu.solve(rhs);
    for (Eigen::Index i = 0; i < rows; ++i) x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = xb(i);
  }

  void recompute_reduced_costs() {
    Vector cb(a_.rows());
    for (Eigen::Index i = 0; i < a_.rows(); ++i) cb(i) = cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
    const Vector z = tableau_.transpose() * cb;
    reduced_.assign(static_cast<std::size_t>(a_.cols()), 0.0);
    for (Eigen::Index j = 0; j < a_.cols(); ++j)
      reduced_[static_cast<std::size_t>(j)] = cost_[static_cast<std::size_t>(j)] - z(j);
  }

  // Simplex multipliers pi with B^T pi = c_B.
  Vector multipliers() const {
    const auto rows = a_.rows();
    Matrix b(rows, rows);
    Vector cb(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const auto bi = basis_[static_cast<std::size_t>(i)];
      b.col(i) = a_.col(bi);
      cb(i) = cost_[static_cast<std::size_t>(bi)];
    }
    return b.transpose().fullPivLu().solve(cb);
  }

  double value(int j) const { return x_[static_cast<std::size_t>(j)]; }
  bool is_basic(int j) const { return in_basis_[static_cast<std::size_t>(j)] >= 0; }

 private:
  void pivot(int row, int col) {
    const double piv = tableau_(row, col);
    tableau_.row(row) /= piv;
    for (Eigen::Index i = 0; i < tableau_.rows(); ++i) {
      if (i == row) continue;
      const double factor = tableau_(i, col);
      if (factor != 0.0) tableau_.row(i) -= factor * tableau_.row(row);
    }
    const double dc = reduced_[static_cast<std::size_t>(col)];
    if (dc != 0.0)
      for (Eigen::Index j = 0; j < tableau_.cols(); ++j)
        reduced_[static_cast<std::size_t>(j)] -= dc * tableau_(row, j);
    const auto old = static_cast<std::size_t>(basis_[static_cast<std::size_t>(row)]);
    in_basis_[old] = -1;
    basis_[static_cast<std::size_t>(row)] = col;
    in_basis_[static_cast<std::size_t>(col)] = row;
  }

  Matrix a_;
  Matrix tableau_;
  std::vector<double> lower_, upper_, x_, cost_, reduced_;
  std::vector<int> basis_;
  std::vector<int> in_basis_;
};

}  // namespace

RoundingProblem::RoundingProblem(const Matrix& data, Vector normal) : yhat(&data), r(std::move(normal)) {
  if (r.size() != data.rows()) fail(ErrorCode::invalid_shape, "LP normal has wrong dimension");
  if (!(r.norm() > 0.0) || !r.allFinite()) fail(ErrorCode::invalid_input, "LP normal must be nonzero");
  if (data.cols() == 0) fail(ErrorCode::empty_data, "rounding data has no columns");
  r.normalize();
}

RoundingSolution solve_rounding_lp(const RoundingProblem& prob) {
  const Matrix& y = *prob.yhat;
  const Eigen::Index n = y.rows();
  const Eigen::Index p = y.cols();
  const Eigen::Index lam_pos = p;
  const Eigen::Index lam_neg = p + 1;
  const Eigen::Index art0 = p + 2;
  const Eigen::Index cols = p + 2 + n;

  // Nonbasic u start at -1, so artificials absorb the residual sum_k y_k.
  const Vector residual = y.rowwise().sum();
  Matrix a(n, cols);
  a.leftCols(p) = y;
  a.col(lam_pos) = -prob.r;
  a.col(lam_neg) = prob.r;
  a.rightCols(n).setZero();
  std::vector<double> lower(static_cast<std::size_t>(cols), 0.0);
  std::vector<double> upper(static_cast<std::size_t>(cols), kInf);
  std::vector<double> x(static_cast<std::size_t>(cols), 0.0);
  std::vector<int> basis(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < p; ++k) {
    lower[static_cast<std::size_t>(k)] = -1.0;
    upper[static_cast<std::size_t>(k)] = 1.0;
    x[static_cast<std::size_t>(k)] = -1.0;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sign = residual(i) >= 0.0 ? 1.0 : -1.0;
    a(i, art0 + i) = sign;
    x[static_cast<std::size_t>(art0 + i)] = std::abs(residual(i));
    basis[static_cast<std::size_t>(i)] = static_cast<int>(art0 + i);
  }

  BoundedSimplex simplex(std::move(a), std::move(lower), std::move(upper), std::move(x), std::move(basis));
  RoundingSolution out;

  std::vector<double> phase1(static_cast<std::size_t>(cols), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) phase1[static_cast<std::size_t>(art0 + i)] = 1.0;
  simplex.set_costs(phase1);
  if (!simplex.run(out.pivots, out.bound_flips))
    fail(ErrorCode::internal_error, "phase one of the rounding LP is unbounded");
  double infeasibility = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) infeasibility += simplex.value(static_cast<int>(art0 + i));
  const double scale = std::max(1.0, residual.cwiseAbs().sum());
  if (infeasibility > 1e-8 * scale)
    fail(ErrorCode::internal_error, "rounding LP dual reported infeasible");

  for (Eigen::Index i = 0; i < n; ++i) simplex.fix_variable(static_cast<int>(art0 + i), 0.0, 0.0);
  std::vector<double> phase2(static_cast<std::size_t>(cols), 0.0);
  phase2[static_cast<std::size_t>(lam_pos)] = -1.0;
  phase2[static_cast<std::size_t>(lam_neg)] = 1.0;
  simplex.refactor();
  simplex.set_costs(phase2);
  if (!simplex.run(out.pivots, out.bound_flips))
    fail(ErrorCode::degenerate_data, "rounding LP dual is unbounded");
  simplex.refactor();

  out.q_raw = simplex.multipliers();
  if (!out.q_raw.allFinite() || std::abs(prob.r.dot(out.q_raw) - 1.0) > 1e-8)
    fail(ErrorCode::degenerate_data, "rounding LP has no well-defined primal optimizer");
  out.q = SpherePoint(out.q_raw);
  out.objective = (y.transpose() * out.q_raw).cwiseAbs().sum();
  out.dual_objective = simplex.value(static_cast<int>(lam_pos)) - simplex.value(static_cast<int>(lam_neg));
  out.dual_u.resize(p);
  for (Eigen::Index k = 0; k < p; ++k) out.dual_u(k) = simplex.value(static_cast<int>(k));
  return out;
}

SpherePoint lp_round(const RoundingProblem& prob) { return solve_rounding_lp(prob).q; }

}  // namespace sdct
