#include <algorithm>
#include <cmath>

#include "sdct/error.hpp"
#include "sdct/recovery.hpp"

namespace sdct {

double soft_threshold(double x, double lambda) {
  const double mag = std::abs(x) - lambda;
  if (mag <= 0.0) return 0.0;
  return x > 0.0 ? mag : -mag;
}

double adm_objective(const Matrix& y, const Matrix& a, const Matrix& x, double lambda) {
  return lambda * x.cwiseAbs().sum() + 0.5 * (a * x - y).squaredNorm();
}

AdmResult adm_orthogonal(const DataMatrix& y, double lambda, int iters, std::uint64_t seed) {
  if (!(lambda > 0.0)) fail(ErrorCode::invalid_parameter, "lambda must be positive");
  if (iters < 1) fail(ErrorCode::invalid_parameter, "iteration count must be positive");
  const Eigen::Index n = y.dim();
  if (n < 1 || y.samples() < 1) fail(ErrorCode::empty_data, "ADM needs non-empty data");

  AdmResult out;
  Matrix a = n >= 2 ? make_orthogonal_dictionary(static_cast<int>(n), seed).entries
                    : Matrix::Identity(1, 1);
  Matrix x;
  for (int it = 0; it < iters; ++it) {
    x = (a.transpose() * y.entries).unaryExpr([lambda](double v) { return soft_threshold(v, lambda); });
    out.objective_trace.push_back(adm_objective(y.entries, a, x, lambda));

    Eigen::JacobiSVD<Matrix> svd(y.entries * x.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    a = svd.matrixU() * svd.matrixV().transpose();
    if (!a.allFinite()) fail(ErrorCode::numeric_failure, "SVD produced non-finite factors");
    out.objective_trace.push_back(adm_objective(y.entries, a, x, lambda));
    const Matrix gram = a.transpose() * a;
    out.max_orthogonality_residual = std::max(
        out.max_orthogonality_residual, (gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff());
  }
  out.a = DictionaryMatrix{a, DictionaryKind::orthogonal, 1.0};
  out.x = std::move(x);
  return out;
}

}  // namespace sdct
