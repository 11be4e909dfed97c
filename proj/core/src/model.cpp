#include "sdct/model.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "sdct/error.hpp"
#include "sdct/rng.hpp"

namespace sdct {

namespace {

Matrix gaussian_matrix(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();
  return g;
}

Matrix orthogonal_factor(int n, std::uint64_t seed) {
  Rng rng(seed);
  const Matrix g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace

double DictionaryMatrix::measured_condition() const {
  Eigen::JacobiSVD<Matrix> svd(entries);
  const Vector& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

double DictionaryMatrix::orthogonality_residual() const {
  const Matrix gram = entries.transpose() * entries;
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

DictionaryMatrix make_orthogonal_dictionary(int n, std::uint64_t seed) {
  if (n < 2) fail(ErrorCode::invalid_dimension, "dictionary dimension must be at least 2");
  return DictionaryMatrix{orthogonal_factor(n, seed), DictionaryKind::orthogonal, 1.0};
}

DictionaryMatrix make_complete_dictionary(int n, double kappa, std::uint64_t seed) {
  if (n < 2) fail(ErrorCode::invalid_dimension, "dictionary dimension must be at least 2");
  if (!(kappa >= 1.0) || !std::isfinite(kappa))
    fail(ErrorCode::invalid_parameter, "condition number kappa must be >= 1");

  const Matrix u = orthogonal_factor(n, derive_seed(seed, {1}));
  const Matrix v = orthogonal_factor(n, derive_seed(seed, {2}));
  Vector s(n);
  for (int i = 0; i < n; ++i) s(i) = std::pow(kappa, -static_cast<double>(i) / (n - 1));
  return DictionaryMatrix{u * s.asDiagonal() * v.transpose(), DictionaryKind::complete, kappa};
}

CoefficientMatrix sample_bg(int n, int p, double theta, std::uint64_t seed) {
  if (n < 1 || p < 1) fail(ErrorCode::invalid_dimension, "coefficient matrix must be non-empty");
  if (!(theta > 0.0 && theta < 1.0))
    fail(ErrorCode::invalid_parameter, "Bernoulli rate theta must lie in (0, 1)");

  CoefficientMatrix x;
  x.entries = Matrix::Zero(n, p);
  x.support = BoolMatrix::Constant(n, p, false);
  x.mode = CoefficientMode::bernoulli_gaussian;
  x.theta = theta;
  x.seed = seed;

  Rng rng(seed);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) {
      const bool on = rng.uniform() < theta;
      const double value = rng.normal();
      if (on) {
        x.support(i, j) = true;
        x.entries(i, j) = value;
      }
    }
  }
  return x;
}

CoefficientMatrix sample_fixed_k(int n, int p, int k, std::uint64_t seed) {
  if (n < 1 || p < 1) fail(ErrorCode::invalid_dimension, "coefficient matrix must be non-empty");
  if (k < 1 || k > n) fail(ErrorCode::invalid_parameter, "sparsity k must satisfy 1 <= k <= n");

  CoefficientMatrix x;
  x.entries = Matrix::Zero(n, p);
  x.support = BoolMatrix::Constant(n, p, false);
  x.mode = CoefficientMode::fixed_k;
  x.k = k;
  x.seed = seed;

  Rng rng(seed);
  std::vector<int> index(static_cast<std::size_t>(n));
  for (int j = 0; j < p; ++j) {
    std::iota(index.begin(), index.end(), 0);
    // Partial Fisher-Yates: the first k slots form a uniform k-subset.
    for (int t = 0; t < k; ++t) {
      const auto pick = t + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - t)));
      std::swap(index[static_cast<std::size_t>(t)], index[static_cast<std::size_t>(pick)]);
    }
    for (int t = 0; t < k; ++t) {
      const int row = index[static_cast<std::size_t>(t)];
      x.support(row, j) = true;
      x.entries(row, j) = rng.normal();
    }
  }
  return x;
}

DataMatrix synthesize(std::shared_ptr<const DictionaryMatrix> a0,
                      std::shared_ptr<const CoefficientMatrix> x0) {
  if (!a0 || !x0) fail(ErrorCode::invalid_input, "synthesize needs both factors");
  if (a0->entries.cols() != x0->entries.rows())
    fail(ErrorCode::invalid_shape, "dictionary columns must equal coefficient rows");
  DataMatrix y(a0->entries * x0->entries);
  y.dictionary = std::move(a0);
  y.coefficients = std::move(x0);
  return y;
}

DataMatrix synthesize(const DictionaryMatrix& a0, const CoefficientMatrix& x0) {
  return synthesize(std::make_shared<const DictionaryMatrix>(a0),
                    std::make_shared<const CoefficientMatrix>(x0));
}

}  // namespace sdct
