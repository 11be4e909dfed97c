#pragma once

#include <cstdint>
#include <memory>

#include <Eigen/Dense>

namespace sdct {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

enum class DictionaryKind { orthogonal, complete };

/// Square invertible dictionary with its requested conditioning.
struct DictionaryMatrix {
  Matrix entries;
  DictionaryKind kind = DictionaryKind::complete;
  double kappa = 1.0;

  Eigen::Index dim() const { return entries.rows(); }
  /// sigma_max / sigma_min measured from an SVD.
  double measured_condition() const;
  /// ||A^T A - I||_inf (max entry).
  double orthogonality_residual() const;
};

enum class CoefficientMode { bernoulli_gaussian, fixed_k };

/// Sparse coefficients with their explicit support.
struct CoefficientMatrix {
  Matrix entries;
  BoolMatrix support;
  CoefficientMode mode = CoefficientMode::bernoulli_gaussian;
  double theta = 0.0;  // bernoulli_gaussian only
  int k = 0;           // fixed_k only
  std::uint64_t seed = 0;
};

/// Observations Y. Synthetic data keeps the matrices it was generated from.
struct DataMatrix {
  Matrix entries;
  std::shared_ptr<const DictionaryMatrix> dictionary;
  std::shared_ptr<const CoefficientMatrix> coefficients;

  DataMatrix() = default;
  explicit DataMatrix(Matrix y) : entries(std::move(y)) {}

  Eigen::Index dim() const { return entries.rows(); }
  Eigen::Index samples() const { return entries.cols(); }
  bool synthetic() const { return dictionary && coefficients; }
};

/// Orthogonal factor of a QR decomposition of a seeded Gaussian matrix, with
/// columns signed so that R has a positive diagonal.
DictionaryMatrix make_orthogonal_dictionary(int n, std::uint64_t seed);

/// U * diag(s) * V^T with seeded orthogonal U, V and singular values spaced
/// geometrically from 1 down to 1/kappa.
DictionaryMatrix make_complete_dictionary(int n, double kappa, std::uint64_t seed);

/// Entries Omega * V with Omega ~ Ber(theta), V ~ N(0, 1), all independent.
CoefficientMatrix sample_bg(int n, int p, double theta, std::uint64_t seed);

/// Each column has exactly k nonzeros on a uniformly random k-subset.
CoefficientMatrix sample_fixed_k(int n, int p, int k, std::uint64_t seed);

/// Y = A0 * X0.
DataMatrix synthesize(const DictionaryMatrix& a0, const CoefficientMatrix& x0);
DataMatrix synthesize(std::shared_ptr<const DictionaryMatrix> a0,
                      std::shared_ptr<const CoefficientMatrix> x0);

}  // namespace sdct
