#pragma once

#include "sdct/model.hpp"

namespace sdct {

/// Smoothing level mu > 0 of the log-cosh surrogate.
class SmoothingParams {
 public:
  explicit SmoothingParams(double mu);
  double mu() const noexcept { return mu_; }

 private:
  double mu_;
};

/// Unit vector on S^{n-1}; renormalized on construction.
class SpherePoint {
 public:
  SpherePoint() = default;
  explicit SpherePoint(Vector q);
  /// Uniformly distributed point on S^{n-1}.
  static SpherePoint random(int n, std::uint64_t seed);
  static SpherePoint basis(int n, int i);

  const Vector& vector() const noexcept { return q_; }
  Eigen::Index dim() const noexcept { return q_.size(); }
  double operator()(Eigen::Index i) const { return q_(i); }

 private:
  Vector q_;
};

/// Signed coordinate axis selecting a hemisphere chart: +i or -i, 1-based.
/// The canonical chart is +n.
struct Chart {
  int axis = 0;  // 0 means canonical (+n)
  bool negative = false;
};

/// Point w of the equatorial-ball chart q(w) = (w, sqrt(1 - ||w||^2)).
struct ProjectedPoint {
  Vector w;
  Chart chart;

  /// sqrt((4n - 1) / (4n)), the radius of the chart region analysed.
  static double gamma_radius(int n);
};

struct SurrogateValue {
  double h;    // mu * log cosh(z / mu)
  double dh;   // tanh(z / mu)
  double ddh;  // (1 / mu) * (1 - tanh^2(z / mu))
};

SurrogateValue surrogate(double z, SmoothingParams mu);

struct ValueGrad {
  double value = 0.0;
  Vector grad;
};

struct ValueGradHess {
  double value = 0.0;
  Vector grad;
  Matrix hess;
};

/// f(q; Y) = (1/p) sum_k h_mu(q^T y_k) and its Euclidean derivatives.
///
/// Column sums are accumulated per fixed-size block and the block partials
/// are added in block order, so results are bit-identical for any worker
/// count.
class SphereObjective {
 public:
  SphereObjective(const Matrix& y, SmoothingParams mu, int workers = 1);

  Eigen::Index dim() const noexcept { return y_.rows(); }
  Eigen::Index samples() const noexcept { return y_.cols(); }
  double mu() const noexcept { return mu_; }
  const Matrix& data() const noexcept { return y_; }

  double value(const Vector& q) const;
  ValueGrad value_grad(const Vector& q) const;
  ValueGradHess value_grad_hess(const Vector& q) const;

  static constexpr Eigen::Index block_columns = 2048;

 private:
  const Matrix& y_;
  double mu_;
  int workers_;
};

ValueGrad f_value_grad(const SpherePoint& q, const DataMatrix& y, SmoothingParams mu);
Matrix f_hessian(const SpherePoint& q, const DataMatrix& y, SmoothingParams mu);

struct RiemannianDerivatives {
  Vector rgrad;  // P_q grad f
  Matrix rhess;  // P_q (hess f - <grad f, q> I) P_q
};

RiemannianDerivatives riemannian_grad_hess(const SpherePoint& q, const DataMatrix& y,
                                           SmoothingParams mu);

/// g(w) = f(q(w)) in the canonical chart, with gradient and Hessian in w.
ValueGradHess g_value_grad_hess(const ProjectedPoint& w, const DataMatrix& x, SmoothingParams mu);
ValueGradHess g_value_grad_hess(const ProjectedPoint& w, const Matrix& x, SmoothingParams mu);

SpherePoint lift(const ProjectedPoint& w);
ProjectedPoint project(const SpherePoint& q, Chart chart = {});

}  // namespace sdct
