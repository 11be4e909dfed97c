#include "sdct/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "sdct/error.hpp"
#include "sdct/parallel.hpp"
#include "sdct/rng.hpp"

namespace sdct {

namespace {

// log cosh(a) for a >= 0 without overflow and without cancellation near 0.
double log_cosh_abs(double a) {
  if (a < 1.0) {
    const double s = std::sinh(0.5 * a);
    return std::log1p(2.0 * s * s);
  }
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// 1 - tanh^2(x) = 4 e / (1 + e)^2 with e = exp(-2|x|).
double sech_squared(double x) {
  const double e = std::exp(-2.0 * std::abs(x));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

struct BlockPartial {
  double value = 0.0;
  Vector grad;
  Matrix hess;
};

enum class Order { value, grad, hess };

std::vector<BlockPartial> evaluate_blocks(const Matrix& y, const Vector& q, double mu, int workers,
                                          Order order) {
  const Eigen::Index p = y.cols();
  const Eigen::Index n = y.rows();
  const Eigen::Index block = SphereObjective::block_columns;
  const auto blocks = static_cast<std::size_t>((p + block - 1) / block);
  std::vector<BlockPartial> partial(blocks);

  parallel_for(blocks, workers, [&](std::size_t b) {
    const Eigen::Index c0 = static_cast<Eigen::Index>(b) * block;
    const Eigen::Index width = std::min(block, p - c0);
    const auto yb = y.middleCols(c0, width);
    const Vector z = yb.transpose() * q;

    BlockPartial& out = partial[b];
    Vector t(width);
    Vector s(order == Order::hess ? width : 0);
    for (Eigen::Index k = 0; k < width; ++k) {
      const double x = z(k) / mu;
      out.value += mu * log_cosh_abs(std::abs(x));
      if (order != Order::value) t(k) = std::tanh(x);
      if (order == Order::hess) s(k) = sech_squared(x) / mu;
    }
    if (order != Order::value) out.grad = yb * t;
    if (order == Order::hess) {
      const Matrix scaled = yb * s.cwiseSqrt().asDiagonal();
      out.hess = Matrix::Zero(n, n);
      out.hess.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
      out.hess.triangularView<Eigen::StrictlyUpper>() = out.hess.transpose();
    }
  });
  return partial;
}

void check_data(const Matrix& y, const Vector& q) {
  if (y.cols() == 0) fail(ErrorCode::empty_data, "data matrix has no columns");
  if (y.rows() != q.size())
    fail(ErrorCode::invalid_shape, "point dimension " + std::to_string(q.size()) +
                                       " does not match data dimension " + std::to_string(y.rows()));
}

int chart_axis(const Chart& chart, Eigen::Index n) {
  const int axis = chart.axis == 0 ? static_cast<int>(n) : chart.axis;
  if (axis < 1 || axis > n) fail(ErrorCode::chart_violation, "chart axis out of range");
  return axis - 1;
}

// Reorders coordinates so the chart axis comes last, flipping it for
// negative charts. The map is an involution-free isometry; from_chart undoes it.
Vector to_chart(const Vector& q, const Chart& chart) {
  const Eigen::Index n = q.size();
  const int axis = chart_axis(chart, n);
  Vector out(n);
  Eigen::Index t = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (i != axis) out(t++) = q(i);
  out(n - 1) = chart.negative ? -q(axis) : q(axis);
  return out;
}

Vector from_chart(const Vector& qt, const Chart& chart) {
  const Eigen::Index n = qt.size();
  const int axis = chart_axis(chart, n);
  Vector out(n);
  Eigen::Index t = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (i != axis) out(i) = qt(t++);
  out(axis) = chart.negative ? -qt(n - 1) : qt(n - 1);
  return out;
}

Matrix rows_to_chart(const Matrix& x, const Chart& chart) {
  const Eigen::Index n = x.rows();
  const int axis = chart_axis(chart, n);
  if (axis == n - 1 && !chart.negative) return x;
  Matrix out(n, x.cols());
  Eigen::Index t = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (i != axis) out.row(t++) = x.row(i);
  out.row(n - 1) = chart.negative ? Eigen::RowVectorXd(-x.row(axis)) : Eigen::RowVectorXd(x.row(axis));
  return out;
}

}  // namespace

SmoothingParams::SmoothingParams(double mu) : mu_(mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) fail(ErrorCode::invalid_parameter, "mu must be positive");
  if (mu > 1.0) warn("smoothing level mu > 1 is outside the small-mu regime");
}

SpherePoint::SpherePoint(Vector q) : q_(std::move(q)) {
  const double norm = q_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    fail(ErrorCode::invalid_input, "sphere point needs a finite nonzero vector");
  q_ /= norm;
}

SpherePoint SpherePoint::random(int n, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::invalid_dimension, "sphere dimension must be positive");
  Rng rng(seed);
  Vector v(n);
  for (;;) {
    for (int i = 0; i < n; ++i) v(i) = rng.normal();
    if (v.norm() > 1e-300) return SpherePoint(v);
  }
}

SpherePoint SpherePoint::basis(int n, int i) {
  if (i < 0 || i >= n) fail(ErrorCode::invalid_dimension, "basis index out of range");
  return SpherePoint(Vector::Unit(n, i));
}

double ProjectedPoint::gamma_radius(int n) { return std::sqrt((4.0 * n - 1.0) / (4.0 * n)); }

SurrogateValue surrogate(double z, SmoothingParams mu) {
  if (!std::isfinite(z)) fail(ErrorCode::invalid_input, "surrogate argument must be finite");
  const double m = mu.mu();
  const double x = z / m;
  return {m * log_cosh_abs(std::abs(x)), std::tanh(x), sech_squared(x) / m};
}

SphereObjective::SphereObjective(const Matrix& y, SmoothingParams mu, int workers)
    : y_(y), mu_(mu.mu()), workers_(workers) {
  if (y.cols() == 0) fail(ErrorCode::empty_data, "data matrix has no columns");
}

double SphereObjective::value(const Vector& q) const {
  check_data(y_, q);
  const auto parts = evaluate_blocks(y_, q, mu_, workers_, Order::value);
  double sum = 0.0;
  for (const auto& part : parts) sum += part.value;
  const double f = sum * (1.0 / static_cast<double>(y_.cols()));
  if (!std::isfinite(f)) fail(ErrorCode::invalid_input, "objective is not finite");
  return f;
}

ValueGrad SphereObjective::value_grad(const Vector& q) const {
  check_data(y_, q);
  const auto parts = evaluate_blocks(y_, q, mu_, workers_, Order::grad);
  ValueGrad out{0.0, Vector::Zero(y_.rows())};
  for (const auto& part : parts) {
    out.value += part.value;
    out.grad += part.grad;
  }
  const double inv_p = 1.0 / static_cast<double>(y_.cols());
  out.value *= inv_p;
  out.grad *= inv_p;
  if (!std::isfinite(out.value) || !out.grad.allFinite())
    fail(ErrorCode::invalid_input, "objective or gradient is not finite");
  return out;
}

ValueGradHess SphereObjective::value_grad_hess(const Vector& q) const {
  check_data(y_, q);
  const auto parts = evaluate_blocks(y_, q, mu_, workers_, Order::hess);
  ValueGradHess out{0.0, Vector::Zero(y_.rows()), Matrix::Zero(y_.rows(), y_.rows())};
  for (const auto& part : parts) {
    out.value += part.value;
    out.grad += part.grad;
    out.hess += part.hess;
  }
  const double inv_p = 1.0 / static_cast<double>(y_.cols());
  out.value *= inv_p;
  out.grad *= inv_p;
  out.hess *= inv_p;
  if (!std::isfinite(out.value) || !out.grad.allFinite() || !out.hess.allFinite())
    fail(ErrorCode::invalid_input, "objective derivatives are not finite");
  return out;
}

ValueGrad f_value_grad(const SpherePoint& q, const DataMatrix& y, SmoothingParams mu) {
  return SphereObjective(y.entries, mu).value_grad(q.vector());
}

Matrix f_hessian(const SpherePoint& q, const DataMatrix& y, SmoothingParams mu) {
  return SphereObjective(y.entries, mu).value_grad_hess(q.vector()).hess;
}

RiemannianDerivatives riemannian_grad_hess(const SpherePoint& q, const DataMatrix& y,
                                           SmoothingParams mu) {
  const auto d = SphereObjective(y.entries, mu).value_grad_hess(q.vector());
  const Vector& v = q.vector();
  const Eigen::Index n = v.size();
  const Matrix proj = Matrix::Identity(n, n) - v * v.transpose();
  RiemannianDerivatives out;
  out.rgrad = proj * d.grad;
  const Matrix inner = d.hess - d.grad.dot(v) * Matrix::Identity(n, n);
  out.rhess = proj * inner * proj;
  out.rhess = 0.5 * (out.rhess + out.rhess.transpose()).eval();
  return out;
}

ValueGradHess g_value_grad_hess(const ProjectedPoint& point, const Matrix& x_in,
                                SmoothingParams mu) {
  const Eigen::Index n = x_in.rows();
  if (x_in.cols() == 0) fail(ErrorCode::empty_data, "data matrix has no columns");
  if (point.w.size() != n - 1) fail(ErrorCode::invalid_shape, "w must have dimension n - 1");
  const double wnorm2 = point.w.squaredNorm();
  if (!(wnorm2 < 1.0)) fail(ErrorCode::chart_violation, "||w|| must be strictly below 1");
  if (std::sqrt(wnorm2) >= ProjectedPoint::gamma_radius(static_cast<int>(n)))
    warn("w lies outside the analysed chart region");

  const Matrix x = rows_to_chart(x_in, point.chart);
  const Vector& w = point.w;
  const double qn = std::sqrt(1.0 - wnorm2);
  const double m = mu.mu();
  const Eigen::Index p = x.cols();

  Vector q(n);
  q.head(n - 1) = w;
  q(n - 1) = qn;
  const Vector z = x.transpose() * q;
  const auto xbar = x.topRows(n - 1);
  const Eigen::RowVectorXd xn = x.row(n - 1);

  // a_k = xbar_k - (x_n,k / q_n) w
  const Matrix a = xbar - w * (xn / qn);

  Vector t(p), s(p);
  double value = 0.0;
  double curvature_weight = 0.0;  // sum_k x_n,k tanh(z_k / mu)
  for (Eigen::Index k = 0; k < p; ++k) {
    const double arg = z(k) / m;
    value += m * log_cosh_abs(std::abs(arg));
    t(k) = std::tanh(arg);
    s(k) = sech_squared(arg) / m;
    curvature_weight += xn(k) * t(k);
  }

  const double inv_p = 1.0 / static_cast<double>(p);
  ValueGradHess out;
  out.value = value * inv_p;
  out.grad = (a * t) * inv_p;
  const Matrix scaled = a * s.cwiseSqrt().asDiagonal();
  Matrix hess = Matrix::Zero(n - 1, n - 1);
  hess.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
  hess.triangularView<Eigen::StrictlyUpper>() = hess.transpose();
  const Matrix chart_curv = Matrix::Identity(n - 1, n - 1) / qn + (w * w.transpose()) / (qn * qn * qn);
  out.hess = (hess - curvature_weight * chart_curv) * inv_p;
  return out;
}

ValueGradHess g_value_grad_hess(const ProjectedPoint& w, const DataMatrix& x, SmoothingParams mu) {
  return g_value_grad_hess(w, x.entries, mu);
}

SpherePoint lift(const ProjectedPoint& point) {
  const double wnorm2 = point.w.squaredNorm();
  if (!(wnorm2 < 1.0)) fail(ErrorCode::chart_violation, "||w|| must be strictly below 1");
  Vector qt(point.w.size() + 1);
  qt.head(point.w.size()) = point.w;
  qt(point.w.size()) = std::sqrt(1.0 - wnorm2);
  return SpherePoint(from_chart(qt, point.chart));
}

ProjectedPoint project(const SpherePoint& q, Chart chart) {
  const Vector qt = to_chart(q.vector(), chart);
  if (!(qt(qt.size() - 1) > 0.0))
    fail(ErrorCode::chart_violation, "point is not in the open hemisphere of the chart");
  return ProjectedPoint{qt.head(qt.size() - 1), chart};
}

}  // namespace sdct
