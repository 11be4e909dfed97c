#include "sdct/trm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdct/error.hpp"

namespace sdct {

void TrmConfig::validate() const {
  if (!(0.0 < eta_s && eta_s < eta_vs && eta_vs < 1.0))
    fail(ErrorCode::invalid_parameter, "need 0 < eta_s < eta_vs < 1");
  if (!(gamma_d < 1.0 && gamma_d > 0.0 && gamma_i > 1.0))
    fail(ErrorCode::invalid_parameter, "need 0 < gamma_d < 1 < gamma_i");
  if (!(delta_min > 0.0 && delta_min <= delta0 && delta0 <= delta_max))
    fail(ErrorCode::invalid_parameter, "need 0 < delta_min <= delta0 <= delta_max");
  if (!(stop_tol >= 0.0)) fail(ErrorCode::invalid_parameter, "stop_tol must be nonnegative");
  if (max_iter < 1) fail(ErrorCode::invalid_parameter, "max_iter must be positive");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::progress_tol: return "progress_tol";
    case Termination::max_iter: return "max_iter";
    case Termination::subproblem_failure: return "subproblem_failure";
  }
  return "unknown";
}

Matrix tangent_basis(const SpherePoint& q) {
  const Vector& v0 = q.vector();
  const Eigen::Index n = v0.size();
  // H = I - 2 v v^T / (v^T v) with v = q + s e_1 sends q to -s e_1; its
  // remaining columns span the orthogonal complement of q.
  const double s = v0(0) >= 0.0 ? 1.0 : -1.0;
  Vector v = v0;
  v(0) += s;
  const double vv = v.squaredNorm();
  Matrix u = -(2.0 / vv) * v * v.tail(n - 1).transpose();
  for (Eigen::Index j = 0; j + 1 < n; ++j) u(j + 1, j) += 1.0;
  return u;
}

namespace {

void require_tangent(const SpherePoint& q, const Vector& delta) {
  if (delta.size() != q.dim()) fail(ErrorCode::invalid_shape, "tangent vector has wrong dimension");
  if (std::abs(delta.dot(q.vector())) > 1e-8 * delta.norm())
    fail(ErrorCode::invalid_tangent, "direction is not tangent to the sphere at q");
}

}  // namespace

double quadratic_model(const SpherePoint& q, const DataMatrix& y, SmoothingParams mu,
                       const Vector& delta) {
  require_tangent(q, delta);
  const auto d = SphereObjective(y.entries, mu).value_grad_hess(q.vector());
  const double curv = d.grad.dot(q.vector());
  return d.value + d.grad.dot(delta) + 0.5 * (delta.dot(d.hess * delta) - curv * delta.squaredNorm());
}

SpherePoint retract(const SpherePoint& q, const Vector& delta) {
  require_tangent(q, delta);
  const double t = delta.norm();
  if (t == 0.0) return q;
  return SpherePoint(q.vector() * std::cos(t) + delta * (std::sin(t) / t));
}

TrmResult minimize(const Matrix& y, SmoothingParams mu, const TrmConfig& cfg,
                   const SpherePoint& q0) {
  cfg.validate();
  if (q0.dim() != y.rows()) fail(ErrorCode::invalid_shape, "initial point dimension mismatch");
  const SphereObjective objective(y, mu, cfg.workers);
  const Eigen::Index n = y.rows();

  TrmResult result;
  SpherePoint q = q0;
  auto d = objective.value_grad_hess(q.vector());
  double radius = cfg.delta0;
  result.termination = Termination::max_iter;

  if (n == 1) {
    result.termination = Termination::progress_tol;
    result.q_final = q;
    result.f_final = d.value;
    return result;
  }

  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    const Matrix u = tangent_basis(q);
    const double curv = d.grad.dot(q.vector());
    TrSubproblem sp;
    sp.g = u.transpose() * d.grad;
    sp.B = u.transpose() * (d.hess - curv * Matrix::Identity(n, n)) * u;
    sp.B = 0.5 * (sp.B + sp.B.transpose()).eval();
    sp.delta = radius;

    TrSolution sol;
    try {
      sol = solve_subproblem(sp);
    } catch (const Error& e) {
      result.termination = Termination::subproblem_failure;
      result.message = e.what();
      break;
    }

    const double step = sol.xi.norm();
    const double predicted = -subproblem_model(sp, sol.xi);
    // Stationary: either no step at all or a predicted decrease below the
    // rounding resolution of f, where rho is pure noise.
    const double resolution = 8.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(d.value), 1e-300);
    if (step == 0.0 || !(predicted > resolution)) {
      result.termination = Termination::progress_tol;
      break;
    }

    const Vector delta = u * sol.xi;
    const SpherePoint trial = retract(q, delta);
    const double f_trial = objective.value(trial.vector());
    const double actual = d.value - f_trial;
    const double rho = actual / predicted;
    const bool at_boundary = std::abs(step - radius) <= 1e-10 * radius;

    TrmIterate record;
    record.radius = radius;
    record.rho = rho;
    record.step_norm = step;

    if (rho >= cfg.eta_vs && at_boundary) {
      record.accepted = true;
      if (!cfg.fixed_radius) radius = std::min(cfg.gamma_i * radius, cfg.delta_max);
    } else if (rho >= cfg.eta_s) {
      record.accepted = true;
    } else if (!cfg.fixed_radius) {
      radius = std::max(cfg.gamma_d * radius, cfg.delta_min);
    }

    if (record.accepted) {
      q = trial;
      d = objective.value_grad_hess(q.vector());
    }
    record.f = d.value;
    result.iterates.push_back(record);
    if (cfg.keep_points) result.points.push_back(q);

    if (std::abs(actual) / step <= cfg.stop_tol) {
      result.termination = Termination::progress_tol;
      break;
    }
  }

  result.q_final = q;
  result.f_final = d.value;
  return result;
}

TrmResult minimize(const DataMatrix& y, SmoothingParams mu, const TrmConfig& cfg,
                   const SpherePoint& q0) {
  return minimize(y.entries, mu, cfg, q0);
}

}  // namespace sdct
