#include <algorithm>
#include <cmath>
#include <limits>

#include "sdct/error.hpp"
#include "sdct/trm.hpp"

namespace sdct {

namespace {

struct Secular {
  const Vector& lam;  // eigenvalues, ascending
  const Vector& gt;   // gradient in the eigenbasis

  double norm(double shift) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      const double c = gt(i) / (lam(i) + shift);
      s += c * c;
    }
    return std::sqrt(s);
  }

  // d/dshift of 1/||xi(shift)||
  double inverse_norm_slope(double shift, double xnorm) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      const double d = lam(i) + shift;
      s += gt(i) * gt(i) / (d * d * d);
    }
    return s / (xnorm * xnorm * xnorm);
  }
};

}  // namespace

double subproblem_model(const TrSubproblem& sp, const Vector& xi) {
  return sp.g.dot(xi) + 0.5 * xi.dot(sp.B * xi);
}

TrSolution solve_subproblem(const TrSubproblem& sp) {
  const Eigen::Index m = sp.g.size();
  if (sp.B.rows() != m || sp.B.cols() != m)
    fail(ErrorCode::invalid_shape, "subproblem matrix and gradient sizes differ");
  if (!(sp.delta > 0.0) || !std::isfinite(sp.delta))
    fail(ErrorCode::invalid_parameter, "trust-region radius must be positive");
  if (!sp.B.allFinite() || !sp.g.allFinite())
    fail(ErrorCode::subproblem_failure, "subproblem data is not finite");

  TrSolution out;
  if (m == 0) {
    out.xi = Vector::Zero(0);
    return out;
  }

  const double bscale = std::max(1.0, sp.B.cwiseAbs().maxCoeff());
  if ((sp.B - sp.B.transpose()).cwiseAbs().maxCoeff() > 1e-12 * bscale)
    fail(ErrorCode::invalid_input, "subproblem matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (sp.B + sp.B.transpose()));
  if (eig.info() != Eigen::Success)
    fail(ErrorCode::subproblem_failure, "eigendecomposition did not converge");
  const Vector& lam = eig.eigenvalues();
  const Matrix& vecs = eig.eigenvectors();
  const Vector gt = vecs.transpose() * sp.g;
  const double delta = sp.delta;
  const double gnorm = gt.norm();
  const double lmin = lam(0);

  // Interior Newton step when B is positive definite.
  if (lmin > 0.0) {
    const Vector xt = -gt.cwiseQuotient(lam);
    if (xt.norm() <= delta) {
      out.xi = vecs * xt;
      return out;
    }
  }

  const double lo = std::max(0.0, -lmin);
  const double eig_tol = 1e-12 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  Eigen::Index bottom = 0;
  while (bottom < m && lam(bottom) - lmin <= eig_tol) ++bottom;
  const double g_bottom = gt.head(bottom).norm();

  if (g_bottom <= 1e-10 * gnorm || gnorm == 0.0) {
    // Candidate hard case: drop the bottom eigenspace and check whether the
    // remaining step fits strictly inside the ball at the smallest shift.
    Vector xt = Vector::Zero(m);
    for (Eigen::Index i = bottom; i < m; ++i) xt(i) = -gt(i) / (lam(i) + lo);
    const double partial = xt.norm();
    if (partial <= delta) {
      out.multiplier = lo;
      out.hard_case = true;
      if (lo > 0.0) {
        const double tau = std::sqrt(std::max(0.0, delta * delta - partial * partial));
        xt(0) = gt(0) > 0.0 ? -tau : tau;
        out.on_boundary = true;
      }
      out.xi = vecs * xt;
      return out;
    }
  }

  // Boundary solution: the shift lies in (lo, hi] with ||xi(hi)|| <= delta.
  const Secular secular{lam, gt};
  double a = lo;
  double b = lo + gnorm / delta;
  double shift = b;
  for (int iter = 0; iter < 300; ++iter) {
    const double xnorm = secular.norm(shift);
    const double phi = 1.0 / xnorm - 1.0 / delta;
    if (std::abs(xnorm - delta) <= 1e-14 * delta) break;
    if (phi < 0.0)
      a = shift;
    else
      b = shift;
    if (b - a <= std::numeric_limits<double>::epsilon() * std::max(1.0, b)) break;
    double next = shift - phi / secular.inverse_norm_slope(shift, xnorm);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    shift = next;
  }
  if (!std::isfinite(shift)) fail(ErrorCode::subproblem_failure, "secular iteration diverged");

  Vector xt(m);
  for (Eigen::Index i = 0; i < m; ++i) xt(i) = -gt(i) / (lam(i) + shift);
  const double xnorm = xt.norm();
  if (xnorm > delta) xt *= delta / xnorm;
  out.xi = vecs * xt;
  out.multiplier = shift;
  out.on_boundary = true;
  return out;
}

}  // namespace sdct
