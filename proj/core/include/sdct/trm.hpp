#pragma once

#include <string_view>
#include <vector>

#include "sdct/objective.hpp"

namespace sdct {

/// Trust-region parameters. Defaults are the adaptive schedule used for
/// the sphere objective.
struct TrmConfig {
  double delta0 = 0.1;
  double delta_max = 1.0;
  double delta_min = 1e-16;
  double eta_vs = 0.9;
  double eta_s = 0.1;
  double gamma_i = 2.0;
  double gamma_d = 0.5;
  double stop_tol = 1e-6;
  int max_iter = 10000;
  /// Keep the radius at delta0 for the whole run (no expansion/shrinkage).
  bool fixed_radius = false;
  /// Threads used for objective evaluation; results do not depend on it.
  int workers = 1;
  /// Record the point kept after every iteration in TrmResult::points.
  bool keep_points = false;

  void validate() const;
};

/// min_xi  g^T xi + 1/2 xi^T B xi  s.t. ||xi|| <= delta
struct TrSubproblem {
  Matrix B;
  Vector g;
  double delta = 0.0;
};

struct TrSolution {
  Vector xi;
  bool on_boundary = false;
  double multiplier = 0.0;  // lambda >= 0 with (B + lambda I) xi = -g
  bool hard_case = false;
};

/// Exact global solution via eigendecomposition of B and a safeguarded
/// Newton iteration on the secular equation 1/||xi(lambda)|| = 1/delta.
/// The hard case (g orthogonal to the bottom eigenspace) is completed with
/// a bottom-eigenvector component that reaches the boundary.
TrSolution solve_subproblem(const TrSubproblem& sp);

/// Model value g^T xi + 1/2 xi^T B xi.
double subproblem_model(const TrSubproblem& sp, const Vector& xi);

/// n x (n-1) orthonormal basis of the tangent space at q: the trailing
/// columns of the Householder reflector mapping q to -sign(q_1) e_1.
Matrix tangent_basis(const SpherePoint& q);

/// Second-order model f(q) + <grad f, d> + 1/2 d^T (hess f - <grad f, q> I) d
/// for a tangent direction d.
double quadratic_model(const SpherePoint& q, const DataMatrix& y, SmoothingParams mu,
                       const Vector& delta);

/// Exponential map q cos||d|| + (d / ||d||) sin||d||.
SpherePoint retract(const SpherePoint& q, const Vector& delta);

struct TrmIterate {
  double f = 0.0;          // objective at the iterate kept after this step
  double radius = 0.0;     // radius used for this step's subproblem
  double rho = 0.0;        // actual / predicted decrease
  double step_norm = 0.0;  // ||delta||
  bool accepted = false;
};

enum class Termination { progress_tol, max_iter, subproblem_failure };
std::string_view to_string(Termination t);

struct TrmResult {
  SpherePoint q_final;
  double f_final = 0.0;
  std::vector<TrmIterate> iterates;
  std::vector<SpherePoint> points;  // only with TrmConfig::keep_points
  Termination termination = Termination::max_iter;
  std::string message;  // set for subproblem failures
};

/// Riemannian trust-region minimization of f(q; Y) over the sphere.
TrmResult minimize(const DataMatrix& y, SmoothingParams mu, const TrmConfig& cfg,
                   const SpherePoint& q0);
TrmResult minimize(const Matrix& y, SmoothingParams mu, const TrmConfig& cfg,
                   const SpherePoint& q0);

}  // namespace sdct
