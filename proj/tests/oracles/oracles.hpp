#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Central differences.
Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h);
Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x, double h);
// v^T H v from f(x + h v) - 2 f(x) + f(x - h v).
double fd_directional_curvature(const std::function<double(const Vector&)>& f, const Vector& x,
                                const Vector& v, double h);

double relative_error(const Matrix& got, const Matrix& want);

// Trust-region subproblem by brute force: best of a dense boundary sample,
// refined by projected gradient on the sphere of radius delta, and the
// interior Newton point when it is feasible.
struct TrOracle {
  double value = 0.0;
  Vector xi;
};
TrOracle tr_brute_force(const Matrix& b, const Vector& g, double delta, int boundary_points,
                        unsigned seed);

// min ||Y^T q||_1 s.t. r^T q = 1 by enumerating every vertex: each is fixed
// by n - 1 columns with y_k^T q = 0 together with the equality constraint.
struct LpOracle {
  double value = 0.0;
  Vector q;
};
std::optional<LpOracle> lp_vertex_enumeration(const Matrix& y, const Vector& r);

// Gradient and Hessian of g(w) = f(q(w)) by the chain rule through the
// chart Jacobian, from the Euclidean derivatives of f at q(w).
struct ChainRule {
  Vector grad;
  Matrix hess;
};
ChainRule chart_chain_rule(const Vector& w, const Vector& grad_f, const Matrix& hess_f);

// Kolmogorov-Smirnov statistic of samples against a continuous CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace oracles
