#include <cmath>

#include "oracles.hpp"
#include "sdct/harness.hpp"
#include "sdct/lp_rounding.hpp"
#include "sdct/trm.hpp"
#include "test_common.hpp"

using namespace sdct;
using testutil::code_of;
using testutil::gaussian;

TEST(LpRound, IdentityDataReturnsNormal) {
  const Matrix y = Matrix::Identity(5, 5);
  const auto q = lp_round(RoundingProblem(y, Vector::Unit(5, 4)));
  EXPECT_LE((q.vector() - Vector::Unit(5, 4)).norm(), 1e-15);
}

TEST(LpRound, NormalIsStoredNormalized) {
  const Matrix y = Matrix::Identity(3, 3);
  const RoundingProblem prob(y, Vector{{0.0, 3.0, 4.0}});
  EXPECT_NEAR(prob.r.norm(), 1.0, 1e-15);
  const auto sol = solve_rounding_lp(prob);
  EXPECT_NEAR(prob.r.dot(sol.q_raw), 1.0, 1e-12);
}

TEST(LpRound, TwoByFourMatchesVertexEnumeration) {
  const Matrix y = gaussian(2, 4, 17);
  const Vector r = gaussian(2, 18).normalized();
  const auto sol = solve_rounding_lp(RoundingProblem(y, r));
  const auto oracle = oracles::lp_vertex_enumeration(y, r);
  ASSERT_TRUE(oracle);
  EXPECT_NEAR(sol.objective, oracle->value, 1e-10 * std::max(1.0, oracle->value));
}

TEST(LpRound, TinyInstancesMatchVertexEnumeration) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const int n = 1 + static_cast<int>(rng.below(5));
    const int p = std::max(n, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(12 - n))));
    if (n + p > 12) continue;
    Matrix y = gaussian(n, p, seed);
    if (seed % 3 == 0)  // sparse columns give many ties at the optimum
      for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
          if (rng.uniform() < 0.5) y(i, j) = 0.0;
    if (Eigen::FullPivLU<Matrix>(y).rank() < n) continue;
    const Vector r = gaussian(n, seed + 1000).normalized();
    const auto sol = solve_rounding_lp(RoundingProblem(y, r));
    const auto oracle = oracles::lp_vertex_enumeration(y, r);
    ASSERT_TRUE(oracle);
    EXPECT_NEAR(sol.objective, oracle->value, 1e-9 * std::max(1.0, oracle->value)) << "seed " << seed;
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

TEST(LpRound, CertificateSatisfiesComplementarySlackness) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 6;
    const auto x = sample_bg(n, 120, 0.3, seed);
    const Matrix& y = x.entries;
    if (Eigen::FullPivLU<Matrix>(y).rank() < n) continue;
    const Vector r = gaussian(n, seed + 7).normalized();
    const auto sol = solve_rounding_lp(RoundingProblem(y, r));
    EXPECT_NEAR(r.dot(sol.q_raw), 1.0, 1e-10);
    ASSERT_EQ(sol.dual_u.size(), y.cols());
    EXPECT_LE(sol.dual_u.cwiseAbs().maxCoeff(), 1.0 + 1e-12);
    EXPECT_LE((y * sol.dual_u - sol.dual_objective * r).norm(), 1e-9 * std::max(1.0, y.norm()));
    EXPECT_NEAR(sol.dual_objective, sol.objective, 1e-9 * sol.objective);
    const Vector z = y.transpose() * sol.q_raw;
    for (Eigen::Index k = 0; k < z.size(); ++k)
      if (std::abs(z(k)) > 1e-9) EXPECT_NEAR(sol.dual_u(k), z(k) > 0 ? 1.0 : -1.0, 1e-9);
  }
}

TEST(LpRound, DuplicateColumnsTerminate) {
  Matrix base = gaussian(4, 10, 3);
  Matrix y(4, 30);
  y << base, base, -base;
  const Vector r = gaussian(4, 4).normalized();
  const auto sol = solve_rounding_lp(RoundingProblem(y, r));
  const auto oracle = oracles::lp_vertex_enumeration(base, r);
  ASSERT_TRUE(oracle);
  EXPECT_NEAR(sol.objective, 3.0 * oracle->value, 1e-9 * sol.objective);
}

TEST(LpRound, RejectsBadInput) {
  const Matrix y = Matrix::Identity(3, 3);
  EXPECT_EQ(code_of([&] { RoundingProblem(y, Vector::Zero(3)); }), ErrorCode::invalid_input);
  EXPECT_EQ(code_of([&] { RoundingProblem(y, Vector::Ones(2)); }), ErrorCode::invalid_shape);
  const Matrix empty(3, 0);
  EXPECT_EQ(code_of([&] { RoundingProblem(empty, Vector::Ones(3)); }), ErrorCode::empty_data);
}

TEST(LpRound, RankDeficientDataStillOptimal) {
  // Rank-one data: the optimum 0 is attained on a whole plane of q.
  const Vector a{{1.0, 2.0, 0.5}};
  const Matrix y = a * gaussian(1, 6, 5);
  const auto sol = solve_rounding_lp(RoundingProblem(y, Vector::Unit(3, 2)));
  EXPECT_NEAR(sol.objective, 0.0, 1e-12);
  EXPECT_NEAR(sol.q_raw(2), 1.0, 1e-12);
  const auto zero = solve_rounding_lp(RoundingProblem(Matrix::Zero(3, 4), Vector::Unit(3, 2)));
  EXPECT_EQ(zero.objective, 0.0);
}

namespace {

// Index of the true row whose direction q_star = A0 e_i best matches q.
Eigen::Index nearest_row(const Matrix& a0, const Vector& q) {
  Eigen::Index i;
  (a0.transpose() * q).cwiseAbs().maxCoeff(&i);
  return i;
}

bool support_matches(const Matrix& yhat, const Vector& q, const CoefficientMatrix& x0, Eigen::Index row) {
  const Eigen::RowVectorXd z = q.transpose() * yhat;
  const double scale = z.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < z.size(); ++k)
    if ((std::abs(z(k)) > 1e-9 * scale) != x0.support(row, k)) return false;
  return true;
}

}  // namespace

TEST(LpRound, ExactifiesNearbyNormal) {
  const int n = 10;
  const auto a0 = make_orthogonal_dictionary(n, 3);
  int exact = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto x0 = sample_bg(n, 5 * n * n * n, 0.15, seed);
    const Matrix yhat = a0.entries * x0.entries;
    const Eigen::Index row = static_cast<Eigen::Index>(seed % n);
    const Vector target = a0.entries.col(row);
    // Perturb within the cone <r, q_star> = 0.996.
    Vector noise = gaussian(n, seed + 50);
    noise -= noise.dot(target) * target;
    const double c = 0.996;
    const Vector r = c * target + std::sqrt(1 - c * c) * noise.normalized();
    const auto q = lp_round(RoundingProblem(yhat, r));
    exact += support_matches(yhat, q.vector(), x0, row) && (q.vector() - target).norm() <= 1e-10;
  }
  EXPECT_GE(exact, 4);
}

TEST(LpRound, ExactifiesTrmOutput) {
  const int n = 10;
  const double mu = 0.01;
  const auto a0 = make_orthogonal_dictionary(n, 11);
  const auto x0 = sample_bg(n, 5 * n * n * n, 0.15, 11);
  const Matrix yhat = a0.entries * x0.entries;
  const auto trm = minimize(yhat, SmoothingParams(mu), TrmConfig{}, SpherePoint::random(n, 2));
  const Eigen::Index row = nearest_row(a0.entries, trm.q_final.vector());
  // RE measured in the coefficient frame A0^T q.
  ASSERT_LE(reconstruction_error(SpherePoint(a0.entries.transpose() * trm.q_final.vector())), mu);
  const auto q = lp_round(RoundingProblem(yhat, trm.q_final.vector()));
  EXPECT_TRUE(support_matches(yhat, q.vector(), x0, row));
  EXPECT_LE(std::min((q.vector() - a0.entries.col(row)).norm(), (q.vector() + a0.entries.col(row)).norm()), 1e-10);
}
