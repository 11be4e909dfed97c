#include "sdct/recovery.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "sdct/error.hpp"
#include "sdct/rng.hpp"

namespace sdct {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Matrix whitening_matrix(const Matrix& y, double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    fail(ErrorCode::invalid_parameter, "preconditioning rate theta must be positive");
  if (y.cols() == 0) fail(ErrorCode::empty_data, "data matrix has no columns");
  // Singular values of Y from the triangular factor of Y^T; the Gram
  // eigenvalues would square the rounding error and hide rank deficiency.
  if (y.cols() >= y.rows()) {
    Eigen::HouseholderQR<Matrix> qr(y.transpose());
    const Matrix r = qr.matrixQR().topRows(y.rows()).triangularView<Eigen::Upper>();
    const Vector sv = Eigen::JacobiSVD<Matrix>(r).singularValues();
    if (!(sv(sv.size() - 1) > 1e-12 * sv(0)))
      fail(ErrorCode::singular_gram, "data matrix is numerically rank deficient");
  } else {
    fail(ErrorCode::singular_gram, "fewer samples than dimensions");
  }
  const double scale = 1.0 / (static_cast<double>(y.cols()) * theta);
  Matrix gram = Matrix::Zero(y.rows(), y.rows());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(y, scale);
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  return inverse_sqrt_spd(gram);
}

}  // namespace

Matrix inverse_sqrt_spd(const Matrix& gram) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success)
    fail(ErrorCode::numeric_failure, "eigendecomposition of the Gram matrix failed");
  const Vector& lam = eig.eigenvalues();
  const double lmax = lam(lam.size() - 1);
  // sigma_min > 1e-12 sigma_max on the data, i.e. 1e-24 on the Gram.
  if (!(lam(0) > 0.0) || std::sqrt(lam(0)) <= 1e-12 * std::sqrt(lmax))
    fail(ErrorCode::singular_gram, "data Gram matrix is numerically singular");
  const Matrix& v = eig.eigenvectors();
  return v * lam.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
}

DataMatrix precondition(const DataMatrix& y, double theta) {
  DataMatrix out(whitening_matrix(y.entries, theta) * y.entries);
  out.dictionary = y.dictionary;
  out.coefficients = y.coefficients;
  return out;
}

Matrix complement_basis(const std::vector<SpherePoint>& directions, Eigen::Index n) {
  const auto l = static_cast<Eigen::Index>(directions.size());
  if (l == 0) return Matrix::Identity(n, n);
  if (l > n) fail(ErrorCode::invalid_dimension, "more directions than the ambient dimension");
  Matrix stacked(n, l);
  for (Eigen::Index i = 0; i < l; ++i) {
    if (directions[static_cast<std::size_t>(i)].dim() != n)
      fail(ErrorCode::invalid_shape, "direction has wrong dimension");
    stacked.col(i) = directions[static_cast<std::size_t>(i)].vector();
  }
  Eigen::HouseholderQR<Matrix> qr(stacked);
  const Matrix q = qr.householderQ();
  return q.rightCols(n - l);
}

RowRecovery recover_rows(const DataMatrix& yhat, SmoothingParams mu, const TrmConfig& cfg,
                         std::uint64_t seed) {
  const Eigen::Index n = yhat.dim();
  const Matrix& data = yhat.entries;
  RowRecovery out;
  for (Eigen::Index l = 0; l < n; ++l) {
    const auto start = std::chrono::steady_clock::now();
    RowStage stage;
    stage.dimension = static_cast<int>(n - l);
    const Matrix u = complement_basis(out.rows, n);

    if (n - l == 1) {
      stage.r = u.col(0);
    } else {
      const Matrix reduced = u.transpose() * data;
      const SpherePoint z0 = SpherePoint::random(static_cast<int>(n - l),
                                                 derive_seed(seed, {static_cast<std::uint64_t>(l)}));
      const TrmResult trm = minimize(reduced, mu, cfg, z0);
      stage.trm_iterations = static_cast<int>(trm.iterates.size());
      stage.termination = trm.termination;
      if (trm.termination == Termination::subproblem_failure) {
        out.error = "row " + std::to_string(l) + ": " + trm.message;
        stage.seconds = seconds_since(start);
        out.stages.push_back(stage);
        return out;
      }
      stage.r = u * trm.q_final.vector();
    }

    try {
      const RoundingSolution lp = solve_rounding_lp(RoundingProblem(data, stage.r));
      stage.lp_pivots = lp.pivots;
      out.rows.push_back(lp.q);
    } catch (const Error& e) {
      out.error = "row " + std::to_string(l) + ": " + e.what();
      stage.seconds = seconds_since(start);
      out.stages.push_back(stage);
      return out;
    }
    stage.seconds = seconds_since(start);
    out.stages.push_back(stage);
  }
  return out;
}

std::vector<int> hungarian(const Matrix& cost) {
  const auto n = static_cast<int>(cost.rows());
  if (cost.cols() != n) fail(ErrorCode::invalid_shape, "assignment cost must be square");
  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials formulation; column 0 is a sentinel.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) assignment[static_cast<std::size_t>(match[j] - 1)] = j - 1;
  return assignment;
}

Matching match_error(const Matrix& a_hat, const Matrix& a0) {
  if (a_hat.rows() != a0.rows() || a_hat.cols() != a0.cols() || a0.rows() != a0.cols())
    fail(ErrorCode::invalid_shape, "dictionaries must be square and of equal size");
  const Matrix b = a_hat.colwise().normalized();
  const Matrix t = a0.colwise().normalized();
  const Matrix corr = t.transpose() * b;  // corr(j, i) = <a0_j, ahat_i>
  const Matrix cost = Matrix::Ones(corr.rows(), corr.cols()) - corr.cwiseAbs();

  Matching out;
  out.perm = hungarian(cost);
  out.signs.resize(a0.cols());
  for (Eigen::Index j = 0; j < a0.cols(); ++j) {
    const int i = out.perm[static_cast<std::size_t>(j)];
    const double s = corr(j, i) >= 0.0 ? 1.0 : -1.0;
    out.signs(j) = s;
    const double chord = (s * b.col(i) - t.col(j)).norm();
    out.error = std::max(out.error, 2.0 * std::asin(std::min(1.0, 0.5 * chord)));
  }
  return out;
}

RecoveryResult reconstruct(const DataMatrix& y, const std::vector<SpherePoint>& rows,
                           const DataMatrix& yhat) {
  const Eigen::Index n = yhat.dim();
  if (static_cast<Eigen::Index>(rows.size()) != n)
    fail(ErrorCode::invalid_dimension, "reconstruction needs n recovered rows");
  if (y.samples() != yhat.samples()) fail(ErrorCode::invalid_shape, "Y and Yhat sample counts differ");

  Matrix q(n, n);
  for (Eigen::Index i = 0; i < n; ++i) q.col(i) = rows[static_cast<std::size_t>(i)].vector();

  RecoveryResult out;
  out.rows = rows;
  out.x_hat = q.transpose() * yhat.entries;
  Matrix gram = Matrix::Zero(n, n);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(out.x_hat);
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const Vector& lam = eig.eigenvalues();
  if (eig.info() != Eigen::Success || !(lam(0) > 1e-14 * lam(n - 1)))
    fail(ErrorCode::rank_deficiency, "recovered coefficient rows are linearly dependent");

  const Matrix cross = out.x_hat * y.entries.transpose();  // X Y^T
  const Matrix a = gram.ldlt().solve(cross).transpose();    // Y X^T (X X^T)^{-1}
  out.a_hat = DictionaryMatrix{a, DictionaryKind::complete, 1.0};
  if (a.rows() == a.cols()) out.a_hat.kappa = out.a_hat.measured_condition();
  const double ynorm = y.entries.norm();
  out.residual = ynorm > 0.0 ? (y.entries - a * out.x_hat).norm() / ynorm : 0.0;
  if (y.dictionary && y.dictionary->entries.rows() == a.rows() && a.rows() == a.cols())
    out.matching = match_error(a, y.dictionary->entries);
  return out;
}

std::vector<Vector> target_directions(const Matrix& mixing) {
  const Eigen::FullPivLU<Matrix> lu(mixing);
  if (!lu.isInvertible()) fail(ErrorCode::rank_deficiency, "mixing matrix is singular");
  const Matrix t = lu.inverse().transpose();
  std::vector<Vector> out;
  for (Eigen::Index i = 0; i < t.cols(); ++i) out.push_back(t.col(i).normalized());
  return out;
}

double estimate_theta_pilot(const DataMatrix& y, SmoothingParams mu, const TrmConfig& cfg,
                            std::uint64_t seed) {
  const Matrix whitened = whitening_matrix(y.entries, 1.0) * y.entries;
  const SpherePoint q0 = SpherePoint::random(static_cast<int>(y.dim()), derive_seed(seed, {0x9110}));
  const TrmResult trm = minimize(whitened, mu, cfg, q0);
  const RoundingSolution lp = solve_rounding_lp(RoundingProblem(whitened, trm.q_final.vector()));
  const Eigen::RowVectorXd row = lp.q.vector().transpose() * whitened;
  const double peak = row.cwiseAbs().maxCoeff();
  Eigen::Index nonzero = 0;
  for (Eigen::Index k = 0; k < row.size(); ++k)
    if (std::abs(row(k)) > 1e-9 * peak) ++nonzero;
  const double theta = static_cast<double>(nonzero) / static_cast<double>(row.size());
  return std::clamp(theta, 1.0 / static_cast<double>(row.size()), 1.0);
}

PipelineReport run_pipeline(const DataMatrix& y, const PipelineConfig& cfg) {
  const SmoothingParams mu(cfg.mu);
  PipelineReport report;

  auto start = std::chrono::steady_clock::now();
  DataMatrix yhat = y;
  Matrix whitening = Matrix::Identity(y.dim(), y.dim());
  if (cfg.precondition) {
    report.theta_used = cfg.theta_source == ThetaSource::pilot
                            ? estimate_theta_pilot(y, mu, cfg.trm, cfg.seed)
                            : cfg.theta;
    whitening = whitening_matrix(y.entries, report.theta_used);
    yhat.entries = whitening * y.entries;
  }
  report.seconds_precondition = seconds_since(start);

  start = std::chrono::steady_clock::now();
  report.recovery = recover_rows(yhat, mu, cfg.trm, derive_seed(cfg.seed, {0xDEF1}));
  report.seconds_rows = seconds_since(start);

  if (y.dictionary) {
    const auto targets = target_directions(whitening * y.dictionary->entries);
    for (const auto& row : report.recovery.rows) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& t : targets)
        best = std::min({best, (row.vector() - t).norm(), (row.vector() + t).norm()});
      report.row_re.push_back(best);
    }
  }

  if (report.recovery.complete(y.dim())) {
    start = std::chrono::steady_clock::now();
    try {
      report.result = reconstruct(y, report.recovery.rows, yhat);
    } catch (const Error& e) {
      report.recovery.error = e.what();
    }
    report.seconds_reconstruct = seconds_since(start);
  }
  return report;
}

}  // namespace sdct
