#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdct/lp_rounding.hpp"
#include "sdct/trm.hpp"

namespace sdct {

/// Ybar = ((1 / (p theta)) Y Y^T)^{-1/2} Y via a symmetric eigendecomposition.
DataMatrix precondition(const DataMatrix& y, double theta);
Matrix inverse_sqrt_spd(const Matrix& gram);

/// Stage record for one deflation step.
struct RowStage {
  int dimension = 0;  // sphere dimension the TRM ran in (n - l)
  int trm_iterations = 0;
  Termination termination = Termination::progress_tol;
  Vector r;           // LP normal U z_hat
  int lp_pivots = 0;
  double seconds = 0.0;
};

struct RowRecovery {
  std::vector<SpherePoint> rows;
  std::vector<RowStage> stages;
  std::optional<std::string> error;  // set when a stage failed; rows are partial

  bool complete(Eigen::Index n) const { return !error && static_cast<Eigen::Index>(rows.size()) == n; }
};

/// Orthonormal basis of span(directions)^perp after Gram-Schmidt on the
/// directions: trailing columns of the Householder Q of the stacked set.
Matrix complement_basis(const std::vector<SpherePoint>& directions, Eigen::Index n);

/// Recovers all n row directions by deflation: TRM on U^T Yhat in dimension
/// n - l from a seeded uniform start, then LP rounding in full dimension
/// with r = U z_hat. The last direction is the one-dimensional complement.
RowRecovery recover_rows(const DataMatrix& yhat, SmoothingParams mu, const TrmConfig& cfg,
                         std::uint64_t seed);

struct Matching {
  double error = 0.0;      // max column angle after the best signed matching
  std::vector<int> perm;   // perm[j]: column of A_hat matched to column j of A0
  Vector signs;            // +-1 per column of A0
};

/// Minimum-cost assignment on a square cost matrix (Hungarian method).
/// Returns assignment[row] = column.
std::vector<int> hungarian(const Matrix& cost);

/// Compares dictionaries up to column permutation, sign and scale.
Matching match_error(const Matrix& a_hat, const Matrix& a0);

struct RecoveryResult {
  DictionaryMatrix a_hat;
  Matrix x_hat;
  std::vector<SpherePoint> rows;
  std::optional<Matching> matching;
  double residual = 0.0;  // ||Y - A_hat X_hat||_F / ||Y||_F
};

/// X_hat rows are q_i^T Yhat; A_hat = Y X_hat^T (X_hat X_hat^T)^{-1}.
RecoveryResult reconstruct(const DataMatrix& y, const std::vector<SpherePoint>& rows,
                           const DataMatrix& yhat);

enum class ThetaSource { known, pilot };

struct PipelineConfig {
  double mu = 1e-2;
  TrmConfig trm;
  bool precondition = true;
  double theta = 0.1;
  ThetaSource theta_source = ThetaSource::known;
  std::uint64_t seed = 0;
};

struct PipelineReport {
  RowRecovery recovery;
  std::optional<RecoveryResult> result;
  std::vector<double> row_re;  // distance of each recovered row to its nearest target
  double theta_used = 0.0;
  double seconds_precondition = 0.0;
  double seconds_rows = 0.0;
  double seconds_reconstruct = 0.0;
};

/// Support density of a pilot row: whiten with theta = 1, run one TRM and
/// one rounding, and count the nonzeros of q^T Ybar.
double estimate_theta_pilot(const DataMatrix& y, SmoothingParams mu, const TrmConfig& cfg,
                            std::uint64_t seed);

/// Steps 1-4 end to end. When the data is synthetic the report also carries
/// the matching against the true dictionary and per-row distances to the
/// exact targets.
PipelineReport run_pipeline(const DataMatrix& y, const PipelineConfig& cfg);

/// Unit-norm target directions q with q^T Yhat proportional to a row of X0,
/// for data Yhat = M X0 (columns of M^{-T}, normalized).
std::vector<Vector> target_directions(const Matrix& mixing);

/// sign(x) max(|x| - lambda, 0)
double soft_threshold(double x, double lambda);

struct AdmResult {
  DictionaryMatrix a;
  Matrix x;
  std::vector<double> objective_trace;  // after every half step
  double max_orthogonality_residual = 0.0;  // over all A iterates
};

/// Alternating minimization of lambda ||X||_1 + 1/2 ||A X - Y||_F^2 over
/// orthogonal A from a seeded random orthogonal start.
AdmResult adm_orthogonal(const DataMatrix& y, double lambda, int iters, std::uint64_t seed);
double adm_objective(const Matrix& y, const Matrix& a, const Matrix& x, double lambda);

}  // namespace sdct
