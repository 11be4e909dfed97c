#pragma once

#include "sdct/objective.hpp"

namespace sdct {

/// min_q ||q^T Yhat||_1  s.t.  <r, q> = 1
struct RoundingProblem {
  const Matrix* yhat = nullptr;
  Vector r;  // stored with unit norm

  RoundingProblem(const Matrix& data, Vector normal);
};

struct RoundingSolution {
  Vector q_raw;          // LP optimizer, <r, q_raw> = 1
  SpherePoint q;         // q_raw normalized
  double objective = 0;  // ||q_raw^T Yhat||_1
  double dual_objective = 0;
  Vector dual_u;         // dual certificate u in [-1, 1]^p with Yhat u = lambda r
  int pivots = 0;
  int bound_flips = 0;
};

/// Solves the rounding LP through its dual
///     max lambda  s.t.  Yhat u = lambda r,  -1 <= u <= 1
/// with a dense two-phase bounded-variable simplex using Bland's rule. The
/// dual has n rows instead of 2p + 1, so the tableau stays n x (p + n + 2).
/// The primal optimizer is the simplex multiplier vector of the final basis.
RoundingSolution solve_rounding_lp(const RoundingProblem& prob);

/// Normalized LP optimizer.
SpherePoint lp_round(const RoundingProblem& prob);

}  // namespace sdct
