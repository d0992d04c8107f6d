// Exact conic Caratheodory reduction: w* = sum_j lam_j w_j with N columns in R^p
// rewritten with at most p columns and nonnegative weights.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sfopt/carath/columns.hpp"

namespace sfopt {

struct ExactConfig {
  std::uint64_t seed = 0;
  int max_redraws = 5;
  int refactor_every = 64;   // 0 disables periodic refactorization
  double singular_tol = 1e-12;
  double input_tol = 1e-8;   // W lam = w* check, relative to 1 + ||w*||
  double clamp_tol = 1e-12;  // weights below this are dropped from the output
  bool equilibrate = true;   // scale rows to unit max magnitude internally
  bool polish = true;        // least-squares refit on the final support
  bool debug = false;        // record the loop invariant residual every step
};

struct ConicOutput {
  Vector alpha;
  std::vector<int> kept;  // original column indices, ascending
  double residual = 0.0;  // ||sum alpha_l w_kept_l - w*||
  int steps = 0;
  int redraws = 0;
  int null_steps = 0;     // steps taken from a null vector of a singular factor
  int refactorizations = 0;
  std::vector<double> debug_residuals;  // invariant residual per step (debug)
};

ConicOutput exact_caratheodory(const ColumnSet& w, const Vector& lam, const Vector& w_star, const ExactConfig& cfg = {});
ConicOutput exact_caratheodory(const Matrix& w, const Vector& lam, const Vector& w_star, const ExactConfig& cfg = {});

/// "step,residual" lines for ConicOutput::debug_residuals.
std::string debug_residuals_csv(const ConicOutput& out);

}  // namespace sfopt
