// Approximate Caratheodory: few-atom convex combinations close to a target,
// via fully corrective Frank-Wolfe or Wolfe's min-norm-point method.
#pragma once

#include <string>
#include <vector>

#include "sfopt/carath/columns.hpp"
#include "sfopt/carath/simplex.hpp"

namespace sfopt {

struct ApproxResult {
  std::vector<int> idx;  // column indices with positive weight, ascending
  Vector beta;           // simplex weights aligned with idx
  double residual = 0.0; // ||sum beta_l col_l - target||
  std::vector<double> residual_history;  // entry t after t iterations, t = 0..
  std::vector<double> time_history;      // seconds since the call, per history entry
  int iterations = 0;    // FCFW iterations or MNP major cycles
  int minor_cycles = 0;  // MNP only
  bool inner_stalled = false;
  std::string stop_reason;  // "max_iter" | "optimal" | "no_progress" | "cycling"
};

struct FCFWConfig {
  SimplexLSConfig inner;
  double gap_tol = 1e-14;  // stop when (w - t)'(w - s) <= gap_tol * (1 + ||t||^2)
};

struct MNPConfig {
  double tol = 1e-12;      // stop when w'(w - s) <= tol ||w||^2 (shifted coordinates)
  double refactor_tol = 1e-12;
  int cycle_factor = 10;   // abort after cycle_factor * T minor cycles
};

/// Column closest to the target; ties go to the lowest index.
int closest_column(const ColumnSet& cols, const Vector& target);

ApproxResult fcfw(const ColumnSet& cols, const Vector& target, int T, const FCFWConfig& cfg = {});
ApproxResult mnp(const ColumnSet& cols, const Vector& target, int T, const MNPConfig& cfg = {});

}  // namespace sfopt
