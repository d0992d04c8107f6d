// Lagrangian dual  max_{lambda >= 0} Psi(lambda)  via projected subgradient ascent.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfopt/core.hpp"

namespace sfopt {

struct PsiEval {
  double psi = 0.0;
  Vector subgrad;                   // sum_i A_i x_i(lambda) - b
  std::vector<Vector> minimizers;   // x_i(lambda)
};

/// Psi(lambda) with block minimizers taken from the conjugate oracle at -A_i' lambda.
/// Blocks run on up to `threads` workers; the reduction is in block order.
PsiEval eval_psi(const ProblemInstance& inst, const Vector& lambda, int threads = 1);

struct DualConfig {
  int max_iter = 5000;
  /// "dog": distance-over-gradients step, no tuning.
  /// "sqrt": step0 / sqrt(t + 1) with step0 defaulting to 1 / (1 + ||b||).
  std::string step_rule = "dog";
  std::optional<double> step0;
  double stop_tol = 1e-6;
  int patience = 200;
  /// When set, the ascent is skipped and this value is reported as v*.
  std::optional<double> v_star;
  int threads = 1;

  void validate() const;
};

struct DualResult {
  double v_star = 0.0;
  Vector lambda;                    // maximizer estimate (running best)
  int iterations = 0;
  std::vector<double> psi_history;  // running best, nondecreasing
  std::string stop_reason;          // "patience" | "max_iter" | "stationary" | "supplied"
};

DualResult solve_dual(const ProblemInstance& inst, const DualConfig& cfg);

}  // namespace sfopt
