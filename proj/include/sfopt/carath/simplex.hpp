// Probability-simplex projection and simplex-constrained least squares.
#pragma once

#include "sfopt/core.hpp"

namespace sfopt {

/// Euclidean projection onto {x >= 0, sum x = 1}, by sorting and thresholding.
Vector project_simplex(const Vector& v);

struct SimplexLSConfig {
  double tol = 1e-10;   // gradient-mapping norm at which iteration stops
  int max_iter = 5000;
  int power_iters = 20;
  bool polish = true;   // equality-constrained refit on the detected support
};

struct SimplexLSResult {
  Vector beta;
  double objective = 0.0;  // 1/2 ||S beta - target||^2
  double kkt_residual = 0.0;
  int iterations = 0;
  bool stalled = false;    // max_iter reached without meeting tol
};

/// min 1/2 ||S beta - target||^2 over the simplex, given the Gram data
/// G = S'S, h = S'target and c0 = 1/2 ||target||^2. `warm` may be empty.
SimplexLSResult simplex_ls_gram(const Matrix& G, const Vector& h, double c0, const Vector& warm,
                                const SimplexLSConfig& cfg = {});

SimplexLSResult simplex_ls(const Matrix& S, const Vector& target, const SimplexLSConfig& cfg = {});

}  // namespace sfopt
