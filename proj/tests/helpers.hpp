// Small instances and independent reference computations shared by the unit tests.
#pragma once

#include <memory>
#include <vector>

#include "sfopt/apps/quadbox.hpp"
#include "sfopt/core.hpp"

namespace testutil {

using sfopt::Matrix;
using sfopt::Vector;

/// Single-block quadratic box instance.
inline sfopt::ProblemInstance one_block_quadbox(const Vector& q, const Vector& c, const Vector& lo, const Vector& hi,
                                                const Matrix& A, const Vector& b) {
  sfopt::apps::QuadBoxParams p{q, c, lo, hi};
  sfopt::ProblemInstance inst;
  inst.n = 1;
  inst.m = static_cast<int>(A.rows());
  inst.b = b;
  inst.blocks.push_back({A, std::make_shared<sfopt::apps::QuadBoxOracle>(p)});
  inst.validate();
  return inst;
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}

inline Matrix random_matrix(sfopt::Rng& rng, int r, int c, double lo = -1.0, double hi = 1.0) {
  Matrix a(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) a(i, j) = rng.uniform(lo, hi);
  return a;
}

inline Vector random_vector(sfopt::Rng& rng, int n, double lo = -1.0, double hi = 1.0) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

}  // namespace testutil
