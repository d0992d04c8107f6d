// Dense QR factorization A = Q R (A is rows x k, k <= rows) kept current under
// column insertion and deletion with Givens rotations.
#pragma once

#include "sfopt/core.hpp"

namespace sfopt {

class QRUpdate {
 public:
  QRUpdate() = default;
  /// Fresh Householder factorization of `a`. Requires cols <= rows.
  explicit QRUpdate(const Matrix& a);

  void reset(const Matrix& a);
  /// Inserts `col` so it becomes column `pos` (0 <= pos <= cols).
  void insert_column(int pos, const Vector& col);
  void append_column(const Vector& col) { insert_column(cols(), col); }
  void delete_column(int pos);

  /// Square case: solves A x = rhs. Tall case: least-squares solution.
  /// Throws kDegenerateSystem when R is singular (see singular()).
  Vector solve(const Vector& rhs) const;

  /// True when some |R_jj| < rel_tol * ||R||_F.
  bool singular(double rel_tol = 1e-12) const;
  /// Index of the first diagonal below rel_tol * ||R||_F, or -1.
  int first_small_diagonal(double rel_tol = 1e-12) const;

  int rows() const { return static_cast<int>(q_.rows()); }
  int cols() const { return static_cast<int>(r_.cols()); }
  const Matrix& Q() const { return q_; }
  /// rows x cols upper triangular.
  const Matrix& R() const { return r_; }
  Matrix reconstruct() const { return q_ * r_; }
  /// Updates applied since the last reset.
  int updates() const { return updates_; }

 private:
  // Rotation on rows (i, i+1) of R from column `from`, folded into Q.
  void rotate(int i, int from, double a, double b);

  Matrix q_;
  Matrix r_;
  int updates_ = 0;
};

}  // namespace sfopt
