#include "sfopt/carath/qr_update.hpp"

#include <cmath>

namespace sfopt {

QRUpdate::QRUpdate(const Matrix& a) { reset(a); }

void QRUpdate::reset(const Matrix& a) {
  if (a.cols() > a.rows()) throw Error(ErrorCode::kInvalidArgument, "QRUpdate: more columns than rows");
  if (!a.allFinite()) throw Error(ErrorCode::kNonFinite, "QRUpdate: non-finite matrix");
  Eigen::HouseholderQR<Matrix> qr(a);
  q_ = qr.householderQ() * Matrix::Identity(a.rows(), a.rows());
  r_ = qr.matrixQR().triangularView<Eigen::Upper>();
  r_.conservativeResize(a.rows(), a.cols());
  updates_ = 0;
}

void QRUpdate::rotate(int i, int from, double a, double b) {
  // G = [c s; -s c] zeroes b against a
  const double h = std::hypot(a, b);
  if (h == 0.0) return;
  const double c = a / h;
  const double s = b / h;
  for (int j = from; j < r_.cols(); ++j) {
    const double x = r_(i, j);
    const double y = r_(i + 1, j);
    r_(i, j) = c * x + s * y;
    r_(i + 1, j) = -s * x + c * y;
  }
  for (int j = 0; j < q_.rows(); ++j) {
    const double x = q_(j, i);
    const double y = q_(j, i + 1);
    q_(j, i) = c * x + s * y;
    q_(j, i + 1) = -s * x + c * y;
  }
}

void QRUpdate::insert_column(int pos, const Vector& col) {
  const int k = cols();
  if (pos < 0 || pos > k) throw Error(ErrorCode::kInvalidArgument, "QRUpdate: insert position out of range");
  if (k + 1 > rows()) throw Error(ErrorCode::kInvalidArgument, "QRUpdate: matrix is already square");
  if (col.size() != rows()) throw Error(ErrorCode::kInvalidArgument, "QRUpdate: column has wrong length");
  if (!col.allFinite()) throw Error(ErrorCode::kNonFinite, "QRUpdate: non-finite column");
  r_.conservativeResize(Eigen::NoChange, k + 1);
  for (int j = k; j > pos; --j) r_.col(j) = r_.col(j - 1);
  r_.col(pos).noalias() = q_.transpose() * col;
  for (int i = rows() - 2; i >= pos; --i) {
    const double b = r_(i + 1, pos);
    if (b == 0.0) continue;
    rotate(i, pos, r_(i, pos), b);
    r_(i + 1, pos) = 0.0;
  }
  ++updates_;
}

void QRUpdate::delete_column(int pos) {
  const int k = cols();
  if (pos < 0 || pos >= k) throw Error(ErrorCode::kInvalidArgument, "QRUpdate: delete position out of range");
  for (int j = pos; j + 1 < k; ++j) r_.col(j) = r_.col(j + 1);
  r_.conservativeResize(Eigen::NoChange, k - 1);
  // columns pos.. now carry one subdiagonal entry each
  for (int j = pos; j < k - 1; ++j) {
    const double b = r_(j + 1, j);
    if (b == 0.0) continue;
    rotate(j, j, r_(j, j), b);
    r_(j + 1, j) = 0.0;
  }
  ++updates_;
}

int QRUpdate::first_small_diagonal(double rel_tol) const {
  const double thresh = rel_tol * r_.norm();
  for (int j = 0; j < cols(); ++j) {
    if (!(std::abs(r_(j, j)) >= thresh) || r_(j, j) == 0.0) return j;
  }
  return -1;
}

bool QRUpdate::singular(double rel_tol) const { return first_small_diagonal(rel_tol) >= 0; }

Vector QRUpdate::solve(const Vector& rhs) const {
  if (rhs.size() != rows()) throw Error(ErrorCode::kInvalidArgument, "QRUpdate: rhs has wrong length");
  if (singular()) throw Error(ErrorCode::kDegenerateSystem, "singular R");
  const int k = cols();
  const Vector y = (q_.leftCols(k).transpose() * rhs);
  return r_.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(y);
}

}  // namespace sfopt
