// Read-only column access shared by the Caratheodory solvers, so lifted atom
// sets never need to be materialized as a dense matrix.
#pragma once

#include <vector>

#include "sfopt/core.hpp"

namespace sfopt {

class ColumnSet {
 public:
  virtual ~ColumnSet() = default;
  virtual int rows() const = 0;
  virtual int cols() const = 0;
  virtual Vector column(int j) const = 0;
  virtual double dot(int j, const Vector& d) const { return column(j).dot(d); }
  /// y += a * column(j)
  virtual void axpy(int j, double a, Vector& y) const { y += a * column(j); }
  /// out_j = column(j)' d for every column.
  virtual void dot_all(const Vector& d, Vector& out) const;

  /// sum_j w_j column(j)
  Vector combine(const std::vector<int>& idx, const Vector& w) const;
  Vector combine_all(const Vector& w) const;
};

class DenseColumns final : public ColumnSet {
 public:
  explicit DenseColumns(Matrix w) : w_(std::move(w)) {}
  int rows() const override { return static_cast<int>(w_.rows()); }
  int cols() const override { return static_cast<int>(w_.cols()); }
  Vector column(int j) const override { return w_.col(j); }
  double dot(int j, const Vector& d) const override { return w_.col(j).dot(d); }
  void axpy(int j, double a, Vector& y) const override { y += a * w_.col(j); }
  void dot_all(const Vector& d, Vector& out) const override { out = w_.transpose() * d; }
  const Matrix& matrix() const { return w_; }

 private:
  Matrix w_;
};

/// Lifted atoms (cost, image, e_block) in dimension 1 + m + n, optionally
/// with every row multiplied by a fixed positive scale.
class LiftedColumns final : public ColumnSet {
 public:
  LiftedColumns(std::vector<const Atom*> atoms, int n, int m);

  int rows() const override { return 1 + m_ + n_; }
  int cols() const override { return static_cast<int>(atoms_.size()); }
  Vector column(int j) const override;
  double dot(int j, const Vector& d) const override;
  void axpy(int j, double a, Vector& y) const override;
  void dot_all(const Vector& d, Vector& out) const override;

  const Atom& atom(int j) const { return *atoms_[j]; }
  void set_row_scale(Vector scale);
  const Vector& row_scale() const { return scale_; }
  /// 1 / max_j |row entry|, or 1 for all-zero rows.
  Vector equilibrating_scale() const;

 private:
  std::vector<const Atom*> atoms_;
  int n_;
  int m_;
  Vector scale_;
};

}  // namespace sfopt
