#include "sfopt/carath/columns.hpp"

#include <cmath>

namespace sfopt {

Vector ColumnSet::combine(const std::vector<int>& idx, const Vector& w) const {
  Vector out = Vector::Zero(rows());
  for (std::size_t l = 0; l < idx.size(); ++l) axpy(idx[l], w[static_cast<Eigen::Index>(l)], out);
  return out;
}

Vector ColumnSet::combine_all(const Vector& w) const {
  Vector out = Vector::Zero(rows());
  for (int j = 0; j < cols(); ++j) {
    if (w[j] != 0.0) axpy(j, w[j], out);
  }
  return out;
}

void ColumnSet::dot_all(const Vector& d, Vector& out) const {
  out.resize(cols());
  for (int j = 0; j < cols(); ++j) out[j] = dot(j, d);
}

LiftedColumns::LiftedColumns(std::vector<const Atom*> atoms, int n, int m)
    : atoms_(std::move(atoms)), n_(n), m_(m), scale_(Vector::Ones(1 + m + n)) {}

Vector LiftedColumns::column(int j) const {
  const Atom& a = *atoms_[j];
  Vector v = Vector::Zero(rows());
  v[0] = a.cost;
  v.segment(1, m_) = a.image;
  v[1 + m_ + a.block] = 1.0;
  return v.cwiseProduct(scale_);
}

double LiftedColumns::dot(int j, const Vector& d) const {
  const Atom& a = *atoms_[j];
  const int e = 1 + m_ + a.block;
  return scale_[0] * a.cost * d[0] + a.image.dot(scale_.segment(1, m_).cwiseProduct(d.segment(1, m_))) +
         scale_[e] * d[e];
}

void LiftedColumns::dot_all(const Vector& d, Vector& out) const {
  const Vector ds = d.cwiseProduct(scale_);
  out.resize(cols());
  for (int j = 0; j < cols(); ++j) {
    const Atom& a = *atoms_[j];
    out[j] = a.cost * ds[0] + a.image.dot(ds.segment(1, m_)) + ds[1 + m_ + a.block];
  }
}

void LiftedColumns::axpy(int j, double a, Vector& y) const {
  const Atom& at = *atoms_[j];
  const int e = 1 + m_ + at.block;
  y[0] += a * scale_[0] * at.cost;
  y.segment(1, m_) += a * scale_.segment(1, m_).cwiseProduct(at.image);
  y[e] += a * scale_[e];
}

void LiftedColumns::set_row_scale(Vector scale) {
  if (scale.size() != rows() || (scale.array() <= 0.0).any() || !scale.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "row scale must be positive with one entry per row");
  }
  scale_ = std::move(scale);
}

Vector LiftedColumns::equilibrating_scale() const {
  Vector mx = Vector::Zero(rows());
  for (const Atom* a : atoms_) {
    mx[0] = std::max(mx[0], std::abs(a->cost));
    mx.segment(1, m_) = mx.segment(1, m_).cwiseMax(a->image.cwiseAbs());
  }
  mx.tail(n_).setOnes();
  Vector s(rows());
  for (int r = 0; r < rows(); ++r) s[r] = mx[r] > 0.0 ? 1.0 / mx[r] : 1.0;
  return s;
}

}  // namespace sfopt
