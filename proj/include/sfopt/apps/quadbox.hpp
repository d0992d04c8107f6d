// Separable convex quadratics on a box: f(x) = sum_j q_j x_j^2 + c_j x_j, lo <= x <= hi.
#pragma once

#include "sfopt/core.hpp"

namespace sfopt::apps {

struct QuadBoxParams {
  Vector q;  // >= 0
  Vector c;
  Vector lo;
  Vector hi;

  int dim() const { return static_cast<int>(q.size()); }
  void validate() const;
};

class QuadBoxOracle final : public BlockOracle {
 public:
  explicit QuadBoxOracle(QuadBoxParams params);

  int dim() const override { return params_.dim(); }
  ExtReal value(const Vector& x) const override;
  ConjugatePoint conjugate(const Vector& y) const override;
  Vector linmin(const Vector& c) const override;
  bool has_repair() const override { return true; }
  std::optional<Vector> repair(const Vector& x) const override;  // clamp into the box
  std::optional<double> gamma_bound() const override { return gamma_; }
  std::string app() const override { return "quadratic-box"; }
  Json params() const override;

  const QuadBoxParams& parameters() const { return params_; }
  static QuadBoxParams params_from_json(const Json& j);

 private:
  QuadBoxParams params_;
  double gamma_;
};

struct QuadBoxGenConfig {
  int m = 3;
  double q_lo = 0.5, q_hi = 2.0;
  double c_lo = -1.0, c_hi = 1.0;
  double box_lo = -1.0, box_hi = 1.0;
  double a_lo = -1.0, a_hi = 1.0;

  static QuadBoxGenConfig from_json(const Json& j);
};

/// n blocks of dimension d with A_i ~ U(a_lo, a_hi) and b = sum_i A_i xhat_i
/// for a random xhat in the box, so the instance is feasible.
ProblemInstance quadbox_generate(int n, int d, std::uint64_t seed, const QuadBoxGenConfig& cfg = {});

}  // namespace sfopt::apps
