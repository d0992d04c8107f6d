// Unit commitment blocks: binary on/off with quadratic production cost.
//
// A block point is x = (u_1..u_N, g_1..g_N). Demand  sum_i g^i_t >= D_t  is
// written in <= form as  -sum_i g^i_t <= -D_t, so A_i = [0 | -I_N], b = -D.
#pragma once

#include "sfopt/core.hpp"

namespace sfopt::apps {

struct UCParams {
  int N = 1;
  double c01 = 0.0;  // start-up cost
  double c10 = 0.0;  // shut-down cost
  double beta = 1.0;
  double gamma_c = 0.0;
  double omega = 0.0;
  double g_min = 0.0;
  double g_max = 1.0;

  void validate() const;
};

/// Per-step production term  beta g^2 + gamma g + omega.
double uc_production_cost(const UCParams& p, double g);

/// f(u, g); +inf outside the domain.
ExtReal uc_value(const UCParams& p, const Vector& x);

/// f*(v, p) by forward recursion over (step, on/off) with backtracking.
/// Ties prefer keeping the previous state; at the final step, off wins ties.
ConjugatePoint uc_conjugate(const UCParams& params, const Vector& v, const Vector& p);

/// Minimizes c_u'u + c_g'g over conv X, per step over (0,0), (1,g_min), (1,g_max).
/// Ties resolve to (0,0), then (1,g_min).
Vector uc_linmin(const UCParams& params, const Vector& c_u, const Vector& c_g);

/// sup f - inf f over the domain, by max/min recursions.
double uc_gamma(const UCParams& params);

/// Rounds fractional steps of a point in conv X up to (1, clamp(g, g_min, g_max)).
Vector uc_repair(const UCParams& params, const Vector& x);

class UCOracle final : public BlockOracle {
 public:
  explicit UCOracle(UCParams params);

  int dim() const override { return 2 * params_.N; }
  ExtReal value(const Vector& x) const override;
  ConjugatePoint conjugate(const Vector& y) const override;
  Vector linmin(const Vector& c) const override;
  bool has_repair() const override { return true; }
  std::optional<Vector> repair(const Vector& x) const override;
  std::optional<double> gamma_bound() const override { return gamma_; }
  std::string app() const override { return "uc"; }
  Json params() const override;

  const UCParams& parameters() const { return params_; }
  static UCParams params_from_json(const Json& j);

 private:
  UCParams params_;
  double gamma_;
};

/// Generator ranges; every field is exposed as a config key uc.<name>.
struct UCGenConfig {
  double demand_lo = 100.0, demand_hi = 300.0;
  double cap_lo = 100.0, cap_hi = 300.0;  // p^i ~ U(cap_lo, cap_hi) / n
  double gmax_factor = 2.0, gmin_factor = 0.5;
  double beta_lo = 1.0, beta_hi = 20.0;
  double gamma_lo = 3.0, gamma_hi = 5.0;
  double omega_lo = 30.0, omega_hi = 50.0;
  double shutdown_ratio = 0.25;  // c10 = ratio * c01

  static UCGenConfig from_json(const Json& j);
};

/// Random fleet of n units over N steps; m = N. theta_unit = max_i g_max^i * 1.
ProblemInstance uc_generate(int n, int N, std::uint64_t seed, const UCGenConfig& cfg = {});

}  // namespace sfopt::apps
