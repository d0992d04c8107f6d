// Plug-in electric vehicle charging blocks.
//
// A block point is a binary schedule u in {0,1}^N. Charge is monotone in the
// schedule, so the running-maximum cap reduces to a bound on the number of
// charging steps: L_min <= sum u <= L_max.
#pragma once

#include "sfopt/core.hpp"

namespace sfopt::apps {

struct PEVParams {
  int N = 1;
  double Delta = 0.25;  // interval length
  double P = 1.0;       // charging rate
  double xi = 1.0;      // conversion efficiency
  double E_init = 0.0;
  double E_ref = 0.0;
  double E_max = 0.0;
  Vector price;  // C^u, length N

  void validate() const;
  /// Energy added per charging step, P * Delta * xi.
  double step_energy() const { return P * Delta * xi; }
  /// Fewest charging steps reaching E_ref.
  int min_steps() const;
  /// Most charging steps staying below E_max, capped at N.
  int max_steps() const;
};

ExtReal pev_value(const PEVParams& p, const Vector& u);

/// sup_u y'u - f(u): greedy on gains y_k - P C_k, sorted descending with ties
/// to the lower index; positive gains taken up to L_max, then forced up to L_min.
/// Throws kInfeasibleBlock when L_min > L_max.
ConjugatePoint pev_conjugate(const PEVParams& p, const Vector& y);

/// Same greedy on gains -c.
Vector pev_linmin(const PEVParams& p, const Vector& c);

double pev_gamma(const PEVParams& p);

class PEVOracle final : public BlockOracle {
 public:
  explicit PEVOracle(PEVParams params);

  int dim() const override { return params_.N; }
  ExtReal value(const Vector& x) const override;
  ConjugatePoint conjugate(const Vector& y) const override;
  Vector linmin(const Vector& c) const override;
  std::optional<double> gamma_bound() const override { return gamma_; }
  std::string app() const override { return "pev"; }
  Json params() const override;

  const PEVParams& parameters() const { return params_; }
  static PEVParams params_from_json(const Json& j);

 private:
  PEVParams params_;
  double gamma_;
};

/// Generator defaults; every field is a config key pev.<name>.
struct PEVGenConfig {
  double P_lo = 3.0, P_hi = 5.0;
  double xi = 0.9;
  double Delta = 0.25;
  double E_init_lo = 2.0, E_init_hi = 8.0;
  double E_ref_lo = 8.0, E_ref_hi = 12.0;
  double E_max_slack_lo = 0.0, E_max_slack_hi = 2.0;  // E_max = E_ref + U(lo, hi)
  double price_base = 0.20, price_swing = 0.08;       // C_k = base + swing cos(2 pi (k + 1/2) / N)
  double limit_ratio = 0.6;                           // P^max = ratio * sum_i P_i

  static PEVGenConfig from_json(const Json& j);
};

/// Fleet of n vehicles over N steps; A_i = P_i I, b = P^max, theta_unit = N max_i P_i 1.
ProblemInstance pev_generate(int n, int N, std::uint64_t seed, const PEVGenConfig& cfg = {});

}  // namespace sfopt::apps
