#include "sfopt/apps/uc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace sfopt::apps {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double membership_tol(const UCParams& p) { return 1e-9 * (1.0 + std::abs(p.g_max)); }

// max_{g in [g_min, g_max]} slope*g - (beta g^2 + gamma g + omega), closed form.
std::pair<double, double> best_production(const UCParams& p, double slope) {
  const double g = std::clamp((slope - p.gamma_c) / (2.0 * p.beta), p.g_min, p.g_max);
  return {slope * g - uc_production_cost(p, g), g};
}

// Extreme values of the production term over [g_min, g_max].
double production_max(const UCParams& p) {
  return std::max(uc_production_cost(p, p.g_min), uc_production_cost(p, p.g_max));
}

double production_min(const UCParams& p) {
  const double g = std::clamp(-p.gamma_c / (2.0 * p.beta), p.g_min, p.g_max);
  return uc_production_cost(p, g);
}

// Optimum of sum_t cost over on/off schedules where each on-step costs
// `on_cost`, using max (sign=+1) or min (sign=-1) recursions.
double schedule_extreme(const UCParams& p, double on_cost, double sign) {
  double off = 0.0;
  double on = kNegInf;  // u_0 = 0
  for (int k = 0; k < p.N; ++k) {
    const double next_off = std::max(off, on + sign * p.c10);
    const double next_on = std::max(off + sign * p.c01, on) + sign * on_cost;
    off = next_off;
    on = next_on;
  }
  return sign * std::max(off, on);
}

}  // namespace

void UCParams::validate() const {
  if (N < 1) throw Error(ErrorCode::kInvalidArgument, "uc: N must be >= 1");
  if (!(g_min > 0.0 && g_min < g_max)) throw Error(ErrorCode::kInvalidArgument, "uc: need 0 < g_min < g_max");
  if (!(beta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "uc: beta must be positive");
  for (double v : {c01, c10, beta, gamma_c, omega, g_min, g_max}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "uc: non-finite parameter");
  }
}

double uc_production_cost(const UCParams& p, double g) { return p.beta * g * g + p.gamma_c * g + p.omega; }

ExtReal uc_value(const UCParams& p, const Vector& x) {
  if (x.size() != 2 * p.N) return ExtReal::infinity();
  const double tol = membership_tol(p);
  double total = 0.0;
  int prev = 0;
  for (int t = 0; t < p.N; ++t) {
    const double u = x[t];
    const double g = x[p.N + t];
    if (!std::isfinite(u) || !std::isfinite(g)) return ExtReal::infinity();
    int on;
    if (std::abs(u) <= 1e-9) {
      on = 0;
    } else if (std::abs(u - 1.0) <= 1e-9) {
      on = 1;
    } else {
      return ExtReal::infinity();
    }
    if (on == 0) {
      if (std::abs(g) > tol) return ExtReal::infinity();
      total += p.c10 * prev;
    } else {
      if (g < p.g_min - tol || g > p.g_max + tol) return ExtReal::infinity();
      total += p.c01 * (1 - prev) + uc_production_cost(p, g);
    }
    prev = on;
  }
  return total;
}

ConjugatePoint uc_conjugate(const UCParams& params, const Vector& v, const Vector& p) {
  const int N = params.N;
  if (v.size() != N || p.size() != N) throw Error(ErrorCode::kInvalidArgument, "uc_conjugate: wrong input length");
  if (!v.allFinite() || !p.allFinite()) throw Error(ErrorCode::kNonFinite, "uc_conjugate: non-finite input");

  // from[k][s]: state at step k-1 that realizes delta_{k,s}
  std::vector<std::array<int, 2>> from(N);
  std::vector<double> g_on(N);
  double d0 = 0.0;
  double d1 = kNegInf;
  for (int k = 0; k < N; ++k) {
    const auto [gain, g] = best_production(params, p[k]);
    g_on[k] = g;
    double n0, n1;
    // staying off vs. switching off
    if (k == 0 || d0 >= d1 - params.c10) {
      n0 = d0;
      from[k][0] = 0;
    } else {
      n0 = d1 - params.c10;
      from[k][0] = 1;
    }
    // staying on vs. switching on
    if (k > 0 && d1 >= d0 - params.c01) {
      n1 = d1;
      from[k][1] = 1;
    } else {
      n1 = d0 - params.c01;
      from[k][1] = 0;
    }
    n1 += v[k] + gain;
    d0 = n0;
    d1 = n1;
  }

  ConjugatePoint out;
  out.argmax = Vector::Zero(2 * N);
  int state = d1 > d0 ? 1 : 0;
  out.value = std::max(d0, d1);
  for (int k = N - 1; k >= 0; --k) {
    if (state == 1) {
      out.argmax[k] = 1.0;
      out.argmax[N + k] = g_on[k];
    }
    state = from[k][state];
  }
  return out;
}

Vector uc_linmin(const UCParams& params, const Vector& c_u, const Vector& c_g) {
  const int N = params.N;
  if (c_u.size() != N || c_g.size() != N) throw Error(ErrorCode::kInvalidArgument, "uc_linmin: wrong input length");
  Vector x = Vector::Zero(2 * N);
  for (int t = 0; t < N; ++t) {
    double best = 0.0;
    const double at_min = c_u[t] + c_g[t] * params.g_min;
    const double at_max = c_u[t] + c_g[t] * params.g_max;
    if (at_min < best) {
      best = at_min;
      x[t] = 1.0;
      x[N + t] = params.g_min;
    }
    if (at_max < best) {
      x[t] = 1.0;
      x[N + t] = params.g_max;
    }
  }
  return x;
}

double uc_gamma(const UCParams& params) {
  const double sup = schedule_extreme(params, production_max(params), 1.0);
  const double inf = schedule_extreme(params, production_min(params), -1.0);
  return sup - inf;
}

Vector uc_repair(const UCParams& params, const Vector& x) {
  const int N = params.N;
  if (x.size() != 2 * N) throw Error(ErrorCode::kInvalidArgument, "uc_repair: wrong input length");
  const double tol = membership_tol(params);
  Vector out = Vector::Zero(2 * N);
  for (int t = 0; t < N; ++t) {
    const double u = x[t];
    const double g = x[N + t];
    if (u <= 1e-9 && g <= tol) continue;  // already off
    out[t] = 1.0;
    out[N + t] = std::clamp(g, params.g_min, params.g_max);
  }
  return out;
}

UCOracle::UCOracle(UCParams params) : params_(params) {
  params_.validate();
  gamma_ = uc_gamma(params_);
}

ExtReal UCOracle::value(const Vector& x) const { return uc_value(params_, x); }

ConjugatePoint UCOracle::conjugate(const Vector& y) const {
  if (y.size() != dim()) throw Error(ErrorCode::kInvalidArgument, "uc: conjugate input has wrong length");
  return uc_conjugate(params_, y.head(params_.N), y.tail(params_.N));
}

Vector UCOracle::linmin(const Vector& c) const {
  if (c.size() != dim()) throw Error(ErrorCode::kInvalidArgument, "uc: linmin input has wrong length");
  return uc_linmin(params_, c.head(params_.N), c.tail(params_.N));
}

std::optional<Vector> UCOracle::repair(const Vector& x) const { return uc_repair(params_, x); }

Json UCOracle::params() const {
  return Json{{"N", params_.N},         {"c01", params_.c01},     {"c10", params_.c10},
              {"beta", params_.beta},   {"gamma", params_.gamma_c}, {"omega", params_.omega},
              {"g_min", params_.g_min}, {"g_max", params_.g_max}};
}

UCParams UCOracle::params_from_json(const Json& j) {
  UCParams p;
  try {
    p.N = j.at("N").get<int>();
    p.c01 = j.at("c01").get<double>();
    p.c10 = j.at("c10").get<double>();
    p.beta = j.at("beta").get<double>();
    p.gamma_c = j.at("gamma").get<double>();
    p.omega = j.at("omega").get<double>();
    p.g_min = j.at("g_min").get<double>();
    p.g_max = j.at("g_max").get<double>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("uc params: ") + e.what());
  }
  return p;
}

UCGenConfig UCGenConfig::from_json(const Json& j) {
  UCGenConfig c;
  auto get = [&](const char* key, double& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
  };
  get("demand_lo", c.demand_lo);
  get("demand_hi", c.demand_hi);
  get("cap_lo", c.cap_lo);
  get("cap_hi", c.cap_hi);
  get("gmax_factor", c.gmax_factor);
  get("gmin_factor", c.gmin_factor);
  get("beta_lo", c.beta_lo);
  get("beta_hi", c.beta_hi);
  get("gamma_lo", c.gamma_lo);
  get("gamma_hi", c.gamma_hi);
  get("omega_lo", c.omega_lo);
  get("omega_hi", c.omega_hi);
  get("shutdown_ratio", c.shutdown_ratio);
  return c;
}

ProblemInstance uc_generate(int n, int N, std::uint64_t seed, const UCGenConfig& cfg) {
  if (n < 1 || N < 1) throw Error(ErrorCode::kInvalidArgument, "uc_generate: need n >= 1 and N >= 1");
  Rng rng(seed);
  Vector demand(N);
  for (int t = 0; t < N; ++t) demand[t] = rng.uniform(cfg.demand_lo, cfg.demand_hi);

  std::vector<UCParams> units(n);
  double startup_total = 0.0;
  for (auto& u : units) {
    const double cap = rng.uniform(cfg.cap_lo, cfg.cap_hi) / n;
    u.N = N;
    u.g_max = cfg.gmax_factor * cap;
    u.g_min = cfg.gmin_factor * cap;
    u.beta = rng.uniform(cfg.beta_lo, cfg.beta_hi);
    u.gamma_c = rng.uniform(cfg.gamma_lo, cfg.gamma_hi);
    u.omega = rng.uniform(cfg.omega_lo, cfg.omega_hi);
    startup_total += u.beta * cap * cap + u.gamma_c * cap + u.omega;
  }
  const double c01 = startup_total / (2.0 * n);

  ProblemInstance inst;
  inst.n = n;
  inst.m = N;
  inst.b = -demand;
  Matrix A = Matrix::Zero(N, 2 * N);
  A.rightCols(N) = -Matrix::Identity(N, N);
  double gmax_all = 0.0;
  for (auto& u : units) {
    u.c01 = c01;
    u.c10 = cfg.shutdown_ratio * c01;
    gmax_all = std::max(gmax_all, u.g_max);
    inst.blocks.push_back({A, std::make_shared<UCOracle>(u)});
  }
  inst.theta_unit = Vector::Constant(N, gmax_all);
  inst.validate();
  return inst;
}

}  // namespace sfopt::apps
