#include "sfopt/apps/pev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace sfopt::apps {

namespace {

// Binary schedule maximizing sum gain_k u_k with count in [lmin, lmax].
Vector greedy_schedule(const Vector& gain, int lmin, int lmax) {
  const int N = static_cast<int>(gain.size());
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return gain[a] > gain[b]; });
  Vector u = Vector::Zero(N);
  int taken = 0;
  for (int k : order) {
    if (taken >= lmax) break;
    if (gain[k] <= 0.0 && taken >= lmin) break;
    u[k] = 1.0;
    ++taken;
  }
  return u;
}

}  // namespace

void PEVParams::validate() const {
  auto bad = [](const char* msg) { throw Error(ErrorCode::kInvalidArgument, std::string("pev: ") + msg); };
  if (N < 1) bad("N must be >= 1");
  for (double v : {Delta, P, xi, E_init, E_ref, E_max}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "pev: non-finite parameter");
  }
  if (!(P > 0.0 && Delta > 0.0 && xi > 0.0)) bad("P, Delta and xi must be positive");
  if (price.size() != N) bad("price must have length N");
  if (!price.allFinite()) throw Error(ErrorCode::kNonFinite, "pev: non-finite price");
  if (E_init > E_max) bad("E_init exceeds E_max");
}

int PEVParams::min_steps() const {
  const double need = std::ceil((E_ref - E_init) / step_energy() - 1e-9);
  return static_cast<int>(std::max(0.0, need));
}

int PEVParams::max_steps() const {
  const double room = std::floor((E_max - E_init) / step_energy() + 1e-9);
  return static_cast<int>(std::clamp(room, 0.0, static_cast<double>(N)));
}

ExtReal pev_value(const PEVParams& p, const Vector& u) {
  if (u.size() != p.N) return ExtReal::infinity();
  int count = 0;
  double total = 0.0;
  for (int k = 0; k < p.N; ++k) {
    if (!std::isfinite(u[k])) return ExtReal::infinity();
    if (std::abs(u[k] - 1.0) <= 1e-9) {
      ++count;
      total += p.P * p.price[k];
    } else if (std::abs(u[k]) > 1e-9) {
      return ExtReal::infinity();
    }
  }
  if (count < p.min_steps() || count > p.max_steps()) return ExtReal::infinity();
  return total;
}

ConjugatePoint pev_conjugate(const PEVParams& p, const Vector& y) {
  if (y.size() != p.N) throw Error(ErrorCode::kInvalidArgument, "pev_conjugate: wrong input length");
  if (!y.allFinite()) throw Error(ErrorCode::kNonFinite, "pev_conjugate: non-finite input");
  const int lmin = p.min_steps();
  const int lmax = p.max_steps();
  if (lmin > lmax) throw Error(ErrorCode::kInfeasibleBlock, "pev: E_ref unreachable below E_max");
  const Vector gain = y - p.P * p.price;
  ConjugatePoint out;
  out.argmax = greedy_schedule(gain, lmin, lmax);
  out.value = 0.0;
  for (int k = 0; k < p.N; ++k) {
    if (out.argmax[k] != 0.0) out.value += gain[k];
  }
  return out;
}

Vector pev_linmin(const PEVParams& p, const Vector& c) {
  if (c.size() != p.N) throw Error(ErrorCode::kInvalidArgument, "pev_linmin: wrong input length");
  const int lmin = p.min_steps();
  const int lmax = p.max_steps();
  if (lmin > lmax) throw Error(ErrorCode::kInfeasibleBlock, "pev: E_ref unreachable below E_max");
  return greedy_schedule(-c, lmin, lmax);
}

double pev_gamma(const PEVParams& p) {
  const int lmin = p.min_steps();
  const int lmax = p.max_steps();
  if (lmin > lmax) throw Error(ErrorCode::kInfeasibleBlock, "pev: E_ref unreachable below E_max");
  const Vector cost = p.P * p.price;
  const double sup = greedy_schedule(cost, lmin, lmax).dot(cost);
  const double inf = greedy_schedule(-cost, lmin, lmax).dot(cost);
  return sup - inf;
}

PEVOracle::PEVOracle(PEVParams params) : params_(std::move(params)) {
  params_.validate();
  gamma_ = pev_gamma(params_);
}

ExtReal PEVOracle::value(const Vector& x) const { return pev_value(params_, x); }
ConjugatePoint PEVOracle::conjugate(const Vector& y) const { return pev_conjugate(params_, y); }
Vector PEVOracle::linmin(const Vector& c) const { return pev_linmin(params_, c); }

Json PEVOracle::params() const {
  Json price = Json::array();
  for (int k = 0; k < params_.N; ++k) price.push_back(params_.price[k]);
  return Json{{"N", params_.N},           {"Delta", params_.Delta}, {"P", params_.P},
              {"xi", params_.xi},         {"E_init", params_.E_init}, {"E_ref", params_.E_ref},
              {"E_max", params_.E_max},   {"price", price}};
}

PEVParams PEVOracle::params_from_json(const Json& j) {
  PEVParams p;
  try {
    p.N = j.at("N").get<int>();
    p.Delta = j.at("Delta").get<double>();
    p.P = j.at("P").get<double>();
    p.xi = j.at("xi").get<double>();
    p.E_init = j.at("E_init").get<double>();
    p.E_ref = j.at("E_ref").get<double>();
    p.E_max = j.at("E_max").get<double>();
    const auto& price = j.at("price");
    p.price.resize(static_cast<Eigen::Index>(price.size()));
    for (std::size_t k = 0; k < price.size(); ++k) p.price[static_cast<Eigen::Index>(k)] = price[k].get<double>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("pev params: ") + e.what());
  }
  return p;
}

PEVGenConfig PEVGenConfig::from_json(const Json& j) {
  PEVGenConfig c;
  auto get = [&](const char* key, double& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
  };
  get("P_lo", c.P_lo);
  get("P_hi", c.P_hi);
  get("xi", c.xi);
  get("Delta", c.Delta);
  get("E_init_lo", c.E_init_lo);
  get("E_init_hi", c.E_init_hi);
  get("E_ref_lo", c.E_ref_lo);
  get("E_ref_hi", c.E_ref_hi);
  get("E_max_slack_lo", c.E_max_slack_lo);
  get("E_max_slack_hi", c.E_max_slack_hi);
  get("price_base", c.price_base);
  get("price_swing", c.price_swing);
  get("limit_ratio", c.limit_ratio);
  return c;
}

ProblemInstance pev_generate(int n, int N, std::uint64_t seed, const PEVGenConfig& cfg) {
  if (n < 1 || N < 1) throw Error(ErrorCode::kInvalidArgument, "pev_generate: need n >= 1 and N >= 1");
  Rng rng(seed);
  Vector price(N);
  for (int k = 0; k < N; ++k) {
    price[k] = cfg.price_base + cfg.price_swing * std::cos(2.0 * std::numbers::pi * (k + 0.5) / N);
  }

  ProblemInstance inst;
  inst.n = n;
  inst.m = N;
  double rate_total = 0.0;
  double rate_max = 0.0;
  for (int i = 0; i < n; ++i) {
    PEVParams p;
    p.N = N;
    p.Delta = cfg.Delta;
    p.xi = cfg.xi;
    p.price = price;
    p.P = rng.uniform(cfg.P_lo, cfg.P_hi);
    p.E_init = rng.uniform(cfg.E_init_lo, cfg.E_init_hi);
    p.E_ref = rng.uniform(cfg.E_ref_lo, cfg.E_ref_hi);
    const double slack = rng.uniform(cfg.E_max_slack_lo, cfg.E_max_slack_hi);
    // short horizons: cap the target at what N steps can deliver
    p.E_ref = std::min(p.E_ref, p.E_init + N * p.step_energy());
    p.E_max = std::max(p.E_ref + slack, p.E_init + p.min_steps() * p.step_energy());
    rate_total += p.P;
    rate_max = std::max(rate_max, p.P);
    Matrix A = p.P * Matrix::Identity(N, N);
    inst.blocks.push_back({A, std::make_shared<PEVOracle>(std::move(p))});
  }
  inst.b = Vector::Constant(N, cfg.limit_ratio * rate_total);
  inst.theta_unit = Vector::Constant(N, N * rate_max);
  inst.validate();
  return inst;
}

}  // namespace sfopt::apps
