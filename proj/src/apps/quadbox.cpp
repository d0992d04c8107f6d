#include "sfopt/apps/quadbox.hpp"

#include <algorithm>
#include <cmath>

#include "sfopt/serialize.hpp"

namespace sfopt::apps {

namespace {

double box_tol(double lo, double hi) { return 1e-9 * (1.0 + std::max(std::abs(lo), std::abs(hi))); }

double term(const QuadBoxParams& p, int j, double x) { return p.q[j] * x * x + p.c[j] * x; }

}  // namespace

void QuadBoxParams::validate() const {
  const auto d = q.size();
  if (d < 1) throw Error(ErrorCode::kInvalidArgument, "quadratic-box: dimension must be >= 1");
  if (c.size() != d || lo.size() != d || hi.size() != d) {
    throw Error(ErrorCode::kInvalidArgument, "quadratic-box: q, c, lo, hi must share a length");
  }
  if (!q.allFinite() || !c.allFinite() || !lo.allFinite() || !hi.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "quadratic-box: non-finite parameter");
  }
  if ((q.array() < 0.0).any()) throw Error(ErrorCode::kInvalidArgument, "quadratic-box: q must be >= 0");
  if ((lo.array() > hi.array()).any()) throw Error(ErrorCode::kInvalidArgument, "quadratic-box: lo > hi");
}

QuadBoxOracle::QuadBoxOracle(QuadBoxParams params) : params_(std::move(params)) {
  params_.validate();
  const auto& p = params_;
  gamma_ = 0.0;
  for (int j = 0; j < p.dim(); ++j) {
    const double top = std::max(term(p, j, p.lo[j]), term(p, j, p.hi[j]));
    double bottom = std::min(term(p, j, p.lo[j]), term(p, j, p.hi[j]));
    if (p.q[j] > 0.0) bottom = term(p, j, std::clamp(-p.c[j] / (2.0 * p.q[j]), p.lo[j], p.hi[j]));
    gamma_ += top - bottom;
  }
}

ExtReal QuadBoxOracle::value(const Vector& x) const {
  const auto& p = params_;
  if (x.size() != p.dim() || !x.allFinite()) return ExtReal::infinity();
  double total = 0.0;
  for (int j = 0; j < p.dim(); ++j) {
    const double tol = box_tol(p.lo[j], p.hi[j]);
    if (x[j] < p.lo[j] - tol || x[j] > p.hi[j] + tol) return ExtReal::infinity();
    total += term(p, j, x[j]);
  }
  return total;
}

ConjugatePoint QuadBoxOracle::conjugate(const Vector& y) const {
  const auto& p = params_;
  if (y.size() != p.dim()) throw Error(ErrorCode::kInvalidArgument, "quadratic-box: conjugate input has wrong length");
  if (!y.allFinite()) throw Error(ErrorCode::kNonFinite, "quadratic-box: non-finite conjugate input");
  ConjugatePoint out;
  out.argmax.resize(p.dim());
  out.value = 0.0;
  for (int j = 0; j < p.dim(); ++j) {
    const double slope = y[j] - p.c[j];
    double x;
    if (p.q[j] > 0.0) {
      x = std::clamp(slope / (2.0 * p.q[j]), p.lo[j], p.hi[j]);
    } else {
      x = slope > 0.0 ? p.hi[j] : p.lo[j];
    }
    out.argmax[j] = x;
    out.value += y[j] * x - term(p, j, x);
  }
  return out;
}

Vector QuadBoxOracle::linmin(const Vector& c) const {
  const auto& p = params_;
  if (c.size() != p.dim()) throw Error(ErrorCode::kInvalidArgument, "quadratic-box: linmin input has wrong length");
  Vector x(p.dim());
  for (int j = 0; j < p.dim(); ++j) x[j] = c[j] < 0.0 ? p.hi[j] : p.lo[j];
  return x;
}

std::optional<Vector> QuadBoxOracle::repair(const Vector& x) const {
  if (x.size() != params_.dim()) throw Error(ErrorCode::kInvalidArgument, "quadratic-box: repair input has wrong length");
  return x.cwiseMax(params_.lo).cwiseMin(params_.hi);
}

Json QuadBoxOracle::params() const {
  return Json{{"q", vector_to_json(params_.q)},
              {"c", vector_to_json(params_.c)},
              {"lo", vector_to_json(params_.lo)},
              {"hi", vector_to_json(params_.hi)}};
}

QuadBoxParams QuadBoxOracle::params_from_json(const Json& j) {
  QuadBoxParams p;
  auto field = [&](const char* key) -> const Json& {
    if (!j.is_object() || !j.contains(key)) {
      throw Error(ErrorCode::kParse, std::string("quadratic-box params: missing '") + key + "'");
    }
    return j.at(key);
  };
  p.q = vector_from_json(field("q"), "q");
  p.c = vector_from_json(field("c"), "c");
  p.lo = vector_from_json(field("lo"), "lo");
  p.hi = vector_from_json(field("hi"), "hi");
  return p;
}

QuadBoxGenConfig QuadBoxGenConfig::from_json(const Json& j) {
  QuadBoxGenConfig c;
  auto get = [&](const char* key, double& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
  };
  if (j.contains("m")) c.m = j.at("m").get<int>();
  get("q_lo", c.q_lo);
  get("q_hi", c.q_hi);
  get("c_lo", c.c_lo);
  get("c_hi", c.c_hi);
  get("box_lo", c.box_lo);
  get("box_hi", c.box_hi);
  get("a_lo", c.a_lo);
  get("a_hi", c.a_hi);
  return c;
}

ProblemInstance quadbox_generate(int n, int d, std::uint64_t seed, const QuadBoxGenConfig& cfg) {
  if (n < 1 || d < 1 || cfg.m < 1) throw Error(ErrorCode::kInvalidArgument, "quadbox_generate: need n, d, m >= 1");
  Rng rng(seed);
  ProblemInstance inst;
  inst.n = n;
  inst.m = cfg.m;
  inst.b = Vector::Zero(cfg.m);
  for (int i = 0; i < n; ++i) {
    QuadBoxParams p;
    p.q.resize(d);
    p.c.resize(d);
    for (int j = 0; j < d; ++j) {
      p.q[j] = rng.uniform(cfg.q_lo, cfg.q_hi);
      p.c[j] = rng.uniform(cfg.c_lo, cfg.c_hi);
    }
    p.lo = Vector::Constant(d, cfg.box_lo);
    p.hi = Vector::Constant(d, cfg.box_hi);
    Matrix A(cfg.m, d);
    for (int r = 0; r < cfg.m; ++r) {
      for (int j = 0; j < d; ++j) A(r, j) = rng.uniform(cfg.a_lo, cfg.a_hi);
    }
    Vector xhat(d);
    for (int j = 0; j < d; ++j) xhat[j] = rng.uniform(cfg.box_lo, cfg.box_hi);
    inst.b += A * xhat;
    inst.blocks.push_back({A, std::make_shared<QuadBoxOracle>(std::move(p))});
  }
  // one block's image swing, shared over n: convex runs only need to absorb the first-stage residual
  const double swing = (cfg.box_hi - cfg.box_lo) * std::max(std::abs(cfg.a_lo), std::abs(cfg.a_hi)) * d;
  inst.theta_unit = Vector::Constant(cfg.m, swing / n);
  inst.validate();
  return inst;
}

}  // namespace sfopt::apps
