#include "sfopt/fw/stage1.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <map>

#include "sfopt/parallel.hpp"

namespace sfopt {

namespace {

Vector lifted_point(const Atom& a) {
  Vector v(1 + a.image.size());
  v[0] = a.cost;
  v.tail(a.image.size()) = a.image;
  return v;
}

// Per-block support points for direction (alpha, g); g may have any sign.
LMOResult support(const ProblemInstance& inst, double alpha, const Vector& g, int iter, int threads) {
  LMOResult out;
  out.atoms.resize(inst.n);
  parallel_for(inst.n, threads, [&](int i) {
    const auto& blk = inst.blocks[i];
    try {
      const Vector dir = blk.A.transpose() * g;
      Vector point = alpha == 0.0 ? blk.oracle->linmin(dir) : blk.oracle->conjugate(-dir / alpha).argmax;
      out.atoms[i] = make_atom(inst, i, iter, std::move(point));
    } catch (const Error& e) {
      const std::string msg = e.what();
      if (msg.rfind("block ", 0) == 0) throw;
      throw Error(e.code(), "block " + std::to_string(i) + ": " + msg);
    }
  });
  out.s = Vector::Zero(1 + inst.m);
  for (const auto& a : out.atoms) {
    out.s[0] += a.cost;
    out.s.tail(inst.m) += a.image;
  }
  return out;
}

}  // namespace

double exact_plus_step(const Vector& r, const Vector& d) {
  // phi(eta) = 1/2 ||(r - eta d)_+||^2 is convex and piecewise quadratic on [0, 1].
  std::vector<double> cuts{0.0, 1.0};
  for (Eigen::Index j = 0; j < r.size(); ++j) {
    if (d[j] != 0.0) {
      const double t = r[j] / d[j];
      if (t > 0.0 && t < 1.0) cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (b <= a) continue;
    const double mid = 0.5 * (a + b);
    double num = 0.0, den = 0.0, slope_b = 0.0;
    for (Eigen::Index j = 0; j < r.size(); ++j) {
      if (r[j] - mid * d[j] > 0.0) {
        num += d[j] * r[j];
        den += d[j] * d[j];
        slope_b -= d[j] * (r[j] - b * d[j]);
      }
    }
    if (slope_b >= 0.0 || k + 2 == cuts.size()) {
      if (den <= 0.0) return a;
      return std::clamp(num / den, a, b);
    }
  }
  return 0.0;
}

FWGradient fw_gradient(const Vector& z, const Vector& z_star) {
  if (z.size() != z_star.size() || z.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "fw_gradient: z and z_star must have length 1 + m");
  }
  FWGradient out;
  out.alpha = std::max(z[0] - z_star[0], 0.0);
  out.g = (z.tail(z.size() - 1) - z_star.tail(z.size() - 1)).cwiseMax(0.0);
  return out;
}

AtomPool::AtomPool(int n) : atoms_(n), index_(n) {}

int AtomPool::add(Atom atom) {
  const int b = atom.block;
  auto range = index_[b].equal_range(atom.hash);
  for (auto it = range.first; it != range.second; ++it) {
    if (atoms_[b][it->second].point == atom.point) return it->second;
  }
  const int idx = static_cast<int>(atoms_[b].size());
  index_[b].emplace(atom.hash, idx);
  atoms_[b].push_back(std::move(atom));
  return idx;
}

int AtomPool::total() const {
  int t = 0;
  for (const auto& v : atoms_) t += static_cast<int>(v.size());
  return t;
}

LMOResult lmo(const ProblemInstance& inst, double alpha, const Vector& g, int iter, int threads) {
  if (!(alpha >= 0.0) || g.size() != inst.m || (g.array() < 0.0).any()) {
    throw Error(ErrorCode::kInvalidArgument, "lmo: need alpha >= 0 and g >= 0 of length m");
  }
  return support(inst, alpha, g, iter, threads);
}

void FWConfig::validate() const {
  if (K < 0) throw Error(ErrorCode::kInvalidArgument, "fw.K must be >= 0");
  if (step_rule != "exact" && step_rule != "harmonic") {
    throw Error(ErrorCode::kInvalidArgument, "fw.step_rule must be 'exact' or 'harmonic'");
  }
  if (!(stop_tol >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "fw.stop_tol must be >= 0");
  if (check_every < 0) throw Error(ErrorCode::kInvalidArgument, "fw.check_every must be >= 0");
}

void finalize_weights(FWTrace& trace, double prune_tol) {
  const int iterates = static_cast<int>(trace.iterate_atoms.size());
  trace.weights.assign(iterates, 0.0);
  // gamma_j = eta_{j-1} prod_{l >= j} (1 - eta_l), with eta_{-1} = 1
  double tail = 1.0;
  for (int j = iterates - 1; j >= 0; --j) {
    const double eta_in = j == 0 ? 1.0 : trace.steps[j - 1];
    trace.weights[j] = eta_in * tail;
    if (j > 0) tail *= 1.0 - trace.steps[j - 1];
  }
  double total = 0.0;
  for (double& w : trace.weights) {
    if (w < prune_tol) w = 0.0;
    total += w;
  }
  for (double& w : trace.weights) w /= total;

  const int m = static_cast<int>(trace.z_star.size()) - 1;
  Vector z = Vector::Zero(1 + m);
  for (int k = 0; k < iterates; ++k) {
    if (trace.weights[k] == 0.0) continue;
    Vector s = Vector::Zero(1 + m);
    for (int i = 0; i < trace.pool.blocks(); ++i) s += lifted_point(trace.pool.at(i, trace.iterate_atoms[k][i]));
    z += trace.weights[k] * s;
  }
  trace.z_final = z;
}

std::vector<std::vector<std::pair<int, double>>> merged_weights(const FWTrace& trace) {
  const int n = trace.pool.blocks();
  std::vector<std::map<int, double>> acc(n);
  for (std::size_t k = 0; k < trace.iterate_atoms.size(); ++k) {
    const double w = trace.weights.at(k);
    if (w == 0.0) continue;
    for (int i = 0; i < n; ++i) acc[i][trace.iterate_atoms[k][i]] += w;
  }
  std::vector<std::vector<std::pair<int, double>>> out(n);
  for (int i = 0; i < n; ++i) out[i].assign(acc[i].begin(), acc[i].end());
  return out;
}

FWTrace run_stage1(const ProblemInstance& inst, double v_star, const FWConfig& cfg) {
  Vector z_star(1 + inst.m);
  z_star[0] = v_star;
  z_star.tail(inst.m) = inst.b;
  return run_stage1(inst, z_star, cfg);
}

FWTrace run_stage1(const ProblemInstance& inst, const Vector& z_star, const FWConfig& cfg) {
  cfg.validate();
  if (z_star.size() != 1 + inst.m) throw Error(ErrorCode::kInvalidArgument, "run_stage1: z_star must have length 1 + m");
  if (!z_star.allFinite()) throw Error(ErrorCode::kNonFinite, "run_stage1: z_star must be finite");
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

  FWTrace tr;
  tr.z_star = z_star;
  tr.pool = AtomPool(inst.n);

  // start: unconstrained block minima, i.e. conjugate maximizers at direction 0
  LMOResult start = lmo(inst, 1.0, Vector::Zero(inst.m), 0, cfg.threads);
  Vector z = start.s;
  std::vector<int> slots(inst.n);
  for (int i = 0; i < inst.n; ++i) slots[i] = tr.pool.add(std::move(start.atoms[i]));
  tr.iterate_atoms.push_back(slots);
  tr.residual_history.push_back(plus_norm(z - z_star));
  tr.time_history.push_back(elapsed());
  tr.stop_reason = "max_iter";

  for (int k = 0; k < cfg.K; ++k) {
    if (tr.residual_history.back() <= cfg.stop_tol) {
      tr.stop_reason = "tolerance";
      break;
    }
    const FWGradient grad = fw_gradient(z, z_star);
    LMOResult s = lmo(inst, grad.alpha, grad.g, k + 1, cfg.threads);
    const Vector d = z - s.s;
    double eta;
    if (cfg.step_rule == "harmonic") {
      eta = 2.0 / (k + 2.0);
    } else {
      const double den = d.squaredNorm();
      if (den < 1e-16) {
        tr.stop_reason = "stationary";
        break;
      }
      eta = exact_plus_step(z - z_star, d);
    }
    z = (1.0 - eta) * z + eta * s.s;
    for (int i = 0; i < inst.n; ++i) slots[i] = tr.pool.add(std::move(s.atoms[i]));
    tr.iterate_atoms.push_back(slots);
    tr.steps.push_back(eta);
    tr.iterations = k + 1;
    tr.residual_history.push_back(plus_norm(z - z_star));
    tr.time_history.push_back(elapsed());

    if (cfg.check_every > 0 && cfg.checkpoint && tr.iterations % cfg.check_every == 0) {
      finalize_weights(tr, cfg.prune_tol);
      if (cfg.checkpoint(tr)) {
        tr.stop_reason = "checkpoint";
        break;
      }
    }
  }
  finalize_weights(tr, cfg.prune_tol);
  return tr;
}

double estimate_diameter(const ProblemInstance& inst, int samples, std::uint64_t seed, int threads) {
  if (samples < 2) throw Error(ErrorCode::kInvalidArgument, "estimate_diameter: need at least 2 samples");
  Rng rng(seed);
  std::vector<Vector> pts;
  pts.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    // a quarter of the directions ignore the cost coordinate
    const double alpha = s % 4 == 0 ? 0.0 : std::abs(rng.normal());
    Vector g(inst.m);
    for (int j = 0; j < inst.m; ++j) g[j] = rng.normal();
    if (alpha == 0.0 && g.isZero()) g[0] = 1.0;
    pts.push_back(support(inst, alpha, g, 0, threads).s);
  }
  double best = 0.0;
  for (int a = 0; a < samples; ++a) {
    for (int b = a + 1; b < samples; ++b) best = std::max(best, (pts[a] - pts[b]).norm());
  }
  return best;
}

}  // namespace sfopt
