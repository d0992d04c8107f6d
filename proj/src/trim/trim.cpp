#include "sfopt/trim/trim.hpp"

#include <algorithm>
#include <tuple>

namespace sfopt {

namespace {

int count_nontrivial(const std::vector<std::vector<WeightedAtom>>& groups) {
  int q = 0;
  for (const auto& g : groups) q += g.size() > 1 ? 1 : 0;
  return q;
}

}  // namespace

int TrimResult::entries() const {
  int e = 0;
  for (const auto& g : groups) e += static_cast<int>(g.size());
  return e;
}

Vector TrimResult::aggregate(int m) const {
  Vector out = Vector::Zero(1 + m);
  for (const auto& g : groups) {
    for (const auto& e : g) {
      out[0] += e.weight * e.atom.cost;
      out.tail(m) += e.weight * e.atom.image;
    }
  }
  return out;
}

LiftedInput lift(const FWTrace& trace, int n, int m) {
  if (trace.pool.blocks() != n) throw Error(ErrorCode::kInvalidArgument, "lift: trace has wrong block count");
  if (trace.z_final.size() != 1 + m) throw Error(ErrorCode::kInvalidArgument, "lift: trace has wrong dimension");
  const auto merged = merged_weights(trace);
  std::vector<std::tuple<int, int, int, double>> cols;  // iter, block, slot, weight
  for (int i = 0; i < n; ++i) {
    for (const auto& [slot, w] : merged[i]) {
      if (w > 0.0) cols.emplace_back(trace.pool.at(i, slot).iter, i, slot, w);
    }
  }
  std::sort(cols.begin(), cols.end());
  LiftedInput in;
  in.n = n;
  in.m = m;
  in.lam.resize(static_cast<Eigen::Index>(cols.size()));
  for (std::size_t l = 0; l < cols.size(); ++l) {
    const auto& [iter, block, slot, w] = cols[l];
    in.atoms.push_back(&trace.pool.at(block, slot));
    in.lam[static_cast<Eigen::Index>(l)] = w;
  }
  in.w.resize(1 + m + n);
  in.w.head(1 + m) = trace.z_final;
  in.w.tail(n).setOnes();
  return in;
}

TrimResult trim_exact(const FWTrace& trace, const ProblemInstance& inst, const ExactConfig& cfg) {
  const LiftedInput in = lift(trace, inst.n, inst.m);
  const LiftedColumns cols = in.columns();
  const ConicOutput out = exact_caratheodory(cols, in.lam, in.w, cfg);
  TrimResult res;
  res.source = "exact";
  res.columns = cols.cols();
  res.residual = out.residual;
  res.groups.resize(inst.n);
  for (std::size_t l = 0; l < out.kept.size(); ++l) {
    const double a = out.alpha[static_cast<Eigen::Index>(l)];
    if (a <= 0.0) continue;
    const Atom& atom = cols.atom(out.kept[l]);
    res.groups[atom.block].push_back({a, atom});
  }
  for (int i = 0; i < inst.n; ++i) {
    if (res.groups[i].empty()) {
      throw Error(ErrorCode::kDegenerateSystem, "block " + std::to_string(i) + ": no weight left after reduction");
    }
  }
  res.q = count_nontrivial(res.groups);
  return res;
}

TrimResult trim_approx(const FWTrace& trace, const ProblemInstance& inst, const std::string& method, int T,
                       const ApproxConfig& cfg) {
  if (method != "fcfw" && method != "mnp") throw Error(ErrorCode::kInvalidArgument, "method must be 'fcfw' or 'mnp'");
  if (T < inst.n - 1) throw Error(ErrorCode::kInvalidArgument, "T must be at least n - 1");
  const LiftedInput in = lift(trace, inst.n, inst.m);
  LiftedColumns cols = in.columns();
  const double n = inst.n;
  const Vector target = in.w / n;
  Vector scale = Vector::Ones(cols.rows());
  if (cfg.scale_rows) scale = cols.equilibrating_scale();
  cols.set_row_scale(scale);
  const Vector target_scaled = target.cwiseProduct(scale);

  const ApproxResult ar = method == "fcfw" ? fcfw(cols, target_scaled, T, cfg.fcfw) : mnp(cols, target_scaled, T, cfg.mnp);

  TrimResult res;
  res.source = method;
  res.columns = cols.cols();
  res.T = T;
  res.inner_stalled = ar.inner_stalled;
  res.groups.resize(inst.n);
  std::vector<double> block_sum(inst.n, 0.0);
  for (std::size_t l = 0; l < ar.idx.size(); ++l) {
    const double b = ar.beta[static_cast<Eigen::Index>(l)];
    if (b <= 0.0) continue;
    const Atom& atom = cols.atom(ar.idx[l]);
    res.groups[atom.block].push_back({b, atom});
    block_sum[atom.block] += b;
  }
  for (int i = 0; i < inst.n; ++i) {
    if (res.groups[i].empty()) {
      throw Error(ErrorCode::kUncoveredBlock, "uncovered block " + std::to_string(i) + " at T = " + std::to_string(T));
    }
    for (auto& e : res.groups[i]) e.weight /= block_sum[i];
  }
  res.q = count_nontrivial(res.groups);

  // residual on the unscaled, unnormalized lifted vector
  const LiftedColumns raw = in.columns();
  res.residual = n * (raw.combine(ar.idx, ar.beta) - target).norm();
  // history stays in the solver's (possibly scaled) coordinates
  for (double r : ar.residual_history) res.residual_history.push_back(n * r);
  res.time_history = ar.time_history;
  return res;
}

TrimResult trim_approx_retry(const FWTrace& trace, const ProblemInstance& inst, const std::string& method, int T,
                             const ApproxConfig& cfg) {
  const int columns = static_cast<int>(lift(trace, inst.n, inst.m).atoms.size());
  const int cap = std::max(inst.n - 1, columns - 1);
  int retries = 0;
  while (true) {
    try {
      TrimResult r = trim_approx(trace, inst, method, T, cfg);
      r.retries = retries;
      return r;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUncoveredBlock || T >= cap) throw;
      T = std::min(2 * T, cap);
      ++retries;
    }
  }
}

}  // namespace sfopt
