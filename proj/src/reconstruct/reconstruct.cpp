#include "sfopt/reconstruct/reconstruct.hpp"

#include <sstream>

namespace sfopt {

namespace {

Vector weighted_average(const std::vector<WeightedAtom>& group) {
  Vector x = Vector::Zero(group.front().atom.point.size());
  for (const auto& e : group) x += e.weight * e.atom.point;
  return x;
}

void check_groups(const TrimResult& trim, const ProblemInstance& inst) {
  if (static_cast<int>(trim.groups.size()) != inst.n) {
    throw Error(ErrorCode::kInvalidArgument, "reconstruct: trim result has wrong block count");
  }
  for (int i = 0; i < inst.n; ++i) {
    if (trim.groups[i].empty()) throw Error(ErrorCode::kUncoveredBlock, "reconstruct: block " + std::to_string(i) + " is empty");
  }
}

}  // namespace

bool Reconstruction::all_blocks_feasible() const {
  for (bool ok : per_block_feasible) {
    if (!ok) return false;
  }
  return true;
}

bool Reconstruction::feasible(const Vector& b, double tol) const {
  return all_blocks_feasible() && violation_plus <= tol * (1.0 + b.lpNorm<Eigen::Infinity>());
}

Reconstruction make_reconstruction(const ProblemInstance& inst, std::vector<Vector> x, std::string scheme) {
  const Evaluation ev = evaluate(inst, x);
  Reconstruction r;
  r.x_bar = std::move(x);
  r.scheme = std::move(scheme);
  r.objective = ev.objective;
  r.violation = ev.violation;
  r.violation_plus = plus_norm(ev.violation);
  r.per_block_feasible = ev.block_feasible;
  return r;
}

Reconstruction reconstruct_average(const TrimResult& trim, const ProblemInstance& inst) {
  check_groups(trim, inst);
  std::vector<Vector> x;
  for (const auto& g : trim.groups) x.push_back(weighted_average(g));
  return make_reconstruction(inst, std::move(x), "average");
}

Reconstruction reconstruct_sample(const TrimResult& trim, const ProblemInstance& inst, std::uint64_t seed) {
  check_groups(trim, inst);
  Rng rng(seed);
  std::vector<Vector> x;
  for (const auto& g : trim.groups) {
    double total = 0.0;
    for (const auto& e : g) total += e.weight;
    const double u = rng.uniform() * total;
    double cum = 0.0;
    std::size_t pick = g.size() - 1;
    for (std::size_t l = 0; l < g.size(); ++l) {
      cum += g[l].weight;
      if (u < cum) {
        pick = l;
        break;
      }
    }
    x.push_back(g[pick].atom.point);
  }
  return make_reconstruction(inst, std::move(x), "sample");
}

Reconstruction reconstruct_repair(const TrimResult& trim, const ProblemInstance& inst) {
  check_groups(trim, inst);
  std::vector<int> missing;
  for (int i = 0; i < inst.n; ++i) {
    if (trim.groups[i].size() > 1 && !inst.blocks[i].oracle->has_repair()) missing.push_back(i);
  }
  if (!missing.empty()) {
    std::ostringstream os;
    os << "repair unavailable for blocks";
    for (int i : missing) os << ' ' << i;
    throw Error(ErrorCode::kRepairUnavailable, os.str());
  }
  std::vector<Vector> x;
  for (int i = 0; i < inst.n; ++i) {
    const auto& g = trim.groups[i];
    if (g.size() == 1) {
      x.push_back(g.front().atom.point);
      continue;
    }
    auto fixed = inst.blocks[i].oracle->repair(weighted_average(g));
    if (!fixed) throw Error(ErrorCode::kRepairUnavailable, "repair unavailable for blocks " + std::to_string(i));
    x.push_back(std::move(*fixed));
  }
  return make_reconstruction(inst, std::move(x), "repair");
}

Reconstruction reconstruct_max(const TrimResult& trim, const ProblemInstance& inst) {
  check_groups(trim, inst);
  std::vector<Vector> x;
  for (const auto& g : trim.groups) {
    std::size_t best = 0;
    for (std::size_t l = 1; l < g.size(); ++l) {
      if (g[l].weight > g[best].weight) best = l;
    }
    x.push_back(g[best].atom.point);
  }
  return make_reconstruction(inst, std::move(x), "max");
}

bool is_known_scheme(const std::string& scheme) {
  return scheme == "average" || scheme == "sample" || scheme == "repair" || scheme == "max";
}

Reconstruction reconstruct(const TrimResult& trim, const ProblemInstance& inst, const std::string& scheme,
                           std::uint64_t seed) {
  if (scheme == "average") return reconstruct_average(trim, inst);
  if (scheme == "sample") return reconstruct_sample(trim, inst, seed);
  if (scheme == "repair") return reconstruct_repair(trim, inst);
  if (scheme == "max") return reconstruct_max(trim, inst);
  throw Error(ErrorCode::kInvalidArgument, "unknown scheme '" + scheme + "'");
}

}  // namespace sfopt
