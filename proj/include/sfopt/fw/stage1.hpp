// First stage: Frank-Wolfe on  1/2 ||z - z*||_+^2  over the sum of the blocks'
// (cost, image) hulls, where z* = (v*, rhs).
#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sfopt/core.hpp"

namespace sfopt {

/// Gradient of 1/2 ||z - z*||_+^2, split into the cost part alpha and constraint part g.
struct FWGradient {
  double alpha = 0.0;
  Vector g;
};

FWGradient fw_gradient(const Vector& z, const Vector& z_star);

/// argmin over eta in [0, 1] of 1/2 ||(r - eta d)_+||^2.
double exact_plus_step(const Vector& r, const Vector& d);

/// Distinct atoms per block. Points with equal content hash and equal
/// coordinates share one slot.
class AtomPool {
 public:
  explicit AtomPool(int n = 0);

  /// Index of `atom` within its block, inserting it when new.
  int add(Atom atom);
  const Atom& at(int block, int idx) const { return atoms_[block][idx]; }
  int block_size(int block) const { return static_cast<int>(atoms_[block].size()); }
  int blocks() const { return static_cast<int>(atoms_.size()); }
  int total() const;

 private:
  std::vector<std::vector<Atom>> atoms_;
  std::vector<std::unordered_multimap<std::uint64_t, int>> index_;
};

struct LMOResult {
  std::vector<Atom> atoms;  // one per block
  Vector s;                 // sum_i (cost_i, image_i)
};

/// alpha = 0: linmin(A_i' g) per block; otherwise conjugate argmax at -A_i' g / alpha.
LMOResult lmo(const ProblemInstance& inst, double alpha, const Vector& g, int iter = 0, int threads = 1);

struct FWTrace {
  Vector z_star;
  Vector z_final;
  AtomPool pool;
  /// iterate_atoms[k][i]: pool slot used by block i in iterate k (k = 0 is the start point).
  std::vector<std::vector<int>> iterate_atoms;
  std::vector<double> steps;    // eta_k, one per completed iteration
  std::vector<double> weights;  // gamma_k per iterate after pruning; sums to 1
  std::vector<double> residual_history;  // ||z^k - z*||_+, k = 0..iterations
  std::vector<double> time_history;      // seconds since start at each residual entry
  int iterations = 0;
  std::string stop_reason;  // "max_iter" | "tolerance" | "stationary" | "checkpoint"
};

struct FWConfig {
  int K = 10000;
  std::string step_rule = "exact";  // "exact" | "harmonic"
  double stop_tol = 0.0;            // stop once ||z^k - z*||_+ <= stop_tol
  double prune_tol = 1e-14;
  int threads = 1;
  /// When > 0, `checkpoint` is called every check_every iterations with
  /// finalized weights; returning true stops the run.
  int check_every = 0;
  std::function<bool(const FWTrace&)> checkpoint;

  void validate() const;
};

/// Runs K iterations (or fewer on early exit). z_star = (v*, rhs) with rhs of length m.
FWTrace run_stage1(const ProblemInstance& inst, const Vector& z_star, const FWConfig& cfg);
FWTrace run_stage1(const ProblemInstance& inst, double v_star, const FWConfig& cfg);

/// Recomputes gamma from the step sizes, prunes tiny weights with
/// renormalization and re-aggregates z_final from the surviving atoms.
void finalize_weights(FWTrace& trace, double prune_tol = 1e-14);

/// Per block: (pool slot, summed weight) over surviving iterates, in slot order.
std::vector<std::vector<std::pair<int, double>>> merged_weights(const FWTrace& trace);

/// Max pairwise distance between LMO outputs at `samples` random directions.
/// The points lie in the hull, so this is a sampled stand-in for its diameter.
double estimate_diameter(const ProblemInstance& inst, int samples, std::uint64_t seed, int threads = 1);

}  // namespace sfopt
