// Primal candidates built from trimmed per-block weights.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sfopt/trim/trim.hpp"

namespace sfopt {

struct Reconstruction {
  std::vector<Vector> x_bar;
  std::string scheme;
  ExtReal objective;
  Vector violation;  // sum_i A_i x_i - b for the instance passed in
  double violation_plus = 0.0;
  std::vector<bool> per_block_feasible;

  bool all_blocks_feasible() const;
  /// All blocks in their domains and ||violation||_+ <= tol (1 + ||b||_inf).
  bool feasible(const Vector& b, double tol) const;
};

/// x_i = sum_l alpha_l y_l.
Reconstruction reconstruct_average(const TrimResult& trim, const ProblemInstance& inst);
/// x_i = y_l drawn with probability alpha_l; one draw per block in block order.
Reconstruction reconstruct_sample(const TrimResult& trim, const ProblemInstance& inst, std::uint64_t seed);
/// Single-entry blocks keep their atom; others repair their weighted average.
/// Throws kRepairUnavailable naming blocks whose oracle has no repair.
Reconstruction reconstruct_repair(const TrimResult& trim, const ProblemInstance& inst);
/// x_i = atom with the largest alpha_l; ties go to the first entry.
Reconstruction reconstruct_max(const TrimResult& trim, const ProblemInstance& inst);

/// Dispatch on "average" | "sample" | "repair" | "max".
Reconstruction reconstruct(const TrimResult& trim, const ProblemInstance& inst, const std::string& scheme,
                           std::uint64_t seed = 0);

bool is_known_scheme(const std::string& scheme);

/// Evaluates x through the instance (objective, violation, membership).
Reconstruction make_reconstruction(const ProblemInstance& inst, std::vector<Vector> x, std::string scheme);

}  // namespace sfopt
