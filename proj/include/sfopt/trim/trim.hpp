// Lifting of the first-stage output and per-block regrouping of the trimmed weights.
#pragma once

#include <string>
#include <vector>

#include "sfopt/carath/approx.hpp"
#include "sfopt/carath/exact.hpp"
#include "sfopt/fw/stage1.hpp"

namespace sfopt {

/// Lifted columns (cost, image, e_block), their conic weights and
/// w = (z_final, 1_n). Columns are ordered by producing iteration, then block.
struct LiftedInput {
  std::vector<const Atom*> atoms;
  Vector lam;
  Vector w;
  int n = 0;
  int m = 0;

  LiftedColumns columns() const { return LiftedColumns(atoms, n, m); }
};

/// The returned atoms point into trace.pool, which must outlive the result.
LiftedInput lift(const FWTrace& trace, int n, int m);

struct TrimResult {
  std::vector<std::vector<WeightedAtom>> groups;  // per block, weights sum to 1
  int q = 0;                 // blocks with more than one entry
  std::string source;        // "exact" | "fcfw" | "mnp"
  double residual = 0.0;     // exact: ||W alpha - w||; approx: n ||W beta - w/n||
  int columns = 0;           // lifted columns N
  int T = 0;                 // approximate paths: iteration budget finally used
  int retries = 0;           // uncovered-block retries
  bool inner_stalled = false;
  std::vector<double> residual_history;  // approximate paths, unnormalized scale
  std::vector<double> time_history;

  int entries() const;
  /// sum_i sum_l alpha_l (cost_l, image_l), length 1 + m.
  Vector aggregate(int m) const;
};

TrimResult trim_exact(const FWTrace& trace, const ProblemInstance& inst, const ExactConfig& cfg = {});

struct ApproxConfig {
  FCFWConfig fcfw;
  MNPConfig mnp;
  bool scale_rows = true;  // equilibrate lifted rows before measuring distances
};

/// Single attempt with budget T >= n - 1. Throws kUncoveredBlock when some
/// block receives no weight.
TrimResult trim_approx(const FWTrace& trace, const ProblemInstance& inst, const std::string& method, int T,
                       const ApproxConfig& cfg = {});

/// trim_approx, doubling T up to N - 1 while blocks stay uncovered.
TrimResult trim_approx_retry(const FWTrace& trace, const ProblemInstance& inst, const std::string& method, int T,
                             const ApproxConfig& cfg = {});

}  // namespace sfopt
