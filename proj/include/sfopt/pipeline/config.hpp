// Solver configuration and its JSON form.
//
// {
//   "seed": 0, "threads": 1, "tol": {"feas": 1e-8, "rel": 1e-6},
//   "dual": {...}, "fw": {...}, "carath": {...}, "reconstruct": {...},
//   "diameter": {"samples": 200}
// }
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sfopt/carath/exact.hpp"
#include "sfopt/dual/dual_solver.hpp"
#include "sfopt/fw/stage1.hpp"
#include "sfopt/trim/trim.hpp"

namespace sfopt {

struct CarathConfig {
  std::string method = "exact";  // "exact" | "fcfw" | "mnp"
  std::optional<int> T;          // approximate paths; default n + m
  bool retry = true;             // double T on uncovered blocks
  ExactConfig exact;
  ApproxConfig approx;
};

struct ReconstructConfig {
  std::optional<std::string> scheme;  // default chosen per application
  bool perturb = true;                // run the zeta loop when theta_unit is known
  int zeta_start = 0;
  int zeta_max = 10;
  std::optional<int> zeta_fixed;      // single run at this zeta, no loop
};

struct SolverConfig {
  std::uint64_t seed = 0;
  int threads = 1;
  Tolerances tol;
  DualConfig dual;
  FWConfig fw;
  CarathConfig carath;
  ReconstructConfig reconstruct;
  int diameter_samples = 200;  // 0 disables the sampled diameter

  void validate() const;
  static SolverConfig from_json(const Json& j);
  Json to_json() const;
};

/// Default scheme for an application: "repair" when every block can repair,
/// "max" otherwise; convex quadratic boxes use "average".
std::string default_scheme(const ProblemInstance& inst);

}  // namespace sfopt
