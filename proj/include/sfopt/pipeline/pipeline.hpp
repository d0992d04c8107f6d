// End-to-end solve: dual value, first stage, trimming, reconstruction and the
// zeta loop on the perturbed right-hand side.
#pragma once

#include <string>
#include <vector>

#include "sfopt/pipeline/config.hpp"
#include "sfopt/reconstruct/reconstruct.hpp"

namespace sfopt {

struct StageTimes {
  double dual = 0.0;
  double fw = 0.0;
  double trim = 0.0;
  double reconstruct = 0.0;
  double total = 0.0;
};

/// One pass of first stage -> trim -> reconstruct against rhs.
struct PassResult {
  int zeta = 0;
  Vector rhs;
  double v_star_theta = 0.0;
  int dual_iterations = 0;
  FWTrace trace;
  TrimResult trim;
  Reconstruction rec;               // evaluated against the original b
  double violation_plus_perturbed = 0.0;  // ||sum A x - rhs||_+
  bool feasible = false;            // for the original b
  StageTimes times;
};

PassResult run_pass(const ProblemInstance& inst, const Vector& rhs, double v_star_theta, int zeta,
                    const SolverConfig& cfg, const std::string& scheme);

struct SchemeSummary {
  std::string scheme;
  ExtReal objective;
  double violation_plus = 0.0;
  bool blocks_feasible = false;
};

struct SolveReport {
  std::string status;  // "feasible" | "infeasible" | "zeta_exhausted"
  std::string scheme;
  std::string method;
  double v_star = 0.0;           // unperturbed
  int dual_iterations = 0;
  std::string dual_stop;
  double v_star_theta = 0.0;     // dual value of the last pass's rhs
  ExtReal objective;
  double gap = 0.0;              // objective - v_star (infinite objective -> inf)
  double violation_plus = 0.0;   // original b
  double violation_plus_perturbed = 0.0;
  bool feasible = false;
  int zeta_used = 0;
  int passes = 0;
  int q = 0;
  int atoms_pool = 0;            // distinct atoms produced by the first stage
  int columns = 0;               // lifted columns N
  int entries = 0;               // entries after trimming
  int T_used = 0;
  int trim_retries = 0;
  double trim_residual = 0.0;
  bool inner_stalled = false;
  int fw_iterations = 0;
  std::string fw_stop;
  double fw_residual = 0.0;
  double max_gamma = 0.0;
  std::string gamma_source;      // "oracle" | "sampled"
  double diameter = 0.0;         // 0 when not sampled
  std::vector<SchemeSummary> schemes;
  std::vector<Vector> x_bar;
  std::vector<double> fw_residuals;
  std::vector<double> fw_times;
  std::vector<double> carath_residuals;
  std::vector<double> carath_times;
  StageTimes times;

  Json to_json() const;
  /// "stage,k,residual,time_s" series for the first stage and the approximate trim.
  std::string series_csv() const;
};

/// Full pipeline; never throws for an infeasible outcome (see status).
SolveReport solve(const ProblemInstance& inst, const SolverConfig& cfg);

/// The zeta loop: dual and pass per zeta until a pass is feasible for the
/// original b. `first` holds the unperturbed dual result.
struct PerturbationOutcome {
  PassResult pass;
  int passes = 0;
  bool feasible = false;
};

PerturbationOutcome solve_with_perturbation(const ProblemInstance& inst, const DualResult& first,
                                            const SolverConfig& cfg, const std::string& scheme);

/// Solver process exit code for a report: 0 feasible, 1 otherwise.
int exit_code_for(const SolveReport& report);
/// Exit code for an error: 2 invalid argument, 3 I/O or parse, 4 invalid instance, 5 numerical, 6 oracle.
int exit_code_for(ErrorCode code);

}  // namespace sfopt
