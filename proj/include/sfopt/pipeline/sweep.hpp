// Grid runs of the pipeline over the iteration budget K or the block count n.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfopt/pipeline/pipeline.hpp"

namespace sfopt {

struct SweepSpec {
  std::string over = "K";  // "K" | "n"
  std::vector<int> grid;
  std::vector<std::uint64_t> seeds{0};
  std::string app = "uc";
  int n = 50;
  int N = 10;
  Json overrides = Json::object();  // generator section for the app
  /// Used for every point of a K sweep instead of generating per seed.
  std::optional<ProblemInstance> instance;
  SolverConfig cfg;

  void validate() const;
};

struct SweepRow {
  std::string over;
  int value = 0;
  std::uint64_t seed = 0;
  SolveReport report;
};

/// {"over", "grid", "seeds", "app", "n", "N", "overrides", "config", "instance"}.
SweepSpec sweep_spec_from_json(const Json& j);

std::vector<SweepRow> run_sweep(const SweepSpec& spec);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace sfopt
