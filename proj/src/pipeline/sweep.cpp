#include "sfopt/pipeline/sweep.hpp"

#include <sstream>

#include "sfopt/apps/registry.hpp"
#include "sfopt/serialize.hpp"

namespace sfopt {

void SweepSpec::validate() const {
  if (over != "K" && over != "n") throw Error(ErrorCode::kInvalidArgument, "sweep must run over 'K' or 'n'");
  if (grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty grid");
  if (seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "empty seed list");
  for (int v : grid) {
    if (v < (over == "K" ? 0 : 1)) throw Error(ErrorCode::kInvalidArgument, "grid value out of range");
  }
  if (over == "n" && instance) throw Error(ErrorCode::kInvalidArgument, "an n sweep needs generated instances");
  if (!instance && !apps::is_known_app(app)) throw Error(ErrorCode::kInvalidArgument, "unknown app '" + app + "'");
}

SweepSpec sweep_spec_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "sweep spec must be an object");
  SweepSpec s;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      static const char* known[] = {"over", "grid", "seeds", "app", "n", "N", "overrides", "config", "instance"};
      bool ok = false;
      for (const char* k : known) ok = ok || it.key() == k;
      if (!ok) throw Error(ErrorCode::kParse, "unknown sweep key '" + it.key() + "'");
    }
    if (j.contains("over")) s.over = j.at("over").get<std::string>();
    if (j.contains("grid")) s.grid = j.at("grid").get<std::vector<int>>();
    if (j.contains("seeds")) s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("app")) s.app = j.at("app").get<std::string>();
    if (j.contains("n")) s.n = j.at("n").get<int>();
    if (j.contains("N")) s.N = j.at("N").get<int>();
    if (j.contains("overrides")) s.overrides = j.at("overrides");
    if (j.contains("config")) s.cfg = SolverConfig::from_json(j.at("config"));
    if (j.contains("instance")) s.instance = instance_from_json(j.at("instance"));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("sweep spec: ") + e.what());
  }
  return s;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows;
  for (int value : spec.grid) {
    for (std::uint64_t seed : spec.seeds) {
      SolverConfig cfg = spec.cfg;
      cfg.seed = seed;
      if (spec.over == "K") cfg.fw.K = value;
      const ProblemInstance inst = spec.instance ? *spec.instance
                                                 : apps::generate(spec.app, spec.over == "n" ? value : spec.n, spec.N,
                                                                  seed, spec.overrides);
      rows.push_back({spec.over, value, seed, solve(inst, cfg)});
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "over,value,seed,status,v_star,v_star_theta,objective,gap,violation_plus,violation_plus_perturbed,"
        "feasible,zeta_used,q,entries,columns,fw_iterations,max_gamma,time_dual_s,time_fw_s,time_trim_s,"
        "time_reconstruct_s,time_total_s\n";
  for (const auto& r : rows) {
    const auto& p = r.report;
    os << r.over << ',' << r.value << ',' << r.seed << ',' << p.status << ',' << p.v_star << ',' << p.v_star_theta
       << ',';
    if (p.objective.is_finite()) {
      os << p.objective.value() << ',' << p.gap;
    } else {
      os << "inf,inf";
    }
    os << ',' << p.violation_plus << ',' << p.violation_plus_perturbed << ',' << (p.feasible ? 1 : 0) << ','
       << p.zeta_used << ',' << p.q << ',' << p.entries << ',' << p.columns << ',' << p.fw_iterations << ','
       << p.max_gamma << ',' << p.times.dual << ',' << p.times.fw << ',' << p.times.trim << ','
       << p.times.reconstruct << ',' << p.times.total << '\n';
  }
  return os.str();
}

}  // namespace sfopt
