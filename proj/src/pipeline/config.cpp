#include "sfopt/pipeline/config.hpp"

#include <initializer_list>
#include <set>

#include "sfopt/reconstruct/reconstruct.hpp"

namespace sfopt {

namespace {

void check_keys(const Json& j, const char* section, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, std::string("config section '") + section + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.count(it.key())) {
      throw Error(ErrorCode::kParse, std::string("unknown config key '") + section + "." + it.key() + "'");
    }
  }
}

template <class T>
void read(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <class T>
void read_opt(const Json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace

void SolverConfig::validate() const {
  if (threads < 1) throw Error(ErrorCode::kInvalidArgument, "threads must be >= 1");
  if (!(tol.feas > 0.0) || !(tol.rel > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerances must be positive");
  dual.validate();
  fw.validate();
  const auto& m = carath.method;
  if (m != "exact" && m != "fcfw" && m != "mnp") {
    throw Error(ErrorCode::kInvalidArgument, "carath.method must be 'exact', 'fcfw' or 'mnp'");
  }
  if (carath.T && *carath.T < 0) throw Error(ErrorCode::kInvalidArgument, "carath.T must be >= 0");
  if (carath.exact.max_redraws < 0) throw Error(ErrorCode::kInvalidArgument, "carath.max_redraws must be >= 0");
  if (reconstruct.scheme && !is_known_scheme(*reconstruct.scheme)) {
    throw Error(ErrorCode::kInvalidArgument, "reconstruct.scheme must be average, sample, repair or max");
  }
  if (reconstruct.zeta_start < 0 || reconstruct.zeta_max < reconstruct.zeta_start) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 <= reconstruct.zeta_start <= reconstruct.zeta_max");
  }
  if (reconstruct.zeta_fixed && *reconstruct.zeta_fixed < 0) {
    throw Error(ErrorCode::kInvalidArgument, "reconstruct.zeta_fixed must be >= 0");
  }
  if (diameter_samples != 0 && diameter_samples < 2) {
    throw Error(ErrorCode::kInvalidArgument, "diameter.samples must be 0 or >= 2");
  }
}

SolverConfig SolverConfig::from_json(const Json& j) {
  SolverConfig c;
  try {
    check_keys(j, "<root>", {"seed", "threads", "tol", "dual", "fw", "carath", "reconstruct", "diameter", "instance",
                             "uc", "pev", "quadratic-box", "sweep", "output"});
    read(j, "seed", c.seed);
    read(j, "threads", c.threads);
    if (j.contains("tol")) {
      const Json& t = j.at("tol");
      check_keys(t, "tol", {"feas", "rel"});
      read(t, "feas", c.tol.feas);
      read(t, "rel", c.tol.rel);
    }
    if (j.contains("dual")) {
      const Json& d = j.at("dual");
      check_keys(d, "dual", {"max_iter", "step_rule", "step0", "stop_tol", "patience", "v_star"});
      read(d, "max_iter", c.dual.max_iter);
      read(d, "step_rule", c.dual.step_rule);
      read_opt(d, "step0", c.dual.step0);
      read(d, "stop_tol", c.dual.stop_tol);
      read(d, "patience", c.dual.patience);
      read_opt(d, "v_star", c.dual.v_star);
    }
    if (j.contains("fw")) {
      const Json& f = j.at("fw");
      check_keys(f, "fw", {"K", "step_rule", "stop_tol", "check_every", "prune_tol"});
      read(f, "K", c.fw.K);
      read(f, "step_rule", c.fw.step_rule);
      read(f, "stop_tol", c.fw.stop_tol);
      read(f, "check_every", c.fw.check_every);
      read(f, "prune_tol", c.fw.prune_tol);
    }
    if (j.contains("carath")) {
      const Json& k = j.at("carath");
      check_keys(k, "carath", {"method", "T", "retry", "max_redraws", "refactor_every", "equilibrate", "polish", "debug",
                               "scale_rows", "inner_tol", "inner_max_iter", "mnp_tol"});
      read(k, "method", c.carath.method);
      read_opt(k, "T", c.carath.T);
      read(k, "retry", c.carath.retry);
      read(k, "max_redraws", c.carath.exact.max_redraws);
      read(k, "refactor_every", c.carath.exact.refactor_every);
      read(k, "equilibrate", c.carath.exact.equilibrate);
      read(k, "polish", c.carath.exact.polish);
      read(k, "debug", c.carath.exact.debug);
      read(k, "scale_rows", c.carath.approx.scale_rows);
      read(k, "inner_tol", c.carath.approx.fcfw.inner.tol);
      read(k, "inner_max_iter", c.carath.approx.fcfw.inner.max_iter);
      read(k, "mnp_tol", c.carath.approx.mnp.tol);
    }
    if (j.contains("reconstruct")) {
      const Json& r = j.at("reconstruct");
      check_keys(r, "reconstruct", {"scheme", "perturb", "zeta_start", "zeta_max", "zeta_fixed"});
      read_opt(r, "scheme", c.reconstruct.scheme);
      read(r, "perturb", c.reconstruct.perturb);
      read(r, "zeta_start", c.reconstruct.zeta_start);
      read(r, "zeta_max", c.reconstruct.zeta_max);
      read_opt(r, "zeta_fixed", c.reconstruct.zeta_fixed);
    }
    if (j.contains("diameter")) {
      const Json& d = j.at("diameter");
      check_keys(d, "diameter", {"samples"});
      read(d, "samples", c.diameter_samples);
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  c.dual.threads = c.threads;
  c.fw.threads = c.threads;
  c.validate();
  return c;
}

Json SolverConfig::to_json() const {
  Json j;
  j["seed"] = seed;
  j["threads"] = threads;
  j["tol"] = {{"feas", tol.feas}, {"rel", tol.rel}};
  j["dual"] = {{"max_iter", dual.max_iter}, {"step_rule", dual.step_rule}, {"stop_tol", dual.stop_tol},
               {"patience", dual.patience}};
  if (dual.step0) j["dual"]["step0"] = *dual.step0;
  if (dual.v_star) j["dual"]["v_star"] = *dual.v_star;
  j["fw"] = {{"K", fw.K}, {"step_rule", fw.step_rule}, {"stop_tol", fw.stop_tol}, {"check_every", fw.check_every},
             {"prune_tol", fw.prune_tol}};
  j["carath"] = {{"method", carath.method},
                 {"retry", carath.retry},
                 {"max_redraws", carath.exact.max_redraws},
                 {"refactor_every", carath.exact.refactor_every},
                 {"equilibrate", carath.exact.equilibrate},
                 {"polish", carath.exact.polish},
                 {"debug", carath.exact.debug},
                 {"scale_rows", carath.approx.scale_rows},
                 {"inner_tol", carath.approx.fcfw.inner.tol},
                 {"inner_max_iter", carath.approx.fcfw.inner.max_iter},
                 {"mnp_tol", carath.approx.mnp.tol}};
  if (carath.T) j["carath"]["T"] = *carath.T;
  j["reconstruct"] = {{"perturb", reconstruct.perturb},
                      {"zeta_start", reconstruct.zeta_start},
                      {"zeta_max", reconstruct.zeta_max}};
  if (reconstruct.scheme) j["reconstruct"]["scheme"] = *reconstruct.scheme;
  if (reconstruct.zeta_fixed) j["reconstruct"]["zeta_fixed"] = *reconstruct.zeta_fixed;
  j["diameter"] = {{"samples", diameter_samples}};
  return j;
}

std::string default_scheme(const ProblemInstance& inst) {
  bool all_convex_box = true;
  bool all_repair = true;
  for (const auto& blk : inst.blocks) {
    all_convex_box = all_convex_box && blk.oracle->app() == "quadratic-box";
    all_repair = all_repair && blk.oracle->has_repair();
  }
  if (all_convex_box) return "average";
  return all_repair ? "repair" : "max";
}

}  // namespace sfopt
