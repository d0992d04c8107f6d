#include "sfopt/sfopt.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "sfopt/apps/registry.hpp"
#include "sfopt/carath/exact.hpp"
#include "sfopt/carath/simplex.hpp"
#include "sfopt/pipeline/pipeline.hpp"
#include "sfopt/pipeline/sweep.hpp"
#include "sfopt/serialize.hpp"

struct sfopt_instance {
  sfopt::ProblemInstance inst;
};

struct sfopt_report {
  sfopt::SolveReport report;
};

namespace {

thread_local std::string g_last_error;

sfopt_status to_status(sfopt::ErrorCode code) { return static_cast<sfopt_status>(static_cast<int>(code)); }

sfopt_status fail(sfopt_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
sfopt_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return SFOPT_OK;
  } catch (const sfopt::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(SFOPT_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SFOPT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SFOPT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SFOPT_ERR_INTERNAL, "unknown exception");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool cond, const char* msg) {
  if (!cond) throw sfopt::Error(sfopt::ErrorCode::kInvalidArgument, msg);
}

sfopt::Json parse_json(const char* text, const char* what) {
  try {
    return sfopt::Json::parse(text);
  } catch (const sfopt::Json::exception& e) {
    throw sfopt::Error(sfopt::ErrorCode::kParse, std::string(what) + ": " + e.what());
  }
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sfopt::Error(sfopt::ErrorCode::kIo, std::string("cannot open ") + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw sfopt::Error(sfopt::ErrorCode::kIo, std::string("cannot read ") + path);
  return ss.str();
}

}  // namespace

extern "C" {

const char* sfopt_version(void) { return "0.1.0"; }

const char* sfopt_last_error(void) { return g_last_error.c_str(); }

const char* sfopt_status_name(sfopt_status status) {
  if (status == SFOPT_OK) return "ok";
  if (status == SFOPT_ERR_INTERNAL) return "internal error";
  if (status >= SFOPT_ERR_INVALID_ARGUMENT && status <= SFOPT_ERR_PARSE) {
    return sfopt::to_string(static_cast<sfopt::ErrorCode>(static_cast<int>(status)));
  }
  return "unknown status";
}

int sfopt_status_exit_code(sfopt_status status) {
  if (status == SFOPT_OK) return 0;
  if (status >= SFOPT_ERR_INVALID_ARGUMENT && status <= SFOPT_ERR_PARSE) {
    return sfopt::exit_code_for(static_cast<sfopt::ErrorCode>(static_cast<int>(status)));
  }
  return 5;
}

void sfopt_string_free(char* s) { std::free(s); }

sfopt_status sfopt_generate(const char* app, int n, int N, uint64_t seed, const char* overrides_json,
                            sfopt_instance** out) {
  return guarded([&] {
    require(app && out, "sfopt_generate: null argument");
    *out = nullptr;
    sfopt::Json overrides = overrides_json ? parse_json(overrides_json, "overrides") : sfopt::Json::object();
    auto h = std::make_unique<sfopt_instance>();
    h->inst = sfopt::apps::generate(app, n, N, seed, overrides);
    *out = h.release();
  });
}

sfopt_status sfopt_instance_from_json(const char* json, sfopt_instance** out) {
  return guarded([&] {
    require(json && out, "sfopt_instance_from_json: null argument");
    *out = nullptr;
    auto h = std::make_unique<sfopt_instance>();
    h->inst = sfopt::parse_instance(json);
    *out = h.release();
  });
}

sfopt_status sfopt_instance_load(const char* path, sfopt_instance** out) {
  return guarded([&] {
    require(path && out, "sfopt_instance_load: null argument");
    *out = nullptr;
    auto h = std::make_unique<sfopt_instance>();
    h->inst = sfopt::parse_instance(read_file(path));
    *out = h.release();
  });
}

sfopt_status sfopt_instance_to_json(const sfopt_instance* inst, char** out) {
  return guarded([&] {
    require(inst && out, "sfopt_instance_to_json: null argument");
    *out = copy_string(sfopt::dump_instance(inst->inst));
  });
}

sfopt_status sfopt_instance_save(const sfopt_instance* inst, const char* path) {
  return guarded([&] {
    require(inst && path, "sfopt_instance_save: null argument");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw sfopt::Error(sfopt::ErrorCode::kIo, std::string("cannot write ") + path);
    f << sfopt::dump_instance(inst->inst);
    if (!f) throw sfopt::Error(sfopt::ErrorCode::kIo, std::string("cannot write ") + path);
  });
}

sfopt_status sfopt_instance_dims(const sfopt_instance* inst, int* n, int* m) {
  return guarded([&] {
    require(inst, "sfopt_instance_dims: null instance");
    if (n) *n = inst->inst.n;
    if (m) *m = inst->inst.m;
  });
}

void sfopt_instance_free(sfopt_instance* inst) { delete inst; }

sfopt_status sfopt_evaluate(const sfopt_instance* inst, const char* x_json, double* objective, int* objective_finite,
                            double* violation_plus) {
  return guarded([&] {
    require(inst && x_json, "sfopt_evaluate: null argument");
    const sfopt::Json j = parse_json(x_json, "x");
    if (!j.is_array()) throw sfopt::Error(sfopt::ErrorCode::kParse, "x must be an array of blocks");
    std::vector<sfopt::Vector> x;
    for (const auto& blk : j) x.push_back(sfopt::vector_from_json(blk, "x block"));
    const auto ev = sfopt::evaluate(inst->inst, x);
    if (objective) *objective = ev.objective.value_or(0.0);
    if (objective_finite) *objective_finite = ev.objective.is_finite() ? 1 : 0;
    if (violation_plus) *violation_plus = sfopt::plus_norm(ev.violation);
  });
}

sfopt_status sfopt_solve(const sfopt_instance* inst, const char* config_json, sfopt_report** out) {
  return guarded([&] {
    require(inst && out, "sfopt_solve: null argument");
    *out = nullptr;
    sfopt::SolverConfig cfg;
    if (config_json) cfg = sfopt::SolverConfig::from_json(parse_json(config_json, "config"));
    cfg.validate();
    auto h = std::make_unique<sfopt_report>();
    h->report = sfopt::solve(inst->inst, cfg);
    *out = h.release();
  });
}

sfopt_status sfopt_report_to_json(const sfopt_report* rep, char** out) {
  return guarded([&] {
    require(rep && out, "sfopt_report_to_json: null argument");
    *out = copy_string(rep->report.to_json().dump(2) + "\n");
  });
}

sfopt_status sfopt_report_series_csv(const sfopt_report* rep, char** out) {
  return guarded([&] {
    require(rep && out, "sfopt_report_series_csv: null argument");
    *out = copy_string(rep->report.series_csv());
  });
}

sfopt_status sfopt_report_summary(const sfopt_report* rep, double* v_star, double* objective, double* violation_plus,
                                  int* feasible, int* zeta_used) {
  return guarded([&] {
    require(rep, "sfopt_report_summary: null report");
    const auto& r = rep->report;
    if (v_star) *v_star = r.v_star;
    if (objective) *objective = r.objective.value_or(0.0);
    if (violation_plus) *violation_plus = r.violation_plus;
    if (feasible) *feasible = r.feasible ? 1 : 0;
    if (zeta_used) *zeta_used = r.zeta_used;
  });
}

int sfopt_report_exit_code(const sfopt_report* rep) { return rep ? sfopt::exit_code_for(rep->report) : 2; }

void sfopt_report_free(sfopt_report* rep) { delete rep; }

sfopt_status sfopt_sweep(const char* spec_json, char** csv_out) {
  return guarded([&] {
    require(spec_json && csv_out, "sfopt_sweep: null argument");
    *csv_out = nullptr;
    const sfopt::SweepSpec spec = sfopt::sweep_spec_from_json(parse_json(spec_json, "sweep spec"));
    spec.validate();
    *csv_out = copy_string(sfopt::sweep_csv(sfopt::run_sweep(spec)));
  });
}

sfopt_status sfopt_exact_caratheodory(int p, int N, const double* W, const double* lam, const double* w_star,
                                      uint64_t seed, double* alpha_out, int* kept_out, int* kept_count,
                                      double* residual) {
  return guarded([&] {
    require(p >= 1 && N >= 1, "sfopt_exact_caratheodory: need p >= 1 and N >= 1");
    require(W && lam && w_star && alpha_out && kept_out && kept_count, "sfopt_exact_caratheodory: null argument");
    const sfopt::Matrix w = Eigen::Map<const sfopt::Matrix>(W, p, N);
    const sfopt::Vector l = Eigen::Map<const sfopt::Vector>(lam, N);
    const sfopt::Vector t = Eigen::Map<const sfopt::Vector>(w_star, p);
    sfopt::ExactConfig cfg;
    cfg.seed = seed;
    const auto out = sfopt::exact_caratheodory(w, l, t, cfg);
    for (std::size_t k = 0; k < out.kept.size(); ++k) {
      alpha_out[k] = out.alpha[static_cast<Eigen::Index>(k)];
      kept_out[k] = out.kept[k];
    }
    *kept_count = static_cast<int>(out.kept.size());
    if (residual) *residual = out.residual;
  });
}

sfopt_status sfopt_project_simplex(int len, const double* v, double* out) {
  return guarded([&] {
    require(len >= 1 && v && out, "sfopt_project_simplex: bad argument");
    const sfopt::Vector x = sfopt::project_simplex(Eigen::Map<const sfopt::Vector>(v, len));
    Eigen::Map<sfopt::Vector>(out, len) = x;
  });
}

}  // extern "C"
