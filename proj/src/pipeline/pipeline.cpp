#include "sfopt/pipeline/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "sfopt/serialize.hpp"

namespace sfopt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// sub-seed labels
constexpr std::uint64_t kSeedExact = 10;
constexpr std::uint64_t kSeedSample = 20;
constexpr std::uint64_t kSeedDiameter = 30;

Vector rhs_for(const ProblemInstance& inst, int zeta) {
  if (zeta == 0) return inst.b;
  if (!inst.theta_unit) throw Error(ErrorCode::kInvalidArgument, "instance has no perturbation direction");
  return inst.b - static_cast<double>(zeta) * *inst.theta_unit;
}

TrimResult do_trim(const FWTrace& trace, const ProblemInstance& inst, const SolverConfig& cfg, const std::string& method,
                   std::optional<int> T, int zeta) {
  if (method == "exact") {
    ExactConfig ec = cfg.carath.exact;
    ec.seed = Rng::derive(cfg.seed, kSeedExact + static_cast<std::uint64_t>(zeta));
    return trim_exact(trace, inst, ec);
  }
  const int budget = T.value_or(inst.n + inst.m);
  if (cfg.carath.retry) return trim_approx_retry(trace, inst, method, budget, cfg.carath.approx);
  return trim_approx(trace, inst, method, budget, cfg.carath.approx);
}

Json ext_to_json(ExtReal v) { return v.is_finite() ? Json(v.value()) : Json("inf"); }

}  // namespace

PassResult run_pass(const ProblemInstance& inst, const Vector& rhs, double v_star_theta, int zeta,
                    const SolverConfig& cfg, const std::string& scheme) {
  PassResult pr;
  pr.zeta = zeta;
  pr.rhs = rhs;
  pr.v_star_theta = v_star_theta;
  const std::uint64_t sample_seed = Rng::derive(cfg.seed, kSeedSample + static_cast<std::uint64_t>(zeta));

  Vector z_star(1 + inst.m);
  z_star[0] = v_star_theta;
  z_star.tail(inst.m) = rhs;

  FWConfig fc = cfg.fw;
  fc.threads = cfg.threads;
  if (fc.check_every > 0 && !fc.checkpoint) {
    // cheap periodic trial: mnp trim and the configured scheme
    fc.checkpoint = [&](const FWTrace& tr) {
      try {
        SolverConfig light = cfg;
        light.carath.retry = true;
        const TrimResult t = do_trim(tr, inst, light, "mnp", std::nullopt, zeta);
        return reconstruct(t, inst, scheme, sample_seed).feasible(inst.b, cfg.tol.feas);
      } catch (const Error&) {
        return false;
      }
    };
  }

  auto t0 = Clock::now();
  pr.trace = run_stage1(inst, z_star, fc);
  pr.times.fw = seconds_since(t0);

  t0 = Clock::now();
  pr.trim = do_trim(pr.trace, inst, cfg, cfg.carath.method, cfg.carath.T, zeta);
  pr.times.trim = seconds_since(t0);

  t0 = Clock::now();
  pr.rec = reconstruct(pr.trim, inst, scheme, sample_seed);
  pr.times.reconstruct = seconds_since(t0);

  pr.violation_plus_perturbed = plus_norm(pr.rec.violation + inst.b - rhs);
  pr.feasible = pr.rec.feasible(inst.b, cfg.tol.feas);
  return pr;
}

PerturbationOutcome solve_with_perturbation(const ProblemInstance& inst, const DualResult& first,
                                            const SolverConfig& cfg, const std::string& scheme) {
  const auto& rc = cfg.reconstruct;
  std::vector<int> zetas;
  if (rc.zeta_fixed) {
    zetas.push_back(*rc.zeta_fixed);
  } else if (rc.perturb && inst.theta_unit) {
    for (int z = rc.zeta_start; z <= rc.zeta_max; ++z) zetas.push_back(z);
  } else {
    zetas.push_back(0);
  }

  PerturbationOutcome out;
  for (int zeta : zetas) {
    const Vector rhs = rhs_for(inst, zeta);
    auto t0 = Clock::now();
    DualResult dr = first;
    if (zeta != 0) {
      DualConfig dc = cfg.dual;
      dc.v_star.reset();
      dc.threads = cfg.threads;
      dr = solve_dual(inst.with_rhs(rhs), dc);
    }
    const double dual_time = zeta != 0 ? seconds_since(t0) : 0.0;
    out.pass = run_pass(inst, rhs, dr.v_star, zeta, cfg, scheme);
    out.pass.dual_iterations = dr.iterations;
    out.pass.times.dual = dual_time;
    ++out.passes;
    if (out.pass.feasible) {
      out.feasible = true;
      break;
    }
  }
  return out;
}

SolveReport solve(const ProblemInstance& inst, const SolverConfig& cfg_in) {
  inst.validate();
  SolverConfig cfg = cfg_in;
  cfg.dual.threads = cfg.threads;
  cfg.fw.threads = cfg.threads;
  cfg.validate();
  const auto t_start = Clock::now();

  SolveReport rep;
  rep.method = cfg.carath.method;
  rep.scheme = cfg.reconstruct.scheme.value_or(default_scheme(inst));

  auto t0 = Clock::now();
  const DualResult dr = solve_dual(inst, cfg.dual);
  rep.times.dual = seconds_since(t0);
  rep.v_star = dr.v_star;
  rep.dual_iterations = dr.iterations;
  rep.dual_stop = dr.stop_reason;

  const PerturbationOutcome po = solve_with_perturbation(inst, dr, cfg, rep.scheme);
  const PassResult& pr = po.pass;
  rep.passes = po.passes;
  rep.feasible = po.feasible;
  const bool looped = !cfg.reconstruct.zeta_fixed && cfg.reconstruct.perturb && inst.theta_unit.has_value();
  rep.status = po.feasible ? "feasible" : (looped ? "zeta_exhausted" : "infeasible");
  rep.zeta_used = pr.zeta;
  rep.v_star_theta = pr.v_star_theta;
  rep.objective = pr.rec.objective;
  rep.gap = pr.rec.objective.is_finite() ? pr.rec.objective.value() - rep.v_star
                                         : std::numeric_limits<double>::infinity();
  rep.violation_plus = pr.rec.violation_plus;
  rep.violation_plus_perturbed = pr.violation_plus_perturbed;
  rep.q = pr.trim.q;
  rep.atoms_pool = pr.trace.pool.total();
  rep.columns = pr.trim.columns;
  rep.entries = pr.trim.entries();
  rep.T_used = pr.trim.T;
  rep.trim_retries = pr.trim.retries;
  rep.trim_residual = pr.trim.residual;
  rep.inner_stalled = pr.trim.inner_stalled;
  rep.fw_iterations = pr.trace.iterations;
  rep.fw_stop = pr.trace.stop_reason;
  rep.fw_residual = pr.trace.residual_history.back();
  rep.x_bar = pr.rec.x_bar;
  rep.fw_residuals = pr.trace.residual_history;
  rep.fw_times = pr.trace.time_history;
  rep.carath_residuals = pr.trim.residual_history;
  rep.carath_times = pr.trim.time_history;
  rep.times.dual += pr.times.dual;
  rep.times.fw = pr.times.fw;
  rep.times.trim = pr.times.trim;
  rep.times.reconstruct = pr.times.reconstruct;

  // every scheme the final trim supports, for comparison
  for (const char* s : {"average", "sample", "repair", "max"}) {
    try {
      const Reconstruction r =
          reconstruct(pr.trim, inst, s, Rng::derive(cfg.seed, kSeedSample + static_cast<std::uint64_t>(pr.zeta)));
      rep.schemes.push_back({s, r.objective, r.violation_plus, r.all_blocks_feasible()});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kRepairUnavailable) throw;
    }
  }

  bool all_bounds = true;
  rep.max_gamma = 0.0;
  for (const auto& blk : inst.blocks) {
    const auto g = blk.oracle->gamma_bound();
    if (!g) {
      all_bounds = false;
      break;
    }
    rep.max_gamma = std::max(rep.max_gamma, *g);
  }
  if (all_bounds) {
    rep.gamma_source = "oracle";
  } else {
    rep.gamma_source = "sampled";
    rep.max_gamma = 0.0;
    for (int i = 0; i < inst.n; ++i) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (int a = 0; a < pr.trace.pool.block_size(i); ++a) {
        lo = std::min(lo, pr.trace.pool.at(i, a).cost);
        hi = std::max(hi, pr.trace.pool.at(i, a).cost);
      }
      rep.max_gamma = std::max(rep.max_gamma, hi - lo);
    }
  }
  if (cfg.diameter_samples > 0) {
    rep.diameter = estimate_diameter(inst, cfg.diameter_samples, Rng::derive(cfg.seed, kSeedDiameter), cfg.threads);
  }
  rep.times.total = seconds_since(t_start);
  return rep;
}

Json SolveReport::to_json() const {
  Json j;
  j["status"] = status;
  j["feasible"] = feasible;
  j["scheme"] = scheme;
  j["method"] = method;
  j["v_star"] = v_star;
  j["v_star_theta"] = v_star_theta;
  j["dual_iterations"] = dual_iterations;
  j["dual_stop"] = dual_stop;
  j["objective"] = ext_to_json(objective);
  j["gap"] = std::isfinite(gap) ? Json(gap) : Json("inf");
  j["violation_plus"] = violation_plus;
  j["violation_plus_perturbed"] = violation_plus_perturbed;
  j["zeta_used"] = zeta_used;
  j["passes"] = passes;
  j["q"] = q;
  j["atoms_pool"] = atoms_pool;
  j["columns"] = columns;
  j["entries"] = entries;
  j["T_used"] = T_used;
  j["trim_retries"] = trim_retries;
  j["trim_residual"] = trim_residual;
  j["inner_stalled"] = inner_stalled;
  j["fw_iterations"] = fw_iterations;
  j["fw_stop"] = fw_stop;
  j["fw_residual"] = fw_residual;
  j["max_gamma"] = max_gamma;
  j["gamma_source"] = gamma_source;
  j["diameter"] = diameter;
  Json sch = Json::array();
  for (const auto& s : schemes) {
    sch.push_back({{"scheme", s.scheme},
                   {"objective", ext_to_json(s.objective)},
                   {"violation_plus", s.violation_plus},
                   {"blocks_feasible", s.blocks_feasible}});
  }
  j["schemes"] = sch;
  Json xs = Json::array();
  for (const auto& x : x_bar) xs.push_back(vector_to_json(x));
  j["x_bar"] = xs;
  j["times"] = {{"dual_s", times.dual},
                {"fw_s", times.fw},
                {"trim_s", times.trim},
                {"reconstruct_s", times.reconstruct},
                {"total_s", times.total}};
  return j;
}

std::string SolveReport::series_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "stage,k,residual,time_s\n";
  for (std::size_t k = 0; k < fw_residuals.size(); ++k) {
    os << "fw," << k << ',' << fw_residuals[k] << ',' << (k < fw_times.size() ? fw_times[k] : 0.0) << '\n';
  }
  for (std::size_t k = 0; k < carath_residuals.size(); ++k) {
    os << method << ',' << k << ',' << carath_residuals[k] << ',' << (k < carath_times.size() ? carath_times[k] : 0.0)
       << '\n';
  }
  return os.str();
}

int exit_code_for(const SolveReport& report) { return report.feasible ? 0 : 1; }

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZetaExhausted: return 1;
    case ErrorCode::kInvalidArgument: return 2;
    case ErrorCode::kIo:
    case ErrorCode::kParse: return 3;
    case ErrorCode::kInvalidInstance: return 4;
    case ErrorCode::kNonFinite:
    case ErrorCode::kInconsistentInput:
    case ErrorCode::kDegenerateSystem:
    case ErrorCode::kUncoveredBlock:
    case ErrorCode::kInnerStalled: return 5;
    case ErrorCode::kOracle:
    case ErrorCode::kInfeasibleBlock:
    case ErrorCode::kRepairUnavailable: return 6;
  }
  return 5;
}

}  // namespace sfopt
