#include "sfopt/dual/dual_solver.hpp"

#include <cmath>

#include "sfopt/parallel.hpp"

namespace sfopt {

void DualConfig::validate() const {
  if (max_iter < 0) throw Error(ErrorCode::kInvalidArgument, "dual.max_iter must be >= 0");
  if (step_rule != "dog" && step_rule != "sqrt") {
    throw Error(ErrorCode::kInvalidArgument, "dual.step_rule must be 'dog' or 'sqrt'");
  }
  if (step0 && !(*step0 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dual.step0 must be positive");
  if (!(stop_tol >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "dual.stop_tol must be >= 0");
  if (patience < 1) throw Error(ErrorCode::kInvalidArgument, "dual.patience must be >= 1");
  if (v_star && !std::isfinite(*v_star)) throw Error(ErrorCode::kNonFinite, "dual.v_star must be finite");
}

PsiEval eval_psi(const ProblemInstance& inst, const Vector& lambda, int threads) {
  if (lambda.size() != inst.m) throw Error(ErrorCode::kInvalidArgument, "eval_psi: lambda has wrong length");
  if (!lambda.allFinite()) throw Error(ErrorCode::kNonFinite, "eval_psi: non-finite lambda");
  if ((lambda.array() < 0.0).any()) throw Error(ErrorCode::kInvalidArgument, "eval_psi: lambda must be >= 0");

  std::vector<ConjugatePoint> pts(inst.n);
  parallel_for(inst.n, threads, [&](int i) {
    const auto& blk = inst.blocks[i];
    try {
      pts[i] = blk.oracle->conjugate(-(blk.A.transpose() * lambda));
    } catch (const Error& e) {
      throw Error(e.code(), "block " + std::to_string(i) + ": " + e.what());
    }
  });

  PsiEval out;
  out.subgrad = -inst.b;
  double conj_sum = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    conj_sum += pts[i].value;
    out.subgrad += inst.blocks[i].A * pts[i].argmax;
    out.minimizers.push_back(std::move(pts[i].argmax));
  }
  // min_x f(x) + lambda'A x = -f*(-A'lambda)
  out.psi = -conj_sum - lambda.dot(inst.b);
  return out;
}

DualResult solve_dual(const ProblemInstance& inst, const DualConfig& cfg) {
  cfg.validate();
  DualResult res;
  res.lambda = Vector::Zero(inst.m);
  if (cfg.v_star) {
    res.v_star = *cfg.v_star;
    res.stop_reason = "supplied";
    return res;
  }

  Vector lambda = Vector::Zero(inst.m);
  const Vector lambda0 = lambda;
  const double step0 = cfg.step0.value_or(1.0 / (1.0 + inst.b.norm()));
  // dog state
  double max_dist = 1e-4 * (1.0 + lambda0.norm());
  double grad_sq_sum = 0.0;

  PsiEval ev = eval_psi(inst, lambda, cfg.threads);
  res.v_star = ev.psi;
  res.lambda = lambda;
  res.psi_history.push_back(ev.psi);
  double window_best = ev.psi;
  int window_start = 0;
  res.stop_reason = "max_iter";

  for (int t = 0; t < cfg.max_iter; ++t) {
    const double gnorm = ev.subgrad.norm();
    // zero supergradient at a feasible projection point means optimality
    const Vector projected_dir = (lambda + ev.subgrad).cwiseMax(0.0) - lambda;
    if (projected_dir.norm() == 0.0) {
      res.stop_reason = "stationary";
      break;
    }
    double eta;
    if (cfg.step_rule == "sqrt") {
      eta = step0 / std::sqrt(t + 1.0);
    } else {
      grad_sq_sum += gnorm * gnorm;
      eta = max_dist / std::sqrt(grad_sq_sum);
    }
    lambda = (lambda + eta * ev.subgrad).cwiseMax(0.0);
    max_dist = std::max(max_dist, (lambda - lambda0).norm());

    ev = eval_psi(inst, lambda, cfg.threads);
    res.iterations = t + 1;
    if (ev.psi > res.v_star) {
      res.v_star = ev.psi;
      res.lambda = lambda;
    }
    res.psi_history.push_back(res.v_star);

    if (res.iterations - window_start >= cfg.patience) {
      if (res.v_star - window_best < cfg.stop_tol * (1.0 + std::abs(res.v_star))) {
        res.stop_reason = "patience";
        break;
      }
      window_best = res.v_star;
      window_start = res.iterations;
    }
  }
  return res;
}

}  // namespace sfopt
