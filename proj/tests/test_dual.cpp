#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "sfopt/apps/registry.hpp"
#include "sfopt/dual/dual_solver.hpp"

using namespace sfopt;
using testutil::vec;

namespace {

// Two scalar quadratic blocks coupled by a1 x1 + a2 x2 <= b.
ProblemInstance two_scalar_blocks(double q1, double c1, double q2, double c2, double a1, double a2, double b) {
  ProblemInstance inst;
  inst.n = 2;
  inst.m = 1;
  inst.b = vec({b});
  for (auto [q, c, a] : {std::tuple{q1, c1, a1}, std::tuple{q2, c2, a2}}) {
    apps::QuadBoxParams p{vec({q}), vec({c}), vec({-1.0}), vec({1.0})};
    inst.blocks.push_back({Matrix::Constant(1, 1, a), std::make_shared<apps::QuadBoxOracle>(p)});
  }
  inst.validate();
  return inst;
}

// Exact primal optimum: the clamped unconstrained minimizer when it is
// feasible, otherwise a ternary search along the active constraint.
double primal_exact(double q1, double c1, double q2, double c2, double a1, double a2, double b) {
  auto clamp = [](double x) { return std::min(1.0, std::max(-1.0, x)); };
  const double u1 = clamp(-c1 / (2 * q1)), u2 = clamp(-c2 / (2 * q2));
  auto f = [&](double x1, double x2) { return q1 * x1 * x1 + c1 * x1 + q2 * x2 * x2 + c2 * x2; };
  if (a1 * u1 + a2 * u2 <= b) return f(u1, u2);
  // x2 = (b - a1 x1) / a2 must stay in [-1, 1]
  double lo = std::max(-1.0, (b - a2) / a1), hi = std::min(1.0, (b + a2) / a1);
  auto g = [&](double x1) { return f(x1, (b - a1 * x1) / a2); };
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (g(m1) < g(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return g(0.5 * (lo + hi));
}

}  // namespace

TEST_SUITE("dual") {

TEST_CASE("psi of x^2 on [-1,1] at lambda 1") {
  auto inst = testutil::one_block_quadbox(vec({1.0}), vec({0.0}), vec({-1.0}), vec({1.0}), Matrix::Ones(1, 1), vec({0.0}));
  const PsiEval ev = eval_psi(inst, vec({1.0}));
  CHECK(ev.minimizers[0][0] == doctest::Approx(-0.5));
  CHECK(ev.psi == doctest::Approx(-0.25));
  CHECK(ev.subgrad[0] == doctest::Approx(-0.5));
  // grid search of min_x x^2 + x over [-1, 1]
  double best = 1e300;
  for (int k = 0; k <= 20000; ++k) {
    const double x = -1.0 + 1e-4 * k;
    best = std::min(best, x * x + x);
  }
  CHECK(ev.psi == doctest::Approx(best).epsilon(1e-8));
}

TEST_CASE("dual value matches the primal optimum of a convex instance") {
  Rng rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const double q1 = rng.uniform(0.5, 2.0), q2 = rng.uniform(0.5, 2.0);
    const double c1 = rng.uniform(-2.0, 2.0), c2 = rng.uniform(-2.0, 2.0);
    const double a1 = rng.uniform(0.2, 1.0), a2 = rng.uniform(0.2, 1.0);
    const double b = rng.uniform(-0.5, 0.5);
    const auto inst = two_scalar_blocks(q1, c1, q2, c2, a1, a2, b);
    DualConfig cfg;
    cfg.max_iter = 20000;
    cfg.patience = 2000;
    cfg.stop_tol = 1e-12;
    const DualResult res = solve_dual(inst, cfg);
    const double ref = primal_exact(q1, c1, q2, c2, a1, a2, b);
    CAPTURE(trial);
    CHECK(res.v_star <= ref + 1e-9);
    CHECK(res.v_star == doctest::Approx(ref).epsilon(1e-5));
  }
}

TEST_CASE("weak duality holds at arbitrary multipliers") {
  const auto inst = apps::generate("uc", 6, 3, 5);
  Rng rng(2);
  // a feasible primal point: every unit on at full output
  std::vector<Vector> x;
  for (const auto& blk : inst.blocks) {
    x.push_back(blk.oracle->linmin(blk.A.transpose() * Vector::Ones(3)));
  }
  const auto ev = evaluate(inst, x);
  REQUIRE(plus_norm(ev.violation) == 0.0);
  for (int k = 0; k < 50; ++k) {
    const Vector lam = testutil::random_vector(rng, 3, 0.0, 50.0);
    CHECK(eval_psi(inst, lam).psi <= ev.objective.value() + 1e-9);
  }
}

TEST_CASE("running best is nondecreasing and stop reasons are reported") {
  const auto inst = apps::generate("quadratic-box", 10, 3, 7);
  DualConfig cfg;
  const DualResult res = solve_dual(inst, cfg);
  for (std::size_t k = 1; k < res.psi_history.size(); ++k) CHECK(res.psi_history[k] >= res.psi_history[k - 1]);
  CHECK((res.stop_reason == "patience" || res.stop_reason == "max_iter" || res.stop_reason == "stationary"));
  CHECK((res.lambda.array() >= 0.0).all());
  CHECK(res.v_star == doctest::Approx(eval_psi(inst, res.lambda).psi));

  cfg.v_star = 12.5;
  const DualResult given = solve_dual(inst, cfg);
  CHECK(given.v_star == 12.5);
  CHECK(given.stop_reason == "supplied");
  CHECK(given.iterations == 0);
}

TEST_CASE("sqrt step rule ascends and threads do not change results") {
  const auto inst = apps::generate("uc", 8, 4, 3);
  DualConfig cfg;
  cfg.step_rule = "sqrt";
  cfg.max_iter = 300;
  const DualResult s = solve_dual(inst, cfg);
  CHECK(s.psi_history.back() >= s.psi_history.front());
  cfg.step_rule = "dog";
  const DualResult one = solve_dual(inst, cfg);
  cfg.threads = 3;
  const DualResult three = solve_dual(inst, cfg);
  CHECK(one.v_star == three.v_star);
  CHECK(one.lambda == three.lambda);
}

TEST_CASE("dual config validation") {
  DualConfig cfg;
  cfg.step_rule = "nope";
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = DualConfig{};
  cfg.max_iter = -1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = DualConfig{};
  cfg.step0 = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

}  // TEST_SUITE
