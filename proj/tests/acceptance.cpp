// Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails. Optional arguments select criteria by number;
// criterion 9 reuses the runs recorded by 4, 5 and 8 in the same process.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "enumeration.hpp"
#include "sfopt/apps/registry.hpp"
#include "sfopt/carath/approx.hpp"
#include "sfopt/carath/columns.hpp"
#include "sfopt/carath/exact.hpp"
#include "sfopt/carath/qr_update.hpp"
#include "sfopt/dual/dual_solver.hpp"
#include "sfopt/fw/stage1.hpp"
#include "sfopt/pipeline/pipeline.hpp"
#include "sfopt/trim/trim.hpp"

using namespace sfopt;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

// (objective, v*, label) of every pipeline run, for the weak duality check.
struct DualityRecord {
  double objective;
  double v_star;
  std::string label;
};
std::vector<DualityRecord> g_runs;

void record(const ExtReal& obj, double v_star, const std::string& label) {
  g_runs.push_back({obj.is_finite() ? obj.value() : INFINITY, v_star, label});
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

Matrix gaussian(Rng& rng, int r, int c) {
  Matrix m(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) m(i, j) = rng.normal();
  return m;
}

// ---------------------------------------------------------------------------

Outcome exact_correctness() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(101);
  int bad = 0, nondet = 0;
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    const int p = 3 + static_cast<int>(rng.uniform() * 10);           // 3..12
    const int N = p + 1 + static_cast<int>(rng.uniform() * (9 * p));  // p+1..10p
    const Matrix W = gaussian(rng, p, N);
    Vector lam(N);
    for (int j = 0; j < N; ++j) lam[j] = rng.uniform();
    const Vector ws = W * lam;
    ExactConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(c);
    const ConicOutput a = exact_caratheodory(W, lam, ws, cfg);
    const ConicOutput b = exact_caratheodory(W, lam, ws, cfg);
    Vector recon = Vector::Zero(p);
    for (std::size_t l = 0; l < a.kept.size(); ++l) recon += a.alpha[l] * W.col(a.kept[l]);
    const double res = (recon - ws).norm() / (1.0 + ws.norm());
    worst = std::max(worst, res);
    if (static_cast<int>(a.kept.size()) > p || res > 1e-8 || (a.alpha.array() < 0.0).any()) ++bad;
    if (a.kept != b.kept || a.alpha != b.alpha) ++nondet;
  }
  const double t = seconds_since(t0);
  o.pass = bad == 0 && nondet == 0 && t < 10.0;
  o.detail = std::to_string(bad) + " bad, " + std::to_string(nondet) + " nondeterministic, worst rel residual " +
             fmt("%.2e", worst) + ", " + fmt("%.2f", t) + " s";
  return o;
}

Outcome trim_structure() {
  Outcome o;
  int violations = 0, runs = 0;
  for (int r = 0; r < 20; ++r) {
    const bool uc = r % 2 == 0;
    const int n = 10 + 2 * r;  // 10..48
    const int m = 2 + r % 9;   // 2..10
    const auto inst = uc ? apps::generate("uc", n, m, 500 + r)
                         : apps::generate("quadratic-box", n, 2, 500 + r, Json{{"m", m}});
    FWConfig fc;
    fc.K = 500;
    const FWTrace tr = run_stage1(inst, solve_dual(inst, {}).v_star, fc);
    const TrimResult t = trim_exact(tr, inst);
    ++runs;
    bool ok = static_cast<int>(t.groups.size()) == inst.n;
    int q = 0;
    for (const auto& g : t.groups) {
      double s = 0.0;
      for (const auto& e : g) s += e.weight;
      ok = ok && !g.empty() && std::abs(s - 1.0) <= 1e-10;
      if (g.size() > 1) ++q;
    }
    ok = ok && q == t.q && t.entries() <= inst.n + inst.m + 1 && t.q <= inst.m + 1;
    if (!ok) ++violations;
  }
  o.pass = violations == 0;
  o.detail = std::to_string(violations) + " violations in " + std::to_string(runs) + " runs";
  return o;
}

Outcome fw_envelope() {
  Outcome o;
  const auto t0 = Clock::now();
  int violations = 0;
  double worst_ratio = 0.0;
  for (int s = 0; s < 20; ++s) {
    const auto inst = apps::generate("quadratic-box", 20, 3, 900 + s, Json{{"m", 4}});
    const double D = estimate_diameter(inst, 142, 900 + s);  // 142 points, about 10^4 pairs
    FWConfig fc;
    fc.K = 1000;
    fc.step_rule = "harmonic";
    const FWTrace tr = run_stage1(inst, solve_dual(inst, {}).v_star, fc);
    for (int K : {10, 100, 1000}) {
      // early exits leave the residual at its last value
      const double r = tr.residual_history[std::min<std::size_t>(K, tr.residual_history.size() - 1)];
      const double lhs = r * r * (K + 1);
      const double rhs = 4.0 * D * D;
      worst_ratio = std::max(worst_ratio, lhs / rhs);
      if (lhs > rhs) ++violations;
    }
  }
  const double t = seconds_since(t0);
  o.pass = violations == 0 && t < 60.0;
  o.detail = std::to_string(violations) + " violations of 60 checks, max ratio to 4 D^2 " + fmt("%.3g", worst_ratio) +
             ", " + fmt("%.1f", t) + " s";
  return o;
}

Outcome convex_main_result() {
  Outcome o;
  int violations = 0;
  double worst_gap_ratio = -INFINITY, worst_identity = 0.0;
  for (int s = 0; s < 10; ++s) {
    const auto inst = apps::generate("quadratic-box", 50, 3, 40 + s, Json{{"m", 5}});
    SolverConfig cfg;
    cfg.seed = 40 + s;
    cfg.fw.K = 10000;
    const double D = estimate_diameter(inst, 200, cfg.seed);
    const DualResult dual = solve_dual(inst, cfg.dual);
    const PassResult pass = run_pass(inst, inst.b, dual.v_star, 0, cfg, "average");
    const double bound = 2.0 * D / std::sqrt(cfg.fw.K + 1.0) + 1e-6;
    const double gap = pass.rec.objective.is_finite() ? pass.rec.objective.value() - dual.v_star : INFINITY;
    const Vector image = pass.rec.violation + inst.b;
    const double identity = (image - pass.trim.aggregate(inst.m).tail(inst.m)).norm();
    worst_gap_ratio = std::max(worst_gap_ratio, gap / bound);
    worst_identity = std::max(worst_identity, identity);
    if (gap > bound || identity > 1e-8) ++violations;
    record(pass.rec.objective, dual.v_star, "convex seed " + std::to_string(40 + s));
  }
  o.pass = violations == 0;
  o.detail = std::to_string(violations) + " violations in 10 seeds, max gap/bound " + fmt("%.3g", worst_gap_ratio) +
             ", max identity residual " + fmt("%.2e", worst_identity);
  return o;
}

Outcome uc_end_to_end() {
  Outcome o;
  const auto t0 = Clock::now();
  int infeasible = 0, zeta_over = 0, gap_over = 0, hard_over = 0, runs = 0;
  double worst_gap_ratio = 0.0;
  std::map<std::string, int> over_by_method;
  for (int s = 0; s < 10; ++s) {
    const auto inst = apps::generate("uc", 50, 10, 70 + s);
    for (const char* method : {"exact", "fcfw", "mnp"}) {
      SolverConfig cfg;
      cfg.seed = 70 + s;
      cfg.fw.K = 10000;
      cfg.carath.method = method;
      cfg.diameter_samples = 0;
      const SolveReport r = solve(inst, cfg);
      ++runs;
      if (!r.feasible) ++infeasible;
      if (r.zeta_used > 5) ++zeta_over;
      if (r.gap > r.max_gamma) {
        ++gap_over;
        ++over_by_method[method];
      }
      if (r.gap > (inst.m + 1) * r.max_gamma) ++hard_over;
      worst_gap_ratio = std::max(worst_gap_ratio, r.gap / r.max_gamma);
      record(r.objective, r.v_star, std::string("uc ") + method + " seed " + std::to_string(70 + s));
    }
  }
  o.pass = infeasible == 0 && zeta_over == 0 && gap_over == 0 && hard_over == 0;
  std::ostringstream d;
  d << runs << " runs: " << infeasible << " infeasible, " << zeta_over << " with zeta > 5, " << gap_over
    << " with gap > max gamma";
  for (const auto& [name, count] : over_by_method) d << " (" << name << " " << count << ")";
  d << ", " << hard_over << " above (m+1) max gamma; max gap/max gamma "
    << fmt("%.3f", worst_gap_ratio) << ", " << fmt("%.0f", seconds_since(t0)) << " s";
  o.detail = d.str();
  return o;
}

// Slope of the least-squares line through (t, log r_t), t in [T/2, T]. Entries
// past an early stop repeat the final residual.
double log_slope(const std::vector<double>& hist, int T) {
  std::vector<double> xs, ys;
  for (int t = T / 2; t <= T; ++t) {
    const double r = hist[std::min<std::size_t>(t, hist.size() - 1)];
    xs.push_back(t);
    ys.push_back(std::log(std::max(r, 1e-300)));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxy / sxx;
}

Outcome approx_rate() {
  Outcome o;
  const int p = 10, N = 100, T = 10, trials = 50;
  Rng rng(303);
  int neg_fcfw = 0, neg_mnp = 0;
  std::vector<double> ratio;
  for (int k = 0; k < trials; ++k) {
    const Matrix W = gaussian(rng, p, N);
    Vector wts(N);
    for (int j = 0; j < N; ++j) wts[j] = -std::log(1.0 - rng.uniform());
    wts /= wts.sum();
    const Vector target = W * wts;
    const DenseColumns cols(W);
    const ApproxResult f = fcfw(cols, target, T);
    const ApproxResult m = mnp(cols, target, 2 * T);
    if (log_slope(f.residual_history, T) < 0.0) ++neg_fcfw;
    std::vector<double> mh(m.residual_history.begin(),
                           m.residual_history.begin() + std::min<std::size_t>(T + 1, m.residual_history.size()));
    if (log_slope(mh, T) < 0.0) ++neg_mnp;
    ratio.push_back(m.residual / std::max(f.residual, 1e-300));
  }
  const double need = 0.95 * trials;
  const double med = median(ratio);
  o.pass = neg_fcfw >= need && neg_mnp >= need && med <= 10.0;
  o.detail = "negative slope fcfw " + std::to_string(neg_fcfw) + "/50, mnp " + std::to_string(neg_mnp) +
             "/50, median mnp(2T)/fcfw(T) " + fmt("%.3g", med);
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  Rng rng(404);
  int uc_bad = 0, pev_bad = 0;
  double worst_uc = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int N = 1 + k % 3;
    const apps::UCParams p = testutil::random_uc(rng, N);
    Vector y(2 * N);
    for (int t = 0; t < N; ++t) {
      y[t] = rng.uniform(-10.0, 10.0);
      y[N + t] = rng.uniform(-5.0, 20.0);
    }
    const ConjugatePoint a = apps::UCOracle(p).conjugate(y);
    const double ref = testutil::uc_conjugate_enum(p, y.head(N), y.tail(N));
    const double rel = std::abs(a.value - ref) / (1.0 + std::abs(ref));
    worst_uc = std::max(worst_uc, rel);
    if (rel > 1e-6) ++uc_bad;
  }
  int pev_draws = 0;
  while (pev_draws < 100) {
    const int N = 1 + pev_draws % 12;
    const apps::PEVParams p = testutil::random_pev(rng, N);
    if (p.min_steps() > p.max_steps()) continue;
    ++pev_draws;
    Vector y(N);
    for (int t = 0; t < N; ++t) y[t] = rng.uniform(-1.0, 3.0);
    const ConjugatePoint a = apps::PEVOracle(p).conjugate(y);
    const double ref = testutil::pev_conjugate_enum(p, y);
    const ExtReal f = apps::pev_value(p, a.argmax);
    // values agree up to summation order
    const bool same = std::abs(a.value - ref) <= 1e-12 * (1.0 + std::abs(ref));
    const bool attained = f.is_finite() && std::abs(y.dot(a.argmax) - f.value() - a.value) <= 1e-12 * (1.0 + std::abs(ref));
    if (!same || !attained) ++pev_bad;
  }
  o.pass = uc_bad == 0 && pev_bad == 0;
  o.detail = "uc " + std::to_string(uc_bad) + "/200 mismatches (worst rel " + fmt("%.1e", worst_uc) + "), pev " +
             std::to_string(pev_bad) + "/100 mismatches";
  return o;
}

Outcome pev_trend() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::vector<int> Ks{250, 500, 1000, 2000};
  std::vector<std::vector<double>> perturbed(Ks.size());
  int feasible_last = 0;
  for (int s = 0; s < 10; ++s) {
    const auto inst = apps::generate("pev", 100, 24, 80 + s);
    SolverConfig base;
    base.seed = 80 + s;
    base.diameter_samples = 0;
    const DualResult first = solve_dual(inst, base.dual);
    for (std::size_t k = 0; k < Ks.size(); ++k) {
      SolverConfig cfg = base;
      cfg.fw.K = Ks[k];
      cfg.dual.v_star.reset();
      cfg.reconstruct.zeta_fixed = 1;
      const PerturbationOutcome out = solve_with_perturbation(inst, first, cfg, default_scheme(inst));
      perturbed[k].push_back(out.pass.violation_plus_perturbed);
      if (k + 1 == Ks.size() && out.feasible) ++feasible_last;
      record(out.pass.rec.objective, first.v_star, "pev K=" + std::to_string(Ks[k]) + " seed " + std::to_string(80 + s));
    }
  }
  std::vector<double> med;
  for (const auto& v : perturbed) med.push_back(median(v));
  bool monotone = true;
  for (std::size_t k = 1; k < med.size(); ++k) monotone = monotone && med[k] <= med[k - 1];
  o.pass = monotone && feasible_last >= 8;
  std::ostringstream d;
  d << "perturbed infeasibility medians";
  for (std::size_t k = 0; k < med.size(); ++k) d << " K=" << Ks[k] << ":" << fmt("%.3g", med[k]);
  d << "; feasible at K=2000 on " << feasible_last << "/10 seeds, " << fmt("%.0f", seconds_since(t0)) << " s";
  o.detail = d.str();
  return o;
}

Outcome weak_duality() {
  Outcome o;
  int violations = 0;
  std::string first;
  for (const auto& r : g_runs) {
    if (r.objective < r.v_star - 1e-6 * (1.0 + std::abs(r.v_star))) {
      if (violations++ == 0) first = r.label;
    }
  }
  o.pass = violations == 0 && !g_runs.empty();
  o.detail = std::to_string(violations) + " violations in " + std::to_string(g_runs.size()) + " runs";
  if (g_runs.empty()) o.detail += " (criteria 4, 5 and 8 not run)";
  if (violations) o.detail += ", first: " + first;
  return o;
}

Outcome qr_kernel() {
  Outcome o;
  Rng rng(505);
  int bad = 0;
  double worst_fact = 0.0, worst_solve = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const int rows = 4 + static_cast<int>(rng.uniform() * 9);  // 4..12
    int k = 1 + static_cast<int>(rng.uniform() * rows);
    Matrix A = gaussian(rng, rows, k);
    QRUpdate qr(A);
    for (int op = 0; op < 20; ++op) {
      const bool insert = k < rows && (k == 1 || rng.uniform() < 0.5);
      const int pos = static_cast<int>(rng.uniform() * (insert ? k + 1 : k));
      if (insert) {
        const Vector c = gaussian(rng, rows, 1).col(0);
        Matrix B(rows, k + 1);
        B << A.leftCols(pos), c, A.rightCols(k - pos);
        A = B;
        qr.insert_column(pos, c);
        ++k;
      } else {
        Matrix B(rows, k - 1);
        B << A.leftCols(pos), A.rightCols(k - pos - 1);
        A = B;
        qr.delete_column(pos);
        --k;
      }
    }
    const QRUpdate fresh(A);
    const double fact = std::max((qr.reconstruct() - A).norm(), (qr.R().cwiseAbs() - fresh.R().cwiseAbs()).norm());
    const Vector rhs = gaussian(rng, rows, 1).col(0);
    const Vector x1 = qr.solve(rhs);
    const Vector x2 = fresh.solve(rhs);
    const double sol = (x1 - x2).norm() / (1.0 + x2.norm());
    worst_fact = std::max(worst_fact, fact);
    worst_solve = std::max(worst_solve, sol);
    if (fact > 1e-10 || sol > 1e-9) ++bad;
  }
  o.pass = bad == 0;
  o.detail = std::to_string(bad) + "/1000 sequences out of tolerance, worst factorization " + fmt("%.2e", worst_fact) +
             ", worst solve " + fmt("%.2e", worst_solve);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, exact_correctness}, {2, trim_structure}, {3, fw_envelope},      {4, convex_main_result},
      {5, uc_end_to_end},     {6, approx_rate},    {7, oracle_equivalence}, {8, pev_trend},
      {9, weak_duality},      {10, qr_kernel}};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& [id, fn] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
