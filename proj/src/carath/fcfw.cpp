#include <algorithm>
#include <chrono>
#include <cmath>

#include "sfopt/carath/approx.hpp"

namespace sfopt {

int closest_column(const ColumnSet& cols, const Vector& target) {
  if (cols.cols() < 1) throw Error(ErrorCode::kInvalidArgument, "no columns");
  Vector dots;
  cols.dot_all(target, dots);
  int best = 0;
  double best_d = 0.0;
  for (int j = 0; j < cols.cols(); ++j) {
    const double d = cols.column(j).squaredNorm() - 2.0 * dots[j];
    if (j == 0 || d < best_d) {
      best = j;
      best_d = d;
    }
  }
  return best;
}

namespace {

int argmin_lowest(const Vector& v) {
  int best = 0;
  for (int j = 1; j < v.size(); ++j) {
    if (v[j] < v[best]) best = j;
  }
  return best;
}

}  // namespace

ApproxResult fcfw(const ColumnSet& cols, const Vector& target, int T, const FCFWConfig& cfg) {
  if (T < 0) throw Error(ErrorCode::kInvalidArgument, "fcfw: T must be >= 0");
  if (target.size() != cols.rows()) throw Error(ErrorCode::kInvalidArgument, "fcfw: target has wrong length");
  if (!target.allFinite()) throw Error(ErrorCode::kNonFinite, "fcfw: non-finite target");

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  ApproxResult res;
  std::vector<int> active{closest_column(cols, target)};
  Matrix S = cols.column(active[0]);
  Vector beta = Vector::Ones(1);
  Vector w = S.col(0);
  res.residual_history.push_back((w - target).norm());
  res.time_history.push_back(elapsed());
  res.stop_reason = "max_iter";
  const double t_sq = target.squaredNorm();

  Vector dots;
  for (int t = 1; t <= T; ++t) {
    const Vector r = w - target;
    cols.dot_all(r, dots);
    const int j = argmin_lowest(dots);
    const double gap = r.dot(w) - dots[j];
    if (gap <= cfg.gap_tol * (1.0 + t_sq)) {
      res.stop_reason = "optimal";
      break;
    }
    auto pos = std::find(active.begin(), active.end(), j);
    if (pos == active.end()) {
      active.push_back(j);
      S.conservativeResize(Eigen::NoChange, S.cols() + 1);
      S.col(S.cols() - 1) = cols.column(j);
      beta.conservativeResize(beta.size() + 1);
      beta[beta.size() - 1] = 0.0;
    }
    const Matrix G = S.transpose() * S;
    const Vector h = S.transpose() * target;
    SimplexLSResult in = simplex_ls_gram(G, h, 0.5 * t_sq, beta, cfg.inner);
    res.inner_stalled = res.inner_stalled || in.stalled;
    beta = in.beta;
    // keep atoms with positive weight
    std::vector<int> keep;
    for (Eigen::Index l = 0; l < beta.size(); ++l) {
      if (beta[l] > 0.0) keep.push_back(static_cast<int>(l));
    }
    if (static_cast<Eigen::Index>(keep.size()) < beta.size()) {
      Matrix S2(S.rows(), static_cast<Eigen::Index>(keep.size()));
      Vector b2(static_cast<Eigen::Index>(keep.size()));
      std::vector<int> a2;
      for (std::size_t l = 0; l < keep.size(); ++l) {
        S2.col(static_cast<Eigen::Index>(l)) = S.col(keep[l]);
        b2[static_cast<Eigen::Index>(l)] = beta[keep[l]];
        a2.push_back(active[keep[l]]);
      }
      S = std::move(S2);
      beta = b2 / b2.sum();
      active = std::move(a2);
    }
    w = S * beta;
    res.iterations = t;
    res.residual_history.push_back((w - target).norm());
    res.time_history.push_back(elapsed());
  }

  std::vector<std::pair<int, double>> out;
  for (std::size_t l = 0; l < active.size(); ++l) out.emplace_back(active[l], beta[static_cast<Eigen::Index>(l)]);
  std::sort(out.begin(), out.end());
  res.beta.resize(static_cast<Eigen::Index>(out.size()));
  for (std::size_t l = 0; l < out.size(); ++l) {
    res.idx.push_back(out[l].first);
    res.beta[static_cast<Eigen::Index>(l)] = out[l].second;
  }
  res.residual = (cols.combine(res.idx, res.beta) - target).norm();
  return res;
}

}  // namespace sfopt
