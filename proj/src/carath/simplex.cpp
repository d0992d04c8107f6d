#include "sfopt/carath/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace sfopt {

Vector project_simplex(const Vector& v) {
  if (v.size() < 1) throw Error(ErrorCode::kInvalidArgument, "project_simplex: empty vector");
  if (!v.allFinite()) throw Error(ErrorCode::kNonFinite, "non-finite input");
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) tau = t;
  }
  return (v.array() - tau).max(0.0).matrix();
}

namespace {

double objective(const Matrix& G, const Vector& h, double c0, const Vector& b) {
  return 0.5 * b.dot(G * b) - h.dot(b) + c0;
}

double gradient_mapping(const Matrix& G, const Vector& h, const Vector& b, double L) {
  const Vector grad = G * b - h;
  return (b - project_simplex(b - grad / L)).norm();
}

double largest_eigenvalue(const Matrix& G, int iters) {
  Vector x = Vector::Ones(G.rows()) / std::sqrt(static_cast<double>(G.rows()));
  double lam = 0.0;
  for (int k = 0; k < iters; ++k) {
    const Vector y = G * x;
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    lam = x.dot(y);
    x = y / ny;
  }
  return std::max(lam, x.dot(G * x));
}

// Refit on the support of b with the equality constraint only; returns false
// unless the result is feasible and satisfies the KKT sign conditions.
bool polish(const Matrix& G, const Vector& h, const Vector& b, double tol, Vector& out) {
  std::vector<int> sup;
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    if (b[j] > 1e-14) sup.push_back(static_cast<int>(j));
  }
  const int k = static_cast<int>(sup.size());
  if (k == 0) return false;
  Matrix K = Matrix::Zero(k + 1, k + 1);
  Vector rhs(k + 1);
  for (int a = 0; a < k; ++a) {
    for (int c = 0; c < k; ++c) K(a, c) = G(sup[a], sup[c]);
    K(a, k) = 1.0;
    K(k, a) = 1.0;
    rhs[a] = h[sup[a]];
  }
  rhs[k] = 1.0;
  const Vector sol = K.fullPivLu().solve(rhs);
  if (!sol.allFinite() || (K * sol - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) return false;
  Vector cand = Vector::Zero(b.size());
  for (int a = 0; a < k; ++a) {
    if (sol[a] < 0.0) return false;
    cand[sup[a]] = sol[a];
  }
  // gradient must be >= the common level -nu off the support
  const double level = -sol[k];
  const Vector grad = G * cand - h;
  const double scale = 1.0 + grad.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    if (cand[j] == 0.0 && grad[j] < level - tol * scale) return false;
  }
  out = cand / cand.sum();
  return true;
}

}  // namespace

SimplexLSResult simplex_ls_gram(const Matrix& G, const Vector& h, double c0, const Vector& warm,
                                const SimplexLSConfig& cfg) {
  const auto n = G.rows();
  if (n < 1 || G.cols() != n || h.size() != n) throw Error(ErrorCode::kInvalidArgument, "simplex_ls: bad Gram data");
  if (!G.allFinite() || !h.allFinite()) throw Error(ErrorCode::kNonFinite, "simplex_ls: non-finite input");
  SimplexLSResult res;
  if (n == 1) {
    res.beta = Vector::Ones(1);
    res.objective = objective(G, h, c0, res.beta);
    return res;
  }
  double L = std::max(largest_eigenvalue(G, cfg.power_iters), 1e-300);
  Vector b = warm.size() == n ? project_simplex(warm) : Vector::Constant(n, 1.0 / static_cast<double>(n));
  Vector y = b;
  double tk = 1.0;
  double fb = objective(G, h, c0, b);
  bool converged = false;
  for (int it = 0; it < cfg.max_iter; ++it) {
    res.iterations = it + 1;
    const Vector grad = G * y - h;
    Vector next = project_simplex(y - grad / L);
    double fn = objective(G, h, c0, next);
    // the power estimate can fall short of the true Lipschitz constant
    const Vector d = next - y;
    const double fy = objective(G, h, c0, y);
    if (fn > fy + grad.dot(d) + 0.5 * L * d.squaredNorm() + 1e-15 * (1.0 + std::abs(fy))) {
      L *= 2.0;
      continue;
    }
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    if (fn > fb) {
      // restart momentum
      y = b;
      tk = 1.0;
      continue;
    }
    y = next + ((tk - 1.0) / tn) * (next - b);
    tk = tn;
    b = std::move(next);
    fb = fn;
    if (gradient_mapping(G, h, b, L) <= cfg.tol) {
      converged = true;
      break;
    }
  }
  if (cfg.polish) {
    Vector cand;
    if (polish(G, h, b, std::max(cfg.tol, 1e-12), cand)) {
      const double fc = objective(G, h, c0, cand);
      if (fc <= fb + 1e-12 * (1.0 + std::abs(fb))) {
        b = cand;
        fb = fc;
        converged = true;
      }
    }
  }
  res.beta = b;
  res.objective = fb;
  res.kkt_residual = gradient_mapping(G, h, b, L);
  res.stalled = !converged;
  return res;
}

SimplexLSResult simplex_ls(const Matrix& S, const Vector& target, const SimplexLSConfig& cfg) {
  if (S.rows() != target.size() || S.cols() < 1) throw Error(ErrorCode::kInvalidArgument, "simplex_ls: shape mismatch");
  const Matrix G = S.transpose() * S;
  const Vector h = S.transpose() * target;
  SimplexLSResult r = simplex_ls_gram(G, h, 0.5 * target.squaredNorm(), Vector(), cfg);
  r.objective = 0.5 * (S * r.beta - target).squaredNorm();
  return r;
}

}  // namespace sfopt
