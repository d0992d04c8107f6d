#include <algorithm>
#include <chrono>
#include <cmath>

#include "sfopt/carath/approx.hpp"

namespace sfopt {

namespace {

// Upper-triangular R with R'R = Pbar'Pbar, Pbar = [1'; X_S], for the active
// shifted points X_S. Columns follow the active set order.
class AffineFactor {
 public:
  explicit AffineFactor(double tol) : tol_(tol) {}

  // Returns false when the point is affinely dependent on the active set.
  bool append(const Matrix& X, const Vector& x) {
    const int k = static_cast<int>(R_.cols());
    const double diag_sq = 1.0 + x.squaredNorm();
    if (k == 0) {
      R_ = Matrix::Constant(1, 1, std::sqrt(diag_sq));
      return true;
    }
    const Vector q = Vector::Ones(k) + X.transpose() * x;
    const Vector r = R_.transpose().triangularView<Eigen::Lower>().solve(q);
    const double rho_sq = diag_sq - r.squaredNorm();
    if (!(rho_sq > tol_ * diag_sq)) return false;
    Matrix R(k + 1, k + 1);
    R.setZero();
    R.topLeftCorner(k, k) = R_;
    R.col(k).head(k) = r;
    R(k, k) = std::sqrt(rho_sq);
    R_ = std::move(R);
    return true;
  }

  void remove(int pos) {
    const int k = static_cast<int>(R_.cols());
    Matrix R(k, k - 1);
    R.leftCols(pos) = R_.leftCols(pos);
    R.rightCols(k - 1 - pos) = R_.rightCols(k - 1 - pos);
    for (int j = pos; j < k - 1; ++j) {
      const double a = R(j, j);
      const double b = R(j + 1, j);
      const double h = std::hypot(a, b);
      if (h == 0.0) continue;
      const double c = a / h;
      const double s = b / h;
      for (int col = j; col < k - 1; ++col) {
        const double x = R(j, col);
        const double y = R(j + 1, col);
        R(j, col) = c * x + s * y;
        R(j + 1, col) = -s * x + c * y;
      }
      R(j + 1, j) = 0.0;
    }
    R_ = R.topRows(k - 1);
  }

  void rebuild(const Matrix& X) {
    Matrix Pbar(X.rows() + 1, X.cols());
    Pbar.row(0).setOnes();
    Pbar.bottomRows(X.rows()) = X;
    Eigen::HouseholderQR<Matrix> qr(Pbar);
    R_ = qr.matrixQR().topRows(X.cols()).triangularView<Eigen::Upper>();
  }

  bool ill_conditioned() const {
    const double scale = R_.cwiseAbs().maxCoeff();
    return (R_.diagonal().cwiseAbs().array() < tol_ * scale).any();
  }

  // argmin ||X mu|| subject to 1'mu = 1
  Vector affine_minimizer() const {
    const Vector ones = Vector::Ones(R_.cols());
    const Vector t = R_.transpose().triangularView<Eigen::Lower>().solve(ones);
    const Vector nu = R_.triangularView<Eigen::Upper>().solve(t);
    return nu / nu.sum();
  }

 private:
  double tol_;
  Matrix R_;
};

}  // namespace

ApproxResult mnp(const ColumnSet& cols, const Vector& target, int T, const MNPConfig& cfg) {
  if (T < 0) throw Error(ErrorCode::kInvalidArgument, "mnp: T must be >= 0");
  if (target.size() != cols.rows()) throw Error(ErrorCode::kInvalidArgument, "mnp: target has wrong length");
  if (!target.allFinite()) throw Error(ErrorCode::kNonFinite, "mnp: non-finite target");

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  ApproxResult res;
  res.stop_reason = "max_iter";
  std::vector<int> active{closest_column(cols, target)};
  Matrix X = cols.column(active[0]) - target;
  Vector lam = Vector::Ones(1);
  AffineFactor fac(cfg.refactor_tol);
  fac.append(Matrix(X.rows(), 0), X.col(0));
  Vector x = X.col(0);
  res.residual_history.push_back(x.norm());
  res.time_history.push_back(elapsed());
  const int minor_cap = cfg.cycle_factor * std::max(T, 1);

  Vector dots;
  bool done = false;
  for (int t = 1; t <= T && !done; ++t) {
    // dots of shifted points with x: col_j'x - target'x
    cols.dot_all(x, dots);
    int j = 0;
    for (int c = 1; c < cols.cols(); ++c) {
      if (dots[c] < dots[j]) j = c;
    }
    const double sx = dots[j] - target.dot(x);
    const double xx = x.squaredNorm();
    if (xx - sx <= cfg.tol * xx) {
      res.stop_reason = "optimal";
      break;
    }
    if (std::find(active.begin(), active.end(), j) != active.end()) {
      res.stop_reason = "no_progress";
      break;
    }
    const Vector xj = cols.column(j) - target;
    if (!fac.append(X, xj)) {
      res.stop_reason = "no_progress";
      break;
    }
    active.push_back(j);
    X.conservativeResize(Eigen::NoChange, X.cols() + 1);
    X.col(X.cols() - 1) = xj;
    lam.conservativeResize(lam.size() + 1);
    lam[lam.size() - 1] = 0.0;

    while (true) {
      if (fac.ill_conditioned()) fac.rebuild(X);
      const Vector mu = fac.affine_minimizer();
      if ((mu.array() > 0.0).all()) {
        lam = mu;
        break;
      }
      if (++res.minor_cycles > minor_cap) {
        res.stop_reason = "cycling";
        done = true;
        break;
      }
      // step from lam toward mu until the first weight hits zero
      double theta = 1.0;
      int hit = -1;
      for (Eigen::Index l = 0; l < mu.size(); ++l) {
        if (mu[l] > 0.0) continue;
        const double denom = lam[l] - mu[l];
        const double th = denom > 0.0 ? lam[l] / denom : 0.0;
        if (hit < 0 || th < theta) {
          theta = th;
          hit = static_cast<int>(l);
        }
      }
      lam = (1.0 - theta) * lam + theta * mu;
      lam[hit] = 0.0;
      for (Eigen::Index l = lam.size() - 1; l >= 0; --l) {
        if (lam[l] > 0.0) continue;
        const int pos = static_cast<int>(l);
        fac.remove(pos);
        active.erase(active.begin() + pos);
        Matrix X2(X.rows(), X.cols() - 1);
        X2.leftCols(pos) = X.leftCols(pos);
        X2.rightCols(X.cols() - 1 - pos) = X.rightCols(X.cols() - 1 - pos);
        X = std::move(X2);
        Vector l2(lam.size() - 1);
        l2 << lam.head(pos), lam.tail(lam.size() - 1 - pos);
        lam = std::move(l2);
      }
      lam /= lam.sum();
    }
    x = X * lam;
    res.iterations = t;
    res.residual_history.push_back(x.norm());
    res.time_history.push_back(elapsed());
  }

  std::vector<std::pair<int, double>> out;
  for (std::size_t l = 0; l < active.size(); ++l) {
    if (lam[static_cast<Eigen::Index>(l)] > 0.0) out.emplace_back(active[l], lam[static_cast<Eigen::Index>(l)]);
  }
  std::sort(out.begin(), out.end());
  double total = 0.0;
  for (auto& e : out) total += e.second;
  res.beta.resize(static_cast<Eigen::Index>(out.size()));
  for (std::size_t l = 0; l < out.size(); ++l) {
    res.idx.push_back(out[l].first);
    res.beta[static_cast<Eigen::Index>(l)] = out[l].second / total;
  }
  res.residual = (cols.combine(res.idx, res.beta) - target).norm();
  return res;
}

}  // namespace sfopt
