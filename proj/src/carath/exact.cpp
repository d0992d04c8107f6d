#include "sfopt/carath/exact.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "sfopt/carath/qr_update.hpp"

namespace sfopt {

namespace {

class Reducer {
 public:
  Reducer(const ColumnSet& w, const Vector& scale, const std::vector<int>& order, const ExactConfig& cfg)
      : w_(w), scale_(scale), order_(order), cfg_(cfg), rng_(cfg.seed), p_(w.rows()) {
    draw_u();
  }

  Vector scaled(int pos) const { return w_.column(order_[pos]).cwiseProduct(scale_); }

  Vector augmented(int pos) const {
    Vector v(p_ + 1);
    v.head(p_) = scaled(pos);
    v[p_] = u_[pos];
    return v;
  }

  void draw_u() {
    u_.resize(static_cast<Eigen::Index>(order_.size()));
    for (Eigen::Index j = 0; j < u_.size(); ++j) u_[j] = rng_.normal();
  }

  void rebuild(const std::vector<int>& ws) {
    Matrix a(p_ + 1, static_cast<Eigen::Index>(ws.size()));
    for (std::size_t l = 0; l < ws.size(); ++l) a.col(static_cast<Eigen::Index>(l)) = augmented(ws[l]);
    qr_.reset(a);
    cols_ = a.topRows(p_);
    col_norms_ = cols_.colwise().norm().transpose();
  }

  void remove(int pos) {
    qr_.delete_column(pos);
    const Eigen::Index k = cols_.cols();
    for (Eigen::Index j = pos; j + 1 < k; ++j) {
      cols_.col(j) = cols_.col(j + 1);
      col_norms_[j] = col_norms_[j + 1];
    }
    cols_.conservativeResize(Eigen::NoChange, k - 1);
    col_norms_.conservativeResize(k - 1);
  }

  void append(int pos) {
    const Vector a = augmented(pos);
    qr_.append_column(a);
    const Eigen::Index k = cols_.cols();
    cols_.conservativeResize(Eigen::NoChange, k + 1);
    cols_.col(k) = a.head(p_);
    col_norms_.conservativeResize(k + 1);
    col_norms_[k] = cols_.col(k).norm();
  }

  // Nonzero delta with W_s delta = 0, from the square solve or, when the
  // factor is singular, from its null vector.
  bool direction(Vector& delta, bool& from_null) {
    const int k = qr_.first_small_diagonal(cfg_.singular_tol);
    from_null = k >= 0;
    if (!from_null) {
      // Q' e_last is the last row of Q
      const Matrix& r = qr_.R();
      delta = r.triangularView<Eigen::Upper>().solve(qr_.Q().row(p_).transpose());
    } else {
      const Matrix& r = qr_.R();
      delta = Vector::Zero(p_ + 1);
      delta[k] = 1.0;
      if (k > 0) {
        delta.head(k) = r.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(-r.col(k).head(k));
      }
    }
    if (!delta.allFinite()) return false;
    const double img = (cols_ * delta).norm();
    return img <= 1e-8 * (1.0 + col_norms_.maxCoeff()) * delta.lpNorm<Eigen::Infinity>();
  }

  QRUpdate qr_;
  const ColumnSet& w_;
  const Vector& scale_;
  const std::vector<int>& order_;
  const ExactConfig& cfg_;
  Rng rng_;
  int p_;
  Vector u_;
  Matrix cols_;  // scaled working columns, mirrors the factor
  Vector col_norms_;
};

double residual_of(const ColumnSet& w, const std::vector<int>& kept, const Vector& alpha, const Vector& w_star) {
  return (w.combine(kept, alpha) - w_star).norm();
}

}  // namespace

ConicOutput exact_caratheodory(const Matrix& w, const Vector& lam, const Vector& w_star, const ExactConfig& cfg) {
  return exact_caratheodory(DenseColumns(w), lam, w_star, cfg);
}

ConicOutput exact_caratheodory(const ColumnSet& w, const Vector& lam, const Vector& w_star, const ExactConfig& cfg) {
  const int p = w.rows();
  const int N = w.cols();
  if (N < 1) throw Error(ErrorCode::kInvalidArgument, "exact_caratheodory: need at least one column");
  if (lam.size() != N || w_star.size() != p) {
    throw Error(ErrorCode::kInvalidArgument, "exact_caratheodory: lam or w_star has wrong length");
  }
  if (!lam.allFinite() || !w_star.allFinite()) throw Error(ErrorCode::kNonFinite, "exact_caratheodory: non-finite input");
  if ((lam.array() < 0.0).any()) throw Error(ErrorCode::kInvalidArgument, "exact_caratheodory: lam must be >= 0");
  const double in_res = (w.combine_all(lam) - w_star).norm();
  if (in_res > cfg.input_tol * (1.0 + w_star.norm())) {
    throw Error(ErrorCode::kInconsistentInput, "inconsistent input: W lam differs from w* by " + std::to_string(in_res));
  }

  ConicOutput out;
  if (N <= p) {
    out.alpha = lam;
    out.kept.resize(N);
    std::iota(out.kept.begin(), out.kept.end(), 0);
    out.residual = in_res;
    return out;
  }

  std::vector<int> order;
  for (int j = 0; j < N; ++j) {
    if (lam[j] > 0.0) order.push_back(j);
  }
  const int Np = static_cast<int>(order.size());

  Vector scale = Vector::Ones(p);
  if (cfg.equilibrate) {
    Vector mx = Vector::Zero(p);
    for (int j : order) mx = mx.cwiseMax(w.column(j).cwiseAbs());
    for (int r = 0; r < p; ++r) scale[r] = mx[r] > 0.0 ? 1.0 / mx[r] : 1.0;
  }

  std::vector<int> ws;  // positions into `order`
  Vector alpha;
  if (Np <= p) {
    ws.resize(Np);
    std::iota(ws.begin(), ws.end(), 0);
    alpha.resize(Np);
    for (int l = 0; l < Np; ++l) alpha[l] = lam[order[l]];
  } else {
    Reducer red(w, scale, order, cfg);
    ws.resize(p + 1);
    std::iota(ws.begin(), ws.end(), 0);
    alpha.resize(p + 1);
    for (int l = 0; l <= p; ++l) alpha[l] = lam[order[l]];
    red.rebuild(ws);

    Vector tail;  // scaled sum over unprocessed columns, debug only
    Vector w_star_scaled = w_star.cwiseProduct(scale);
    if (cfg.debug) {
      tail = Vector::Zero(p);
      for (int c = p + 1; c < Np; ++c) tail += lam[order[c]] * red.scaled(c);
    }

    int c = p + 1;
    while (true) {
      if (cfg.debug) {
        Vector lhs = Vector::Zero(p);
        for (std::size_t l = 0; l < ws.size(); ++l) lhs += alpha[static_cast<Eigen::Index>(l)] * red.scaled(ws[l]);
        out.debug_residuals.push_back((lhs - (w_star_scaled - tail)).norm());
      }

      Vector delta;
      bool from_null = false;
      int tries = 0;
      while (!red.direction(delta, from_null)) {
        if (++tries > cfg.max_redraws) {
          throw Error(ErrorCode::kDegenerateSystem,
                      "degenerate system: no usable direction after " + std::to_string(cfg.max_redraws) + " redraws");
        }
        red.draw_u();
        red.rebuild(ws);
        ++out.redraws;
        ++out.refactorizations;
      }
      if (from_null) ++out.null_steps;
      if ((delta.array() <= 0.0).all()) delta = -delta;

      // ratio test; ties go to the smallest original column index
      int drop = -1;
      double t_star = 0.0;
      for (int l = 0; l <= p; ++l) {
        if (delta[l] <= 0.0) continue;
        const double ratio = std::max(alpha[l], 0.0) / delta[l];
        if (drop < 0 || ratio < t_star || (ratio == t_star && order[ws[l]] < order[ws[drop]])) {
          drop = l;
          t_star = ratio;
        }
      }
      alpha = (alpha - t_star * delta).cwiseMax(0.0);
      alpha[drop] = 0.0;

      ws.erase(ws.begin() + drop);
      Vector shrunk(p);
      shrunk << alpha.head(drop), alpha.tail(p - drop);
      alpha = std::move(shrunk);
      red.remove(drop);
      ++out.steps;

      if (c == Np) break;
      ws.push_back(c);
      alpha.conservativeResize(p + 1);
      alpha[p] = lam[order[c]];
      red.append(c);
      if (cfg.debug) tail -= lam[order[c]] * red.scaled(c);
      ++c;
      if (cfg.refactor_every > 0 && red.qr_.updates() >= cfg.refactor_every) {
        red.rebuild(ws);
        ++out.refactorizations;
      }
    }
  }

  // support with positive weights, in original index order
  std::vector<std::pair<int, double>> sup;
  for (std::size_t l = 0; l < ws.size(); ++l) {
    const double a = alpha[static_cast<Eigen::Index>(l)];
    if (a > cfg.clamp_tol) sup.emplace_back(order[ws[l]], a);
  }
  std::sort(sup.begin(), sup.end());
  out.kept.clear();
  out.alpha.resize(static_cast<Eigen::Index>(sup.size()));
  for (std::size_t l = 0; l < sup.size(); ++l) {
    out.kept.push_back(sup[l].first);
    out.alpha[static_cast<Eigen::Index>(l)] = sup[l].second;
  }
  out.residual = residual_of(w, out.kept, out.alpha, w_star);

  if (cfg.polish && !out.kept.empty()) {
    Matrix a(p, static_cast<Eigen::Index>(out.kept.size()));
    for (std::size_t l = 0; l < out.kept.size(); ++l) {
      a.col(static_cast<Eigen::Index>(l)) = w.column(out.kept[l]).cwiseProduct(scale);
    }
    const Vector refit = a.colPivHouseholderQr().solve(w_star.cwiseProduct(scale));
    if (refit.allFinite() && (refit.array() >= -cfg.clamp_tol).all()) {
      const Vector cand = refit.cwiseMax(0.0);
      const double r = residual_of(w, out.kept, cand, w_star);
      if (r < out.residual) {
        out.alpha = cand;
        out.residual = r;
      }
    }
  }
  return out;
}

std::string debug_residuals_csv(const ConicOutput& out) {
  std::ostringstream os;
  os.precision(17);
  os << "step,residual\n";
  for (std::size_t s = 0; s < out.debug_residuals.size(); ++s) os << s << ',' << out.debug_residuals[s] << '\n';
  return os.str();
}

}  // namespace sfopt
