// Core problem model for separable problems  min sum_i f_i(x_i)  s.t.  sum_i A_i x_i <= b.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace sfopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Json = nlohmann::json;

enum class ErrorCode : int {
  kInvalidArgument = 1,
  kInvalidInstance,
  kNonFinite,
  kOracle,
  kInconsistentInput,
  kDegenerateSystem,
  kUncoveredBlock,
  kInnerStalled,
  kRepairUnavailable,
  kZetaExhausted,
  kInfeasibleBlock,
  kIo,
  kParse,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Real number or +infinity. Infinity is a flag, never an IEEE inf, so that
/// comparisons and sums stay well defined: inf + finite = inf, inf == inf.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : value_(v) {}  // NOLINT: implicit from finite values

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.inf_ = true;
    return r;
  }

  constexpr bool is_finite() const { return !inf_; }
  constexpr bool is_infinite() const { return inf_; }

  /// Finite value; throws when infinite.
  double value() const;
  /// Finite value or `fallback` when infinite.
  constexpr double value_or(double fallback) const { return inf_ ? fallback : value_; }

  friend constexpr ExtReal operator+(ExtReal a, ExtReal b) {
    if (a.inf_ || b.inf_) return infinity();
    return ExtReal(a.value_ + b.value_);
  }
  ExtReal& operator+=(ExtReal o) { return *this = *this + o; }

  friend constexpr bool operator==(ExtReal a, ExtReal b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.value_ == b.value_;
  }
  friend constexpr bool operator<(ExtReal a, ExtReal b) {
    if (a.inf_) return false;
    if (b.inf_) return true;
    return a.value_ < b.value_;
  }
  friend constexpr bool operator<=(ExtReal a, ExtReal b) { return a < b || a == b; }

 private:
  double value_ = 0.0;
  bool inf_ = false;
};

struct Tolerances {
  double feas = 1e-8;
  double rel = 1e-6;
};

/// Result of a conjugate query: f*(y) and a point of X attaining the sup.
struct ConjugatePoint {
  double value = 0.0;
  Vector argmax;
};

/// Capability contract every block function f_i must provide.
///
/// Implementations are immutable after construction and must tolerate
/// concurrent calls. `conjugate` and `linmin` return members of the domain
/// X_i itself (extreme points of conv X_i), never interior points of the hull.
class BlockOracle {
 public:
  virtual ~BlockOracle() = default;

  virtual int dim() const = 0;
  /// f_i(x); +inf outside X_i.
  virtual ExtReal value(const Vector& x) const = 0;
  /// sup_{x in X_i} y'x - f_i(x) and its maximizer.
  virtual ConjugatePoint conjugate(const Vector& y) const = 0;
  /// Extreme point of conv X_i minimizing c'x.
  virtual Vector linmin(const Vector& c) const = 0;

  virtual bool has_repair() const { return false; }
  /// Point of X_i with A_i xhat <= A_i x for x in conv X_i. Empty when unsupported.
  virtual std::optional<Vector> repair(const Vector& /*x*/) const { return std::nullopt; }
  /// Upper bound on sup f_i - inf f_i over X_i, when known in closed form.
  virtual std::optional<double> gamma_bound() const { return std::nullopt; }

  virtual std::string app() const = 0;
  virtual Json params() const = 0;
};

using OraclePtr = std::shared_ptr<const BlockOracle>;

struct BlockSpec {
  Matrix A;  // m x d_i
  OraclePtr oracle;

  int dim() const { return static_cast<int>(A.cols()); }
};

/// Coupled problem with constraint sense  sum_i A_i x_i <= b.
struct ProblemInstance {
  int n = 0;
  int m = 0;
  std::vector<BlockSpec> blocks;
  Vector b;
  /// Direction used by the perturbation loop: theta(zeta) = zeta * theta_unit.
  std::optional<Vector> theta_unit;

  /// Throws kInvalidInstance when shapes disagree.
  void validate() const;
  /// Copy sharing oracles, with right-hand side replaced.
  ProblemInstance with_rhs(const Vector& rhs) const;
};

/// One oracle output recorded by the first stage.
struct Atom {
  int block = 0;
  int iter = 0;
  Vector point;
  double cost = 0.0;
  Vector image;  // A_block * point
  std::uint64_t hash = 0;
};

/// Builds an atom, evaluating cost through the oracle. Throws kOracle when the
/// point lies outside the block domain.
Atom make_atom(const ProblemInstance& inst, int block, int iter, Vector point);

/// Content hash of a point; -0.0 and 0.0 hash equal.
std::uint64_t hash_point(const Vector& point);

struct WeightedAtom {
  double weight = 0.0;
  Atom atom;
};

struct WeightedAtoms {
  std::vector<WeightedAtom> entries;

  /// Sum_l w_l * (cost_l, image_l) as a vector of length 1 + m.
  Vector aggregate(int m) const;
};

/// sqrt(sum_j max(v_j, 0)^2). Throws kNonFinite on NaN or inf entries.
double plus_norm(const Vector& v);

struct Evaluation {
  ExtReal objective;
  Vector violation;                  // sum_i A_i x_i - b
  std::vector<bool> block_feasible;  // x_i in X_i
  bool all_blocks_feasible() const;
};

Evaluation evaluate(const ProblemInstance& inst, const std::vector<Vector>& x);

/// Deterministic uniform generator shared by generators and randomized stages.
/// Uses mt19937_64 bits directly so sequences are identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();                    // [0, 1)
  double uniform(double lo, double hi);
  double normal();                     // standard Gaussian, Box-Muller
  std::uint64_t next_u64();
  /// Independent child stream derived from this seed and a label.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t label);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sfopt
