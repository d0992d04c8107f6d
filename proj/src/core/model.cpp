#include "sfopt/core.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

namespace sfopt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kInvalidInstance: return "invalid instance";
    case ErrorCode::kNonFinite: return "non-finite input";
    case ErrorCode::kOracle: return "oracle failure";
    case ErrorCode::kInconsistentInput: return "inconsistent input";
    case ErrorCode::kDegenerateSystem: return "degenerate system";
    case ErrorCode::kUncoveredBlock: return "uncovered block";
    case ErrorCode::kInnerStalled: return "inner QP stalled";
    case ErrorCode::kRepairUnavailable: return "repair unavailable";
    case ErrorCode::kZetaExhausted: return "zeta exhausted";
    case ErrorCode::kInfeasibleBlock: return "infeasible block";
    case ErrorCode::kIo: return "I/O error";
    case ErrorCode::kParse: return "parse error";
  }
  return "unknown error";
}

double ExtReal::value() const {
  if (inf_) throw Error(ErrorCode::kNonFinite, "extended real is +inf");
  return value_;
}

void ProblemInstance::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidInstance, msg); };
  if (n < 1) fail("n must be >= 1");
  if (m < 1) fail("m must be >= 1");
  if (static_cast<int>(blocks.size()) != n) fail("blocks has wrong length");
  if (b.size() != m) fail("b has wrong length");
  if (!b.allFinite()) fail("b must be finite");
  for (int i = 0; i < n; ++i) {
    const auto& blk = blocks[i];
    std::ostringstream where;
    where << "block " << i << ": ";
    if (!blk.oracle) fail(where.str() + "missing oracle");
    if (blk.A.rows() != m) fail(where.str() + "A must have m rows");
    if (blk.A.cols() < 1) fail(where.str() + "A must have at least one column");
    if (blk.oracle->dim() != blk.A.cols()) fail(where.str() + "oracle dimension differs from A columns");
    if (!blk.A.allFinite()) fail(where.str() + "A must be finite");
  }
  if (theta_unit && theta_unit->size() != m) fail("theta_unit has wrong length");
}

ProblemInstance ProblemInstance::with_rhs(const Vector& rhs) const {
  ProblemInstance copy = *this;
  copy.b = rhs;
  return copy;
}

std::uint64_t hash_point(const Vector& point) {
  // FNV-1a over the IEEE bytes.
  std::uint64_t h = 1469598103934665603ULL;
  for (Eigen::Index k = 0; k < point.size(); ++k) {
    double v = point[k];
    if (v == 0.0) v = 0.0;
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (bits >> (8 * byte)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

Atom make_atom(const ProblemInstance& inst, int block, int iter, Vector point) {
  const auto& blk = inst.blocks.at(block);
  ExtReal f = blk.oracle->value(point);
  if (f.is_infinite()) {
    throw Error(ErrorCode::kOracle,
                "block " + std::to_string(block) + ": oracle returned a point outside its domain");
  }
  Atom a;
  a.block = block;
  a.iter = iter;
  a.cost = f.value();
  a.image = blk.A * point;
  a.hash = hash_point(point);
  a.point = std::move(point);
  return a;
}

Vector WeightedAtoms::aggregate(int m) const {
  Vector out = Vector::Zero(1 + m);
  for (const auto& e : entries) {
    out[0] += e.weight * e.atom.cost;
    out.tail(m) += e.weight * e.atom.image;
  }
  return out;
}

double plus_norm(const Vector& v) {
  if (!v.allFinite()) throw Error(ErrorCode::kNonFinite, "non-finite input");
  double s = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (v[j] > 0.0) s += v[j] * v[j];
  }
  return std::sqrt(s);
}

bool Evaluation::all_blocks_feasible() const {
  for (bool ok : block_feasible) {
    if (!ok) return false;
  }
  return true;
}

Evaluation evaluate(const ProblemInstance& inst, const std::vector<Vector>& x) {
  if (static_cast<int>(x.size()) != inst.n) {
    throw Error(ErrorCode::kInvalidArgument, "evaluate: expected one point per block");
  }
  Evaluation ev;
  ev.violation = -inst.b;
  ev.block_feasible.assign(inst.n, true);
  ExtReal total(0.0);
  for (int i = 0; i < inst.n; ++i) {
    const auto& blk = inst.blocks[i];
    if (x[i].size() != blk.dim()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "evaluate: block " + std::to_string(i) + " has wrong dimension");
    }
    ExtReal f = blk.oracle->value(x[i]);
    ev.block_feasible[i] = f.is_finite();
    total += f;
    ev.violation += blk.A * x[i];
  }
  ev.objective = total;
  return ev;
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t label) {
  // splitmix64 finalizer over the combined words
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (label + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace sfopt
