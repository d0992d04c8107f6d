#include "sfopt/apps/registry.hpp"

#include "sfopt/apps/pev.hpp"
#include "sfopt/apps/quadbox.hpp"
#include "sfopt/apps/uc.hpp"

namespace sfopt::apps {

bool is_known_app(const std::string& app) { return app == "uc" || app == "pev" || app == "quadratic-box"; }

OraclePtr make_oracle(const std::string& app, const Json& params) {
  try {
    if (app == "uc") return std::make_shared<UCOracle>(UCOracle::params_from_json(params));
    if (app == "pev") return std::make_shared<PEVOracle>(PEVOracle::params_from_json(params));
    if (app == "quadratic-box") return std::make_shared<QuadBoxOracle>(QuadBoxOracle::params_from_json(params));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    throw Error(ErrorCode::kParse, app + " params: " + e.what());
  }
  throw Error(ErrorCode::kParse, "unknown app '" + app + "'");
}

ProblemInstance generate(const std::string& app, int n, int N, std::uint64_t seed, const Json& overrides) {
  try {
    if (app == "uc") return uc_generate(n, N, seed, UCGenConfig::from_json(overrides));
    if (app == "pev") return pev_generate(n, N, seed, PEVGenConfig::from_json(overrides));
    if (app == "quadratic-box") return quadbox_generate(n, N, seed, QuadBoxGenConfig::from_json(overrides));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, app + " generator overrides: " + e.what());
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown app '" + app + "'");
}

}  // namespace sfopt::apps
