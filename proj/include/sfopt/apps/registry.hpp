#pragma once

#include <string>

#include "sfopt/core.hpp"

namespace sfopt::apps {

/// Builds a block oracle from its serialized form. Known apps: "uc", "pev",
/// "quadratic-box". Throws kParse for unknown names or malformed params.
OraclePtr make_oracle(const std::string& app, const Json& params);

/// Instance generator dispatch used by the CLI and C API.
/// `N` is the horizon for uc/pev and the per-block dimension for quadratic-box.
ProblemInstance generate(const std::string& app, int n, int N, std::uint64_t seed, const Json& overrides = Json::object());

bool is_known_app(const std::string& app);

}  // namespace sfopt::apps
