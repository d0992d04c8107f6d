// Instance documents: {n, m, b, theta_unit?, blocks: [{A, app, params}]}.
#pragma once

#include <string>

#include "sfopt/core.hpp"

namespace sfopt {

Json instance_to_json(const ProblemInstance& inst);
/// Throws kParse on malformed documents and kInvalidInstance on shape errors.
ProblemInstance instance_from_json(const Json& doc);

std::string dump_instance(const ProblemInstance& inst);
ProblemInstance parse_instance(const std::string& text);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const char* what);
Json matrix_to_json(const Matrix& a);  // row-major nested arrays
Matrix matrix_from_json(const Json& j, const char* what);

}  // namespace sfopt
