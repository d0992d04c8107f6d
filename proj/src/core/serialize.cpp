#include "sfopt/serialize.hpp"

#include "sfopt/apps/registry.hpp"

namespace sfopt {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorCode::kParse, msg); }

const Json& require(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return doc.at(key);
}

}  // namespace

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back(v[k]);
  return arr;
}

Vector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) parse_fail(std::string(what) + " must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) parse_fail(std::string(what) + " must be an array of numbers");
    v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
  }
  return v;
}

Json matrix_to_json(const Matrix& a) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) rows.push_back(vector_to_json(a.row(r).transpose()));
  return rows;
}

Matrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    parse_fail(std::string(what) + " must be a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix a(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    Vector row = vector_from_json(j[static_cast<std::size_t>(r)], what);
    if (row.size() != cols) parse_fail(std::string(what) + " rows have unequal lengths");
    a.row(r) = row.transpose();
  }
  return a;
}

Json instance_to_json(const ProblemInstance& inst) {
  Json doc;
  doc["n"] = inst.n;
  doc["m"] = inst.m;
  doc["b"] = vector_to_json(inst.b);
  if (inst.theta_unit) doc["theta_unit"] = vector_to_json(*inst.theta_unit);
  Json blocks = Json::array();
  for (const auto& blk : inst.blocks) {
    Json jb;
    jb["A"] = matrix_to_json(blk.A);
    jb["app"] = blk.oracle->app();
    jb["params"] = blk.oracle->params();
    blocks.push_back(std::move(jb));
  }
  doc["blocks"] = std::move(blocks);
  return doc;
}

ProblemInstance instance_from_json(const Json& doc) {
  ProblemInstance inst;
  try {
    inst.n = require(doc, "n").get<int>();
    inst.m = require(doc, "m").get<int>();
  } catch (const Json::exception& e) {
    parse_fail(std::string("n and m must be integers: ") + e.what());
  }
  inst.b = vector_from_json(require(doc, "b"), "b");
  if (doc.contains("theta_unit")) inst.theta_unit = vector_from_json(doc.at("theta_unit"), "theta_unit");
  const Json& blocks = require(doc, "blocks");
  if (!blocks.is_array()) parse_fail("blocks must be an array");
  for (const auto& jb : blocks) {
    BlockSpec blk;
    blk.A = matrix_from_json(require(jb, "A"), "A");
    const Json& app = require(jb, "app");
    if (!app.is_string()) parse_fail("app must be a string");
    blk.oracle = apps::make_oracle(app.get<std::string>(), jb.contains("params") ? jb.at("params") : Json::object());
    inst.blocks.push_back(std::move(blk));
  }
  inst.validate();
  return inst;
}

std::string dump_instance(const ProblemInstance& inst) { return instance_to_json(inst).dump() + "\n"; }

ProblemInstance parse_instance(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    parse_fail(std::string("malformed instance document: ") + e.what());
  }
  return instance_from_json(doc);
}

}  // namespace sfopt
