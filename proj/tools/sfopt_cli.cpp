// sfopt command-line front end: generate, solve, sweep.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sfopt/sfopt.h"

namespace {

using Json = nlohmann::json;

constexpr int kUsage = 2;
constexpr int kInternalExit = 5;

struct CliError {
  sfopt_status status;
  std::string message;
};

// Prints a JSON error document to stderr and returns the exit code.
int report_error(sfopt_status status, const std::string& message) {
  Json doc{{"error", {{"status", static_cast<int>(status)}, {"code", sfopt_status_name(status)}, {"message", message}}}};
  std::cerr << doc.dump() << "\n";
  return sfopt_status_exit_code(status);
}

void check(sfopt_status st) {
  if (st != SFOPT_OK) throw CliError{st, sfopt_last_error()};
}

struct Str {
  char* p = nullptr;
  ~Str() { sfopt_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct InstanceDeleter {
  void operator()(sfopt_instance* p) const { sfopt_instance_free(p); }
};
struct ReportDeleter {
  void operator()(sfopt_report* p) const { sfopt_report_free(p); }
};
using InstancePtr = std::unique_ptr<sfopt_instance, InstanceDeleter>;
using ReportPtr = std::unique_ptr<sfopt_report, ReportDeleter>;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{SFOPT_ERR_IO, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw CliError{SFOPT_ERR_IO, "cannot write " + path};
}

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  try {
    Json j = Json::parse(read_text(path));
    if (!j.is_object()) throw CliError{SFOPT_ERR_PARSE, "config must be a JSON object"};
    return j;
  } catch (const Json::exception& e) {
    throw CliError{SFOPT_ERR_PARSE, std::string("config: ") + e.what()};
  }
}

// Options shared by all subcommands.
struct Common {
  std::string config;
  std::string app;
  int n = 0;
  int N = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string instance;
};

struct SolveOpts {
  std::optional<int> K;
  std::optional<int> T;
  std::string method;
  std::string scheme;
  std::string csv;
  std::optional<int> threads;
};

// Merges command-line overrides into the solver section of the config.
void apply_solver_flags(Json& cfg, const Common& c, const SolveOpts& s) {
  if (c.seed) cfg["seed"] = *c.seed;
  if (s.threads) cfg["threads"] = *s.threads;
  if (s.K) cfg["fw"]["K"] = *s.K;
  if (s.T) cfg["carath"]["T"] = *s.T;
  if (!s.method.empty()) cfg["carath"]["method"] = s.method;
  if (!s.scheme.empty()) cfg["reconstruct"]["scheme"] = s.scheme;
}

// Generator spec resolved from flags over the config's "instance" section.
struct GenSpec {
  std::string app = "uc";
  int n = 50;
  int N = 10;
  std::uint64_t seed = 0;
  Json overrides = Json::object();
};

GenSpec gen_spec(const Json& cfg, const Common& c) {
  GenSpec g;
  if (cfg.contains("seed")) g.seed = cfg.at("seed").get<std::uint64_t>();
  if (cfg.contains("instance") && cfg.at("instance").is_object()) {
    const Json& i = cfg.at("instance");
    if (i.contains("app")) g.app = i.at("app").get<std::string>();
    if (i.contains("n")) g.n = i.at("n").get<int>();
    if (i.contains("N")) g.N = i.at("N").get<int>();
    if (i.contains("seed")) g.seed = i.at("seed").get<std::uint64_t>();
  }
  if (!c.app.empty()) g.app = c.app;
  if (c.n > 0) g.n = c.n;
  if (c.N > 0) g.N = c.N;
  if (c.seed) g.seed = *c.seed;
  if (cfg.contains(g.app)) g.overrides = cfg.at(g.app);
  return g;
}

InstancePtr make_instance(const GenSpec& g) {
  sfopt_instance* raw = nullptr;
  const std::string ov = g.overrides.dump();
  check(sfopt_generate(g.app.c_str(), g.n, g.N, g.seed, ov.c_str(), &raw));
  return InstancePtr(raw);
}

// Exactly one source: an instance file (flag or config) or a generator spec.
InstancePtr resolve_instance(const Json& cfg, const Common& c) {
  std::string file = c.instance;
  if (file.empty() && cfg.contains("instance") && cfg.at("instance").contains("file")) {
    file = cfg.at("instance").at("file").get<std::string>();
  }
  const bool generator_flags = !c.app.empty() || c.n > 0 || c.N > 0;
  if (!file.empty()) {
    if (generator_flags) throw CliError{SFOPT_ERR_INVALID_ARGUMENT, "give either an instance file or --app/--n/--N"};
    sfopt_instance* raw = nullptr;
    check(sfopt_instance_load(file.c_str(), &raw));
    return InstancePtr(raw);
  }
  return make_instance(gen_spec(cfg, c));
}

// Drops keys the solver config does not understand at its root.
Json solver_section(Json cfg) {
  cfg.erase("instance");
  cfg.erase("sweep");
  cfg.erase("output");
  return cfg;
}

std::string output_path(const Json& cfg, const std::string& flag, const char* key) {
  if (!flag.empty()) return flag;
  if (cfg.contains("output") && cfg.at("output").contains(key)) return cfg.at("output").at(key).get<std::string>();
  return "";
}

int cmd_generate(const Common& c) {
  const Json cfg = load_config(c.config);
  InstancePtr inst = make_instance(gen_spec(cfg, c));
  Str text;
  check(sfopt_instance_to_json(inst.get(), &text.p));
  write_text(output_path(cfg, c.out, "instance"), text.str());
  return 0;
}

int cmd_solve(const Common& c, const SolveOpts& s) {
  Json cfg = load_config(c.config);
  InstancePtr inst = resolve_instance(cfg, c);
  Json solver = solver_section(cfg);
  apply_solver_flags(solver, c, s);
  ReportPtr rep;
  {
    sfopt_report* raw = nullptr;
    check(sfopt_solve(inst.get(), solver.dump().c_str(), &raw));
    rep.reset(raw);
  }
  Str json, csv;
  check(sfopt_report_to_json(rep.get(), &json.p));
  check(sfopt_report_series_csv(rep.get(), &csv.p));
  const std::string out = output_path(cfg, c.out, "report");
  write_text(out, json.str());
  std::string csv_path = output_path(cfg, s.csv, "csv");
  if (csv_path.empty() && !out.empty() && out != "-") csv_path = out + ".csv";
  if (!csv_path.empty()) write_text(csv_path, csv.str());
  return sfopt_report_exit_code(rep.get());
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw CliError{SFOPT_ERR_INVALID_ARGUMENT, "bad list entry '" + item + "'"};
    }
  }
  return out;
}

int cmd_sweep(const Common& c, const SolveOpts& s, const std::string& over, const std::string& grid,
              const std::string& seeds) {
  Json cfg = load_config(c.config);
  Json spec = cfg.contains("sweep") ? cfg.at("sweep") : Json::object();
  if (!over.empty()) spec["over"] = over;
  if (!grid.empty()) spec["grid"] = parse_int_list(grid);
  if (!seeds.empty()) spec["seeds"] = parse_int_list(seeds);
  if (!spec.contains("grid") || spec.at("grid").empty()) {
    throw CliError{SFOPT_ERR_INVALID_ARGUMENT, "sweep needs a non-empty --grid"};
  }
  std::string file = c.instance;
  if (file.empty() && cfg.contains("instance") && cfg.at("instance").contains("file")) {
    file = cfg.at("instance").at("file").get<std::string>();
  }
  if (!file.empty()) {
    try {
      spec["instance"] = Json::parse(read_text(file));
    } catch (const Json::exception& e) {
      throw CliError{SFOPT_ERR_PARSE, std::string("instance: ") + e.what()};
    }
  } else {
    const GenSpec g = gen_spec(cfg, c);
    spec["app"] = g.app;
    spec["n"] = g.n;
    spec["N"] = g.N;
    spec["overrides"] = g.overrides;
  }
  Json solver = solver_section(cfg);
  apply_solver_flags(solver, c, s);
  spec["config"] = solver;
  Str csv;
  check(sfopt_sweep(spec.dump().c_str(), &csv.p));
  write_text(output_path(cfg, c.out, "csv"), csv.str());
  return 0;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON config file");
  sub->add_option("--app", c.app, "uc | pev | quadratic-box")->check(CLI::IsMember({"uc", "pev", "quadratic-box"}));
  sub->add_option("--n", c.n, "number of blocks")->check(CLI::PositiveNumber);
  sub->add_option("--N", c.N, "horizon / block dimension")->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "master seed");
  sub->add_option("--out", c.out, "output path ('-' for stdout)");
}

void add_solver(CLI::App* sub, SolveOpts& s) {
  sub->add_option("--K", s.K, "first-stage iterations")->check(CLI::NonNegativeNumber);
  sub->add_option("--T", s.T, "approximate trim budget")->check(CLI::PositiveNumber);
  sub->add_option("--method", s.method, "exact | fcfw | mnp")->check(CLI::IsMember({"exact", "fcfw", "mnp"}));
  sub->add_option("--scheme", s.scheme, "average | sample | repair | max")
      ->check(CLI::IsMember({"average", "sample", "repair", "max"}));
  sub->add_option("--threads", s.threads, "worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sfopt: near-optimal feasible solutions for separable nonconvex problems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sfopt_version()));

  Common gen_c, solve_c, sweep_c;
  SolveOpts solve_s, sweep_s;
  std::string over, grid, seeds;

  auto* gen = app.add_subcommand("generate", "write a random instance");
  add_common(gen, gen_c);

  auto* solve = app.add_subcommand("solve", "run the full pipeline");
  add_common(solve, solve_c);
  add_solver(solve, solve_s);
  solve->add_option("--instance", solve_c.instance, "instance JSON file");
  solve->add_option("--csv", solve_s.csv, "series CSV path (default <out>.csv)");

  auto* sweep = app.add_subcommand("sweep", "run the pipeline over a grid of K or n");
  add_common(sweep, sweep_c);
  add_solver(sweep, sweep_s);
  sweep->add_option("--instance", sweep_c.instance, "instance JSON file (K sweeps)");
  sweep->add_option("--over", over, "K | n")->check(CLI::IsMember({"K", "n"}));
  sweep->add_option("--grid", grid, "comma-separated grid values");
  sweep->add_option("--seeds", seeds, "comma-separated seeds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_c);
    if (*solve) return cmd_solve(solve_c, solve_s);
    if (*sweep) return cmd_sweep(sweep_c, sweep_s, over, grid, seeds);
  } catch (const CliError& e) {
    return report_error(e.status, e.message);
  } catch (const Json::exception& e) {
    return report_error(SFOPT_ERR_PARSE, e.what());
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", {{"code", "internal error"}, {"message", e.what()}}}}.dump() << "\n";
    return kInternalExit;
  }
  return kUsage;
}
