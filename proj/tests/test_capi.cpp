// Exercises the C interface only; links against the shared library.
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sfopt/sfopt.h"

TEST_SUITE("capi") {

TEST_CASE("version and status names") {
  CHECK(std::string(sfopt_version()) == "0.1.0");
  CHECK(std::string(sfopt_status_name(SFOPT_OK)) == "ok");
  CHECK(std::string(sfopt_status_name(SFOPT_ERR_PARSE)) == "parse error");
  CHECK(sfopt_status_exit_code(SFOPT_ERR_INVALID_ARGUMENT) == 2);
  CHECK(sfopt_status_exit_code(SFOPT_ERR_IO) == 3);
  CHECK(sfopt_status_exit_code(SFOPT_ERR_INVALID_INSTANCE) == 4);
  CHECK(sfopt_status_exit_code(SFOPT_ERR_DEGENERATE_SYSTEM) == 5);
  CHECK(sfopt_status_exit_code(SFOPT_ERR_ORACLE) == 6);
}

TEST_CASE("generate, serialize and reload an instance") {
  sfopt_instance* inst = nullptr;
  REQUIRE(sfopt_generate("uc", 5, 3, 7, nullptr, &inst) == SFOPT_OK);
  int n = 0, m = 0;
  REQUIRE(sfopt_instance_dims(inst, &n, &m) == SFOPT_OK);
  CHECK(n == 5);
  CHECK(m == 3);
  char* text = nullptr;
  REQUIRE(sfopt_instance_to_json(inst, &text) == SFOPT_OK);
  sfopt_instance* back = nullptr;
  REQUIRE(sfopt_instance_from_json(text, &back) == SFOPT_OK);
  char* text2 = nullptr;
  REQUIRE(sfopt_instance_to_json(back, &text2) == SFOPT_OK);
  CHECK(std::strcmp(text, text2) == 0);

  const std::string path = "capi_instance.json";
  REQUIRE(sfopt_instance_save(inst, path.c_str()) == SFOPT_OK);
  sfopt_instance* loaded = nullptr;
  REQUIRE(sfopt_instance_load(path.c_str(), &loaded) == SFOPT_OK);
  char* text3 = nullptr;
  REQUIRE(sfopt_instance_to_json(loaded, &text3) == SFOPT_OK);
  CHECK(std::strcmp(text, text3) == 0);
  std::remove(path.c_str());

  sfopt_string_free(text);
  sfopt_string_free(text2);
  sfopt_string_free(text3);
  sfopt_instance_free(inst);
  sfopt_instance_free(back);
  sfopt_instance_free(loaded);
}

TEST_CASE("errors set a status and a thread-local message") {
  sfopt_instance* inst = reinterpret_cast<sfopt_instance*>(0x1);
  CHECK(sfopt_generate("nope", 3, 3, 0, nullptr, &inst) == SFOPT_ERR_INVALID_ARGUMENT);
  CHECK(inst == nullptr);
  CHECK(std::string(sfopt_last_error()).find("nope") != std::string::npos);
  CHECK(sfopt_instance_from_json("{bad", &inst) == SFOPT_ERR_PARSE);
  CHECK(sfopt_instance_load("/nonexistent/file.json", &inst) == SFOPT_ERR_IO);
  CHECK(sfopt_generate("uc", 3, 3, 0, "[1,", &inst) == SFOPT_ERR_PARSE);
  CHECK(sfopt_generate(nullptr, 3, 3, 0, nullptr, &inst) == SFOPT_ERR_INVALID_ARGUMENT);
  REQUIRE(sfopt_generate("uc", 3, 3, 0, nullptr, &inst) == SFOPT_OK);
  CHECK(std::string(sfopt_last_error()).empty());
  sfopt_report* rep = nullptr;
  CHECK(sfopt_solve(inst, "{\"fw\":{\"nope\":1}}", &rep) == SFOPT_ERR_PARSE);
  CHECK(sfopt_solve(inst, "{\"carath\":{\"method\":\"x\"}}", &rep) == SFOPT_ERR_INVALID_ARGUMENT);
  CHECK(rep == nullptr);
  sfopt_instance_free(inst);
  sfopt_instance_free(nullptr);
  sfopt_report_free(nullptr);
}

TEST_CASE("solve returns a report with summary, JSON and CSV") {
  sfopt_instance* inst = nullptr;
  REQUIRE(sfopt_generate("quadratic-box", 8, 2, 1, "{\"m\":2}", &inst) == SFOPT_OK);
  sfopt_report* rep = nullptr;
  REQUIRE(sfopt_solve(inst, "{\"fw\":{\"K\":200},\"diameter\":{\"samples\":0}}", &rep) == SFOPT_OK);
  double v = 0, obj = 0, viol = 0;
  int feas = -1, zeta = -1;
  REQUIRE(sfopt_report_summary(rep, &v, &obj, &viol, &feas, &zeta) == SFOPT_OK);
  CHECK(std::isfinite(v));
  CHECK(sfopt_report_exit_code(rep) == (feas ? 0 : 1));
  char* json = nullptr;
  char* csv = nullptr;
  REQUIRE(sfopt_report_to_json(rep, &json) == SFOPT_OK);
  REQUIRE(sfopt_report_series_csv(rep, &csv) == SFOPT_OK);
  CHECK(std::string(json).find("\"v_star\"") != std::string::npos);
  CHECK(std::string(csv).rfind("stage,k,residual,time_s", 0) == 0);

  // evaluate the stored solution through the C API
  const std::string js(json);
  const auto start = js.find("\"x_bar\"");
  REQUIRE(start != std::string::npos);
  const auto open = js.find('[', start);
  int depth = 0;
  std::size_t end = open;
  for (; end < js.size(); ++end) {
    if (js[end] == '[') ++depth;
    if (js[end] == ']' && --depth == 0) break;
  }
  const std::string xs = js.substr(open, end - open + 1);
  double eobj = 0, eviol = 0;
  int finite = 0;
  REQUIRE(sfopt_evaluate(inst, xs.c_str(), &eobj, &finite, &eviol) == SFOPT_OK);
  CHECK(finite == 1);
  CHECK(std::abs(eobj - obj) <= 1e-8 * (1 + std::abs(obj)));
  CHECK(std::abs(eviol - viol) <= 1e-8);

  sfopt_string_free(json);
  sfopt_string_free(csv);
  sfopt_report_free(rep);
  sfopt_instance_free(inst);
}

TEST_CASE("sweep through the C API") {
  char* csv = nullptr;
  CHECK(sfopt_sweep("{\"over\":\"K\",\"grid\":[]}", &csv) == SFOPT_ERR_INVALID_ARGUMENT);
  REQUIRE(sfopt_sweep("{\"over\":\"K\",\"grid\":[10,20],\"app\":\"quadratic-box\",\"n\":4,\"N\":2,"
                      "\"config\":{\"diameter\":{\"samples\":0}}}",
                      &csv) == SFOPT_OK);
  const std::string s(csv);
  CHECK(std::count(s.begin(), s.end(), '\n') == 3);
  sfopt_string_free(csv);
}

TEST_CASE("kernels: exact reduction and simplex projection") {
  // p = 2, columns (2,0), (0,2), (1,1), weights (1/2, 1/2, 1)
  const double W[] = {2, 0, 0, 2, 1, 1};
  const double lam[] = {0.5, 0.5, 1.0};
  const double ws[] = {2.0, 2.0};
  double alpha[2];
  int kept[2];
  int count = 0;
  double res = 1;
  REQUIRE(sfopt_exact_caratheodory(2, 3, W, lam, ws, 0, alpha, kept, &count, &res) == SFOPT_OK);
  CHECK(count <= 2);
  double r0 = -ws[0], r1 = -ws[1];
  for (int l = 0; l < count; ++l) {
    CHECK(alpha[l] >= 0.0);
    r0 += alpha[l] * W[2 * kept[l]];
    r1 += alpha[l] * W[2 * kept[l] + 1];
  }
  CHECK(std::hypot(r0, r1) <= 1e-10);
  CHECK(res <= 1e-10);
  const double bad[] = {5.0, 5.0};
  CHECK(sfopt_exact_caratheodory(2, 3, W, lam, bad, 0, alpha, kept, &count, &res) == SFOPT_ERR_INCONSISTENT_INPUT);

  const double v[] = {0.5, 0.5, 0.5};
  double out[3];
  REQUIRE(sfopt_project_simplex(3, v, out) == SFOPT_OK);
  for (double x : out) CHECK(x == doctest::Approx(1.0 / 3.0));
  CHECK(sfopt_project_simplex(0, v, out) == SFOPT_ERR_INVALID_ARGUMENT);
}

}  // TEST_SUITE
