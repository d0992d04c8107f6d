#include <atomic>
#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "sfopt/apps/registry.hpp"
#include "sfopt/parallel.hpp"
#include "sfopt/serialize.hpp"

using namespace sfopt;
using testutil::vec;

TEST_SUITE("core") {

TEST_CASE("extended reals add and compare with infinity as a flag") {
  const ExtReal inf = ExtReal::infinity();
  CHECK((ExtReal(1.0) + inf).is_infinite());
  CHECK((ExtReal(1.0) + ExtReal(2.0)).value() == 3.0);
  CHECK(inf == ExtReal::infinity());
  CHECK(ExtReal(1e300) < inf);
  CHECK_FALSE(inf < ExtReal(0.0));
  CHECK(inf.value_or(-1.0) == -1.0);
  CHECK_THROWS_AS(inf.value(), Error);
}

TEST_CASE("plus norm keeps only positive parts") {
  CHECK(plus_norm(vec({3.0, -7.0, 4.0})) == doctest::Approx(5.0));
  CHECK(plus_norm(vec({-1.0, -2.0})) == 0.0);
  Vector bad = vec({1.0, std::nan("")});
  try {
    plus_norm(bad);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonFinite);
  }
}

TEST_CASE("point hashes ignore the sign of zero") {
  CHECK(hash_point(vec({0.0, 1.0})) == hash_point(vec({-0.0, 1.0})));
  CHECK(hash_point(vec({1.0, 0.0})) != hash_point(vec({0.0, 1.0})));
}

TEST_CASE("instance validation rejects shape mismatches") {
  auto inst = testutil::one_block_quadbox(vec({1.0}), vec({0.0}), vec({-1.0}), vec({1.0}), Matrix::Ones(1, 1), vec({0.0}));
  auto bad = inst;
  bad.b = vec({0.0, 1.0});
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = inst;
  bad.blocks[0].A = Matrix::Ones(1, 2);
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = inst;
  bad.n = 2;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = inst;
  bad.theta_unit = vec({1.0, 1.0});
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("evaluate sums block values and flags domain violations") {
  auto inst = testutil::one_block_quadbox(vec({1.0, 2.0}), vec({1.0, 0.0}), vec({-1.0, -1.0}), vec({1.0, 1.0}),
                                          Matrix::Ones(1, 2), vec({0.5}));
  auto ev = evaluate(inst, {vec({0.5, -0.5})});
  // 0.25 + 0.5 + 2 * 0.25
  CHECK(ev.objective.value() == doctest::Approx(1.25));
  CHECK(ev.violation[0] == doctest::Approx(-0.5));
  CHECK(ev.all_blocks_feasible());
  ev = evaluate(inst, {vec({2.0, 0.0})});
  CHECK(ev.objective.is_infinite());
  CHECK_FALSE(ev.all_blocks_feasible());
  CHECK_THROWS_AS(evaluate(inst, {}), Error);
}

TEST_CASE("make_atom rejects points outside the domain") {
  auto inst = testutil::one_block_quadbox(vec({1.0}), vec({0.0}), vec({-1.0}), vec({1.0}), Matrix::Constant(1, 1, 2.0),
                                          vec({0.0}));
  Atom a = make_atom(inst, 0, 3, vec({0.5}));
  CHECK(a.cost == doctest::Approx(0.25));
  CHECK(a.image[0] == doctest::Approx(1.0));
  CHECK(a.iter == 3);
  try {
    make_atom(inst, 0, 0, vec({3.0}));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOracle);
  }
}

TEST_CASE("rng streams are reproducible and roughly standard") {
  Rng a(42), b(42), c(43);
  for (int k = 0; k < 10; ++k) CHECK(a.next_u64() == b.next_u64());
  CHECK(Rng(42).next_u64() != c.next_u64());
  CHECK(Rng::derive(1, 2) == Rng::derive(1, 2));
  CHECK(Rng::derive(1, 2) != Rng::derive(1, 3));
  Rng r(7);
  double s = 0.0, s2 = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / n) < 0.05);
  CHECK(std::abs(s2 / n - 1.0) < 0.05);
  for (int k = 0; k < 1000; ++k) {
    const double u = r.uniform(2.0, 3.0);
    CHECK((u >= 2.0 && u < 3.0));
  }
}

TEST_CASE("parallel_for covers every index and rethrows the lowest failure") {
  std::vector<int> seen(100, 0);
  parallel_for(100, 4, [&](int i) { seen[i] += 1; });
  for (int v : seen) CHECK(v == 1);
  try {
    parallel_for(10, 3, [](int i) {
      if (i == 7 || i == 4) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "4");
  }
}

TEST_CASE("serialization round-trips byte for byte") {
  for (const char* app : {"uc", "pev", "quadratic-box"}) {
    CAPTURE(app);
    const auto inst = apps::generate(app, 5, 4, 11);
    const std::string text = dump_instance(inst);
    const auto back = parse_instance(text);
    CHECK(dump_instance(back) == text);
    CHECK(back.n == inst.n);
    CHECK(back.m == inst.m);
    REQUIRE(back.theta_unit.has_value());
    CHECK((*back.theta_unit - *inst.theta_unit).norm() == 0.0);
  }
}

TEST_CASE("parse errors carry the parse code") {
  auto code_of = [](const std::string& text) {
    try {
      parse_instance(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  CHECK(code_of("{not json") == ErrorCode::kParse);
  CHECK(code_of("{\"n\":1}") == ErrorCode::kParse);
  CHECK(code_of(R"({"n":1,"m":1,"b":[0],"blocks":[{"A":[[1]],"app":"nope","params":{}}]})") == ErrorCode::kParse);
  CHECK(code_of(R"({"n":2,"m":1,"b":[0],"blocks":[{"A":[[1]],"app":"quadratic-box",
       "params":{"q":[1],"c":[0],"lo":[0],"hi":[1]}}]})") == ErrorCode::kInvalidInstance);
}

TEST_CASE("generator rejects unknown apps") {
  try {
    apps::generate("nope", 2, 2, 0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
  CHECK(apps::is_known_app("uc"));
  CHECK_FALSE(apps::is_known_app("UC"));
}

}  // TEST_SUITE
