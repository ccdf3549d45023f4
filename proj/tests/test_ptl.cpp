#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tdlite/ptl/formula.hpp"
#include "tdlite/ptl/upword.hpp"

using namespace tdlite::ptl;

TEST_CASE("closure is bottom-up and deduplicated") {
  F f = f_and(until(var("p"), var("q")), f_not(until(var("p"), var("q"))));
  auto cl = closure(f);
  CHECK(cl.size() == 5);  // p, q, pUq, !(pUq), conjunction
  CHECK(cl[0]->op == Op::Var);
  CHECK(cl.back().get() == f.get());
  CHECK(temporal_count(cl) == 1);
}

TEST_CASE("printing round-trips structural equality") {
  F a = box_f(f_or(var("p"), next_f(var("q"))));
  F b = box_f(f_or(var("p"), next_f(var("q"))));
  CHECK(equal(a, b));
  CHECK(to_string(a) == to_string(b));
  CHECK_FALSE(equal(a, box_p(f_or(var("p"), next_f(var("q"))))));
}

TEST_CASE("next_n builds towers in both directions") {
  CHECK(to_string(next_n(var("p"), 2)) == "X+X+p");
  CHECK(to_string(next_n(var("p"), -1)) == "X-p");
  CHECK(to_string(next_n(var("p"), 0)) == "p");
}

TEST_CASE("upword indexing wraps loops correctly") {
  UPWord w;
  w.vars = {"p"};
  w.left = {{false}, {true}};   // ... F T F T | window
  w.window = {{true}};          // instant 0
  w.right = {{false}, {false}, {true}};  // T at instants 3,6,9,...
  w.from = 0; w.to = 0;
  REQUIRE(w.valid());
  CHECK(w.value(0, "p"));
  CHECK(w.value(-1, "p"));       // last left row
  CHECK_FALSE(w.value(-2, "p"));
  CHECK(w.value(-3, "p"));
  CHECK_FALSE(w.value(1, "p"));
  CHECK(w.value(3, "p"));
  CHECK(w.value(9, "p"));
  CHECK_FALSE(w.value(10, "p"));
  CHECK_FALSE(w.value(5, "q"));  // unknown variables are false
}

TEST_CASE("upword json round-trip") {
  UPWord w;
  w.vars = {"a", "b"};
  w.left = {{true, false}};
  w.window = {{false, true}, {true, true}};
  w.right = {{false, false}, {true, false}};
  w.from = -1; w.to = 0;
  REQUIRE(w.valid());
  UPWord v = upword_from_json(w.to_json());
  for (long n = -5; n <= 7; ++n) {
    CHECK(w.value(n, "a") == v.value(n, "a"));
    CHECK(w.value(n, "b") == v.value(n, "b"));
  }
}
