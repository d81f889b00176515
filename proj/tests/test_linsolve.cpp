#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "min2lin/linsolve.hpp"
#include "min2lin/oracle.hpp"

using namespace min2lin;

TEST_CASE("feasible on small systems") {
  CHECK_FALSE(feasible(fixtures::triangle()).has_value());

  System one(8);
  one.var("x");
  CHECK(feasible(one) == Assignment{0});

  const System s = parse("ring 8\nsoft 2*x = 4\n");
  auto w = feasible(s);
  REQUIRE(w);
  CHECK(((*w)[0] == 2 || (*w)[0] == 6));
  CHECK(feasible(s) == w);
}

TEST_CASE("class constraints become unary equations") {
  const ClassTable z8({2, 3});
  const Equation e = class_constraint_to_equation({0, z8.class_of(2)}, z8);
  CHECK(e.terms == std::vector<Term>{{2, 0}});
  CHECK(e.constant == 4);
  const Equation zero = class_constraint_to_equation({0, kZeroClass}, z8);
  CHECK(zero.terms == std::vector<Term>{{1, 0}});
  CHECK(zero.constant == 0);
  const ClassTable z9({3, 2});
  const Equation n = class_constraint_to_equation({0, z9.class_of(1)}, z9);
  CHECK(n.terms == std::vector<Term>{{3, 0}});
  CHECK(n.constant == 3);
}

TEST_CASE("class constraint solution sets equal the class for every p^n <= 81") {
  for (Value q = 2; q <= 81; ++q) {
    const auto f = factorize(q);
    if (f.size() != 1) continue;
    const ClassTable t(f.front());
    for (ClassId c = 0; c < t.num_classes(); ++c) {
      const Equation e = class_constraint_to_equation({0, c}, t);
      for (Value a = 0; a < q; ++a) REQUIRE(e.satisfied_by({a}, q) == t.contains(c, a));
    }
  }
}

TEST_CASE("feasible_with_classes") {
  const ClassTable z8({2, 3});
  const System s = parse("ring 8\ncrisp 1*x + -2*y = 0\n");
  const std::vector<ClassConstraint> ok{{0, z8.class_of(4)}, {1, z8.class_of(2)}};
  auto w = feasible_with_classes(s.equations, ok, 2, z8);
  REQUIRE(w);
  CHECK((*w)[0] == 4);
  CHECK(((*w)[1] == 2 || (*w)[1] == 6));

  CHECK(feasible_with_classes({}, std::vector<ClassConstraint>{{0, kZeroClass}}, 1, z8) ==
        Assignment{0});
  const System t = parse("ring 8\ncrisp 1*x + -1*y = 0\n");
  CHECK_FALSE(feasible_with_classes(t.equations, ok, 2, z8).has_value());
}

TEST_CASE("feasible agrees with enumeration on random systems") {
  std::mt19937_64 rng(42);
  auto pick = [&](Value lo, Value hi) { return std::uniform_int_distribution<Value>(lo, hi)(rng); };
  for (int round = 0; round < 300; ++round) {
    const Value m = pick(2, 16);
    System s(m);
    const int nv = static_cast<int>(pick(1, 4));
    for (int v = 0; v < nv; ++v) s.var("x" + std::to_string(v));
    const int ne = static_cast<int>(pick(0, 5));
    for (int i = 0; i < ne; ++i) {
      const VarId u = static_cast<VarId>(pick(0, nv - 1));
      std::vector<Term> terms{{pick(0, m - 1), u}};
      if (nv > 1 && pick(0, 2)) {
        VarId v = static_cast<VarId>(pick(0, nv - 2));
        if (v >= u) ++v;
        terms.push_back({pick(0, m - 1), v});
      }
      s.add_equation(true, terms, pick(0, m - 1));
    }
    const auto w = feasible(s);
    const bool brute = brute_optimum(s).optimum.has_value();
    REQUIRE(w.has_value() == brute);
    if (w) CHECK(cost(s, *w) == 0);
  }
}
