#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "min2lin/error.hpp"
#include "min2lin/oracle.hpp"
#include "min2lin/simplify.hpp"
#include "min2lin/solver.hpp"

using namespace min2lin;

namespace {

System to_system(const SimpleSystem& s) {
  System out(s.modulus());
  for (int v = 0; v < s.num_vars; ++v) out.var("v" + std::to_string(v));
  for (const auto& e : s.as_equations()) out.add_equation(e.crisp, e.terms, e.constant);
  return out;
}

bool is_simple(const SimpleSystem& s) {
  return std::all_of(s.equations.begin(), s.equations.end(),
                     [](const SimpleEquation& e) { return !e.is_unary() || e.crisp; });
}

std::vector<int> all_ids(const System& s) {
  std::vector<int> ids(s.equations.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  return ids;
}

// min over alpha on V(X) of offset + optimum(S_alpha); -1 if every branch is infeasible.
int branch_minimum(const System& s, const std::vector<int>& x, const Assignment& chi) {
  const auto pinned = variables_of(s, x);
  const Value q = s.modulus();
  Assignment alpha(s.num_vars(), 0);
  int best = -1;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == pinned.size()) {
      auto b = homogenize(s, all_ids(s), x, chi, alpha, 100);
      if (!b) return;
      REQUIRE(is_simple(b->system));
      auto opt = brute_optimum(to_system(b->system)).optimum;
      if (opt && (best < 0 || b->offset + *opt < best)) best = b->offset + *opt;
      return;
    }
    for (Value a = 0; a < q; ++a) {
      alpha[pinned[i]] = a;
      go(i + 1);
    }
  };
  go(0);
  return best;
}

CoreFn exhaustive_core(Solver& solver) {
  return [&solver](const SimpleSystem& s, int k) { return solver.core(s, k); };
}

SolverConfig exhaustive() {
  SolverConfig cfg;
  cfg.mode = SearchMode::Exhaustive;
  return cfg;
}

}  // namespace

TEST_CASE("eliminate soft unary") {
  const System s = parse("ring 8\nsoft 2*x = 3\n");
  const auto e = eliminate_soft_unary(s);
  REQUIRE(e.system.equations.size() == 2);
  CHECK(e.system.vars == std::vector<std::string>{"x", "w"});
  CHECK(e.system.equations[0].crisp);
  CHECK(e.system.equations[0].terms == std::vector<Term>{{1, e.w}});
  CHECK(e.system.equations[1].terms == std::vector<Term>{{2, 0}, {7, e.w}});
  CHECK(e.system.equations[1].constant == 3);
  CHECK_FALSE(e.system.equations[1].crisp);
  CHECK(e.origin == std::vector<int>{-1, 0});

  const System t = fixtures::triangle();
  const auto same = eliminate_soft_unary(t);
  CHECK(serialize(same.system) == serialize(t));
  CHECK(same.w == -1);

  const System two = parse("ring 4\nsoft 1*x = 1\nsoft 1*x = 2\n");
  CHECK(brute_optimum(two).optimum == 1);
  CHECK(brute_optimum(eliminate_soft_unary(two).system).optimum == 1);

  const System clash = parse("ring 4\nsoft 1*w = 1\n");
  CHECK(eliminate_soft_unary(clash).system.vars[1] == "w_");
}

TEST_CASE("homogenize a single equation") {
  const System s = parse("ring 4\nsoft 2*u + -3*v = 1\n");
  const Assignment chi{2, 1};
  REQUIRE(s.equations[0].satisfied_by(chi, 4));
  auto b = homogenize(s, std::vector<int>{0}, {}, chi, {0, 0}, 3);
  REQUIRE(b);
  CHECK(b->budget == 3);
  CHECK(b->offset == 0);
  CHECK(b->system.num_vars == 3);
  REQUIRE(b->system.equations.size() == 2);
  CHECK(b->system.equations[0] == SimpleEquation::binary(2, 2, 0, true));
  CHECK(b->system.equations[1] == SimpleEquation::binary(2, 3, 1, false, 0));
  CHECK(cost(to_system(b->system), Assignment(3, 0)) == 0);
}

TEST_CASE("homogenize charges X to the offset") {
  const System t = fixtures::triangle();
  const std::vector<int> x{1};
  const Assignment chi{4, 0, 0, 0};
  auto hit = homogenize(t, all_ids(t), x, chi, Assignment{0, 2, 0, 0}, 1);
  REQUIRE(hit);
  CHECK(hit->offset == 0);
  auto miss = homogenize(t, all_ids(t), x, chi, Assignment{0, 1, 0, 0}, 1);
  REQUIRE(miss);
  CHECK(miss->offset == 1);
  CHECK(miss->budget == 0);
  // Pinning x away from 4 breaks the crisp x = 4 once it is in X.
  CHECK_FALSE(homogenize(t, all_ids(t), std::vector<int>{0, 1}, chi, Assignment{1, 0, 0, 0}, 1));
  CHECK(branch_minimum(t, x, chi) == 1);
}

TEST_CASE("homogenize preserves the optimum") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (Value m : {4, 8, 9}) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const auto p = gen_planted(RingContext::make(m), 3, 3, 2, seed * 31 + static_cast<std::uint64_t>(m));
      const System s = eliminate_soft_unary(p.system).system;
      Assignment chi = p.assignment;
      chi.resize(s.num_vars(), 0);
      std::vector<int> x;
      for (const auto& e : s.equations)
        if (!e.satisfied_by(chi, m) || rng() % 3 == 0) x.push_back(e.id);
      if (x.empty()) continue;
      CAPTURE(m);
      CAPTURE(seed);
      const int expected = *brute_optimum(s).optimum;
      CHECK(branch_minimum(s, x, chi) == expected);
      ++checked;
    }
  }
  CHECK(checked > 40);
}

TEST_CASE("iterative compression") {
  Solver solver(exhaustive());
  const auto core = exhaustive_core(solver);
  for (bool greedy : {true, false}) {
    CAPTURE(greedy);
    CompressOptions options;
    options.greedy = greedy;
    int k = 1;
    options.observer = [&](const CompressionState& st) {
      CHECK(static_cast<int>(st.current.size()) <= 2 * k);
    };

    const auto sat = gen_planted(RingContext::make(8), 4, 6, 0, 3);
    auto z = iterative_compress(sat.system, 0, core, options);
    REQUIRE(z);
    CHECK(z->deleted.empty());

    const System t = fixtures::triangle();
    auto zt = iterative_compress(t, 1, core, options);
    REQUIRE(zt);
    CHECK(zt->deleted.size() <= 2);
    CHECK(verify(t, 1, zt->deleted, zt->assignment).ok);
    CHECK_FALSE(iterative_compress(t, 0, core, options));

    const System f = fixtures::chains();
    auto zf = iterative_compress(f, 1, core, options);
    REQUIRE(zf);
    CHECK(zf->deleted.size() <= 2);
    CHECK(verify(f, 1, zf->deleted, zf->assignment).ok);

    k = 2;
    const System t2 = disjoint_copies(t, 2);
    auto z2 = iterative_compress(t2, 2, core, options);
    REQUIRE(z2);
    CHECK(z2->deleted.size() <= 4);
    CHECK(verify(t2, 2, z2->deleted, z2->assignment).ok);
  }
}

TEST_CASE("as_simple") {
  const SimpleSystem f = as_simple(fixtures::chains());
  REQUIRE(f.equations.size() == 7);
  CHECK(f.equations[0] == SimpleEquation::unary(0, 1, 0));
  CHECK(f.equations[2] == SimpleEquation::binary(2, 2, 0, false, 2));  // c = 2a
  CHECK(f.equations[4] == SimpleEquation::binary(3, 1, 4, false, 4));  // u = r
  CHECK_THROWS_AS(as_simple(parse("ring 4\nsoft 1*x = 1\n")), Error);
  CHECK_THROWS_AS(as_simple(parse("ring 4\nsoft 1*x + 1*y = 1\n")), Error);
  CHECK_THROWS_AS(as_simple(parse("ring 4\nsoft 2*x + 2*y = 0\n")), Error);
  CHECK_THROWS_AS(as_simple(parse("ring 12\ncrisp 1*x = 1\n")), Error);
}
