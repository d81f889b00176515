#include <doctest.h>

#include <algorithm>
#include <functional>

#include "fixtures.hpp"
#include "min2lin/branch.hpp"
#include "min2lin/oracle.hpp"
#include "min2lin/shadow.hpp"
#include "min2lin/simplify.hpp"

using namespace min2lin;

namespace {

bool contains_cut(const std::vector<CutCandidate>& ys, const EdgeSet& y) {
  return std::any_of(ys.begin(), ys.end(), [&](const CutCandidate& c) { return c.edges == y; });
}

ShadowCover cover_of(std::vector<char> w) { return {std::move(w), ShadowMode::Exhaustive, 0}; }

// Cheapest cost of s - skip over assignments agreeing with tau; -1 if none.
int constrained_optimum(const SimpleSystem& s, const std::vector<int>& skip,
                        const ClassAssignment& tau, const ClassTable& table) {
  const Value q = s.modulus();
  std::vector<std::vector<Value>> choices;
  for (VarId v = 0; v < s.num_vars; ++v)
    choices.push_back(tau[v] == kZeroClass ? std::vector<Value>{0} : table.members(tau[v]));
  Assignment a(s.num_vars, 0);
  int best = -1;
  std::function<void(VarId)> go = [&](VarId v) {
    if (v == s.num_vars) {
      int c = 0;
      for (std::size_t i = 0; i < s.equations.size(); ++i) {
        if (std::binary_search(skip.begin(), skip.end(), static_cast<int>(i))) continue;
        if (s.equations[i].satisfied_by(a, q)) continue;
        if (s.equations[i].crisp) return;
        ++c;
      }
      if (best < 0 || c < best) best = c;
      return;
    }
    for (Value x : choices[v]) {
      a[v] = x;
      go(v + 1);
    }
  };
  go(0);
  return best;
}

}  // namespace

TEST_CASE("components and self-satisfiability on the triangle") {
  const System t = fixtures::triangle();
  const SimpleSystem s = as_simple(t);
  const ClassTable z8({2, 3});
  const ClassGraph g(s, z8);
  std::vector<char> w(g.num_vertices(), 0);
  const ClassId two = z8.class_of(2);
  for (VarId v : {1, 2, 3}) w[g.vertex(v, two)] = 1;
  const auto cs = components(g, w);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].vertices.size() == 3);
  CHECK(cs[0].boundary.size() == 1);  // the x_4 - a_2 edge of 2a = x
  CHECK_FALSE(cs[0].crisp_boundary);
  CHECK_FALSE(self_satisfiable(s, g, z8, cs[0]));

  std::vector<char> lone(g.num_vertices(), 0);
  lone[g.vertex(1, z8.class_of(1))] = 1;
  const auto single = components(g, lone);
  REQUIRE(single.size() == 1);
  CHECK(self_satisfiable(s, g, z8, single[0]));
}

TEST_CASE("empty cover when t is unreachable gives the empty cut") {
  const SimpleSystem s = as_simple(fixtures::triangle());
  const ClassTable z8({2, 3});
  const ClassGraph g(s, z8);
  Brancher b(s, g, z8);
  const auto ys = b.branch(1, 0, cover_of(std::vector<char>(g.num_vertices(), 0)));
  REQUIRE(ys.size() == 1);
  CHECK(ys[0].edges.empty());
  CHECK(ys[0].tau == clasn(g, {}));
}

// The planted cut {a_O c_E, b_O d_E} is not emitted: the component
// {d_E, r_E, u_E} is self-satisfiable, so only a_O c_E is cut, which is a
// cheaper conformal cut inside the planted equations.
TEST_CASE("planted cover on chains yields a cut inside the planted equations") {
  const SimpleSystem s = as_simple(fixtures::chains());
  const ClassTable z4({2, 2});
  const ClassGraph g(s, z4);
  Brancher b(s, g, z4);
  const std::vector<int> z{2, 5};
  const EdgeSet y = sep(g, ed(g, z));
  const auto ys = b.branch(1, 1, planted_cover(g, z));
  CHECK_FALSE(contains_cut(ys, y));
  REQUIRE(ys.size() == 1);
  CHECK(eqn(g, ys[0].edges) == std::vector<int>{2});
  for (const auto& c : ys) {
    CHECK(is_conformal(g, c.edges));
    CHECK(c.edges.size() <= 2);
    CHECK_FALSE(has_crisp_edge(g, c.edges));
    CHECK(c.tau == clasn(g, c.edges));
  }
}

TEST_CASE("non-conformal boundary rejects the cover") {
  const SimpleSystem s = as_simple(fixtures::chains());
  const ClassTable z4({2, 2});
  const ClassGraph g(s, z4);
  Brancher b(s, g, z4);
  // Only t in W: s reaches c_O and c_E, so delta(W) is not conformal.
  std::vector<char> w(g.num_vertices(), 0);
  w[ClassGraph::kSink] = 1;
  CHECK(b.branch(2, 2, cover_of(w)).empty());
  // s itself in W is never a valid cover either.
  std::vector<char> bad(g.num_vertices(), 1);
  CHECK(b.branch(2, 2, cover_of(bad)).empty());
}

TEST_CASE("zero budgets prune") {
  const SimpleSystem s = as_simple(fixtures::chains());
  const ClassTable z4({2, 2});
  const ClassGraph g(s, z4);
  Brancher b(s, g, z4);
  CHECK(b.branch(0, 0, planted_cover(g, std::vector<int>{2, 5})).empty());
}

TEST_CASE("planted covers lead back to the planted cut equations") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto inst = random_simple({2, 2}, 4, 6, seed);
    const ClassTable z4({2, 2});
    const ClassGraph g(inst.system, z4);
    const auto& z = inst.violated;
    if (!is_st_cut(g, ed(g, z))) continue;
    const EdgeSet y = sep(g, ed(g, z));
    const int k = static_cast<int>(z.size());
    const int q = static_cast<int>(y.size() + 1) / 2;
    if (q > k) continue;
    Brancher b(inst.system, g, z4);
    const auto ys = b.branch(k, q, planted_cover(g, z));
    const auto target = eqn(g, y);
    CAPTURE(seed);
    CHECK(std::any_of(ys.begin(), ys.end(), [&](const CutCandidate& c) {
      const auto e = eqn(g, c.edges);
      return std::includes(target.begin(), target.end(), e.begin(), e.end());
    }));
    CHECK(ys.size() <= (std::size_t{1} << (2 * k)));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("exhaustive covers are complete on small graphs") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const auto inst = random_simple({2, 2}, 3, 5, seed);
    const ClassTable z4({2, 2});
    const ClassGraph g(inst.system, z4);
    if (g.num_vertices() > 12) continue;
    const int opt = static_cast<int>(inst.violated.size());
    if (opt == 0 || opt > 2) continue;
    Brancher b(inst.system, g, z4);
    bool found = false;
    for (int q = 0; q <= opt && !found; ++q) {
      SubsetStream stream(g);
      ShadowCover w;
      while (!found && stream.next(w)) {
        for (const auto& c : b.branch(opt, q, w)) {
          if (static_cast<int>(c.edges.size()) > 2 * q) continue;
          const int rest = constrained_optimum(inst.system, eqn(g, c.edges), c.tau, z4);
          if (rest >= 0 && rest <= opt - (static_cast<int>(c.edges.size()) + 1) / 2) {
            found = true;
            break;
          }
        }
      }
    }
    CAPTURE(seed);
    CHECK(found);
    ++checked;
  }
  CHECK(checked > 20);
}
