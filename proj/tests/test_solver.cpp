#include <doctest.h>

#include "fixtures.hpp"
#include "min2lin/error.hpp"
#include "min2lin/oracle.hpp"
#include "min2lin/solver.hpp"

using namespace min2lin;

namespace {

// The chains instance carried to Z_12: coefficient 10 is 2 mod 4 and 1 mod 3, so the
// Z_4 part is the chains instance and the Z_3 part is satisfiable.
const char* kChainsZ12 =
    "ring 12\n"
    "crisp 1*a = 1\n"
    "crisp 1*b = 1\n"
    "soft 10*a + -1*c = 0\n"
    "soft 1*c + -10*u = 0\n"
    "soft 1*u + -1*r = 0\n"
    "soft 10*b + -1*d = 0\n"
    "soft 1*d + -1*r = 0\n";

SolverConfig config(SearchMode mode, std::uint64_t seed = 0) {
  SolverConfig cfg;
  cfg.mode = mode;
  cfg.seed = seed;
  return cfg;
}

void check_solved(const System& s, const SolveResult& r, int k) {
  REQUIRE(r.status == SolveStatus::Solved);
  CHECK(r.cost == static_cast<int>(r.deleted.size()));
  CHECK(static_cast<long>(r.deleted.size()) <= 2L * s.ring.omega() * k);
  const Verdict v = verify(s, k, r.deleted, r.assignment);
  CHECK_MESSAGE(v.ok, v.reason);
  for (const auto& audit : r.audit) {
    for (const auto& level : audit.levels) {
      CHECK(static_cast<int>(level.cut.size()) <= 2 * level.q);
      CHECK(level.next_k == level.k - (static_cast<int>(level.cut.size()) + 1) / 2);
      CHECK(static_cast<int>(level.cut.size()) + 2 * level.next_k <= 2 * level.k);
    }
  }
}

}  // namespace

TEST_CASE("nxt examples") {
  const ClassTable z9({3, 2});
  const auto e = SimpleEquation::binary(0, 2, 1, true);
  const Equation n = nxt(e, {z9.class_of(2), z9.class_of(1)}, z9);
  CHECK(n.terms == std::vector<Term>{{1, 0}, {1, 1}});  // u' + v' = 0, i.e. u' = 2v'
  CHECK(n.constant == 0);

  const Equation u = nxt(SimpleEquation::unary(0, 3), {z9.class_of(3)}, z9);
  CHECK(u.terms == std::vector<Term>{{1, 0}});
  CHECK(u.constant == 0);

  const ClassTable z4({2, 2});
  CHECK_THROWS_AS(nxt(SimpleEquation::binary(0, 1, 1, true), {z4.class_of(1), z4.class_of(2)}, z4),
                  Error);
  CHECK_FALSE(respects(SimpleEquation::binary(0, 1, 1, true), {z4.class_of(1), z4.class_of(2)}, z4));
}

TEST_CASE("lift examples") {
  const ClassTable z9({3, 2});
  CHECK(lift({0, 0}, {kZeroClass, kZeroClass}, z9) == Assignment{0, 0});
  const Assignment beta = lift({2, 1}, {z9.class_of(2), z9.class_of(1)}, z9);
  CHECK(beta == Assignment{8, 4});
  CHECK(SimpleEquation::binary(0, 2, 1, true).satisfied_by(beta, 9));
}

TEST_CASE("nxt soundness holds exhaustively") {
  for (Value m : {4, 8, 9}) {
    LemmaParams p;
    p.modulus = m;
    const auto r = check_lemma("next-level-sound", p);
    CAPTURE(m);
    CHECK_MESSAGE(r.passed, r.first_counterexample);
  }
}

// respects(e, tau) and "nxt(e, tau) is satisfiable" differ when tau puts u in
// the zero class: nxt only sees the residue class mod p.
TEST_CASE("nxt satisfiable without tau respecting e") {
  const ClassTable z4({2, 2});
  const auto e = SimpleEquation::unary(0, 2);
  const ClassAssignment tau{kZeroClass};
  CHECK_FALSE(respects(e, tau, z4));
  const Equation n = nxt(e, tau, z4);
  CHECK(n.constant == 1);  // u' = 1 over Z_2
  CHECK(lift({1}, tau, z4) == Assignment{2});
  CHECK(z4.class_of(2) != tau[0]);
}

TEST_CASE("reduce_to keeps ids and reduces coefficients") {
  const System s = parse(kChainsZ12);
  const System r = reduce_to(s, {3, 1});
  CHECK(r.modulus() == 3);
  CHECK(r.equations[2].terms == std::vector<Term>{{1, 0}, {2, 2}});
  CHECK(r.equations[6].id == 6);
}

TEST_CASE("solve on the worked examples in every mode") {
  for (auto mode : {SearchMode::Exhaustive, SearchMode::ExhaustiveShadow, SearchMode::ImpSep,
                    SearchMode::Bernoulli}) {
    const std::string name = to_string(mode);
    CAPTURE(name);
    for (bool greedy : {true, false}) {
      SolverConfig cfg = config(mode);
      cfg.greedy = greedy;
      for (const System& s : {fixtures::chains(), fixtures::triangle()}) {
        Solver solver(cfg);
        check_solved(s, solver.solve(s, 1), 1);
      }
    }
  }
}

TEST_CASE("solve over Z_12 stays within 2*omega*k") {
  const System s = parse(kChainsZ12);
  CHECK(brute_optimum(s).optimum == 1);
  Solver solver(config(SearchMode::Exhaustive));
  const auto r = solver.solve(s, 1);
  check_solved(s, r, 1);
  REQUIRE(r.audit.size() == 2);
  CHECK(r.audit[0].pp == PrimePower{2, 2});

  const auto sat = gen_planted(RingContext::make(12), 4, 6, 0, 9);
  Solver again(config(SearchMode::ImpSep));
  const auto rs = again.solve(sat.system, 2);
  check_solved(sat.system, rs, 2);
  CHECK(rs.deleted.empty());
}

TEST_CASE("solve rejects when the budget is too small") {
  const System t3 = disjoint_copies(fixtures::triangle(), 3);
  for (auto mode : {SearchMode::Exhaustive, SearchMode::ImpSep}) {
    Solver solver(config(mode));
    const auto r = solver.solve(t3, 1);
    if (r.status == SolveStatus::Solved) {
      check_solved(t3, r, 1);
    } else {
      CHECK(r.cost == -1);
      CHECK(r.deleted.empty());
    }
  }
  Solver solver(config(SearchMode::Exhaustive));
  CHECK(solver.solve(fixtures::triangle(), 0).status == SolveStatus::NoSolution);
  CHECK(solver.solve(parse("ring 4\ncrisp 1*x = 1\ncrisp 1*x = 2\n"), 5).status ==
        SolveStatus::NoSolution);
  CHECK_THROWS_AS(solver.solve(fixtures::triangle(), -1), Error);
}

TEST_CASE("degenerate rings and constant equations") {
  Solver solver(config(SearchMode::Exhaustive));
  const System one = parse("ring 1\nsoft 1*x = 0\n");
  check_solved(one, solver.solve(one, 0), 0);
  const System konst = parse("ring 4\nsoft 2*x + 2*x = 1\ncrisp 1*x = 3\n");
  const auto r = solver.solve(konst, 1);
  check_solved(konst, r, 1);
  CHECK(r.deleted == std::vector<int>{0});
  CHECK(solver.solve(konst, 0).status == SolveStatus::NoSolution);
}

TEST_CASE("fixed seed reproduces the result") {
  const auto p = gen_planted(RingContext::make(8), 5, 7, 2, 11);
  for (auto mode : {SearchMode::ImpSep, SearchMode::Bernoulli}) {
    SolverConfig cfg = config(mode, 1234);
    cfg.greedy = false;
    Solver a(cfg), b(cfg);
    const auto ra = a.solve(p.system, 2);
    const auto rb = b.solve(p.system, 2);
    CHECK(ra.deleted == rb.deleted);
    CHECK(ra.assignment == rb.assignment);
    CHECK(ra.repeats_used == rb.repeats_used);
  }
}

TEST_CASE("exhaustive modes succeed at the optimum on small instances") {
  int checked = 0;
  for (Value m : {4, 8, 9}) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto p = gen_planted(RingContext::make(m), 3, 4, static_cast<int>(seed % 3) + 1, seed);
      const int opt = *brute_optimum(p.system).optimum;
      if (opt == 0) continue;
      for (auto mode : {SearchMode::Exhaustive, SearchMode::ExhaustiveShadow}) {
        // Subset streams need |V(G)| <= 20, which only Z_4 keeps after homogenization.
        if (mode == SearchMode::ExhaustiveShadow && m != 4) continue;
        SolverConfig cfg = config(mode);
        cfg.greedy = false;
        Solver solver(cfg);
        CAPTURE(m);
        CAPTURE(seed);
        const std::string name = to_string(mode);
        CAPTURE(name);
        check_solved(p.system, solver.solve(p.system, opt), opt);
      }
      ++checked;
    }
  }
  CHECK(checked > 30);
}

TEST_CASE("verify") {
  const System t = fixtures::triangle();
  const Assignment a{4, 2, 6, 2};
  CHECK(verify(t, 1, std::vector<int>{4}, a).ok);
  CHECK_FALSE(verify(t, 1, std::vector<int>{}, a).ok);
  CHECK_FALSE(verify(t, 1, std::vector<int>{0, 4}, a).ok);
  CHECK_FALSE(verify(t, 1, std::vector<int>{4, 4}, a).ok);
  CHECK_FALSE(verify(t, 1, std::vector<int>{9}, a).ok);
  CHECK_FALSE(verify(t, 0, std::vector<int>{4}, a).ok);
  CHECK_FALSE(verify(t, 1, std::vector<int>{4}, Assignment{4, 2}).ok);
}

TEST_CASE("search mode names") {
  CHECK(parse_search_mode("exhaustive-shadow") == SearchMode::ExhaustiveShadow);
  CHECK(parse_search_mode("impsep") == SearchMode::ImpSep);
  CHECK_FALSE(parse_search_mode("planted").has_value());
  CHECK(default_repeats(1) == 64);
  CHECK(default_repeats(4) == 256);
}
