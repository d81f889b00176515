#include "min2lin/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "min2lin/error.hpp"
#include "min2lin/linsolve.hpp"
#include "min2lin/shadow.hpp"
#include "min2lin/solver.hpp"

namespace min2lin {
namespace {

constexpr int kUnreached = 1 << 29;

class PartSearch {
 public:
  PartSearch(const System& s, std::vector<VarId> vars, std::vector<int> eqs)
      : s_(s), vars_(std::move(vars)), m_(s.modulus()) {
    ready_.resize(vars_.size());
    for (int id : eqs) {
      std::size_t last = 0;
      for (const auto& t : s.equations[id].terms)
        last = std::max<std::size_t>(
            last, std::find(vars_.begin(), vars_.end(), t.var) - vars_.begin());
      ready_[last].push_back(id);
    }
    current_.assign(s.num_vars(), 0);
  }

  // Minimum cost over this part, or kUnreached if crisp-infeasible.
  int run() {
    best_ = kUnreached;
    descend(0, 0);
    return best_;
  }
  const Assignment& best_assignment() const { return best_assignment_; }

 private:
  void descend(std::size_t depth, int cost) {
    if (cost >= best_) return;
    if (depth == vars_.size()) {
      best_ = cost;
      best_assignment_ = current_;
      return;
    }
    const VarId v = vars_[depth];
    for (Value a = 0; a < m_; ++a) {
      current_[v] = a;
      int extra = 0;
      bool broken = false;
      for (int id : ready_[depth]) {
        const auto& e = s_.equations[id];
        if (e.satisfied_by(current_, m_)) continue;
        if (e.crisp) {
          broken = true;
          break;
        }
        ++extra;
      }
      if (!broken) descend(depth + 1, cost + extra);
    }
    current_[v] = 0;
  }

  const System& s_;
  std::vector<VarId> vars_;
  Value m_;
  std::vector<std::vector<int>> ready_;
  Assignment current_, best_assignment_;
  int best_ = kUnreached;
};

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

std::vector<Value> class_members_or_zero(const ClassTable& table, ClassId c) {
  return c == kZeroClass ? std::vector<Value>{0} : table.members(c);
}

class Report {
 public:
  explicit Report(std::string_view kind) { r_.kind = kind; }

  void check(bool ok, const std::string& what) {
    ++r_.checked;
    if (ok) return;
    if (r_.counterexamples++ == 0) r_.first_counterexample = what;
    r_.passed = false;
  }
  void check(bool ok, const std::ostringstream& what) { check(ok, what.str()); }
  LemmaReport done() { return r_; }

 private:
  LemmaReport r_;
};

PrimePower as_prime_power(Value q) {
  auto f = factorize(q);
  if (f.size() != 1)
    throw Error(ErrorKind::InvalidArgument, std::to_string(q) + " is not a prime power");
  return f.front();
}

// Every simple equation over two variables u = 0, v = 1.
std::vector<SimpleEquation> all_simple_equations(Value q) {
  std::vector<SimpleEquation> out;
  for (Value r = 0; r < q; ++r) out.push_back(SimpleEquation::unary(0, r));
  for (Value r = 0; r < q; ++r) out.push_back(SimpleEquation::binary(0, r, 1, true));
  return out;
}

std::string describe(const SimpleEquation& e) {
  std::ostringstream o;
  if (e.is_unary()) {
    o << "u = " << e.r;
  } else {
    o << "u = " << e.r << "v";
  }
  return o.str();
}

LemmaReport check_classes(std::string_view kind, const PrimePower& pp) {
  Report rep(kind);
  const ClassTable table(pp);
  const Value q = table.modulus();
  if (kind == "partition") {
    rep.check(table.num_nonzero() == pp.n * static_cast<int>(pp.p - 1), "class count");
    rep.check(table.members(kZeroClass) == std::vector<Value>{0}, "{0} is not a class");
    std::vector<int> seen(table.num_classes(), 0);
    for (Value a = 0; a < q; ++a) ++seen[table.class_of(a)];
    for (ClassId c = 0; c < table.num_classes(); ++c) {
      rep.check(seen[c] > 0, "empty class " + std::to_string(c));
      rep.check(table.contains(c, table.rep(c)), "rep outside class " + std::to_string(c));
    }
    for (Value i = 1; i < q; ++i) {
      for (Value j = 1; j < q; ++j) {
        const bool same = table.class_of(i) == table.class_of(j);
        const bool stats = ord_lsu(i, pp) == ord_lsu(j, pp);
        std::ostringstream w;
        w << "i=" << i << " j=" << j;
        rep.check(same == stats, w);
      }
    }
  } else if (kind == "matching") {
    for (Value r = 0; r < q; ++r) {
      for (Value i = 0; i < q; ++i) {
        for (Value j = 0; j < q; ++j) {
          const Value ri = mulmod(r, i, q), rj = mulmod(r, j, q);
          const bool eq_in = table.class_of(i) == table.class_of(j);
          const bool eq_out = table.class_of(ri) == table.class_of(rj);
          std::ostringstream w;
          w << "r=" << r << " i=" << i << " j=" << j;
          rep.check(eq_in ? eq_out : (!eq_out || (ri == 0 && rj == 0)), w);
        }
      }
    }
  } else {
    for (Value i = 0; i < q; ++i) {
      for (Value j = 0; j < q; ++j) {
        if (table.class_of(i) != table.class_of(j)) continue;
        std::ostringstream w;
        w << "i=" << i << " j=" << j;
        rep.check((i - j) % pp.p == 0, w);
      }
    }
  }
  return rep.done();
}

LemmaReport check_observation(const PrimePower& pp) {
  Report rep("observation");
  const ClassTable table(pp);
  const Value q = table.modulus();
  for (const auto& e : all_simple_equations(q)) {
    SimpleSystem s{pp, 2, {e}};
    const ClassGraph g(s, table);
    for (Value a = 0; a < q; ++a) {
      for (Value b = 0; b < q; ++b) {
        const Assignment phi{a, b};
        if (!e.satisfied_by(phi, q)) continue;
        const auto bits = boolean_assignment(phi, g, table);
        for (const auto& edge : g.edges()) {
          std::ostringstream w;
          w << describe(e) << " at u=" << a << " v=" << b << ": edge " << g.vertex_name(edge.u)
            << "-" << g.vertex_name(edge.v);
          rep.check(edge_satisfied(edge, bits), w);
        }
      }
    }
  }
  return rep.done();
}

bool nxt_satisfiable(const SimpleEquation& e, const ClassAssignment& tau, const ClassTable& table,
                     std::optional<Equation>* out = nullptr) {
  try {
    Equation n = nxt(e, tau, table);
    const Equation copy = n;
    if (out) *out = copy;
    return feasible(std::span<const Equation>(&copy, 1), 2, table.modulus() / table.p())
        .has_value();
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::Divisibility) throw;
    return false;
  }
}

LemmaReport check_next_level(std::string_view kind, const PrimePower& pp) {
  Report rep(kind);
  const ClassTable table(pp);
  const Value q = table.modulus();
  const Value next_q = q / pp.p;
  for (const auto& e : all_simple_equations(q)) {
    const int lhs_classes = table.num_classes();
    const int rhs_classes = e.is_unary() ? 1 : table.num_classes();
    for (ClassId cu = 0; cu < lhs_classes; ++cu) {
      for (ClassId cv = 0; cv < rhs_classes; ++cv) {
        const ClassAssignment tau{cu, cv};
        const bool r = respects(e, tau, table);
        std::optional<Equation> next;
        const bool sat = nxt_satisfiable(e, tau, table, &next);
        std::ostringstream w;
        w << describe(e) << " over Z_" << q << " with tau(u)=[" << table.rep(cu) << "]";
        if (!e.is_unary()) w << " tau(v)=[" << table.rep(cv) << "]";
        w << ": respects=" << r << " nxt-satisfiable=" << sat;
        if (kind == "next-level") {
          rep.check(r == sat, w);
          continue;
        }
        if (r) rep.check(sat, w);
        if (!next) continue;
        // Every solution of nxt lifts to a solution of e.
        for (Value a = 0; a < next_q; ++a) {
          for (Value b = 0; b < next_q; ++b) {
            const Assignment beta_prime{a, b};
            if (!next->satisfied_by(beta_prime, next_q)) continue;
            const Assignment beta = lift(beta_prime, tau, table);
            std::ostringstream v;
            v << describe(e) << " lift of u'=" << a << " v'=" << b << " -> u=" << beta[0]
              << " v=" << beta[1];
            rep.check(e.satisfied_by(beta, q), v);
          }
        }
      }
    }
  }
  return rep.done();
}

LemmaReport check_deleted_edges(const LemmaParams& params) {
  Report rep("deleted-edges");
  const PrimePower pp = as_prime_power(params.modulus);
  const ClassTable table(pp);
  for (int i = 0; i < params.seeds; ++i) {
    const std::uint64_t seed = params.first_seed + static_cast<std::uint64_t>(i);
    auto inst = random_simple(pp, params.max_vars, params.max_eqs, seed);
    const auto& s = inst.system;
    const ClassGraph g(s, table);
    const auto y = ed(g, inst.violated);
    const std::string tag = "seed " + std::to_string(seed) + ": ";
    if (!is_st_cut(g, y)) {
      rep.check(false, tag + "ed(Z) is not an st-cut");
      continue;
    }
    const auto y2 = sep(g, y);
    rep.check(is_conformal(g, y2), tag + "sep(ed(Z)) is not conformal");
    const auto eqs = eqn(g, y2);
    rep.check(y2.size() <= 2 * eqs.size(), tag + "|sep| > 2|eqn(sep)|");
    for (int e : eqs) {
      int count = 0;
      for (int id : y2) count += g.edge(id).equation == e;
      const int bound = s.equations[e].is_unary() ? 1 : 2;
      rep.check(count <= bound, tag + "equation " + std::to_string(e) + " has " +
                                    std::to_string(count) + " cut edges");
    }
    std::vector<Equation> rest;
    for (std::size_t j = 0; j < s.equations.size(); ++j)
      if (!std::binary_search(inst.violated.begin(), inst.violated.end(), static_cast<int>(j)))
        rest.push_back(s.equations[j].as_equation(static_cast<int>(j), s.modulus()));
    const auto tau = clasn(g, y2);
    std::vector<ClassConstraint> ccs;
    for (VarId x = 0; x < s.num_vars; ++x) ccs.push_back({x, tau[x]});
    rep.check(feasible_with_classes(rest, ccs, s.num_vars, table).has_value(),
              tag + "no assignment of S-Z agrees with sep(ed(Z))");
  }
  return rep.done();
}

LemmaReport check_clique_lift(const LemmaParams& params) {
  Report rep("clique-lift");
  const PrimePower pp{2, 2};
  const ClassTable table(pp);
  for (int i = 0; i < params.seeds; ++i) {
    const std::uint64_t seed = params.first_seed + static_cast<std::uint64_t>(i);
    auto inst = random_simple(pp, 2, 3, seed);
    const ClassGraph g(inst.system, table);
    const int ne = static_cast<int>(g.edges().size());
    const int nv = g.num_vertices();
    for (int q = 1; q <= 2; ++q) {
      const LiftedGraph lg = clique_lift(g, q);
      const bool sizes = lg.num_vertices() == (2 * q + 1) * nv + ne;
      rep.check(sizes, "seed " + std::to_string(seed) + ": vertex count of the lift");
      std::vector<int> all_edges(ne);
      std::iota(all_edges.begin(), all_edges.end(), 0);
      for (std::uint32_t amask = 1; amask < (1u << (nv - 1)); ++amask) {
        std::vector<int> targets;
        for (int v = 1; v < nv; ++v)
          if (amask >> (v - 1) & 1) targets.push_back(v);
        // Every edge set of size <= 2q.
        for (std::uint32_t xmask = 0; xmask < (1u << ne); ++xmask) {
          if (std::popcount(xmask) > 2 * q) continue;
          std::vector<int> cut, zs;
          for (int id = 0; id < ne; ++id) {
            if (!(xmask >> id & 1)) continue;
            cut.push_back(id);
            zs.push_back(lg.subdivision_vertex(id));
          }
          const auto r = reach(g, cut);
          const bool separates =
              std::none_of(targets.begin(), targets.end(), [&](int a) { return r[a]; });
          std::ostringstream w;
          w << "seed " << seed << " q=" << q << " A=" << amask << " X=" << xmask;
          rep.check(separates == is_transversal(lg, zs, targets), w);
        }
      }
    }
  }
  return rep.done();
}

}  // namespace

OracleResult brute_optimum(const System& s) {
  const int nv = s.num_vars();
  const Value m = s.modulus();
  OracleResult out;
  out.witness.assign(nv, 0);

  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  int base_cost = 0;
  for (const auto& e : s.equations) {
    if (e.terms.empty()) {
      if (mod(e.constant, m) == 0) continue;
      if (e.crisp) return out;
      ++base_cost;
      continue;
    }
    for (const auto& t : e.terms)
      parent[find_root(parent, t.var)] = find_root(parent, e.terms[0].var);
  }
  std::vector<std::vector<VarId>> part_vars(nv);
  std::vector<std::vector<int>> part_eqs(nv);
  for (VarId v = 0; v < nv; ++v) part_vars[find_root(parent, v)].push_back(v);
  for (const auto& e : s.equations)
    if (!e.terms.empty()) part_eqs[find_root(parent, e.terms[0].var)].push_back(e.id);

  int total = base_cost;
  for (VarId root = 0; root < nv; ++root) {
    if (part_eqs[root].empty()) continue;
    const double size = std::pow(static_cast<double>(m), part_vars[root].size());
    if (size > kOracleGuard)
      throw Error(ErrorKind::InstanceTooLarge,
                  "oracle would enumerate " + std::to_string(m) + "^" +
                      std::to_string(part_vars[root].size()) + " assignments");
    PartSearch search(s, part_vars[root], part_eqs[root]);
    const int best = search.run();
    if (best == kUnreached) return out;
    total += best;
    for (VarId v : part_vars[root]) out.witness[v] = search.best_assignment()[v];
  }
  out.optimum = total;
  for (const auto& e : s.equations)
    if (!e.satisfied_by(out.witness, m)) out.deletions.push_back(e.id);
  return out;
}

bool respects(const SimpleEquation& e, const ClassAssignment& tau, const ClassTable& table) {
  const Value q = table.modulus();
  for (Value a : class_members_or_zero(table, tau[e.lhs])) {
    if (e.is_unary()) {
      if (a == mod(e.r, q)) return true;
      continue;
    }
    for (Value b : class_members_or_zero(table, tau[e.rhs]))
      if (a == mulmod(mod(e.r, q), b, q)) return true;
  }
  return false;
}

RandomSimple random_simple(const PrimePower& pp, int max_vars, int max_eqs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](Value lo, Value hi) {
    return std::uniform_int_distribution<Value>(lo, hi)(rng);
  };
  const Value q = pp.value();
  RandomSimple out;
  out.system.pp = pp;
  out.system.num_vars = static_cast<int>(uniform(2, std::max(2, max_vars)));
  const int nv = out.system.num_vars;
  out.planted.resize(nv);
  for (auto& x : out.planted) x = uniform(0, q - 1);
  const int neq = static_cast<int>(uniform(1, std::max(1, max_eqs)));
  for (int i = 0; i < neq; ++i) {
    const int kind = static_cast<int>(uniform(0, 9));
    if (kind < 2) {
      const VarId u = static_cast<VarId>(uniform(0, nv - 1));
      out.system.equations.push_back(SimpleEquation::unary(u, out.planted[u]));
      continue;
    }
    const bool noise = kind < 5;
    const bool crisp = !noise && uniform(0, 3) == 0;
    SimpleEquation e;
    for (int attempt = 0; attempt < 64; ++attempt) {
      const VarId u = static_cast<VarId>(uniform(0, nv - 1));
      VarId v = static_cast<VarId>(uniform(0, nv - 2));
      if (v >= u) ++v;
      e = SimpleEquation::binary(u, uniform(0, q - 1), v, crisp);
      if (noise || e.satisfied_by(out.planted, q)) break;
    }
    if (!noise && !e.satisfied_by(out.planted, q)) e.crisp = false;
    out.system.equations.push_back(e);
  }
  for (std::size_t i = 0; i < out.system.equations.size(); ++i)
    if (!out.system.equations[i].satisfied_by(out.planted, q))
      out.violated.push_back(static_cast<int>(i));
  return out;
}

LemmaReport check_lemma(std::string_view kind, const LemmaParams& params) {
  if (kind == "partition" || kind == "matching" || kind == "absorbing")
    return check_classes(kind, as_prime_power(params.modulus));
  if (kind == "observation") return check_observation(as_prime_power(params.modulus));
  if (kind == "next-level" || kind == "next-level-sound")
    return check_next_level(kind, as_prime_power(params.modulus));
  if (kind == "deleted-edges") return check_deleted_edges(params);
  if (kind == "clique-lift") return check_clique_lift(params);
  throw Error(ErrorKind::UnknownKind, "unknown lemma kind '" + std::string(kind) + "'");
}

}  // namespace min2lin
