#include "min2lin/solver.hpp"

#include <algorithm>
#include <set>

#include "min2lin/branch.hpp"
#include "min2lin/error.hpp"
#include "min2lin/linsolve.hpp"
#include "min2lin/shadow.hpp"

namespace min2lin {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<int> soft_indices(const SimpleSystem& s) {
  std::vector<int> out;
  for (std::size_t i = 0; i < s.equations.size(); ++i)
    if (!s.equations[i].crisp) out.push_back(static_cast<int>(i));
  return out;
}

// Calls f on every subset of items of size at most limit, smallest first.
template <typename F>
void for_each_subset(const std::vector<int>& items, int limit, F&& f) {
  std::vector<int> chosen;
  for (int size = 0; size <= limit && size <= static_cast<int>(items.size()); ++size) {
    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      chosen.clear();
      for (int i : idx) chosen.push_back(items[i]);
      f(chosen);
      int i = size - 1;
      while (i >= 0 && idx[i] == static_cast<int>(items.size()) - size + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
}

}  // namespace

const char* to_string(SearchMode mode) {
  switch (mode) {
    case SearchMode::ImpSep: return "impsep";
    case SearchMode::Bernoulli: return "bernoulli";
    case SearchMode::Exhaustive: return "exhaustive";
    case SearchMode::ExhaustiveShadow: return "exhaustive-shadow";
  }
  return "?";
}

std::optional<SearchMode> parse_search_mode(std::string_view name) {
  for (auto m : {SearchMode::ImpSep, SearchMode::Bernoulli, SearchMode::Exhaustive,
                 SearchMode::ExhaustiveShadow})
    if (name == to_string(m)) return m;
  return std::nullopt;
}

long default_repeats(int k) {
  long r = 1;
  for (int i = 0; i < k && r < (1L << 20); ++i) r *= 4;
  return std::max(64L, r);
}

Equation nxt(const SimpleEquation& e, const ClassAssignment& tau, const ClassTable& table) {
  const Value q = table.modulus();
  const Value p = table.p();
  const Value next_q = q / p;
  Equation out;
  out.crisp = e.crisp;
  Value diff;
  if (e.is_unary()) {
    diff = mod(e.r - table.rep(tau[e.lhs]), q);
    out.terms = {{1 % next_q, e.lhs}};
  } else {
    diff = mod(mulmod(mod(e.r, q), table.rep(tau[e.rhs]), q) - table.rep(tau[e.lhs]), q);
    out.terms = {{1 % next_q, e.lhs}, {mod(-e.r, next_q), e.rhs}};
  }
  if (diff % p != 0)
    throw Error(ErrorKind::Divisibility, "class assignment does not respect the equation");
  out.constant = mod(diff / p, next_q);
  return out;
}

Assignment lift(const Assignment& beta_prime, const ClassAssignment& tau,
                const ClassTable& table) {
  const Value q = table.modulus();
  Assignment out(beta_prime.size());
  for (std::size_t v = 0; v < beta_prime.size(); ++v) {
    const ClassId c = v < tau.size() ? tau[v] : kZeroClass;
    out[v] = mod(table.rep(c) + table.p() * beta_prime[v], q);
  }
  return out;
}

System reduce_to(const System& s, const PrimePower& pp) {
  const Value q = pp.value();
  System out(q);
  out.vars = s.vars;
  for (const auto& e : s.equations) {
    Equation r = e;
    for (auto& t : r.terms) t.coef = mod(t.coef, q);
    r.constant = mod(r.constant, q);
    out.equations.push_back(std::move(r));
  }
  return out;
}

Solver::Solver(SolverConfig cfg) : cfg_(cfg) {}

const ClassTable& Solver::table_for(const PrimePower& pp) {
  auto& slot = tables_[{pp.p, pp.n}];
  if (!slot) slot = std::make_unique<ClassTable>(pp);
  return *slot;
}

std::uint64_t Solver::stream_seed(long call, int q, long repeat) const {
  std::uint64_t h = splitmix(cfg_.seed);
  for (std::uint64_t part : {static_cast<std::uint64_t>(component_),
                             static_cast<std::uint64_t>(depth_), static_cast<std::uint64_t>(call),
                             static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(repeat)})
    h = splitmix(h ^ part);
  return h;
}

SolveResult Solver::solve(const System& s, int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "k must be nonnegative");
  SolveResult result;
  result.k = k;
  result.seed = cfg_.seed;
  repeats_used_ = 0;

  std::vector<Assignment> parts;
  for (std::size_t i = 0; i < s.ring.factors.size(); ++i) {
    const auto& pp = s.ring.factors[i];
    component_ = static_cast<int>(i);
    depth_ = 0;
    core_calls_ = 0;
    levels_.clear();
    auto sol = solve_component(reduce_to(s, pp), k);
    result.repeats_used = repeats_used_;
    ComponentAudit audit{pp, {}, core_calls_, levels_};
    if (!sol) {
      result.audit.push_back(std::move(audit));
      return result;
    }
    audit.violated = sol->deleted;
    result.audit.push_back(std::move(audit));
    parts.push_back(std::move(sol->assignment));
  }

  Assignment combined(s.num_vars(), 0);
  std::vector<Value> residues(parts.size());
  for (VarId v = 0; v < s.num_vars(); ++v) {
    for (std::size_t i = 0; i < parts.size(); ++i) residues[i] = parts[i][v];
    combined[v] = crt_combine(residues, s.ring);
  }
  auto deleted = violated(s, combined);
  auto verdict = verify(s, k, deleted, combined);
  if (!verdict.ok) throw std::logic_error("solver produced an invalid solution: " + verdict.reason);
  result.status = SolveStatus::Solved;
  result.cost = static_cast<int>(deleted.size());
  result.deleted = std::move(deleted);
  result.assignment = std::move(combined);
  return result;
}

std::optional<Solution> Solver::solve_component(const System& s, int k) {
  if (k < 0) return std::nullopt;
  const int nv = s.num_vars();
  if (s.ring.factors.empty()) return Solution{{}, Assignment(nv, 0)};
  if (s.ring.factors.size() != 1)
    throw Error(ErrorKind::InvalidArgument, "solve_component needs a prime power modulus");
  const Value q = s.modulus();

  // Drop zero terms; constant equations are either vacuous or fixed costs.
  System norm(q);
  norm.vars = s.vars;
  int budget = k;
  for (const auto& e : s.equations) {
    Equation r;
    r.crisp = e.crisp;
    r.constant = mod(e.constant, q);
    for (const auto& t : e.terms)
      if (mod(t.coef, q) != 0) r.terms.push_back({mod(t.coef, q), t.var});
    if (r.terms.empty()) {
      if (r.constant == 0) continue;
      if (r.crisp) return std::nullopt;
      --budget;
      continue;
    }
    r.id = static_cast<int>(norm.equations.size());
    norm.equations.push_back(std::move(r));
  }
  if (budget < 0) return std::nullopt;

  auto finish = [&](const Assignment& full) -> std::optional<Solution> {
    Assignment a(full.begin(), full.begin() + nv);
    std::vector<int> deleted;
    for (const auto& e : s.equations) {
      if (e.satisfied_by(a, q)) continue;
      if (e.crisp) return std::nullopt;
      deleted.push_back(e.id);
    }
    if (static_cast<int>(deleted.size()) > 2 * k) return std::nullopt;
    return Solution{std::move(deleted), std::move(a)};
  };

  if (auto w = feasible(norm)) return finish(*w);
  if (budget == 0) return std::nullopt;

  auto elim = eliminate_soft_unary(norm);
  CoreFn core_fn = [this](const SimpleSystem& ss, int b) { return core(ss, b); };
  CompressOptions options;
  options.greedy = cfg_.greedy;
  auto sol = iterative_compress(elim.system, budget, core_fn, options);
  if (!sol) return std::nullopt;
  return finish(sol->assignment);
}

std::optional<Solution> Solver::core(const SimpleSystem& s, int k) {
  const long call = ++core_calls_;
  const Value q = s.modulus();
  if (s.pp.n == 0 || q == 1) return Solution{{}, Assignment(s.num_vars, 0)};
  if (auto w = feasible(s.as_equations(), s.num_vars, q)) return Solution{{}, std::move(*w)};
  if (k <= 0 || depth_ >= cfg_.max_depth_guard) return std::nullopt;

  const ClassTable& table = table_for(s.pp);
  const ClassGraph g(s, table);
  const PrimePower next_pp{s.pp.p, s.pp.n - 1};
  std::set<std::pair<ClassAssignment, std::vector<int>>> tried;
  std::optional<Solution> found;

  auto attempt = [&](const EdgeSet& y, int qq) {
    if (static_cast<int>(y.size()) > 2 * qq || has_crisp_edge(g, y)) return false;
    if (!is_st_cut(g, y) || !is_conformal(g, y)) return false;
    ClassAssignment tau = clasn(g, y);
    std::vector<int> cut_eqs = eqn(g, y);
    if (!tried.emplace(tau, cut_eqs).second) return false;

    System next(next_pp.value());
    next.vars.resize(s.num_vars);
    for (int v = 0; v < s.num_vars; ++v) next.vars[v] = "v" + std::to_string(v);
    for (std::size_t i = 0; i < s.equations.size(); ++i) {
      if (std::binary_search(cut_eqs.begin(), cut_eqs.end(), static_cast<int>(i))) continue;
      try {
        Equation e = nxt(s.equations[i], tau, table);
        e.id = static_cast<int>(next.equations.size());
        next.equations.push_back(std::move(e));
      } catch (const Error&) {
        return false;
      }
    }
    const int next_k = k - (static_cast<int>(y.size()) + 1) / 2;
    ++depth_;
    auto sub = solve_component(next, next_k);
    --depth_;
    if (!sub) return false;

    Assignment beta = lift(sub->assignment, tau, table);
    std::vector<int> deleted;
    for (std::size_t i = 0; i < s.equations.size(); ++i) {
      if (s.equations[i].satisfied_by(beta, q)) continue;
      if (s.equations[i].crisp) return false;
      deleted.push_back(static_cast<int>(i));
    }
    if (static_cast<int>(deleted.size()) > 2 * k) return false;

    LevelTrace t;
    t.depth = depth_;
    t.pp = s.pp;
    t.k = k;
    t.q = qq;
    t.tau = tau;
    t.cut = y;
    t.cut_equations = cut_eqs;
    for (int i : cut_eqs) t.cut_origins.push_back(s.equations[i].origin);
    t.next_k = next_k;
    if (cfg_.trace) t.rewritten = std::move(next);
    levels_.push_back(std::move(t));
    found = Solution{std::move(deleted), std::move(beta)};
    return true;
  };

  Brancher brancher(s, g, table);
  auto try_cover = [&](const ShadowCover& w, int qq) {
    for (const auto& c : brancher.branch(k, qq, w))
      if (attempt(c.edges, qq)) return true;
    return false;
  };

  switch (cfg_.mode) {
    case SearchMode::Exhaustive: {
      std::vector<EdgeSet> cuts;
      for_each_subset(soft_indices(s), k, [&](const std::vector<int>& z) {
        auto y = ed(g, z);
        if (is_st_cut(g, y)) cuts.push_back(sep(g, y));
      });
      std::sort(cuts.begin(), cuts.end(), [](const EdgeSet& a, const EdgeSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
      });
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      for (int qq = 0; qq <= k && !found; ++qq)
        for (const auto& y : cuts)
          if ((static_cast<int>(y.size()) + 1) / 2 == qq && attempt(y, qq)) break;
      break;
    }
    case SearchMode::ExhaustiveShadow: {
      for (int qq = 0; qq <= k && !found; ++qq) {
        SubsetStream stream(g);
        ShadowCover w;
        while (!found && stream.next(w)) {
          ++repeats_used_;
          try_cover(w, qq);
        }
      }
      break;
    }
    case SearchMode::ImpSep:
    case SearchMode::Bernoulli: {
      const long repeats = cfg_.repeats > 0 ? cfg_.repeats : default_repeats(k);
      for (int qq = 0; qq <= k && !found; ++qq) {
        std::optional<ImpSepSampler> sampler;
        if (cfg_.mode == SearchMode::ImpSep) {
          if (2 * qq > kMaxSeparatorBound) break;
          sampler.emplace(g, qq);
        }
        for (long r = 0; r < repeats && !found; ++r) {
          ++repeats_used_;
          const auto seed = stream_seed(call, qq, r);
          try_cover(sampler ? sampler->sample(seed) : bernoulli_cover(g, seed), qq);
        }
      }
      break;
    }
  }
  return found;
}

Verdict verify(const System& s, int k, std::span<const int> deleted, const Assignment& a) {
  if (static_cast<int>(a.size()) != s.num_vars()) return {false, "assignment is not total"};
  std::vector<char> gone(s.equations.size(), 0);
  for (int id : deleted) {
    if (id < 0 || id >= static_cast<int>(s.equations.size()))
      return {false, "deleted id " + std::to_string(id) + " out of range"};
    if (gone[id]) return {false, "deleted id " + std::to_string(id) + " repeated"};
    if (s.equations[id].crisp) return {false, "crisp equation " + std::to_string(id) + " deleted"};
    gone[id] = 1;
  }
  for (const auto& e : s.equations) {
    if (gone[e.id]) continue;
    if (!e.satisfied_by(a, s.modulus()))
      return {false, "equation " + std::to_string(e.id) + " is violated"};
  }
  const long limit = 2L * s.ring.omega() * k;
  if (static_cast<long>(deleted.size()) > limit)
    return {false, std::to_string(deleted.size()) + " deletions exceed 2*omega(m)*k = " +
                       std::to_string(limit)};
  return {};
}

}  // namespace min2lin
