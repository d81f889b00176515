#include "min2lin/simplify.hpp"

#include <algorithm>

#include "min2lin/error.hpp"
#include "min2lin/linsolve.hpp"

namespace min2lin {
namespace {

bool is_soft_unary(const Equation& e) { return !e.crisp && e.terms.size() == 1; }

const PrimePower& single_prime_power(const System& s) {
  if (s.ring.factors.size() != 1)
    throw Error(ErrorKind::InvalidArgument, "expected a system over a prime power ring");
  return s.ring.factors.front();
}

std::vector<Term> nonzero_terms(const Equation& e, Value q) {
  std::vector<Term> out;
  for (const auto& t : e.terms)
    if (mod(t.coef, q) != 0) out.push_back({mod(t.coef, q), t.var});
  return out;
}

}  // namespace

Elimination eliminate_soft_unary(const System& s) {
  Elimination out;
  if (std::none_of(s.equations.begin(), s.equations.end(), is_soft_unary)) {
    out.system = s;
    for (const auto& e : s.equations) out.origin.push_back(e.id);
    return out;
  }
  out.system.ring = s.ring;
  out.system.vars = s.vars;
  std::string name = "w";
  while (s.find_var(name)) name += "_";
  out.w = out.system.var(name);
  out.system.add_equation(true, {{1, out.w}}, 0);
  out.origin.push_back(-1);
  for (const auto& e : s.equations) {
    auto terms = e.terms;
    if (is_soft_unary(e)) terms.push_back({-1, out.w});
    out.system.add_equation(e.crisp, std::move(terms), e.constant);
    out.origin.push_back(e.id);
  }
  return out;
}

std::vector<VarId> variables_of(const System& s, std::span<const int> ids) {
  std::vector<VarId> out;
  for (int id : ids)
    for (const auto& t : s.equations[id].terms) out.push_back(t.var);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<SimpleBranch> homogenize(const System& s, std::span<const int> prefix,
                                       std::span<const int> x, const Assignment& chi,
                                       const Assignment& alpha, int k) {
  const PrimePower pp = single_prime_power(s);
  const Value q = pp.value();
  SimpleBranch out;
  out.system.pp = pp;
  out.system.num_vars = s.num_vars();

  const auto pinned = variables_of(s, x);
  Assignment psi = chi;
  for (VarId v : pinned) psi[v] = mod(chi[v] + alpha[v], q);
  for (int id : x) {
    const auto& e = s.equations[id];
    if (e.satisfied_by(psi, q)) continue;
    if (e.crisp) return std::nullopt;
    ++out.offset;
  }
  out.budget = k - out.offset;

  std::vector<char> in_x(s.equations.size(), 0);
  for (int id : x) in_x[id] = 1;
  for (int id : prefix) {
    if (in_x[id]) continue;
    const auto& e = s.equations[id];
    const auto terms = nonzero_terms(e, q);
    if (terms.empty()) continue;
    const VarId z = out.system.add_var();
    out.system.equations.push_back(SimpleEquation::binary(z, terms[0].coef, terms[0].var, true));
    if (terms.size() == 1) {
      if (!e.crisp)
        throw Error(ErrorKind::NonSimple, "soft unary equation left for homogenization");
      out.system.equations.push_back(SimpleEquation::unary(z, 0));
    } else {
      out.system.equations.push_back(
          SimpleEquation::binary(z, mod(-terms[1].coef, q), terms[1].var, e.crisp, e.id));
    }
  }
  for (VarId v : pinned) out.system.equations.push_back(SimpleEquation::unary(v, alpha[v]));
  return out;
}

namespace {

class Compressor {
 public:
  Compressor(const System& s, int k, const CoreFn& core)
      : s_(s), k_(k), core_(core), q_(single_prime_power(s).value()) {}

  // One compression round for X = current + {id}. Updates current and chi.
  bool round(const std::vector<int>& prefix, std::vector<int>& current, Assignment& chi,
             int id) {
    std::vector<int> x = current;
    x.push_back(id);
    std::sort(x.begin(), x.end());
    pinned_ = variables_of(s_, x);
    // Equations of X checked as soon as their last variable is pinned.
    ready_.assign(pinned_.size(), {});
    for (int e : x) {
      std::size_t last = 0;
      for (const auto& t : s_.equations[e].terms)
        last = std::max<std::size_t>(
            last, std::lower_bound(pinned_.begin(), pinned_.end(), t.var) - pinned_.begin());
      if (pinned_.empty()) continue;
      ready_[last].push_back(e);
    }
    prefix_ = &prefix;
    x_ = &x;
    chi_ = &chi;
    alpha_.assign(s_.num_vars(), 0);
    psi_ = chi;
    found_.reset();
    if (pinned_.empty()) {
      leaf();
    } else {
      descend(0, 0);
    }
    if (!found_) return false;
    current = found_->deleted;
    chi = found_->assignment;
    return true;
  }

 private:
  void descend(std::size_t depth, int offset) {
    if (found_) return;
    const VarId v = pinned_[depth];
    for (Value a = 0; a < q_ && !found_; ++a) {
      alpha_[v] = a;
      psi_[v] = mod((*chi_)[v] + a, q_);
      int extra = 0;
      bool crisp_broken = false;
      for (int e : ready_[depth]) {
        if (s_.equations[e].satisfied_by(psi_, q_)) continue;
        if (s_.equations[e].crisp) crisp_broken = true;
        ++extra;
      }
      if (crisp_broken || offset + extra > k_) continue;
      if (depth + 1 == pinned_.size()) {
        leaf();
      } else {
        descend(depth + 1, offset + extra);
      }
    }
  }

  void leaf() {
    auto branch = homogenize(s_, *prefix_, *x_, *chi_, alpha_, k_);
    if (!branch || branch->budget < 0) return;
    auto sol = core_(branch->system, branch->budget);
    if (!sol) return;
    Assignment psi(s_.num_vars());
    for (VarId v = 0; v < s_.num_vars(); ++v) psi[v] = mod((*chi_)[v] + sol->assignment[v], q_);
    std::vector<int> deleted;
    for (int id : *prefix_) {
      const auto& e = s_.equations[id];
      if (e.satisfied_by(psi, q_)) continue;
      if (e.crisp) return;
      deleted.push_back(id);
    }
    if (static_cast<int>(deleted.size()) > 2 * k_) return;
    found_ = Solution{std::move(deleted), std::move(psi)};
  }

  const System& s_;
  int k_;
  const CoreFn& core_;
  Value q_;
  std::vector<VarId> pinned_;
  std::vector<std::vector<int>> ready_;
  const std::vector<int>* prefix_ = nullptr;
  const std::vector<int>* x_ = nullptr;
  const Assignment* chi_ = nullptr;
  Assignment alpha_, psi_;
  std::optional<Solution> found_;
};

}  // namespace

std::optional<Solution> iterative_compress(const System& s, int k, const CoreFn& core,
                                           const CompressOptions& options) {
  if (k < 0) return std::nullopt;
  const Value q = single_prime_power(s).value();
  std::vector<int> order;
  for (const auto& e : s.equations)
    if (e.crisp) order.push_back(e.id);
  for (const auto& e : s.equations)
    if (!e.crisp) order.push_back(e.id);

  Compressor compressor(s, k, core);
  std::vector<int> prefix, current;
  Assignment chi(s.num_vars(), 0);
  auto observe = [&] {
    if (options.observer) options.observer({prefix, current, chi});
  };
  for (int id : order) {
    prefix.push_back(id);
    const auto& e = s.equations[id];
    if (e.satisfied_by(chi, q)) {
      observe();
      continue;
    }
    std::vector<Equation> rest;
    for (int p : prefix)
      if (std::find(current.begin(), current.end(), p) == current.end())
        rest.push_back(s.equations[p]);
    if (auto w = feasible(rest, s.num_vars(), q)) {
      chi = std::move(*w);
      observe();
      continue;
    }
    if (options.greedy && !e.crisp && static_cast<int>(current.size()) + 1 <= 2 * k) {
      current.push_back(id);
      observe();
      continue;
    }
    if (!compressor.round(prefix, current, chi, id)) return std::nullopt;
    observe();
  }
  std::sort(current.begin(), current.end());
  return Solution{current, chi};
}

SimpleSystem as_simple(const System& s) {
  const PrimePower pp = single_prime_power(s);
  const Value q = pp.value();
  SimpleSystem out;
  out.pp = pp;
  out.num_vars = s.num_vars();
  auto is_unit = [&](Value a) { return mod(a, pp.p) != 0; };
  for (const auto& e : s.equations) {
    const auto terms = nonzero_terms(e, q);
    if (terms.size() == 1) {
      if (!e.crisp) throw Error(ErrorKind::NonSimple, "soft unary equation");
      if (!is_unit(terms[0].coef))
        throw Error(ErrorKind::NonSimple, "unary equation with a non-unit coefficient");
      const Value inv = inverse_mod(terms[0].coef, q);
      out.equations.push_back(SimpleEquation::unary(terms[0].var, mulmod(inv, e.constant, q), e.id));
      continue;
    }
    if (terms.size() != 2 || mod(e.constant, q) != 0)
      throw Error(ErrorKind::NonSimple, "equation is not a homogeneous binary");
    // a*u + b*v = 0 with a a unit reads u = (-b/a) v.
    std::size_t lead = is_unit(terms[0].coef) ? 0 : (is_unit(terms[1].coef) ? 1 : 2);
    if (lead == 2) throw Error(ErrorKind::NonSimple, "binary equation without a unit coefficient");
    const auto& a = terms[lead];
    const auto& b = terms[1 - lead];
    const Value r = mulmod(mod(-b.coef, q), inverse_mod(a.coef, q), q);
    out.equations.push_back(SimpleEquation::binary(a.var, r, b.var, e.crisp, e.id));
  }
  return out;
}

}  // namespace min2lin
