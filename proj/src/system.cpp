#include "min2lin/system.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <regex>
#include <sstream>

#include "min2lin/error.hpp"

namespace min2lin {

Value Equation::evaluate(const Assignment& a, Value m) const {
  Value s = 0;
  for (const auto& t : terms) s = mod(s + mulmod(t.coef, a[t.var], m), m);
  return s;
}

std::optional<VarId> System::find_var(std::string_view name) const {
  for (VarId v = 0; v < num_vars(); ++v)
    if (vars[v] == name) return v;
  return std::nullopt;
}

VarId System::var(std::string_view name) {
  if (auto v = find_var(name)) return *v;
  vars.emplace_back(name);
  return num_vars() - 1;
}

int System::add_equation(bool crisp, std::vector<Term> terms, Value constant) {
  std::vector<Term> merged;
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= num_vars())
      throw Error(ErrorKind::InvalidArgument, "equation references an undeclared variable");
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const Term& u) { return u.var == t.var; });
    if (it == merged.end()) {
      merged.push_back({mod(t.coef, ring.m), t.var});
    } else {
      it->coef = mod(it->coef + t.coef, ring.m);
    }
  }
  if (merged.size() > 2)
    throw Error(ErrorKind::TooManyVariables, "equation names more than 2 distinct variables");
  Equation e;
  e.id = static_cast<int>(equations.size());
  e.crisp = crisp;
  e.terms = std::move(merged);
  e.constant = mod(constant, ring.m);
  equations.push_back(std::move(e));
  return equations.back().id;
}

std::optional<int> cost(const System& s, const Assignment& a) {
  if (static_cast<int>(a.size()) != s.num_vars())
    throw Error(ErrorKind::PartialAssignment, "assignment is not total on V(S)");
  int c = 0;
  for (const auto& e : s.equations) {
    if (e.satisfied_by(a, s.modulus())) continue;
    if (e.crisp) return std::nullopt;
    ++c;
  }
  return c;
}

std::vector<int> violated(const System& s, const Assignment& a) {
  if (static_cast<int>(a.size()) != s.num_vars())
    throw Error(ErrorKind::PartialAssignment, "assignment is not total on V(S)");
  std::vector<int> out;
  for (const auto& e : s.equations)
    if (!e.satisfied_by(a, s.modulus())) out.push_back(e.id);
  return out;
}

Assignment zero_assignment(const System& s) { return Assignment(s.vars.size(), 0); }

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

[[noreturn]] void syntax(int line, const std::string& msg,
                         ErrorKind kind = ErrorKind::Syntax) {
  throw Error(kind, "line " + std::to_string(line) + ": " + msg);
}

Value parse_int(std::string_view s, int line) {
  s = trim(s);
  Value v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    syntax(line, "expected an integer, got '" + std::string(s) + "'");
  return v;
}

}  // namespace

System parse(std::string_view text) {
  static const std::regex term_re(R"(\s*(-?[0-9]+)\s*\*\s*([A-Za-z_][A-Za-z0-9_]*)\s*)");
  std::optional<System> sys;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto sp = line.find_first_of(" \t");
    std::string_view head = line.substr(0, sp);
    std::string_view rest = sp == std::string_view::npos ? std::string_view{} : line.substr(sp);

    if (head == "ring") {
      if (sys) syntax(lineno, "duplicate ring header");
      Value m = parse_int(rest, lineno);
      if (m < 1 || m > kMaxModulus)
        syntax(lineno, "modulus outside [1, 2^31]", ErrorKind::ModulusOutOfRange);
      sys.emplace(m);
      continue;
    }
    if (!sys) {
      syntax(lineno, "expected 'ring <m>' header before '" + std::string(head) + "'",
             ErrorKind::UnknownHeader);
    }
    if (head != "crisp" && head != "soft")
      syntax(lineno, "unknown keyword '" + std::string(head) + "'");

    auto eq = rest.find('=');
    if (eq == std::string_view::npos || rest.find('=', eq + 1) != std::string_view::npos)
      syntax(lineno, "equation needs exactly one '='");
    std::string_view lhs = rest.substr(0, eq);
    Value constant = parse_int(rest.substr(eq + 1), lineno);

    std::vector<std::pair<Value, std::string>> raw;
    std::size_t start = 0;
    while (true) {
      auto plus = lhs.find('+', start);
      std::string piece(lhs.substr(start, plus == std::string_view::npos ? lhs.npos : plus - start));
      std::smatch m;
      if (!std::regex_match(piece, m, term_re))
        syntax(lineno, "malformed term '" + std::string(trim(piece)) + "'");
      raw.emplace_back(parse_int(m[1].str(), lineno), m[2].str());
      if (plus == std::string_view::npos) break;
      start = plus + 1;
    }
    std::vector<std::string> distinct;
    for (const auto& [c, name] : raw)
      if (std::find(distinct.begin(), distinct.end(), name) == distinct.end())
        distinct.push_back(name);
    if (distinct.size() > 2)
      syntax(lineno, "equation names more than 2 distinct variables",
             ErrorKind::TooManyVariables);

    std::vector<Term> terms;
    for (const auto& [c, name] : raw) terms.push_back({mod(c, sys->ring.m), sys->var(name)});
    sys->add_equation(head == "crisp", std::move(terms), constant);
  }
  if (!sys) throw Error(ErrorKind::UnknownHeader, "missing 'ring <m>' header");
  return std::move(*sys);
}

std::string serialize(const System& s) {
  std::ostringstream out;
  out << "ring " << s.ring.m << '\n';
  for (const auto& e : s.equations) {
    out << (e.crisp ? "crisp " : "soft ");
    for (std::size_t i = 0; i < e.terms.size(); ++i) {
      if (i) out << " + ";
      out << e.terms[i].coef << '*' << s.vars[e.terms[i].var];
    }
    out << " = " << e.constant << '\n';
  }
  return out.str();
}

Planted gen_planted(const RingContext& ctx, int nvars, int neq, int k_noise,
                    std::uint64_t seed) {
  if (nvars < 1 || neq < 0 || k_noise < 0)
    throw Error(ErrorKind::InvalidArgument, "gen_planted needs nvars >= 1, neq, k_noise >= 0");
  const Value m = ctx.m;
  std::mt19937_64 rng(seed);
  auto uniform = [&](Value lo, Value hi) {
    return std::uniform_int_distribution<Value>(lo, hi)(rng);
  };

  Planted out;
  out.system.ring = ctx;
  for (int v = 0; v < nvars; ++v) out.system.vars.push_back("x" + std::to_string(v));
  out.assignment.resize(nvars);
  for (auto& x : out.assignment) x = uniform(0, m - 1);

  auto random_terms = [&]() {
    std::vector<Term> terms;
    bool binary = nvars >= 2 && uniform(0, 3) != 0;
    VarId a = static_cast<VarId>(uniform(0, nvars - 1));
    Value nonzero_hi = std::max<Value>(1, m - 1);
    terms.push_back({uniform(1, nonzero_hi) % m, a});
    if (binary) {
      VarId b = static_cast<VarId>(uniform(0, nvars - 2));
      if (b >= a) ++b;
      terms.push_back({uniform(1, nonzero_hi) % m, b});
    }
    return terms;
  };
  auto value_of = [&](const std::vector<Term>& terms) {
    Value s = 0;
    for (const auto& t : terms) s = mod(s + mulmod(t.coef, out.assignment[t.var], m), m);
    return s;
  };

  for (int i = 0; i < neq; ++i) {
    auto terms = random_terms();
    bool crisp = uniform(0, 3) == 0;
    Value c = value_of(terms);
    out.system.add_equation(crisp, std::move(terms), c);
  }
  for (int i = 0; i < k_noise && m > 1; ++i) {
    auto terms = random_terms();
    Value c = mod(value_of(terms) + uniform(1, m - 1), m);
    out.system.add_equation(false, std::move(terms), c);
  }
  return out;
}

System disjoint_copies(const System& s, int t) {
  if (t < 1) throw Error(ErrorKind::InvalidArgument, "disjoint_copies needs t >= 1");
  System out;
  out.ring = s.ring;
  for (int c = 0; c < t; ++c) {
    for (const auto& name : s.vars) out.vars.push_back(name + "_c" + std::to_string(c));
  }
  const int nv = s.num_vars();
  for (int c = 0; c < t; ++c) {
    for (const auto& e : s.equations) {
      std::vector<Term> terms = e.terms;
      for (auto& term : terms) term.var += c * nv;
      out.add_equation(e.crisp, std::move(terms), e.constant);
    }
  }
  return out;
}

bool SimpleEquation::satisfied_by(const Assignment& a, Value m) const {
  if (is_unary()) return mod(a[lhs], m) == mod(r, m);
  return mod(a[lhs], m) == mulmod(mod(r, m), mod(a[rhs], m), m);
}

Equation SimpleEquation::as_equation(int id, Value m) const {
  Equation e;
  e.id = id;
  e.crisp = crisp;
  if (is_unary()) {
    e.terms = {{1 % m, lhs}};
    e.constant = mod(r, m);
  } else {
    e.terms = {{1 % m, lhs}, {mod(-r, m), rhs}};
    e.constant = 0;
  }
  return e;
}

std::vector<Equation> SimpleSystem::as_equations() const {
  std::vector<Equation> out;
  out.reserve(equations.size());
  for (std::size_t i = 0; i < equations.size(); ++i)
    out.push_back(equations[i].as_equation(static_cast<int>(i), modulus()));
  return out;
}

}  // namespace min2lin
