#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "min2lin/classgraph.hpp"
#include "min2lin/error.hpp"
#include "min2lin/oracle.hpp"
#include "min2lin/simplify.hpp"
#include "min2lin/solver.hpp"
#include "min2lin/system.hpp"

namespace min2lin::cli {
namespace {

using Json = nlohmann::ordered_json;

// Exit status for input problems; thrown through to run().
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::ostringstream o;
    o << in.rdbuf();
    return o.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read " + path);
  std::ostringstream o;
  o << f.rdbuf();
  return o.str();
}

Json assignment_json(const System& s, const Assignment& a) {
  Json out = Json::object();
  for (VarId v = 0; v < s.num_vars(); ++v) out[s.vars[v]] = a[v];
  return out;
}

std::string pp_name(const PrimePower& pp) {
  return std::to_string(pp.p) + "^" + std::to_string(pp.n);
}

Json trace_json(const SolveResult& r) {
  Json out = Json::array();
  for (const auto& c : r.audit) {
    Json levels = Json::array();
    for (const auto& l : c.levels) {
      Json j = {{"depth", l.depth},           {"ring", pp_name(l.pp)},
                {"k", l.k},                   {"q", l.q},
                {"tau", l.tau},               {"cut", l.cut},
                {"cut_equations", l.cut_equations}, {"cut_origins", l.cut_origins},
                {"next_k", l.next_k}};
      if (l.rewritten) j["rewritten"] = serialize(*l.rewritten);
      levels.push_back(std::move(j));
    }
    out.push_back({{"ring", pp_name(c.pp)},
                   {"violated", c.violated},
                   {"core_calls", c.core_calls},
                   {"levels", std::move(levels)}});
  }
  return out;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

struct SolveArgs {
  std::string file;
  int k = 0;
  std::uint64_t seed = 0;
  long repeats = 0;
  std::string mode = "impsep";
  bool trace = false;
  bool no_greedy = false;
  int threads = 1;
};

int do_solve(const SolveArgs& a, Streams io) {
  const auto mode = parse_search_mode(a.mode);
  if (!mode) throw UsageError("unknown shadow mode '" + a.mode + "'");
  if (a.repeats > 0 && (*mode == SearchMode::Exhaustive || *mode == SearchMode::ExhaustiveShadow))
    io.err << "warning: --repeats is ignored in " << a.mode << " mode\n";
  if (a.threads != 1) io.err << "warning: the solver is single-threaded; --threads ignored\n";
  const System s = parse(slurp(a.file, io.in));
  SolverConfig cfg;
  cfg.mode = *mode;
  cfg.repeats = a.repeats;
  cfg.seed = a.seed;
  cfg.trace = a.trace;
  cfg.greedy = !a.no_greedy;
  Solver solver(cfg);
  const SolveResult r = solver.solve(s, a.k);
  const bool solved = r.status == SolveStatus::Solved;
  Json j = {{"status", solved ? "solved" : "no_solution"},
            {"k", r.k},
            {"deleted", r.deleted},
            {"assignment", solved ? assignment_json(s, r.assignment) : Json::object()},
            {"cost", r.cost},
            {"repeats_used", r.repeats_used},
            {"seed", r.seed}};
  if (a.trace) j["trace"] = trace_json(r);
  emit(io.out, j);
  return solved ? 0 : 1;
}

int do_verify(const std::string& file, const std::string& solution, Streams io) {
  const System s = parse(slurp(file, io.in));
  Json j;
  try {
    j = Json::parse(slurp(solution, io.in));
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("solution is not valid JSON: ") + e.what());
  }
  auto fail = [&](const std::string& reason) {
    emit(io.out, Json{{"ok", false}, {"reason", reason}});
    return 1;
  };
  try {
    if (j.value("status", "") != "solved") return fail("status is not solved");
    const int k = j.at("k").get<int>();
    const auto deleted = j.at("deleted").get<std::vector<int>>();
    const auto& values = j.at("assignment");
    Assignment a(s.num_vars());
    for (VarId v = 0; v < s.num_vars(); ++v) {
      if (!values.contains(s.vars[v])) return fail("no value for " + s.vars[v]);
      a[v] = mod(values.at(s.vars[v]).get<Value>(), s.modulus());
    }
    if (j.contains("cost") && j["cost"].get<long>() != static_cast<long>(deleted.size()))
      return fail("cost does not match the deleted list");
    const Verdict v = verify(s, k, deleted, a);
    if (!v.ok) return fail(v.reason);
  } catch (const Json::exception& e) {
    return fail(std::string("malformed solution: ") + e.what());
  }
  emit(io.out, Json{{"ok", true}});
  return 0;
}

int do_oracle(const std::string& file, Streams io) {
  const System s = parse(slurp(file, io.in));
  const OracleResult r = brute_optimum(s);
  if (!r.optimum) {
    emit(io.out, Json{{"optimum", nullptr}});
    return 1;
  }
  emit(io.out, Json{{"optimum", *r.optimum},
                    {"witness", assignment_json(s, r.witness)},
                    {"deletions", r.deletions}});
  return 0;
}

struct GenArgs {
  Value ring = 4;
  int vars = 4;
  int eqs = 6;
  int noise = 0;
  std::uint64_t seed = 0;
};

int do_gen(const GenArgs& a, Streams io) {
  const auto p = gen_planted(RingContext::make(a.ring), a.vars, a.eqs, a.noise, a.seed);
  io.out << serialize(p.system);
  return 0;
}

int do_lemma(const std::string& kind, const LemmaParams& params, Streams io) {
  const LemmaReport r = check_lemma(kind, params);
  emit(io.out, Json{{"kind", r.kind},
                    {"passed", r.passed},
                    {"checked", r.checked},
                    {"counterexamples", r.counterexamples},
                    {"first_counterexample", r.first_counterexample}});
  return r.passed ? 0 : 1;
}

int do_export(const std::string& file, Streams io) {
  const System s = parse(slurp(file, io.in));
  const SimpleSystem simple = as_simple(s);
  const ClassTable table(simple.pp);
  io.out << to_dot(ClassGraph(simple, table), s.vars);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  Streams io{in, out, err};
  CLI::App app{"Min-2-Lin(Z_m) approximation solver", "min2lin"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Find a deletion set of size <= 2*omega(m)*k");
  solve_cmd->add_option("file", solve.file, "Instance file, or - for stdin")->required();
  solve_cmd->add_option("-k", solve.k, "Budget")->required()->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--seed", solve.seed, "Seed of every random stream");
  solve_cmd->add_option("--repeats", solve.repeats, "Shadow samples per core call and q")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--shadow-mode", solve.mode,
                        "impsep, bernoulli, exhaustive or exhaustive-shadow");
  solve_cmd->add_flag("--trace", solve.trace, "Include the per-level audit trail");
  solve_cmd->add_flag("--no-greedy", solve.no_greedy,
                      "Run a compression round for every unsatisfiable prefix");
  solve_cmd->add_option("--threads", solve.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  std::string output;
  solve_cmd->add_option("-o,--output", output, "Write the JSON here instead of stdout");

  std::string verify_file, verify_solution;
  auto* verify_cmd = app.add_subcommand("verify", "Re-check a solution JSON");
  verify_cmd->add_option("file", verify_file)->required();
  verify_cmd->add_option("solution", verify_solution, "Solution JSON, or - for stdin")
      ->required();

  std::string oracle_file;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact optimum by enumeration");
  oracle_cmd->add_option("file", oracle_file)->required();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Planted random instance");
  gen_cmd->add_option("--ring", gen.ring)->required()->check(CLI::Range(Value{1}, kMaxModulus));
  gen_cmd->add_option("--vars", gen.vars)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--eqs", gen.eqs)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--noise", gen.noise)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen.seed);

  std::string kind;
  LemmaParams lemma;
  auto* lemma_cmd = app.add_subcommand("lemma-check", "Exhaustive or seeded property check");
  lemma_cmd->add_option("kind", kind)->required();
  lemma_cmd->add_option("--modulus", lemma.modulus);
  lemma_cmd->add_option("--seeds", lemma.seeds)->check(CLI::NonNegativeNumber);
  lemma_cmd->add_option("--first-seed", lemma.first_seed);
  lemma_cmd->add_option("--max-vars", lemma.max_vars)->check(CLI::Range(2, 8));
  lemma_cmd->add_option("--max-eqs", lemma.max_eqs)->check(CLI::Range(1, 64));

  std::string graph_file;
  auto* export_cmd = app.add_subcommand("export-graph", "DOT of the class graph of a simple instance");
  export_cmd->add_option("file", graph_file)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve_cmd) {
      if (output.empty()) return do_solve(solve, io);
      std::ofstream f(output, std::ios::binary);
      if (!f) throw UsageError("cannot write " + output);
      return do_solve(solve, {in, f, err});
    }
    if (*verify_cmd) return do_verify(verify_file, verify_solution, io);
    if (*oracle_cmd) return do_oracle(oracle_file, io);
    if (*gen_cmd) return do_gen(gen, io);
    if (*lemma_cmd) return do_lemma(kind, lemma, io);
    if (*export_cmd) return do_export(graph_file, io);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace min2lin::cli
