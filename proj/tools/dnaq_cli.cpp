// dnaq: command-line front end for the quantum / DNA / brute-force SAT engines.
//
// Exit codes: 0 satisfiable (or success), 1 unsatisfiable, 2 input error,
// 3 guard exceeded, 4 engines disagree (cross-check).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dnaq/dnaq.hpp"

namespace {

using namespace dnaq;

enum Exit : int { kSat = 0, kUnsat = 1, kInputError = 2, kGuard = 3, kMismatch = 4 };

cnf::Formula load_formula(const std::string& path) {
  if (path == "-") return cnf::parse_dimacs(std::cin);
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return cnf::parse_dimacs(in);
}

std::string census_line(const circuit::GateCensus& c) {
  std::ostringstream os;
  os << "H=" << c.h << " X=" << c.x << " CNOT=" << c.cnot << " TOFFOLI=" << c.toffoli << " PHASE=" << c.phase
     << " qubits=" << c.qubits;
  return os.str();
}

// |u>|y>|r>|c> with each register most-significant first.
std::string ket(std::uint64_t index, const circuit::RegisterLayout& layout) {
  std::string out;
  for (const char* name : {"u", "y", "r", "c"}) {
    const auto& reg = layout.named(name);
    if (reg.size() == 0) continue;
    out += '|';
    for (bool b : sim::read_register(index, reg)) out += b ? '1' : '0';
    out += '>';
  }
  return out;
}

std::string amplitude_text(sim::Amplitude a) {
  std::ostringstream os;
  os.precision(10);
  os << a.real();
  if (a.imag() != 0.0) os << (a.imag() < 0 ? " - " : " + ") << std::abs(a.imag()) << "i";
  return os.str();
}

void print_state(std::ostream& os, const sim::StateVector& s, const circuit::RegisterLayout& layout) {
  for (const auto& e : sim::support(s))
    os << "  " << amplitude_text(e.amplitude) << "  " << ket(e.index, layout) << '\n';
}

void print_report(std::ostream& os, const solver::SolveReport& r) {
  os << "engine " << solver::engine_name(r.engine) << '\n'
     << "variables " << r.n << " clauses " << r.m << '\n'
     << "solutions " << r.solutions.size() << '\n';
  for (const auto& a : r.solutions) os << "  " << a.to_string() << '\n';
  if (r.selection_probability) os << "selection_probability " << *r.selection_probability << '\n';
  if (r.census) os << "census " << census_line(*r.census) << '\n';
  os << "elapsed_ms " << r.elapsed_ms << '\n' << (r.satisfiable() ? "s SATISFIABLE" : "s UNSATISFIABLE") << '\n';
}

struct SolveArgs {
  std::string file;
  std::string engine = "quantum";
  bool json = false;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  std::size_t qubit_limit = 26;
  bool trace = false;
  std::string dump_state;
};

int run_solve(const SolveArgs& args) {
  const auto f = load_formula(args.file);
  const auto engine = solver::parse_engine(args.engine);
  std::ostream& aux = args.json ? std::cerr : std::cout;
  solver::SolveOptions opts;
  opts.qubit_limit = args.qubit_limit;

  if ((args.samples > 0 || !args.dump_state.empty()) && engine != solver::Engine::Quantum)
    throw InputError("--samples and --dump-state need --engine quantum");
  if (args.trace && engine != solver::Engine::Dna) throw InputError("--trace needs --engine dna");

  solver::SolveReport report;
  if (engine == solver::Engine::Quantum) {
    const bool keep = args.samples > 0 || !args.dump_state.empty();
    auto run = solver::solve_quantum(f, opts, keep);
    report = run.report;
    if (!args.dump_state.empty()) {
      std::ofstream out(args.dump_state);
      if (!out) throw InputError("cannot write '" + args.dump_state + "'");
      sim::dump_state(out, *run.final_state);
    }
    if (args.samples > 0) {
      std::mt19937_64 rng(args.seed);
      const auto cm = run.circuit.layout.c.at(static_cast<std::uint32_t>(f.clause_count()));
      std::map<std::pair<bool, std::string>, std::size_t> histogram;
      for (auto idx : sim::sample(*run.final_state, args.samples, rng)) {
        std::string u;
        for (bool b : sim::read_register(idx, run.circuit.layout.u)) u += b ? '1' : '0';
        ++histogram[{((idx >> cm) & 1U) != 0, u}];
      }
      aux << "samples " << args.samples << " (measuring c" << f.clause_count() << " and u)\n";
      for (const auto& [key, count] : histogram)
        aux << "  c" << f.clause_count() << "=" << key.first << " u=" << key.second << "  " << count << '\n';
    }
  } else if (engine == solver::Engine::Dna && args.trace) {
    dna::Lab lab;
    opts.lab = &lab;
    report = solver::solve(f, engine, opts);
    for (const auto& e : lab.trace()) aux << e.to_string() << '\n';
  } else {
    report = solver::solve(f, engine, opts);
  }

  if (args.json)
    std::cout << solver::to_json(report).dump() << '\n';
  else
    print_report(std::cout, report);
  return report.satisfiable() ? kSat : kUnsat;
}

int run_compile(const std::string& file, const std::string& output, std::size_t qubit_limit) {
  const auto circ = circuit::compile(load_formula(file), {qubit_limit});
  const auto text = circuit::to_text(circ);
  if (output == "-") {
    std::cout << text;
  } else {
    std::ofstream out(output);
    if (!out) throw InputError("cannot write '" + output + "'");
    out << text;
    std::cout << "wrote " << circ.gates.size() << " gates on " << circ.qubit_count() << " qubits to " << output << '\n';
  }
  return kSat;
}

int run_census(const std::string& file, bool json, std::size_t qubit_limit) {
  const auto f = load_formula(file);
  const auto census = circuit::gate_census(circuit::compile(f, {qubit_limit}));
  const auto bounds = circuit::check_bounds(census, f.variable_count(), f.clause_count());
  if (json) {
    nlohmann::json j;
    j["n"] = f.variable_count();
    j["m"] = f.clause_count();
    j["census"] = {{"H", census.h},         {"X", census.x},         {"CNOT", census.cnot},
                   {"TOFFOLI", census.toffoli}, {"PHASE", census.phase}, {"qubits", census.qubits}};
    auto lines = nlohmann::json::array();
    for (const auto& l : bounds.lines)
      lines.push_back({{"name", l.name}, {"measured", l.measured}, {"bound", l.bound}, {"exact", l.exact},
                       {"pass", l.pass}, {"ratio", l.ratio()}});
    j["bounds"] = std::move(lines);
    j["constants"] = {{"C1", circuit::kCnotPerClauseVariable},
                      {"C2", circuit::kCnotOffset},
                      {"C3", circuit::kToffoliScale}};
    std::cout << j.dump() << '\n';
  } else {
    std::cout << "variables " << f.variable_count() << " clauses " << f.clause_count() << '\n'
              << "census " << census_line(census) << '\n'
              << "bounds (C1=" << circuit::kCnotPerClauseVariable << " C2=" << circuit::kCnotOffset
              << " C3=" << circuit::kToffoliScale << ")\n"
              << bounds.to_string();
  }
  return kSat;
}

int run_cross_check(const std::string& file, std::size_t qubit_limit) {
  const auto f = load_formula(file);
  const auto cc = solver::cross_check(f, {qubit_limit, nullptr});
  for (const auto* r : {&cc.brute, &cc.quantum, &cc.dna})
    std::cout << solver::engine_name(r->engine) << ": " << r->solutions.size() << " solution(s), "
              << r->elapsed_ms << " ms\n";
  if (!cc.agree) {
    std::cout << "MISMATCH\n";
    for (const auto& d : cc.differences) std::cout << "  " << d << '\n';
    return kMismatch;
  }
  std::cout << "agree\n";
  for (const auto& a : cc.brute.solutions) std::cout << "  " << a.to_string() << '\n';
  return cc.brute.satisfiable() ? kSat : kUnsat;
}

int demo_eq1() {
  const auto f = cnf::example_formula();
  std::cout << "F = (u2 v u1) ^ (~u2 v ~u1) ^ (u1)\n" << cnf::format_dimacs(f);
  auto run = solver::solve_quantum(f, {}, true);
  const auto& L = run.circuit.layout;
  std::cout << "registers |u2 u1>|y2 y1>|r2 r1 r0>|c3 c2 c1 c0>, " << run.circuit.qubit_count() << " qubits, "
            << run.circuit.gates.size() << " gates (" << census_line(*run.report.census) << ")\n";
  std::cout << "input state\n";
  print_state(std::cout, sim::init_state(run.circuit), L);
  std::cout << "output state\n";
  print_state(std::cout, *run.final_state, L);
  std::cout << "post-select c3=1 with probability " << *run.report.selection_probability << '\n';
  print_state(std::cout, *run.selected, L);
  for (const auto& a : run.report.solutions) std::cout << "solution " << a.to_string() << '\n';
  return kSat;
}

int demo_fig3() {
  const auto circ = circuit::minimal_single_variable_circuit();
  std::cout << "F = (u1), registers |u1>|y1>|c1>\n" << circuit::to_text(circ);
  const auto out = sim::run(circ);
  std::cout << "output state\n";
  print_state(std::cout, out, circ.layout);
  const auto sel = sim::post_select(out, circ.layout.c.at(1), true);
  std::cout << "post-select c1=1 with probability " << sel.probability << '\n';
  print_state(std::cout, sel.state, circ.layout);
  return kSat;
}

int demo_superposition(std::size_t n) {
  if (n < 1 || n > 16) throw InputError("--superposition takes 1..16 variables");
  dna::Lab lab;
  const auto id = dna::uniform_tube(lab, n);
  std::cout << "tube built from {e}:\n";
  for (const auto& e : lab.trace()) std::cout << "  " << e.to_string() << '\n';
  std::cout << "tube contents " << lab.peek(id).to_string() << '\n';

  circuit::Circuit c;
  c.layout = circuit::RegisterLayout::anonymous(n);
  c.initial.assign(n, false);
  for (circuit::Qubit q = 0; q < n; ++q) c.gates.push_back(circuit::Gate::h(q));
  std::cout << "H^" << n << "|0...0>\n";
  for (const auto& e : sim::support(sim::run(c)))
    std::cout << "  " << amplitude_text(e.amplitude) << "  |" << sim::basis_string(e.index, n) << ">\n";
  return kSat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dnaq - SAT by DNA-style tube algebra and its quantum circuit translation"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve a DIMACS CNF formula");
  solve->add_option("file", solve_args.file, "DIMACS CNF file ('-' for stdin)")->required();
  solve->add_option("--engine", solve_args.engine, "quantum | dna | brute")
      ->check(CLI::IsMember({"quantum", "dna", "brute"}));
  solve->add_flag("--json", solve_args.json, "Print the report as JSON");
  solve->add_option("--samples", solve_args.samples, "Born-rule samples of the final state (quantum)");
  solve->add_option("--seed", solve_args.seed, "Seed for --samples");
  solve->add_option("--qubit-limit", solve_args.qubit_limit, "Maximum qubits for the quantum engine");
  solve->add_flag("--trace", solve_args.trace, "Print one line per DNA primitive (dna)");
  solve->add_option("--dump-state", solve_args.dump_state, "Write the final state's support to a file (quantum)");

  std::string compile_file, compile_output;
  std::size_t compile_limit = 26;
  auto* compile = app.add_subcommand("compile", "Compile a formula to circuit text");
  compile->add_option("file", compile_file, "DIMACS CNF file")->required();
  compile->add_option("--output", compile_output, "Output path ('-' for stdout)")->required();
  compile->add_option("--qubit-limit", compile_limit, "Maximum qubits");

  std::string census_file;
  bool census_json = false;
  std::size_t census_limit = 26;
  auto* census = app.add_subcommand("census", "Gate counts and complexity bounds");
  census->add_option("file", census_file, "DIMACS CNF file")->required();
  census->add_flag("--json", census_json, "Print as JSON");
  census->add_option("--qubit-limit", census_limit, "Maximum qubits");

  std::string cc_file;
  std::size_t cc_limit = 26;
  auto* cross = app.add_subcommand("cross-check", "Run all three engines and compare");
  cross->add_option("file", cc_file, "DIMACS CNF file")->required();
  cross->add_option("--qubit-limit", cc_limit, "Maximum qubits");

  bool eq1 = false, fig3 = false;
  std::size_t superposition = 0;
  auto* demo = app.add_subcommand("demo", "Print the worked examples");
  auto* eq1_opt = demo->add_flag("--eq1", eq1, "Three-clause, two-variable example");
  auto* fig3_opt = demo->add_flag("--fig3", fig3, "Three-qubit circuit for F = (u1)");
  auto* sup_opt = demo->add_option("--superposition", superposition, "Uniform tube vs H^n on n variables");
  eq1_opt->excludes(fig3_opt)->excludes(sup_opt);
  fig3_opt->excludes(sup_opt);
  demo->require_option(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*solve) return run_solve(solve_args);
    if (*compile) return run_compile(compile_file, compile_output, compile_limit);
    if (*census) return run_census(census_file, census_json, census_limit);
    if (*cross) return run_cross_check(cc_file, cc_limit);
    if (*demo) {
      if (eq1) return demo_eq1();
      if (fig3) return demo_fig3();
      return demo_superposition(superposition);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const GuardExceeded& e) {
    std::cerr << "guard exceeded: " << e.what() << '\n';
    return kGuard;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
