#pragma once

// Runs a formula through one of three engines (quantum circuit, DNA tubes,
// brute force) and reports the satisfying assignments in a common shape.

#include <algorithm>
#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dnaq/circuit.hpp"
#include "dnaq/cnf.hpp"
#include "dnaq/dna.hpp"
#include "dnaq/error.hpp"
#include "dnaq/sim.hpp"

namespace dnaq::solver {

enum class Engine { Quantum, Dna, Brute };

inline std::string_view engine_name(Engine e) {
  switch (e) {
    case Engine::Quantum: return "quantum";
    case Engine::Dna: return "dna";
    case Engine::Brute: return "brute";
  }
  return "?";
}

inline Engine parse_engine(std::string_view s) {
  if (s == "quantum") return Engine::Quantum;
  if (s == "dna") return Engine::Dna;
  if (s == "brute") return Engine::Brute;
  throw InputError("unknown engine '" + std::string(s) + "' (expected quantum, dna or brute)");
}

struct SolveReport {
  Engine engine = Engine::Brute;
  std::size_t n = 0;
  std::size_t m = 0;
  cnf::SolutionSet solutions;
  std::optional<circuit::GateCensus> census;
  std::optional<double> selection_probability;
  double elapsed_ms = 0;

  [[nodiscard]] bool satisfiable() const { return !solutions.empty(); }

  friend bool operator==(const SolveReport&, const SolveReport&) = default;
};

struct SolveOptions {
  std::size_t qubit_limit = 26;
  dna::Lab* lab = nullptr;  // records the DNA engine's primitive trace when set
};

// Everything the quantum engine computed, for callers that want the states.
struct QuantumRun {
  SolveReport report;
  circuit::Circuit circuit;
  std::optional<sim::StateVector> final_state;  // before post-selection, if kept
  std::optional<sim::StateVector> selected;     // after c_m = 1, if possible
};

namespace detail {

inline cnf::Assignment assignment_from_ket(const std::vector<bool>& ket) {
  cnf::Assignment a;
  a.bits.assign(ket.rbegin(), ket.rend());
  return a;
}

template <typename Fn>
auto with_context(Engine e, Fn fn) {
  try {
    return fn();
  } catch (const GuardExceeded& ex) {
    throw GuardExceeded(std::string(engine_name(e)) + " engine: " + ex.what());
  }
}

inline double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

// compile -> run -> post-select c_m = 1 -> read u off every support entry.
inline QuantumRun solve_quantum(const cnf::Formula& f, const SolveOptions& opts = {},
                                bool keep_final_state = false) {
  return detail::with_context(Engine::Quantum, [&] {
    const auto start = std::chrono::steady_clock::now();
    auto circ = circuit::compile(f, circuit::CompileOptions{opts.qubit_limit});
    std::optional<sim::StateVector> final_state = sim::run(circ);
    const auto& layout = circ.layout;
    const auto result_qubit = layout.c.at(static_cast<std::uint32_t>(f.clause_count()));

    SolveReport rep;
    rep.engine = Engine::Quantum;
    rep.n = f.variable_count();
    rep.m = f.clause_count();
    rep.census = circuit::gate_census(circ);

    std::optional<sim::StateVector> selected;
    try {
      auto sel = keep_final_state ? sim::post_select(*final_state, result_qubit, true)
                                  : sim::post_select(std::move(*final_state), result_qubit, true);
      rep.selection_probability = sel.probability;
      for (const auto& e : sim::support(sel.state))
        rep.solutions.push_back(detail::assignment_from_ket(sim::read_register(e, layout, "u")));
      std::sort(rep.solutions.begin(), rep.solutions.end());
      selected = std::move(sel.state);
    } catch (const PreconditionError&) {
      // nothing to select: UNSAT
      rep.selection_probability = 0.0;
    }
    if (!keep_final_state) final_state.reset();
    rep.elapsed_ms = detail::ms_since(start);
    return QuantumRun{std::move(rep), std::move(circ), std::move(final_state), std::move(selected)};
  });
}

inline SolveReport solve(const cnf::Formula& f, Engine engine, const SolveOptions& opts = {}) {
  if (engine == Engine::Quantum) return solve_quantum(f, opts).report;
  return detail::with_context(engine, [&] {
    const auto start = std::chrono::steady_clock::now();
    SolveReport rep;
    rep.engine = engine;
    rep.n = f.variable_count();
    rep.m = f.clause_count();
    if (engine == Engine::Dna) {
      rep.solutions = opts.lab ? dna::lipton_solve(*opts.lab, f) : dna::lipton_solve(f);
    } else {
      rep.solutions = cnf::brute_force_solutions(f);
    }
    rep.elapsed_ms = detail::ms_since(start);
    return rep;
  });
}

struct CrossCheck {
  bool agree = false;
  SolveReport brute;
  SolveReport quantum;
  SolveReport dna;
  std::vector<std::string> differences;
};

namespace detail {

inline void diff(const cnf::SolutionSet& ref, const cnf::SolutionSet& other, std::string_view ref_name,
                 std::string_view other_name, std::vector<std::string>& out) {
  for (const auto& a : ref)
    if (!std::binary_search(other.begin(), other.end(), a))
      out.push_back(std::string(ref_name) + " has {" + a.to_string() + "}, " + std::string(other_name) + " does not");
}

}  // namespace detail

inline CrossCheck cross_check(const cnf::Formula& f, const SolveOptions& opts = {}) {
  CrossCheck cc;
  cc.brute = solve(f, Engine::Brute, opts);
  cc.quantum = solve(f, Engine::Quantum, opts);
  cc.dna = solve(f, Engine::Dna, opts);
  detail::diff(cc.brute.solutions, cc.quantum.solutions, "brute", "quantum", cc.differences);
  detail::diff(cc.quantum.solutions, cc.brute.solutions, "quantum", "brute", cc.differences);
  detail::diff(cc.brute.solutions, cc.dna.solutions, "brute", "dna", cc.differences);
  detail::diff(cc.dna.solutions, cc.brute.solutions, "dna", "brute", cc.differences);
  cc.agree = cc.differences.empty();
  return cc;
}

// ---------------------------------------------------------------------------
// JSON report
//
// {"engine":str,"n":int,"m":int,"solutions":[[bit,...]],
//  "census":{"H":int,"X":int,"CNOT":int,"TOFFOLI":int,"PHASE":int,"qubits":int}|null,
//  "selection_probability":float|null,"elapsed_ms":float}
//
// Each solution lists u_1 first.

inline nlohmann::json to_json(const SolveReport& r) {
  nlohmann::json j;
  j["engine"] = std::string(engine_name(r.engine));
  j["n"] = r.n;
  j["m"] = r.m;
  auto sols = nlohmann::json::array();
  for (const auto& a : r.solutions) {
    auto bits = nlohmann::json::array();
    for (bool b : a.bits) bits.push_back(b ? 1 : 0);
    sols.push_back(std::move(bits));
  }
  j["solutions"] = std::move(sols);
  if (r.census) {
    const auto& c = *r.census;
    j["census"] = {{"H", c.h}, {"X", c.x}, {"CNOT", c.cnot}, {"TOFFOLI", c.toffoli}, {"PHASE", c.phase}, {"qubits", c.qubits}};
  } else {
    j["census"] = nullptr;
  }
  j["selection_probability"] = r.selection_probability ? nlohmann::json(*r.selection_probability) : nlohmann::json(nullptr);
  j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

inline SolveReport report_from_json(const nlohmann::json& j) {
  try {
    SolveReport r;
    r.engine = parse_engine(j.at("engine").get<std::string>());
    r.n = j.at("n").get<std::size_t>();
    r.m = j.at("m").get<std::size_t>();
    for (const auto& sol : j.at("solutions")) {
      cnf::Assignment a;
      for (const auto& bit : sol) {
        const int v = bit.get<int>();
        if (v != 0 && v != 1) throw InputError("solution bits must be 0 or 1");
        a.bits.push_back(v == 1);
      }
      if (a.size() != r.n) throw InputError("solution length differs from n");
      r.solutions.push_back(std::move(a));
    }
    if (const auto& c = j.at("census"); !c.is_null()) {
      circuit::GateCensus g;
      g.h = c.at("H").get<std::size_t>();
      g.x = c.at("X").get<std::size_t>();
      g.cnot = c.at("CNOT").get<std::size_t>();
      g.toffoli = c.at("TOFFOLI").get<std::size_t>();
      g.phase = c.at("PHASE").get<std::size_t>();
      g.qubits = c.at("qubits").get<std::size_t>();
      r.census = g;
    }
    if (const auto& p = j.at("selection_probability"); !p.is_null()) r.selection_probability = p.get<double>();
    r.elapsed_ms = j.at("elapsed_ms").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace dnaq::solver
