// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dnaq/dnaq.hpp"
#include "support/oracles.hpp"
#include "support/random_formula.hpp"

using namespace dnaq;

namespace {

constexpr std::uint64_t kSweepSeed = 20240611;
constexpr std::size_t kSweepSize = 200;
constexpr std::size_t kStructuralSweep = 100;
constexpr std::size_t kMaxN = 5;
constexpr std::size_t kMaxM = 8;

// Failure details collected by a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++count_;
  }
  [[nodiscard]] bool ok() const { return count_ == 0; }
  [[nodiscard]] std::string summary() const {
    std::string s;
    for (const auto& f : failures_) s += "\n      " + f;
    if (count_ > failures_.size()) s += "\n      ... " + std::to_string(count_ - failures_.size()) + " more";
    return s;
  }

 private:
  std::vector<std::string> failures_;
  std::size_t count_ = 0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<cnf::Formula> sweep_formulas() {
  std::mt19937_64 rng(kSweepSeed);
  std::vector<cnf::Formula> out;
  for (std::size_t i = 0; i < kSweepSize; ++i) out.push_back(testing::random_formula(rng, kMaxN, kMaxM));
  return out;
}

std::string bits(const std::vector<bool>& v) {
  std::string s;
  for (bool b : v) s += b ? '1' : '0';
  return s;
}

// 1. Three-clause example end to end.
void criterion_1(Check& c, std::string& note) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = solver::solve(cnf::example_formula(), solver::Engine::Quantum);
  const double secs = seconds_since(t0);
  c.expect(r.solutions == cnf::SolutionSet{cnf::Assignment{{true, false}}}, "solutions != {u2=0 u1=1}");
  c.expect(secs < 1.0, "runtime " + std::to_string(secs) + " s >= 1 s");
  note = std::to_string(secs * 1e3) + " ms";
}

// 2. Pinned final state after selecting c3 = 1.
void criterion_2(Check& c, std::string& note) {
  const auto run = solver::solve_quantum(cnf::example_formula(), {}, false);
  c.expect(run.selected.has_value(), "nothing selected");
  if (!run.selected) return;
  const auto sup = sim::support(*run.selected);
  c.expect(sup.size() == 1, "support size " + std::to_string(sup.size()));
  if (sup.size() != 1) return;
  const auto& e = sup[0];
  const auto& L = run.circuit.layout;
  c.expect(std::abs(e.amplitude - sim::Amplitude(1.0)) < 1e-10, "amplitude not 1");
  c.expect(bits(sim::read_register(e, L, "u")) == "01", "u != 01");
  c.expect(bits(sim::read_register(e, L, "y")) == "00", "y != 00");
  c.expect(bits(sim::read_register(e, L, "r")) == "110", "r != 110");
  c.expect(bits(sim::read_register(e, L, "c")) == "1111", "c != 1111");
  c.expect(sim::basis_string(e.index, 11) == "01" "00" "110" "1111", "basis string");
  note = "|" + bits(sim::read_register(e, L, "u")) + ">|" + bits(sim::read_register(e, L, "y")) + ">|" +
         bits(sim::read_register(e, L, "r")) + ">|" + bits(sim::read_register(e, L, "c")) + ">";
}

// 3. Single-variable circuit output.
void criterion_3(Check& c, std::string& note) {
  const auto out = sim::run(circuit::minimal_single_variable_circuit());
  const double want = 0.7071067811865476;
  for (std::uint64_t i = 0; i < out.size(); ++i) {
    if (i == 0 || i == 5)
      c.expect(std::abs(out[i] - sim::Amplitude(want)) < 1e-12, "amplitude at " + std::to_string(i));
    else
      c.expect(std::abs(out[i]) < 1e-12, "leak at " + std::to_string(i));
  }
  std::ostringstream os;
  os.precision(17);
  os << "a[0]=" << out[0].real() << " a[5]=" << out[5].real();
  note = os.str();
}

// 4. Qubit count = 3n + m + 2.
void criterion_4(Check& c, std::string& note, const std::vector<cnf::Formula>& sweep) {
  c.expect(circuit::compile(cnf::example_formula()).qubit_count() == 11, "example != 11 qubits");
  for (std::size_t i = 0; i < kStructuralSweep; ++i) {
    const auto& f = sweep[i];
    const auto q = circuit::compile(f).qubit_count();
    c.expect(q == 3 * f.variable_count() + f.clause_count() + 2, "formula " + std::to_string(i));
  }
  note = std::to_string(kStructuralSweep) + " formulas + example";
}

// 5. Gate counts within envelopes.
void criterion_5(Check& c, std::string& note, const std::vector<cnf::Formula>& sweep) {
  double worst_x = 0, worst_cnot = 0, worst_toff = 0;
  for (std::size_t i = 0; i < kStructuralSweep; ++i) {
    const auto& f = sweep[i];
    const auto census = circuit::gate_census(circuit::compile(f));
    const auto rep = circuit::check_bounds(census, f.variable_count(), f.clause_count());
    c.expect(census.h == f.variable_count(), "H != n for formula " + std::to_string(i));
    c.expect(rep.all_pass(), "formula " + std::to_string(i) + ":\n" + rep.to_string());
    worst_x = std::max(worst_x, rep.line("X").ratio());
    worst_cnot = std::max(worst_cnot, rep.line("CNOT").ratio());
    worst_toff = std::max(worst_toff, rep.line("TOFFOLI").ratio());
  }
  std::ostringstream os;
  os.precision(3);
  os << "X<=6mn, CNOT<=" << circuit::kCnotPerClauseVariable << "mn+" << circuit::kCnotOffset << ", TOFF<="
     << circuit::kToffoliScale << "(mn+m); worst ratios " << worst_x << " " << worst_cnot << " " << worst_toff;
  note = os.str();
}

struct SweepOutcome {
  double seconds = 0;
  std::size_t mismatches = 0;
};

// 6, 7 and 10 share one pass over the sweep.
void criteria_6_7_10(Check& c6, Check& c7, Check& c10, std::string& note6, std::string& note7,
                     std::string& note10, const std::vector<cnf::Formula>& sweep) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t entries = 0;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& f = sweep[i];
    const auto tag = "formula " + std::to_string(i);
    const auto q = solver::solve_quantum(f);
    const auto d = solver::solve(f, solver::Engine::Dna);
    const auto b = solver::solve(f, solver::Engine::Brute);
    c6.expect(q.report.solutions == b.solutions, tag + ": quantum != brute");
    c6.expect(d.solutions == b.solutions, tag + ": dna != brute");
    const auto oracle = testing::solutions_by_enumeration(f);
    c6.expect(oracle.size() == b.solutions.size(), tag + ": brute != enumeration");
    for (std::size_t k = 0; k < std::min(oracle.size(), b.solutions.size()); ++k)
      c6.expect(oracle[k] == b.solutions[k].index(), tag + ": brute != enumeration");

    if (q.selected) {
      const auto& L = q.circuit.layout;
      std::vector<bool> r_init(f.variable_count() + 1, true);
      r_init.back() = false;
      for (const auto& e : sim::support(*q.selected)) {
        ++entries;
        const auto y = sim::read_register(e, L, "y");
        c7.expect(std::none_of(y.begin(), y.end(), [](bool v) { return v; }), tag + ": y != 0");
        c7.expect(sim::read_register(e, L, "r") == r_init, tag + ": r not restored");
      }
    }

    const double want = static_cast<double>(b.solutions.size()) /
                        static_cast<double>(std::uint64_t{1} << f.variable_count());
    c10.expect(std::abs(q.report.selection_probability.value_or(-1) - want) < 1e-10, tag + ": probability");
  }
  const double secs = seconds_since(t0);
  c6.expect(secs < 60.0, "sweep took " + std::to_string(secs) + " s");
  note6 = std::to_string(sweep.size()) + " formulas in " + std::to_string(secs) + " s";
  note7 = std::to_string(entries) + " post-selected entries";

  const auto eq1 = solver::solve(cnf::example_formula(), solver::Engine::Quantum);
  const auto single = solver::solve(cnf::single_variable_formula(), solver::Engine::Quantum);
  c10.expect(std::abs(*eq1.selection_probability - 0.25) < 1e-10, "example probability");
  c10.expect(std::abs(*single.selection_probability - 0.5) < 1e-10, "single-variable probability");
  note10 = "example " + std::to_string(*eq1.selection_probability) + ", single " +
           std::to_string(*single.selection_probability);
}

// 8. Tube algebra laws.
void criterion_8(Check& c, std::string& note) {
  std::mt19937_64 rng(kSweepSeed + 8);
  for (int trial = 0; trial < 1000; ++trial) {
    dna::Tube t;
    const auto distinct = std::uniform_int_distribution<int>(0, 16)(rng);
    for (int i = 0; i < distinct; ++i) {
      std::vector<cnf::Variable> vars{1, 2, 3, 4, 5, 6, 7};
      std::shuffle(vars.begin(), vars.end(), rng);
      const auto len = std::uniform_int_distribution<std::size_t>(0, vars.size())(rng);
      std::vector<dna::Symbol> syms;
      for (std::size_t k = 0; k < len; ++k) syms.push_back({vars[k], std::bernoulli_distribution(0.5)(rng)});
      t.add(dna::Strand(std::move(syms)), std::uniform_int_distribution<std::uint64_t>(1, 20)(rng));
    }
    const auto var = std::uniform_int_distribution<cnf::Variable>(1, 7)(rng);
    const bool bit = std::bernoulli_distribution(0.5)(rng);
    auto [plus, minus] = dna::extract(t, var, bit);
    c.expect(dna::merge({std::move(plus), std::move(minus)}) == t, "partition law, trial " + std::to_string(trial));
  }
  for (std::size_t n = 1; n <= 10; ++n) {
    dna::Lab lab;
    const auto id = dna::uniform_tube(lab, n);
    const auto& tube = lab.peek(id);
    c.expect(tube.distinct() == (std::size_t{1} << n) && tube.molecules() == (std::size_t{1} << n),
             "uniform_tube(" + std::to_string(n) + ") size");
    std::size_t packed_seen = 0;
    std::vector<bool> seen(std::size_t{1} << n);
    for (const auto& [s, count] : tube) {
      const auto idx = s.to_assignment(n).index();
      if (!seen[idx]) ++packed_seen;
      seen[idx] = true;
    }
    c.expect(packed_seen == (std::size_t{1} << n), "uniform_tube(" + std::to_string(n) + ") coverage");
    const auto& trace = lab.trace();
    c.expect(!trace.empty() && trace.front().op == "LOAD" && trace.front().count == 1, "trace must start from {e}");
    for (std::size_t i = 1; i < trace.size(); ++i) {
      const auto& op = trace[i].op;
      c.expect(op == "AMPLIFY" || op == "APPEND_TAIL" || op == "MERGE", "primitive " + op + " in uniform_tube");
    }
  }
  note = "1000 tubes; uniform_tube n=1..10";
}

// 9. Circuit followed by its inverse is the identity.
void criterion_9(Check& c, std::string& note, const std::vector<cnf::Formula>& sweep) {
  std::mt19937_64 rng(kSweepSeed + 9);
  double worst = 0;
  std::size_t states = 0;
  for (std::size_t i = 0; i < kStructuralSweep; ++i) {
    const auto circ = circuit::compile(sweep[i]);
    auto round_trip = circ;
    const auto inv = circuit::invert(circ);
    round_trip.gates.insert(round_trip.gates.end(), inv.gates.begin(), inv.gates.end());
    std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << circ.qubit_count()) - 1);
    for (int k = 0; k < 50; ++k) {
      const auto basis = pick(rng);
      const auto out = sim::run(round_trip, sim::StateVector::basis(circ.qubit_count(), basis));
      double dev = 0;
      for (const auto& e : sim::support(out, 0.0))
        dev += std::norm(e.amplitude - (e.index == basis ? sim::Amplitude(1) : sim::Amplitude(0)));
      if (std::abs(out[basis]) == 0) dev += 1;
      dev = std::sqrt(dev);
      worst = std::max(worst, dev);
      ++states;
      c.expect(dev < 1e-10, "formula " + std::to_string(i) + " basis " + std::to_string(basis));
    }
  }
  std::ostringstream os;
  os << states << " basis states, worst deviation " << worst;
  note = os.str();
}

}  // namespace

int main() {
  const auto sweep = sweep_formulas();
  struct Row {
    int id;
    std::string title;
    Check check;
    std::string note;
  };
  std::vector<Row> rows;
  auto add = [&](int id, std::string title) -> Row& {
    rows.push_back(Row{id, std::move(title), {}, {}});
    return rows.back();
  };
  rows.reserve(10);

  auto& r1 = add(1, "three-clause example solved by the quantum engine");
  criterion_1(r1.check, r1.note);
  auto& r2 = add(2, "pinned post-selected final state");
  criterion_2(r2.check, r2.note);
  auto& r3 = add(3, "single-variable circuit output (|000>+|101>)/sqrt2");
  criterion_3(r3.check, r3.note);
  auto& r4 = add(4, "qubit count 3n+m+2");
  criterion_4(r4.check, r4.note, sweep);
  auto& r5 = add(5, "gate-count envelopes, H == n");
  criterion_5(r5.check, r5.note, sweep);
  auto& r6 = add(6, "quantum == dna == brute on the random sweep");
  auto& r7 = add(7, "ancilla hygiene in post-selected entries");
  auto& r8 = add(8, "tube algebra laws");
  auto& r9 = add(9, "circuit then inverse is identity");
  auto& r10 = add(10, "selection probability |S|/2^n");
  criteria_6_7_10(r6.check, r7.check, r10.check, r6.note, r7.note, r10.note, sweep);
  criterion_8(r8.check, r8.note);
  criterion_9(r9.check, r9.note, sweep);

  int failed = 0;
  for (const auto& r : rows) {
    std::printf("[%s] criterion %2d: %s (%s)%s\n", r.check.ok() ? "PASS" : "FAIL", r.id, r.title.c_str(),
                r.note.c_str(), r.check.ok() ? "" : r.check.summary().c_str());
    failed += r.check.ok() ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(rows.size()) - failed, rows.size());
  return failed == 0 ? 0 : 1;
}
