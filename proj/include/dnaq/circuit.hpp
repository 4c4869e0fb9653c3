#pragma once

// Reversible circuits compiled from CNF formulas.
//
// Register layout for a formula with n variables and m clauses
// (Q = 3n + m + 2 qubits, qubit 0 least significant):
//
//   c_0 .. c_m   qubits 0 .. m            AND chain, c_0 starts at 1
//   r_0 .. r_n   qubits m+1 .. m+n+1      OR workspace, r_1..r_n start at 1
//   y_1 .. y_n   next n qubits            literal copies, start at 0
//   u_1 .. u_n   top n qubits             variables, u_n most significant
//
// so a basis index printed most-significant-first reads |u>|y>|r>|c>.
//
// Clause j with literals l_1..l_k on variables v_1..v_k compiles to
//
//   load       CNOT u_v->y_v, X y_v (negated literals), CNOT y_v->r_v,
//              then X y_v and CNOT u_v->y_v again so y returns to 0;
//              r_v now holds NOT l
//   evaluate   r_0 ^= AND of the r_v (CNOT for k=1, TOFF for k=2, a TOFF
//              ladder through k-2 of the clean y qubits for k>=3, ladder
//              undone afterwards), then X r_0 so r_0 = l_1 or ... or l_k
//   accumulate TOFF(r_0, c_{j-1} -> c_j)
//   unevaluate mirror of evaluate, r_0 back to 0
//   unload     mirror of load, r_v back to 1
//
// c_1..c_m are left holding the running conjunction.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dnaq/cnf.hpp"
#include "dnaq/error.hpp"

namespace dnaq::circuit {

using Qubit = std::uint32_t;

enum class GateKind { X, H, CNOT, TOFFOLI, PHASE };

inline std::string_view kind_name(GateKind k) {
  switch (k) {
    case GateKind::X: return "X";
    case GateKind::H: return "H";
    case GateKind::CNOT: return "CNOT";
    case GateKind::TOFFOLI: return "TOFF";
    case GateKind::PHASE: return "PHASE";
  }
  return "?";
}

struct Gate {
  GateKind kind = GateKind::X;
  Qubit target = 0;
  std::array<Qubit, 2> controls{};
  double theta = 0.0;  // PHASE only

  static Gate x(Qubit t) { return {GateKind::X, t, {}, 0.0}; }
  static Gate h(Qubit t) { return {GateKind::H, t, {}, 0.0}; }
  static Gate cnot(Qubit c, Qubit t) { return {GateKind::CNOT, t, {c, 0}, 0.0}; }
  static Gate toffoli(Qubit c1, Qubit c2, Qubit t) { return {GateKind::TOFFOLI, t, {c1, c2}, 0.0}; }
  static Gate phase(double theta, Qubit t) { return {GateKind::PHASE, t, {}, theta}; }

  [[nodiscard]] std::size_t control_count() const {
    switch (kind) {
      case GateKind::CNOT: return 1;
      case GateKind::TOFFOLI: return 2;
      default: return 0;
    }
  }

  [[nodiscard]] bool is_permutation() const {
    return kind == GateKind::X || kind == GateKind::CNOT || kind == GateKind::TOFFOLI;
  }

  // Throws unless every index is < qubit_count, indices are distinct and
  // theta lies in [0, 2pi).
  void validate(std::size_t qubit_count) const {
    auto check = [&](Qubit q) {
      if (q >= qubit_count)
        throw PreconditionError(std::string(kind_name(kind)) + ": qubit " + std::to_string(q) +
                                " out of range for " + std::to_string(qubit_count) + " qubits");
    };
    check(target);
    for (std::size_t i = 0; i < control_count(); ++i) {
      check(controls[i]);
      if (controls[i] == target)
        throw PreconditionError(std::string(kind_name(kind)) + ": control equals target");
    }
    if (kind == GateKind::TOFFOLI && controls[0] == controls[1])
      throw PreconditionError("TOFF: duplicate control qubit");
    if (kind == GateKind::PHASE && !(theta >= 0.0 && theta < 2.0 * std::numbers::pi))
      throw PreconditionError("PHASE: theta must lie in [0, 2pi)");
  }

  [[nodiscard]] Gate inverse() const {
    if (kind != GateKind::PHASE || theta == 0.0) return *this;
    return phase(2.0 * std::numbers::pi - theta, target);
  }

  friend bool operator==(const Gate& a, const Gate& b) {
    if (a.kind != b.kind || a.target != b.target) return false;
    for (std::size_t i = 0; i < a.control_count(); ++i)
      if (a.controls[i] != b.controls[i]) return false;
    return a.kind != GateKind::PHASE || a.theta == b.theta;
  }
};

// Named qubit registers. Each register lists its qubits by ascending
// subscript, starting at `first`.
struct Register {
  std::vector<Qubit> qubits;
  std::uint32_t first = 0;

  [[nodiscard]] Qubit at(std::uint32_t subscript) const {
    if (subscript < first || subscript - first >= qubits.size())
      throw PreconditionError("register subscript " + std::to_string(subscript) + " out of range");
    return qubits[subscript - first];
  }
  [[nodiscard]] std::size_t size() const { return qubits.size(); }

  friend bool operator==(const Register&, const Register&) = default;
};

struct RegisterLayout {
  std::size_t qubit_count = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  Register u, y, r, c;

  static RegisterLayout for_formula(std::size_t n, std::size_t m) {
    RegisterLayout L;
    L.n = n;
    L.m = m;
    L.qubit_count = 3 * n + m + 2;
    Qubit next = 0;
    auto fill = [&](Register& reg, std::size_t count, std::uint32_t first) {
      reg.first = first;
      for (std::size_t i = 0; i < count; ++i) reg.qubits.push_back(next++);
    };
    fill(L.c, m + 1, 0);
    fill(L.r, n + 1, 0);
    fill(L.y, n, 1);
    fill(L.u, n, 1);
    return L;
  }

  // A layout with no named registers, e.g. for circuits read from text.
  static RegisterLayout anonymous(std::size_t qubit_count) {
    RegisterLayout L;
    L.qubit_count = qubit_count;
    return L;
  }

  [[nodiscard]] const Register& named(std::string_view name) const {
    if (name == "u") return u;
    if (name == "y") return y;
    if (name == "r") return r;
    if (name == "c") return c;
    throw InputError("unknown register '" + std::string(name) + "' (expected u, y, r or c)");
  }

  friend bool operator==(const RegisterLayout&, const RegisterLayout&) = default;
};

struct Circuit {
  RegisterLayout layout;
  std::vector<Gate> gates;
  std::vector<bool> initial;  // one bit per qubit, index = qubit

  [[nodiscard]] std::size_t qubit_count() const { return layout.qubit_count; }

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

// Stage boundaries inside a compiled circuit, for mid-circuit checks.
enum class Stage { Superpose, Load, Evaluate, Accumulate, Unevaluate, Unload };

struct StageMark {
  Stage stage;
  std::size_t clause;  // 0-based; unused for Superpose
  std::size_t begin;   // gate index range [begin, end)
  std::size_t end;
};

struct Compiled {
  Circuit circuit;
  std::vector<StageMark> stages;
};

struct CompileOptions {
  std::size_t qubit_limit = 26;
};

namespace detail {

inline void emit_load(std::vector<Gate>& g, const RegisterLayout& L, const cnf::Clause& clause) {
  for (const auto& lit : clause) g.push_back(Gate::cnot(L.u.at(lit.variable), L.y.at(lit.variable)));
  for (const auto& lit : clause)
    if (lit.negated) g.push_back(Gate::x(L.y.at(lit.variable)));
  for (const auto& lit : clause) g.push_back(Gate::cnot(L.y.at(lit.variable), L.r.at(lit.variable)));
  for (const auto& lit : clause)
    if (lit.negated) g.push_back(Gate::x(L.y.at(lit.variable)));
  for (const auto& lit : clause) g.push_back(Gate::cnot(L.u.at(lit.variable), L.y.at(lit.variable)));
}

// r_0 ^= AND of the clause's r slots, then r_0 flipped.
inline void emit_evaluate(std::vector<Gate>& g, const RegisterLayout& L, const cnf::Clause& clause) {
  const auto& lits = clause.literals;
  const auto k = lits.size();
  const Qubit r0 = L.r.at(0);
  auto slot = [&](std::size_t i) { return L.r.at(lits[i].variable); };
  if (k == 1) {
    g.push_back(Gate::cnot(slot(0), r0));
  } else if (k == 2) {
    g.push_back(Gate::toffoli(slot(0), slot(1), r0));
  } else {
    // ancilla i holds slot(0) & ... & slot(i+1), borrowed from y
    auto anc = [&](std::size_t i) { return L.y.at(lits[i].variable); };
    std::vector<Gate> ladder;
    ladder.push_back(Gate::toffoli(slot(0), slot(1), anc(0)));
    for (std::size_t i = 1; i + 2 < k; ++i) ladder.push_back(Gate::toffoli(anc(i - 1), slot(i + 1), anc(i)));
    g.insert(g.end(), ladder.begin(), ladder.end());
    g.push_back(Gate::toffoli(anc(k - 3), slot(k - 1), r0));
    g.insert(g.end(), ladder.rbegin(), ladder.rend());
  }
  g.push_back(Gate::x(r0));
}

template <typename Emit>
std::vector<Gate> mirror(Emit emit) {
  std::vector<Gate> tmp;
  emit(tmp);
  std::vector<Gate> out;
  out.reserve(tmp.size());
  for (auto it = tmp.rbegin(); it != tmp.rend(); ++it) out.push_back(it->inverse());
  return out;
}

}  // namespace detail

inline Compiled compile_annotated(const cnf::Formula& f, const CompileOptions& opts = {}) {
  const auto n = f.variable_count();
  const auto m = f.clause_count();
  const auto q = 3 * n + m + 2;
  if (q > opts.qubit_limit)
    throw GuardExceeded("circuit needs " + std::to_string(q) + " qubits, limit is " +
                        std::to_string(opts.qubit_limit));

  Compiled out;
  auto& circ = out.circuit;
  circ.layout = RegisterLayout::for_formula(n, m);
  const auto& L = circ.layout;
  circ.initial.assign(q, false);
  for (std::uint32_t i = 1; i <= n; ++i) circ.initial[L.r.at(i)] = true;
  circ.initial[L.c.at(0)] = true;

  auto& g = circ.gates;
  auto mark = [&](Stage s, std::size_t clause, std::size_t begin) {
    out.stages.push_back(StageMark{s, clause, begin, g.size()});
  };

  for (std::uint32_t i = 1; i <= n; ++i) g.push_back(Gate::h(L.u.at(i)));
  mark(Stage::Superpose, 0, 0);

  for (std::size_t j = 0; j < m; ++j) {
    const auto& clause = f.clause(j);
    auto load = [&](std::vector<Gate>& v) { detail::emit_load(v, L, clause); };
    auto evaluate = [&](std::vector<Gate>& v) { detail::emit_evaluate(v, L, clause); };

    auto begin = g.size();
    load(g);
    mark(Stage::Load, j, begin);

    begin = g.size();
    evaluate(g);
    mark(Stage::Evaluate, j, begin);

    begin = g.size();
    g.push_back(Gate::toffoli(L.r.at(0), L.c.at(static_cast<std::uint32_t>(j)),
                              L.c.at(static_cast<std::uint32_t>(j + 1))));
    mark(Stage::Accumulate, j, begin);

    begin = g.size();
    for (const auto& gate : detail::mirror(evaluate)) g.push_back(gate);
    mark(Stage::Unevaluate, j, begin);

    begin = g.size();
    for (const auto& gate : detail::mirror(load)) g.push_back(gate);
    mark(Stage::Unload, j, begin);
  }
  return out;
}

inline Circuit compile(const cnf::Formula& f, const CompileOptions& opts = {}) {
  return compile_annotated(f, opts).circuit;
}

// The three-qubit circuit for F = (u1): qubit 0 = c_1, 1 = y_1, 2 = u_1, all
// starting at 0. Copy u1 into y1, evaluate into c1, null y1.
inline Circuit minimal_single_variable_circuit() {
  Circuit circ;
  circ.layout.qubit_count = 3;
  circ.layout.n = 1;
  circ.layout.m = 1;
  circ.layout.c = Register{{0}, 1};
  circ.layout.y = Register{{1}, 1};
  circ.layout.u = Register{{2}, 1};
  circ.initial.assign(3, false);
  circ.gates = {Gate::h(2), Gate::cnot(2, 1), Gate::cnot(1, 0), Gate::cnot(2, 1)};
  return circ;
}

inline Circuit invert(const Circuit& circ) {
  Circuit out = circ;
  out.gates.clear();
  out.gates.reserve(circ.gates.size());
  for (auto it = circ.gates.rbegin(); it != circ.gates.rend(); ++it) out.gates.push_back(it->inverse());
  return out;
}

// ---------------------------------------------------------------------------
// Resource accounting

struct GateCensus {
  std::size_t h = 0;
  std::size_t x = 0;
  std::size_t cnot = 0;
  std::size_t toffoli = 0;
  std::size_t phase = 0;
  std::size_t qubits = 0;

  [[nodiscard]] std::size_t total() const { return h + x + cnot + toffoli + phase; }

  friend bool operator==(const GateCensus&, const GateCensus&) = default;
};

inline GateCensus gate_census(const Circuit& circ) {
  GateCensus c;
  c.qubits = circ.qubit_count();
  for (const auto& g : circ.gates) {
    switch (g.kind) {
      case GateKind::H: ++c.h; break;
      case GateKind::X: ++c.x; break;
      case GateKind::CNOT: ++c.cnot; break;
      case GateKind::TOFFOLI: ++c.toffoli; break;
      case GateKind::PHASE: ++c.phase; break;
    }
  }
  return c;
}

// Envelope constants for the compiled construction. Per clause of k literals
// (p of them negated) the compiler emits 4p+2 X, 6k CNOT (+2 when k=1) and
// 1, 3 or 4k-5 TOFF for k = 1, 2, >=3. With k <= n that gives
//   X <= 6mn,  CNOT <= 8mn,  TOFF <= 4mn <= 4(mn+m).
inline constexpr double kCnotPerClauseVariable = 8.0;  // C1
inline constexpr double kCnotOffset = 0.0;             // C2
inline constexpr double kToffoliScale = 4.0;           // C3

struct BoundLine {
  std::string name;
  double measured = 0;
  double bound = 0;
  bool exact = false;  // equality required rather than <=
  bool pass = false;

  [[nodiscard]] double ratio() const { return bound == 0 ? (measured == 0 ? 0.0 : INFINITY) : measured / bound; }
};

struct BoundReport {
  std::vector<BoundLine> lines;

  [[nodiscard]] bool all_pass() const {
    for (const auto& l : lines)
      if (!l.pass) return false;
    return true;
  }
  [[nodiscard]] const BoundLine& line(std::string_view name) const {
    for (const auto& l : lines)
      if (l.name == name) return l;
    throw PreconditionError("no bound named " + std::string(name));
  }
  [[nodiscard]] std::string to_string() const {
    std::ostringstream os;
    for (const auto& l : lines)
      os << l.name << ' ' << l.measured << (l.exact ? " == " : " <= ") << l.bound << " ratio "
         << l.ratio() << (l.pass ? " ok" : " VIOLATED") << '\n';
    return os.str();
  }
};

inline BoundReport check_bounds(const GateCensus& census, std::size_t n, std::size_t m) {
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  BoundReport rep;
  auto add = [&](std::string name, std::size_t measured, double bound, bool exact) {
    const auto v = static_cast<double>(measured);
    rep.lines.push_back(BoundLine{std::move(name), v, bound, exact, exact ? v == bound : v <= bound});
  };
  add("H", census.h, dn, true);
  add("X", census.x, 6.0 * dm * dn, false);
  add("CNOT", census.cnot, kCnotPerClauseVariable * dm * dn + kCnotOffset, false);
  add("TOFFOLI", census.toffoli, kToffoliScale * (dm * dn + dm), false);
  add("qubits", census.qubits, 3.0 * dn + dm + 2.0, true);
  return rep;
}

// ---------------------------------------------------------------------------
// Classical evaluation of permutation-only gate ranges on one basis state.

inline void evaluate_classically(const Circuit& circ, std::vector<bool>& bits, std::size_t begin,
                                 std::size_t end) {
  if (bits.size() != circ.qubit_count()) throw PreconditionError("basis state width mismatch");
  for (std::size_t i = begin; i < end; ++i) {
    const auto& g = circ.gates.at(i);
    switch (g.kind) {
      case GateKind::X: bits[g.target] = !bits[g.target]; break;
      case GateKind::CNOT:
        if (bits[g.controls[0]]) bits[g.target] = !bits[g.target];
        break;
      case GateKind::TOFFOLI:
        if (bits[g.controls[0]] && bits[g.controls[1]]) bits[g.target] = !bits[g.target];
        break;
      default:
        throw PreconditionError("gate " + std::to_string(i) + " (" + std::string(kind_name(g.kind)) +
                                ") is not a classical permutation");
    }
  }
}

// Bits of one register in ket order (highest subscript first).
inline std::vector<bool> register_bits(const std::vector<bool>& bits, const Register& reg) {
  std::vector<bool> out;
  for (auto it = reg.qubits.rbegin(); it != reg.qubits.rend(); ++it) out.push_back(bits.at(*it));
  return out;
}

// ---------------------------------------------------------------------------
// Text format
//
//   # qubits Q
//   # init <bitstring, qubit 0 rightmost>
//   H q | X q | CNOT c t | TOFF c1 c2 t | PHASE theta q

inline std::string format_theta(double theta) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), theta, std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

inline std::string to_text(const Circuit& circ) {
  std::string out = "# qubits " + std::to_string(circ.qubit_count()) + "\n# init ";
  for (std::size_t q = circ.qubit_count(); q-- > 0;) out += circ.initial.at(q) ? '1' : '0';
  out += '\n';
  for (const auto& g : circ.gates) {
    out += kind_name(g.kind);
    if (g.kind == GateKind::PHASE) out += ' ' + format_theta(g.theta);
    for (std::size_t i = 0; i < g.control_count(); ++i) out += ' ' + std::to_string(g.controls[i]);
    out += ' ' + std::to_string(g.target) + '\n';
  }
  return out;
}

inline Circuit parse_text(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    return InputError("circuit line " + std::to_string(line_no) + ": " + what);
  };
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  Circuit circ;
  if (!next_line()) throw InputError("circuit text: missing '# qubits' line");
  {
    const auto tok = cnf::detail::split_ws(line);
    std::size_t q = 0;
    if (tok.size() != 3 || tok[0] != "#" || tok[1] != "qubits" || !cnf::detail::parse_int(tok[2], q))
      throw fail("expected '# qubits Q'");
    circ.layout = RegisterLayout::anonymous(q);
  }
  if (!next_line()) throw InputError("circuit text: missing '# init' line");
  {
    const auto tok = cnf::detail::split_ws(line);
    if (tok.size() != 3 || tok[0] != "#" || tok[1] != "init") throw fail("expected '# init <bits>'");
    if (tok[2].size() != circ.qubit_count()) throw fail("init bitstring length differs from qubit count");
    circ.initial.assign(circ.qubit_count(), false);
    for (std::size_t i = 0; i < tok[2].size(); ++i) {
      const char ch = tok[2][tok[2].size() - 1 - i];
      if (ch != '0' && ch != '1') throw fail("init bitstring must be 0/1");
      circ.initial[i] = ch == '1';
    }
  }
  while (next_line()) {
    const auto tok = cnf::detail::split_ws(line);
    if (tok.empty()) continue;
    auto qubit = [&](std::string_view t) {
      Qubit q = 0;
      if (!cnf::detail::parse_int(t, q)) throw fail("bad qubit index '" + std::string(t) + "'");
      return q;
    };
    auto arity = [&](std::size_t expected) {
      if (tok.size() != expected + 1) throw fail(std::string(tok[0]) + " takes " + std::to_string(expected) + " operands");
    };
    Gate g;
    if (tok[0] == "H") {
      arity(1);
      g = Gate::h(qubit(tok[1]));
    } else if (tok[0] == "X") {
      arity(1);
      g = Gate::x(qubit(tok[1]));
    } else if (tok[0] == "CNOT") {
      arity(2);
      g = Gate::cnot(qubit(tok[1]), qubit(tok[2]));
    } else if (tok[0] == "TOFF") {
      arity(3);
      g = Gate::toffoli(qubit(tok[1]), qubit(tok[2]), qubit(tok[3]));
    } else if (tok[0] == "PHASE") {
      arity(2);
      double theta = 0;
      const auto t = tok[1];
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), theta);
      if (ec != std::errc{} || ptr != t.data() + t.size()) throw fail("bad angle '" + std::string(t) + "'");
      g = Gate::phase(theta, qubit(tok[2]));
    } else {
      throw fail("unknown gate '" + std::string(tok[0]) + "'");
    }
    try {
      g.validate(circ.qubit_count());
    } catch (const PreconditionError& e) {
      throw fail(e.what());
    }
    circ.gates.push_back(g);
  }
  return circ;
}

inline Circuit parse_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_text(in);
}

}  // namespace dnaq::circuit
