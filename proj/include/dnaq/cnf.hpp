#pragma once

// CNF formulas: representation, DIMACS I/O, classical evaluation and the
// brute-force solution oracle that the other engines are checked against.
//
// Variables are 1-based (u_1 .. u_n) as in DIMACS. Assignments are 0-based
// vectors: bits[i] holds the value of u_{i+1}. When an assignment is packed
// into an integer, u_1 is the least significant bit and u_n the most
// significant, matching the ket ordering |u_n ... u_1>.

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dnaq/error.hpp"

namespace dnaq::cnf {

using Variable = std::uint32_t;

struct Literal {
  Variable variable = 1;
  bool negated = false;

  // DIMACS encoding: +v or -v.
  [[nodiscard]] int dimacs() const {
    return negated ? -static_cast<int>(variable) : static_cast<int>(variable);
  }
  [[nodiscard]] bool satisfied_by(bool value) const { return value != negated; }

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Clause {
  std::vector<Literal> literals;

  [[nodiscard]] std::size_t size() const { return literals.size(); }
  [[nodiscard]] auto begin() const { return literals.begin(); }
  [[nodiscard]] auto end() const { return literals.end(); }

  friend bool operator==(const Clause&, const Clause&) = default;
};

struct Assignment {
  std::vector<bool> bits;

  [[nodiscard]] std::size_t size() const { return bits.size(); }
  [[nodiscard]] bool value(Variable v) const { return bits.at(v - 1); }

  // Packed form, u_1 in bit 0.
  [[nodiscard]] std::uint64_t index() const {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) out |= std::uint64_t{1} << i;
    return out;
  }

  static Assignment from_index(std::uint64_t index, std::size_t n) {
    Assignment a;
    a.bits.resize(n);
    for (std::size_t i = 0; i < n; ++i) a.bits[i] = ((index >> i) & 1U) != 0;
    return a;
  }

  // Ket order, e.g. "u2=0 u1=1".
  [[nodiscard]] std::string to_string() const {
    std::string out;
    for (std::size_t i = bits.size(); i-- > 0;) {
      if (!out.empty()) out += ' ';
      out += 'u' + std::to_string(i + 1) + '=' + (bits[i] ? '1' : '0');
    }
    return out;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend std::strong_ordering operator<=>(const Assignment& a, const Assignment& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return a.index() <=> b.index();
  }
};

// Sorted ascending by packed index, no duplicates.
using SolutionSet = std::vector<Assignment>;

class Formula {
 public:
  Formula(std::size_t variable_count, std::vector<Clause> clauses)
      : n_(variable_count), clauses_(std::move(clauses)) {
    if (n_ < 1) throw InputError("formula must declare at least one variable");
    if (clauses_.empty()) throw InputError("formula must contain at least one clause");
    for (std::size_t j = 0; j < clauses_.size(); ++j) validate_clause(clauses_[j], j + 1);
  }

  [[nodiscard]] std::size_t variable_count() const { return n_; }
  [[nodiscard]] std::size_t clause_count() const { return clauses_.size(); }
  [[nodiscard]] const std::vector<Clause>& clauses() const { return clauses_; }
  [[nodiscard]] const Clause& clause(std::size_t j) const { return clauses_.at(j); }

  [[nodiscard]] std::size_t literal_count() const {
    std::size_t total = 0;
    for (const auto& c : clauses_) total += c.size();
    return total;
  }

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  void validate_clause(const Clause& c, std::size_t ordinal) const {
    const auto where = " in clause " + std::to_string(ordinal);
    if (c.literals.empty()) throw InputError("empty clause" + where);
    std::vector<Variable> seen;
    for (const auto& lit : c.literals) {
      if (lit.variable < 1 || lit.variable > n_)
        throw InputError("variable " + std::to_string(lit.variable) + " out of range [1, " +
                         std::to_string(n_) + "]" + where);
      if (std::find(seen.begin(), seen.end(), lit.variable) != seen.end())
        throw InputError("variable " + std::to_string(lit.variable) + " repeated" + where);
      seen.push_back(lit.variable);
    }
  }

  std::size_t n_;
  std::vector<Clause> clauses_;
};

inline constexpr std::size_t kEnumerationGuard = 24;

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\v\f");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\v\f");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::string_view(" \t\r\v\f").find(s[i]) != std::string_view::npos) ++i;
    const auto start = i;
    while (i < s.size() && std::string_view(" \t\r\v\f").find(s[i]) == std::string_view::npos) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <typename Int>
bool parse_int(std::string_view token, Int& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace detail

// Reads DIMACS CNF. Clauses may span lines; tokens may be separated by any
// whitespace. Duplicate variables inside a clause (including u or not-u) are
// rejected, as are empty clauses.
inline Formula parse_dimacs(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t n = 0;
  std::size_t declared_m = 0;
  std::vector<Clause> clauses;
  Clause current;
  std::size_t clause_start_line = 0;

  auto fail = [&](const std::string& what) -> InputError {
    return InputError("dimacs line " + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == 'c') continue;
    if (body.front() == 'p') {
      if (have_header) throw fail("duplicate header");
      const auto tokens = detail::split_ws(body);
      if (tokens.size() != 4 || tokens[0] != "p" || tokens[1] != "cnf" ||
          !detail::parse_int(tokens[2], n) || !detail::parse_int(tokens[3], declared_m))
        throw fail("malformed header, expected 'p cnf <vars> <clauses>'");
      if (n < 1) throw fail("header declares no variables");
      if (declared_m < 1) throw fail("header declares no clauses");
      have_header = true;
      continue;
    }
    if (!have_header) throw fail("clause data before 'p cnf' header");
    for (const auto token : detail::split_ws(body)) {
      long long value = 0;
      if (!detail::parse_int(token, value)) throw fail("bad token '" + std::string(token) + "'");
      if (value == 0) {
        if (current.literals.empty()) throw fail("empty clause");
        if (clauses.size() == declared_m)
          throw fail("more clauses than the " + std::to_string(declared_m) + " declared");
        clauses.push_back(std::move(current));
        current = Clause{};
        continue;
      }
      if (current.literals.empty()) clause_start_line = line_no;
      const auto magnitude = static_cast<unsigned long long>(value < 0 ? -value : value);
      if (magnitude > n)
        throw fail("variable " + std::to_string(magnitude) + " exceeds declared count " +
                   std::to_string(n));
      const auto var = static_cast<Variable>(magnitude);
      for (const auto& lit : current.literals)
        if (lit.variable == var)
          throw fail("variable " + std::to_string(var) + " repeated within a clause");
      current.literals.push_back(Literal{var, value < 0});
    }
  }
  if (!have_header) throw InputError("dimacs: missing 'p cnf' header");
  if (!current.literals.empty())
    throw InputError("dimacs line " + std::to_string(clause_start_line) +
                     ": clause not terminated by 0");
  if (clauses.size() != declared_m)
    throw InputError("dimacs: header declares " + std::to_string(declared_m) +
                     " clauses but found " + std::to_string(clauses.size()));
  return Formula(n, std::move(clauses));
}

inline Formula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

inline std::string format_dimacs(const Formula& f) {
  std::string out = "p cnf " + std::to_string(f.variable_count()) + ' ' +
                    std::to_string(f.clause_count()) + '\n';
  for (const auto& c : f.clauses()) {
    for (const auto& lit : c) out += std::to_string(lit.dimacs()) + ' ';
    out += "0\n";
  }
  return out;
}

// Evaluates f on a packed assignment (u_1 in bit 0).
inline bool eval_index(const Formula& f, std::uint64_t packed) {
  for (const auto& c : f.clauses()) {
    bool sat = false;
    for (const auto& lit : c) {
      if (lit.satisfied_by(((packed >> (lit.variable - 1)) & 1U) != 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

inline bool eval(const Formula& f, const Assignment& a) {
  if (a.size() != f.variable_count())
    throw PreconditionError("assignment has " + std::to_string(a.size()) +
                            " bits, formula has " + std::to_string(f.variable_count()) +
                            " variables");
  for (const auto& c : f.clauses()) {
    const bool sat = std::any_of(c.begin(), c.end(),
                                 [&](const Literal& lit) { return lit.satisfied_by(a.value(lit.variable)); });
    if (!sat) return false;
  }
  return true;
}

inline SolutionSet brute_force_solutions(const Formula& f) {
  const auto n = f.variable_count();
  if (n > kEnumerationGuard)
    throw GuardExceeded("brute force: " + std::to_string(n) + " variables exceeds guard of " +
                        std::to_string(kEnumerationGuard));
  SolutionSet out;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t idx = 0; idx < total; ++idx)
    if (eval_index(f, idx)) out.push_back(Assignment::from_index(idx, n));
  return out;
}

// F = (u2 or u1) and (not u2 or not u1) and (u1)
inline Formula example_formula() {
  return Formula(2, {Clause{{{2, false}, {1, false}}},
                     Clause{{{2, true}, {1, true}}},
                     Clause{{{1, false}}}});
}

// F = (u1), the one-variable instance.
inline Formula single_variable_formula() { return Formula(1, {Clause{{{1, false}}}}); }

}  // namespace dnaq::cnf
