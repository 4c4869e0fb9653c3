#pragma once

// Ideal DNA computation as exact multiset algebra.
//
// A Strand is an ordered list of (variable, bit) symbols, head first. A Tube
// is a multiset of strands with exact integer multiplicities. The primitives
// take tubes by value and hand back fresh tubes, so a moved-in tube is
// consumed the way a physical tube's contents are.
//
// Quantum correspondence: append is a tensor product with a basis state,
// amplify + append-tail + merge starting from {empty strand} builds the
// uniform tube, which plays the role of H^n|0...0>; extract partitions on one
// symbol the way a CNOT-then-measure would.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnaq/cnf.hpp"
#include "dnaq/error.hpp"

namespace dnaq::dna {

using cnf::Variable;

struct Symbol {
  Variable variable = 1;
  bool bit = false;

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

class Strand {
 public:
  Strand() = default;
  explicit Strand(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      for (std::size_t k = i + 1; k < symbols_.size(); ++k)
        if (symbols_[i].variable == symbols_[k].variable)
          throw PreconditionError("strand repeats variable u" + std::to_string(symbols_[i].variable));
  }

  [[nodiscard]] const std::vector<Symbol>& symbols() const { return symbols_; }
  [[nodiscard]] std::size_t length() const { return symbols_.size(); }
  [[nodiscard]] bool empty() const { return symbols_.empty(); }

  [[nodiscard]] std::optional<bool> bit_of(Variable v) const {
    for (const auto& s : symbols_)
      if (s.variable == v) return s.bit;
    return std::nullopt;
  }
  [[nodiscard]] bool has(Variable v) const { return bit_of(v).has_value(); }

  [[nodiscard]] Strand with_head(Symbol s) const {
    Strand out;
    out.symbols_.reserve(symbols_.size() + 1);
    out.symbols_.push_back(s);
    out.symbols_.insert(out.symbols_.end(), symbols_.begin(), symbols_.end());
    return out;
  }
  [[nodiscard]] Strand with_tail(Symbol s) const {
    Strand out = *this;
    out.symbols_.push_back(s);
    return out;
  }

  // Symbols sorted by descending variable (ket order). Read's tie-break key.
  [[nodiscard]] std::vector<std::pair<Variable, bool>> canonical() const {
    std::vector<std::pair<Variable, bool>> key;
    key.reserve(symbols_.size());
    for (const auto& s : symbols_) key.emplace_back(s.variable, s.bit);
    std::sort(key.begin(), key.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    return key;
  }

  // Bits in construction order, e.g. "01".
  [[nodiscard]] std::string bits() const {
    std::string out;
    for (const auto& s : symbols_) out += s.bit ? '1' : '0';
    return out;
  }

  // "u2=1,u1=0"; the empty strand prints as "e".
  [[nodiscard]] std::string to_string() const {
    if (symbols_.empty()) return "e";
    std::string out;
    for (const auto& s : symbols_) {
      if (!out.empty()) out += ',';
      out += 'u' + std::to_string(s.variable) + '=' + (s.bit ? '1' : '0');
    }
    return out;
  }

  // Complete strand over u_1..u_n as an assignment.
  [[nodiscard]] cnf::Assignment to_assignment(std::size_t n) const {
    if (symbols_.size() != n)
      throw PreconditionError("strand " + to_string() + " is not a complete " + std::to_string(n) +
                              "-variable assignment");
    cnf::Assignment a;
    a.bits.resize(n);
    for (const auto& s : symbols_) {
      if (s.variable < 1 || s.variable > n)
        throw PreconditionError("strand " + to_string() + " has out-of-range variable");
      a.bits[s.variable - 1] = s.bit;
    }
    return a;
  }

  friend auto operator<=>(const Strand&, const Strand&) = default;
  friend bool operator==(const Strand&, const Strand&) = default;

 private:
  std::vector<Symbol> symbols_;
};

// Builds a strand from a bit string in construction order over the given
// variables, e.g. strand_of("01", {2, 1}) is u2=0,u1=1.
inline Strand strand_of(std::string_view bits, std::span<const Variable> variables) {
  if (bits.size() != variables.size()) throw PreconditionError("strand_of: length mismatch");
  std::vector<Symbol> syms;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') throw PreconditionError("strand_of: bits must be 0/1");
    syms.push_back(Symbol{variables[i], bits[i] == '1'});
  }
  return Strand(std::move(syms));
}

class Tube {
 public:
  using Contents = std::map<Strand, std::uint64_t>;

  Tube() = default;
  Tube(std::initializer_list<std::pair<Strand, std::uint64_t>> items) {
    for (const auto& [s, c] : items) add(s, c);
  }

  void add(const Strand& s, std::uint64_t count = 1) {
    if (count == 0) return;
    contents_[s] += count;
    molecules_ += count;
  }

  [[nodiscard]] std::uint64_t count(const Strand& s) const {
    const auto it = contents_.find(s);
    return it == contents_.end() ? 0 : it->second;
  }
  [[nodiscard]] std::uint64_t molecules() const { return molecules_; }
  [[nodiscard]] std::size_t distinct() const { return contents_.size(); }
  [[nodiscard]] bool empty() const { return molecules_ == 0; }
  [[nodiscard]] const Contents& contents() const { return contents_; }
  [[nodiscard]] auto begin() const { return contents_.begin(); }
  [[nodiscard]] auto end() const { return contents_.end(); }

  [[nodiscard]] std::string to_string() const {
    std::string out = "{";
    for (const auto& [s, c] : contents_) {
      if (out.size() > 1) out += ", ";
      out += s.to_string() + ':' + std::to_string(c);
    }
    return out + '}';
  }

  friend bool operator==(const Tube& a, const Tube& b) { return a.contents_ == b.contents_; }

 private:
  friend struct TubeAccess;
  Contents contents_;
  std::uint64_t molecules_ = 0;
};

struct TubeAccess {
  static Tube::Contents& contents(Tube& t) { return t.contents_; }
  static std::uint64_t& molecules(Tube& t) { return t.molecules_; }
};

struct Split {
  Tube plus;
  Tube minus;
};

namespace detail {

template <typename Attach>
Tube append(Tube t, Symbol sym, const char* name, Attach attach) {
  Tube out;
  for (const auto& [strand, count] : t) {
    if (strand.has(sym.variable))
      throw PreconditionError(std::string(name) + ": strand " + strand.to_string() +
                              " already carries u" + std::to_string(sym.variable));
    out.add(attach(strand, sym), count);
  }
  return out;
}

}  // namespace detail

inline Tube append_head(Tube t, Symbol sym) {
  return detail::append(std::move(t), sym, "append_head",
                        [](const Strand& s, Symbol x) { return s.with_head(x); });
}

inline Tube append_tail(Tube t, Symbol sym) {
  return detail::append(std::move(t), sym, "append_tail",
                        [](const Strand& s, Symbol x) { return s.with_tail(x); });
}

// plus: strands whose symbol for `variable` equals `bit`. minus: the rest,
// including strands that do not carry `variable` at all.
inline Split extract(Tube t, Variable variable, bool bit) {
  Split out;
  auto& src = TubeAccess::contents(t);
  auto& plus = TubeAccess::contents(out.plus);
  auto& minus = TubeAccess::contents(out.minus);
  while (!src.empty()) {
    auto node = src.extract(src.begin());
    const bool take = node.key().bit_of(variable) == bit;
    auto& dst_tube = take ? out.plus : out.minus;
    TubeAccess::molecules(dst_tube) += node.mapped();
    (take ? plus : minus).insert((take ? plus : minus).end(), std::move(node));
  }
  TubeAccess::molecules(t) = 0;
  return out;
}

inline Tube discard(Tube t) {
  t = Tube{};
  return t;
}

// Exactly two copies; the original is consumed.
inline std::pair<Tube, Tube> amplify(Tube t) {
  Tube copy = t;
  return {std::move(t), std::move(copy)};
}

inline Tube merge(std::vector<Tube> tubes) {
  if (tubes.empty()) return Tube{};
  Tube out = std::move(tubes.front());
  for (std::size_t i = 1; i < tubes.size(); ++i)
    for (const auto& [s, c] : tubes[i]) out.add(s, c);
  return out;
}

inline bool detect(const Tube& t) { return !t.empty(); }

// Smallest strand by canonical (descending-variable) bit string.
inline Strand read(const Tube& t) {
  if (t.empty()) throw PreconditionError("read: tube is empty");
  const Strand* best = nullptr;
  std::vector<std::pair<Variable, bool>> best_key;
  for (const auto& [s, c] : t) {
    auto key = s.canonical();
    if (best == nullptr || key < best_key) {
      best = &s;
      best_key = std::move(key);
    }
  }
  return *best;
}

// ---------------------------------------------------------------------------
// Traced workbench. Tubes live under ids ("t0", "t1", ...); every primitive
// consumes its input ids and records one trace line.

using TubeId = std::uint64_t;

struct TraceEntry {
  std::string op;
  std::vector<TubeId> in;
  std::vector<TubeId> out;
  std::uint64_t count = 0;  // molecules in the outputs (or the inspected tube)

  // OP_NAME in=<ids> out=<ids> count=<molecules>
  [[nodiscard]] std::string to_string() const {
    auto ids = [](const std::vector<TubeId>& v) {
      if (v.empty()) return std::string("-");
      std::string s;
      for (auto id : v) {
        if (!s.empty()) s += ',';
        s += 't' + std::to_string(id);
      }
      return s;
    };
    return op + " in=" + ids(in) + " out=" + ids(out) + " count=" + std::to_string(count);
  }
};

class Lab {
 public:
  explicit Lab(bool record_trace = true) : record_(record_trace) {}

  TubeId load(Tube t) {
    const auto id = store(std::move(t));
    log("LOAD", {}, {id});
    return id;
  }

  TubeId append_head(TubeId id, Symbol sym) { return unary("APPEND_HEAD", id, [&](Tube t) { return dna::append_head(std::move(t), sym); }); }
  TubeId append_tail(TubeId id, Symbol sym) { return unary("APPEND_TAIL", id, [&](Tube t) { return dna::append_tail(std::move(t), sym); }); }
  TubeId discard(TubeId id) { return unary("DISCARD", id, [](Tube t) { return dna::discard(std::move(t)); }); }

  std::pair<TubeId, TubeId> extract(TubeId id, Variable variable, bool bit) {
    auto [plus, minus] = dna::extract(take(id), variable, bit);
    const auto p = store(std::move(plus));
    const auto m = store(std::move(minus));
    log("EXTRACT", {id}, {p, m});
    return {p, m};
  }

  std::pair<TubeId, TubeId> amplify(TubeId id) {
    auto [a, b] = dna::amplify(take(id));
    const auto ia = store(std::move(a));
    const auto ib = store(std::move(b));
    log("AMPLIFY", {id}, {ia, ib});
    return {ia, ib};
  }

  TubeId merge(std::span<const TubeId> ids) {
    std::vector<Tube> tubes;
    tubes.reserve(ids.size());
    for (auto id : ids) tubes.push_back(take(id));
    const auto out = store(dna::merge(std::move(tubes)));
    log("MERGE", {ids.begin(), ids.end()}, {out});
    return out;
  }

  bool detect(TubeId id) {
    const auto& t = peek(id);
    if (record_) trace_.push_back(TraceEntry{"DETECT", {id}, {}, t.molecules()});
    return dna::detect(t);
  }

  Strand read(TubeId id) {
    const auto& t = peek(id);
    auto s = dna::read(t);
    if (record_) trace_.push_back(TraceEntry{"READ", {id}, {}, t.count(s)});
    return s;
  }

  [[nodiscard]] const Tube& peek(TubeId id) const {
    const auto it = tubes_.find(id);
    if (it == tubes_.end()) throw PreconditionError("no live tube t" + std::to_string(id));
    return it->second;
  }

  // Removes a tube from the lab without recording a primitive.
  Tube take(TubeId id) {
    const auto it = tubes_.find(id);
    if (it == tubes_.end()) throw PreconditionError("no live tube t" + std::to_string(id));
    Tube t = std::move(it->second);
    tubes_.erase(it);
    return t;
  }

  [[nodiscard]] const std::vector<TraceEntry>& trace() const { return trace_; }
  [[nodiscard]] std::size_t live_tubes() const { return tubes_.size(); }

 private:
  template <typename Op>
  TubeId unary(const char* name, TubeId id, Op op) {
    const auto out = store(op(take(id)));
    log(name, {id}, {out});
    return out;
  }

  TubeId store(Tube t) {
    const auto id = next_id_++;
    tubes_.emplace(id, std::move(t));
    return id;
  }

  void log(const char* op, std::vector<TubeId> in, std::vector<TubeId> out) {
    if (!record_) return;
    std::uint64_t count = 0;
    for (auto id : out) count += peek(id).molecules();
    trace_.push_back(TraceEntry{op, std::move(in), std::move(out), count});
  }

  std::map<TubeId, Tube> tubes_;
  std::vector<TraceEntry> trace_;
  TubeId next_id_ = 0;
  bool record_;
};

// Every n-bit strand exactly once, over u_n (head) .. u_1 (tail). Built from
// {empty strand} using only Amplify, Append-Tail and Merge.
inline TubeId uniform_tube(Lab& lab, std::size_t n) {
  if (n < 1) throw PreconditionError("uniform_tube: need at least one variable");
  auto current = lab.load(Tube{{Strand{}, 1}});
  for (auto v = static_cast<Variable>(n); v >= 1; --v) {
    const auto [zero, one] = lab.amplify(current);
    const TubeId parts[] = {lab.append_tail(zero, Symbol{v, false}), lab.append_tail(one, Symbol{v, true})};
    current = lab.merge(parts);
  }
  return current;
}

inline Tube uniform_tube(std::size_t n) {
  Lab lab(/*record_trace=*/false);
  const auto id = uniform_tube(lab, n);
  return lab.take(id);
}

namespace detail {

// Reads every strand of a tube of complete n-variable strands by splitting on
// u_v, u_{v-1}, ..., u_1; empty branches are dropped as soon as Detect says NO.
inline void read_out(Lab& lab, TubeId tube, Variable v, std::size_t n, cnf::SolutionSet& out) {
  if (!lab.detect(tube)) {
    lab.take(lab.discard(tube));
    return;
  }
  if (v == 0) {
    out.push_back(lab.read(tube).to_assignment(n));
    lab.take(lab.discard(tube));
    return;
  }
  const auto [zero, one] = lab.extract(tube, v, false);
  read_out(lab, zero, v - 1, n, out);
  read_out(lab, one, v - 1, n, out);
}

}  // namespace detail

inline constexpr std::size_t kTubeGuard = 20;

// Per clause: split the tube on each literal in turn, keep every extract-plus
// tube, merge them back; the strands left over falsify the clause and are
// discarded. Survivors after the last clause are read out one by one.
inline cnf::SolutionSet lipton_solve(Lab& lab, const cnf::Formula& f) {
  const auto n = f.variable_count();
  if (n > kTubeGuard)
    throw GuardExceeded("dna: " + std::to_string(n) + " variables exceeds tube guard of " +
                        std::to_string(kTubeGuard));
  auto tube = uniform_tube(lab, n);
  for (const auto& clause : f.clauses()) {
    std::vector<TubeId> kept;
    auto rest = tube;
    for (const auto& lit : clause) {
      const auto [plus, minus] = lab.extract(rest, lit.variable, !lit.negated);
      kept.push_back(plus);
      rest = minus;
    }
    lab.discard(rest);
    tube = lab.merge(kept);
  }

  cnf::SolutionSet out;
  detail::read_out(lab, tube, static_cast<Variable>(n), n, out);
  std::sort(out.begin(), out.end());
  return out;
}

inline cnf::SolutionSet lipton_solve(const cnf::Formula& f) {
  Lab lab(/*record_trace=*/false);
  return lipton_solve(lab, f);
}

}  // namespace dnaq::dna
