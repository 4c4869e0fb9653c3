#pragma once

// Dense state-vector simulation.
//
// Amplitudes are indexed by basis state with qubit q in bit q. Permutation
// gates (X, CNOT, TOFF) are pure amplitude swaps; H and PHASE do arithmetic.
//
// run() executes a circuit gate by gate but keeps the nonzero amplitudes in a
// compact (index, amplitude) list while that list is small relative to 2^Q,
// and only spreads them into the dense vector when it grows or at the end.
// Every update uses the same arithmetic as the dense kernels, so the result
// is identical to calling apply() on each gate.

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dnaq/circuit.hpp"
#include "dnaq/error.hpp"

namespace dnaq::sim {

using Amplitude = std::complex<double>;
using circuit::Gate;
using circuit::GateKind;
using circuit::Qubit;

inline constexpr std::size_t kMaxQubits = 30;
inline constexpr double kSupportTolerance = 1e-9;
inline constexpr double kSelectionFloor = 1e-12;

class StateVector {
 public:
  // |index> on `qubits` qubits.
  static StateVector basis(std::size_t qubits, std::uint64_t index) {
    if (qubits > kMaxQubits)
      throw GuardExceeded("state vector of " + std::to_string(qubits) + " qubits exceeds limit of " +
                          std::to_string(kMaxQubits));
    if (qubits < 64 && index >> qubits != 0) throw PreconditionError("basis index out of range");
    StateVector s;
    s.qubits_ = qubits;
    s.amps_.assign(std::size_t{1} << qubits, Amplitude{});
    s.amps_[index] = 1.0;
    return s;
  }

  static StateVector from_amplitudes(std::vector<Amplitude> amps) {
    const auto size = amps.size();
    if (size == 0 || (size & (size - 1)) != 0) throw PreconditionError("amplitude count must be a power of two");
    StateVector s;
    s.qubits_ = static_cast<std::size_t>(std::countr_zero(size));
    s.amps_ = std::move(amps);
    return s;
  }

  [[nodiscard]] std::size_t qubit_count() const { return qubits_; }
  [[nodiscard]] std::size_t size() const { return amps_.size(); }
  [[nodiscard]] Amplitude operator[](std::uint64_t i) const { return amps_[i]; }
  [[nodiscard]] std::span<const Amplitude> amplitudes() const { return amps_; }
  [[nodiscard]] std::span<Amplitude> amplitudes() { return amps_; }

  [[nodiscard]] double norm() const {
    double s = 0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

 private:
  std::size_t qubits_ = 0;
  std::vector<Amplitude> amps_;
};

inline std::uint64_t initial_index(const circuit::Circuit& circ) {
  if (circ.qubit_count() > kMaxQubits)
    throw GuardExceeded("circuit of " + std::to_string(circ.qubit_count()) +
                        " qubits exceeds simulation limit of " + std::to_string(kMaxQubits));
  std::uint64_t idx = 0;
  for (std::size_t q = 0; q < circ.qubit_count(); ++q)
    if (circ.initial.at(q)) idx |= std::uint64_t{1} << q;
  return idx;
}

inline StateVector init_state(const circuit::Circuit& circ) {
  return StateVector::basis(circ.qubit_count(), initial_index(circ));
}

// Most significant qubit first.
inline std::string basis_string(std::uint64_t index, std::size_t qubits) {
  std::string s(qubits, '0');
  for (std::size_t q = 0; q < qubits; ++q)
    if ((index >> q) & 1U) s[qubits - 1 - q] = '1';
  return s;
}

namespace detail {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

// Runs body(begin, end) over [0, count), split across hardware threads for
// large ranges. Blocks are disjoint.
template <typename Body>
void parallel_for(std::uint64_t count, Body body) {
  constexpr std::uint64_t kMinPerThread = std::uint64_t{1} << 16;
  const auto hw = std::max(1U, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(hw, count / kMinPerThread));
  if (workers <= 1) {
    body(std::uint64_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  const auto chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const auto b = w * chunk;
    const auto e = std::min(count, b + chunk);
    if (b < e) pool.emplace_back([=] { body(b, e); });
  }
}

// Inserts a zero at bit position `bit`.
inline std::uint64_t insert_zero(std::uint64_t k, unsigned bit) {
  const std::uint64_t low = k & ((std::uint64_t{1} << bit) - 1);
  return ((k >> bit) << (bit + 1)) | low;
}

inline std::uint64_t permute(const Gate& g, std::uint64_t idx) {
  const std::uint64_t t = std::uint64_t{1} << g.target;
  switch (g.kind) {
    case GateKind::X: return idx ^ t;
    case GateKind::CNOT: return ((idx >> g.controls[0]) & 1U) ? idx ^ t : idx;
    case GateKind::TOFFOLI:
      return (((idx >> g.controls[0]) & (idx >> g.controls[1])) & 1U) ? idx ^ t : idx;
    default: return idx;
  }
}

inline Amplitude phase_factor(double theta) { return std::polar(1.0, theta); }

}  // namespace detail

// Applies one gate in place.
inline void apply(StateVector& state, const Gate& g) {
  g.validate(state.qubit_count());
  auto amps = state.amplitudes();
  const auto target = static_cast<unsigned>(g.target);
  const std::uint64_t tmask = std::uint64_t{1} << target;
  const std::uint64_t half = amps.size() / 2;

  switch (g.kind) {
    case GateKind::X:
      detail::parallel_for(half, [&](std::uint64_t b, std::uint64_t e) {
        for (auto k = b; k < e; ++k) {
          const auto i0 = detail::insert_zero(k, target);
          std::swap(amps[i0], amps[i0 | tmask]);
        }
      });
      break;
    case GateKind::CNOT:
    case GateKind::TOFFOLI: {
      std::uint64_t cmask = std::uint64_t{1} << g.controls[0];
      if (g.kind == GateKind::TOFFOLI) cmask |= std::uint64_t{1} << g.controls[1];
      detail::parallel_for(half, [&](std::uint64_t b, std::uint64_t e) {
        for (auto k = b; k < e; ++k) {
          const auto i0 = detail::insert_zero(k, target);
          if ((i0 & cmask) == cmask) std::swap(amps[i0], amps[i0 | tmask]);
        }
      });
      break;
    }
    case GateKind::H:
      detail::parallel_for(half, [&](std::uint64_t b, std::uint64_t e) {
        for (auto k = b; k < e; ++k) {
          const auto i0 = detail::insert_zero(k, target);
          const auto a0 = amps[i0];
          const auto a1 = amps[i0 | tmask];
          amps[i0] = (a0 + a1) * detail::kInvSqrt2;
          amps[i0 | tmask] = (a0 - a1) * detail::kInvSqrt2;
        }
      });
      break;
    case GateKind::PHASE: {
      const auto f = detail::phase_factor(g.theta);
      detail::parallel_for(half, [&](std::uint64_t b, std::uint64_t e) {
        for (auto k = b; k < e; ++k) amps[detail::insert_zero(k, target) | tmask] *= f;
      });
      break;
    }
  }
}

namespace detail {

struct Entry {
  std::uint64_t index;
  Amplitude amp;
};

// Nonzero amplitudes of a sparse state; same update rules as apply().
class SparseState {
 public:
  explicit SparseState(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  [[nodiscard]] std::size_t size() const { return entries_.size(); }

  void apply(const Gate& g) {
    switch (g.kind) {
      case GateKind::X:
      case GateKind::CNOT:
      case GateKind::TOFFOLI:
        for (auto& e : entries_) e.index = permute(g, e.index);
        break;
      case GateKind::PHASE: {
        const auto f = phase_factor(g.theta);
        const std::uint64_t t = std::uint64_t{1} << g.target;
        for (auto& e : entries_)
          if (e.index & t) e.amp *= f;
        break;
      }
      case GateKind::H: hadamard(g.target); break;
    }
  }

  void scatter(StateVector& state) const {
    auto amps = state.amplitudes();
    std::fill(amps.begin(), amps.end(), Amplitude{});
    for (const auto& e : entries_) amps[e.index] = e.amp;
  }

 private:
  void hadamard(Qubit target) {
    const std::uint64_t t = std::uint64_t{1} << target;
    std::sort(entries_.begin(), entries_.end(), [t](const Entry& a, const Entry& b) {
      const auto ka = a.index & ~t;
      const auto kb = b.index & ~t;
      return ka != kb ? ka < kb : a.index < b.index;
    });
    std::vector<Entry> out;
    out.reserve(entries_.size() * 2);
    for (std::size_t i = 0; i < entries_.size();) {
      const auto base = entries_[i].index & ~t;
      Amplitude a0{}, a1{};
      std::size_t j = i;
      for (; j < entries_.size() && (entries_[j].index & ~t) == base; ++j)
        ((entries_[j].index & t) ? a1 : a0) = entries_[j].amp;
      i = j;
      const auto n0 = (a0 + a1) * kInvSqrt2;
      const auto n1 = (a0 - a1) * kInvSqrt2;
      if (n0 != Amplitude{}) out.push_back(Entry{base, n0});
      if (n1 != Amplitude{}) out.push_back(Entry{base | t, n1});
    }
    entries_ = std::move(out);
  }

  std::vector<Entry> entries_;
};

inline std::vector<Entry> nonzero_entries(const StateVector& s, std::size_t cap) {
  std::vector<Entry> out;
  const auto amps = s.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (amps[i] != Amplitude{}) {
      if (out.size() == cap) return {};
      out.push_back(Entry{i, amps[i]});
    }
  }
  return out;
}

}  // namespace detail

// Applies every gate of `circ` to `state`, in place.
inline void run_in_place(const circuit::Circuit& circ, StateVector& state) {
  if (state.qubit_count() != circ.qubit_count())
    throw PreconditionError("state has " + std::to_string(state.qubit_count()) + " qubits, circuit has " +
                            std::to_string(circ.qubit_count()));
  for (const auto& g : circ.gates) g.validate(circ.qubit_count());

  // Stay sparse while at most 1/16 of the amplitudes are nonzero.
  const std::size_t cap = std::max<std::size_t>(state.size() / 16, 1);
  auto entries = detail::nonzero_entries(state, cap);
  if (entries.empty()) {
    for (const auto& g : circ.gates) apply(state, g);
    return;
  }
  detail::SparseState sparse(std::move(entries));
  std::size_t i = 0;
  for (; i < circ.gates.size(); ++i) {
    sparse.apply(circ.gates[i]);
    if (sparse.size() > cap) {
      ++i;
      break;
    }
  }
  sparse.scatter(state);
  for (; i < circ.gates.size(); ++i) apply(state, circ.gates[i]);
}

inline StateVector run(const circuit::Circuit& circ, std::optional<StateVector> state = std::nullopt) {
  StateVector s = state ? std::move(*state) : init_state(circ);
  run_in_place(circ, s);
  return s;
}

struct Selection {
  double probability = 0;
  StateVector state;
};

// Projects onto qubit == bit and renormalises. Throws PreconditionError when
// the outcome has probability below 1e-12.
inline double probability_of(const StateVector& state, Qubit qubit, bool bit) {
  if (qubit >= state.qubit_count()) throw PreconditionError("qubit index out of range");
  const std::uint64_t mask = std::uint64_t{1} << qubit;
  double p = 0;
  const auto amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i)
    if (((i & mask) != 0) == bit) p += std::norm(amps[i]);
  return p;
}

inline Selection post_select(StateVector state, Qubit qubit, bool bit) {
  const double p = probability_of(state, qubit, bit);
  if (p < kSelectionFloor)
    throw PreconditionError("post-selection on qubit " + std::to_string(qubit) + "=" + (bit ? "1" : "0") +
                            " has probability " + std::to_string(p));
  const std::uint64_t mask = std::uint64_t{1} << qubit;
  const double scale = 1.0 / std::sqrt(p);
  auto amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (((i & mask) != 0) == bit)
      amps[i] *= scale;
    else
      amps[i] = Amplitude{};
  }
  return Selection{p, std::move(state)};
}

struct SupportEntry {
  std::uint64_t index = 0;
  Amplitude amplitude;
};

inline std::vector<SupportEntry> support(const StateVector& state, double tol = kSupportTolerance) {
  std::vector<SupportEntry> out;
  const auto amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i)
    if (std::abs(amps[i]) > tol) out.push_back(SupportEntry{i, amps[i]});
  return out;
}

// Register bits of a basis index, ket order (highest subscript first).
inline std::vector<bool> read_register(std::uint64_t index, const circuit::Register& reg) {
  std::vector<bool> out;
  for (auto it = reg.qubits.rbegin(); it != reg.qubits.rend(); ++it) out.push_back(((index >> *it) & 1U) != 0);
  return out;
}

inline std::vector<bool> read_register(const SupportEntry& entry, const circuit::RegisterLayout& layout,
                                       std::string_view name) {
  return read_register(entry.index, layout.named(name));
}

// Born-rule samples of basis indices.
template <typename Rng>
std::vector<std::uint64_t> sample(const StateVector& state, std::size_t count, Rng& rng) {
  std::vector<std::uint64_t> indices;
  std::vector<double> weights;
  const auto amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    const double w = std::norm(amps[i]);
    if (w > 0) {
      indices.push_back(i);
      weights.push_back(w);
    }
  }
  std::vector<std::uint64_t> out;
  if (indices.empty()) return out;
  std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(indices[dist(rng)]);
  return out;
}

inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

// One line per support entry: "<bitstring> <re> <im>".
inline void dump_state(std::ostream& os, const StateVector& state, double tol = kSupportTolerance) {
  for (const auto& e : support(state, tol))
    os << basis_string(e.index, state.qubit_count()) << ' ' << format_double(e.amplitude.real()) << ' '
       << format_double(e.amplitude.imag()) << '\n';
}

}  // namespace dnaq::sim
