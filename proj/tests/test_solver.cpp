#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dnaq/solver.hpp"
#include "support/oracles.hpp"
#include "support/random_formula.hpp"

using namespace dnaq;
using solver::Engine;

TEST_CASE("quantum engine on the three-clause example", "[solver]") {
  const auto r = solver::solve(cnf::example_formula(), Engine::Quantum);
  REQUIRE(r.solutions.size() == 1);
  CHECK(r.solutions[0].to_string() == "u2=0 u1=1");
  REQUIRE(r.selection_probability);
  CHECK(*r.selection_probability == Catch::Approx(0.25).margin(1e-12));
  REQUIRE(r.census);
  CHECK(r.census->qubits == 11);
  CHECK(r.census->h == 2);
  CHECK(r.n == 2);
  CHECK(r.m == 3);
}

TEST_CASE("quantum engine on the single-variable formula", "[solver]") {
  const auto r = solver::solve(cnf::single_variable_formula(), Engine::Quantum);
  CHECK(r.solutions == cnf::SolutionSet{cnf::Assignment{{true}}});
  CHECK(*r.selection_probability == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("contradiction is UNSAT on every engine", "[solver]") {
  const cnf::Formula f(1, {cnf::Clause{{{1, false}}}, cnf::Clause{{{1, true}}}});
  for (auto e : {Engine::Quantum, Engine::Dna, Engine::Brute}) {
    const auto r = solver::solve(f, e);
    CHECK(r.solutions.empty());
    CHECK_FALSE(r.satisfiable());
    CHECK(r.selection_probability.has_value() == (e == Engine::Quantum));
    if (e == Engine::Quantum) CHECK(*r.selection_probability == 0.0);
  }
  CHECK(solver::cross_check(f).agree);
}

TEST_CASE("only the quantum engine reports census and probability", "[solver]") {
  const auto f = cnf::example_formula();
  for (auto e : {Engine::Dna, Engine::Brute}) {
    const auto r = solver::solve(f, e);
    CHECK_FALSE(r.census);
    CHECK_FALSE(r.selection_probability);
    CHECK(r.solutions.size() == 1);
  }
}

TEST_CASE("guard errors name the engine", "[solver]") {
  const cnf::Formula f(9, {cnf::Clause{{{1, false}}}});
  CHECK_THROWS_WITH(solver::solve(f, Engine::Quantum), Catch::Matchers::StartsWith("quantum engine:"));
  CHECK_THROWS_AS(solver::solve(f, Engine::Quantum, {27, nullptr}), GuardExceeded);  // 29 qubits
  CHECK(solver::solve(f, Engine::Dna).solutions.size() == 256);
  const cnf::Formula wide(21, {cnf::Clause{{{1, false}}}});
  CHECK_THROWS_WITH(solver::solve(wide, Engine::Dna), Catch::Matchers::StartsWith("dna engine:"));
}

TEST_CASE("dna engine can record its trace", "[solver]") {
  dna::Lab lab;
  const auto r = solver::solve(cnf::example_formula(), Engine::Dna, {26, &lab});
  CHECK(r.solutions.size() == 1);
  CHECK(lab.trace().front().op == "LOAD");
  CHECK(std::any_of(lab.trace().begin(), lab.trace().end(), [](const auto& e) { return e.op == "EXTRACT"; }));
  CHECK(std::any_of(lab.trace().begin(), lab.trace().end(), [](const auto& e) { return e.op == "READ"; }));
}

TEST_CASE("engines agree and probability is |S|/2^n", "[solver][property]") {
  std::mt19937_64 rng(90210);
  for (int trial = 0; trial < 60; ++trial) {
    const auto f = testing::random_formula(rng, 5, 8);
    const auto cc = solver::cross_check(f);
    INFO(cnf::format_dimacs(f));
    REQUIRE(cc.agree);
    const double expected = static_cast<double>(cc.brute.solutions.size()) /
                            static_cast<double>(std::uint64_t{1} << f.variable_count());
    REQUIRE(std::abs(*cc.quantum.selection_probability - expected) < 1e-10);
  }
}

TEST_CASE("cross_check lists symmetric differences", "[solver]") {
  // exercise the diff helper directly with a fabricated disagreement
  std::vector<std::string> out;
  const cnf::SolutionSet a{cnf::Assignment{{true}}};
  const cnf::SolutionSet b{cnf::Assignment{{false}}};
  solver::detail::diff(a, b, "brute", "quantum", out);
  solver::detail::diff(b, a, "quantum", "brute", out);
  CHECK(out == std::vector<std::string>{"brute has {u1=1}, quantum does not", "quantum has {u1=0}, brute does not"});
}

TEST_CASE("reports serialize and re-parse losslessly", "[solver]") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = testing::random_formula(rng, 4, 6);
    for (auto e : {Engine::Quantum, Engine::Dna, Engine::Brute}) {
      const auto r = solver::solve(f, e);
      const auto text = solver::to_json(r).dump();
      CHECK(solver::report_from_json(nlohmann::json::parse(text)) == r);
    }
  }
}

TEST_CASE("JSON field layout", "[solver]") {
  auto r = solver::solve(cnf::example_formula(), Engine::Quantum);
  r.elapsed_ms = 1.5;
  const auto j = solver::to_json(r);
  CHECK(j.at("engine") == "quantum");
  CHECK(j.at("solutions") == nlohmann::json::parse("[[1,0]]"));
  CHECK(j.at("census") == nlohmann::json::parse(R"({"H":2,"X":14,"CNOT":32,"TOFFOLI":7,"PHASE":0,"qubits":11})"));
  CHECK(j.at("selection_probability").get<double>() == Catch::Approx(0.25).epsilon(0).margin(1e-12));
  CHECK(j.at("elapsed_ms") == 1.5);

  const auto b = solver::to_json(solver::solve(cnf::example_formula(), Engine::Brute));
  CHECK(b.at("census").is_null());
  CHECK(b.at("selection_probability").is_null());

  CHECK_THROWS_AS(solver::report_from_json(nlohmann::json::parse(R"({"engine":"quantum"})")), InputError);
  CHECK_THROWS_AS(solver::parse_engine("grover"), InputError);
}
