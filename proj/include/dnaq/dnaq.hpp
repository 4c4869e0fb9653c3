#pragma once

#include "dnaq/error.hpp"
#include "dnaq/cnf.hpp"
#include "dnaq/dna.hpp"
#include "dnaq/circuit.hpp"
#include "dnaq/sim.hpp"
#include "dnaq/solver.hpp"
