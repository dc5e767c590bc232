#pragma once

// JSON problem files. Keys: n, Q0, q0, Q1, q1, A, a, B, b; absent keys are
// empty blocks. Symmetric blocks are symmetrized on load and rejected when
// their asymmetry exceeds 1e-8 (relative).

#include <string>

#include "etr/certify.h"
#include "etr/model.h"

namespace etr {

ETRProblem ParseProblem(const std::string& text);
ETRProblem LoadProblem(const std::string& path);

// Round-trips exactly through ParseProblem; doubles use the shortest
// representation that reads back to the same value.
std::string DumpProblem(const ETRProblem& p);

// A point file is either a bare array or {"x": [...]}; a multiplier file is
// {"u": [u1, u2, u3], "v": [...]} with v optional.
Vector ParsePoint(const std::string& text);
Multipliers ParseMultipliers(const std::string& text);

std::string ReadFile(const std::string& path);

}  // namespace etr
