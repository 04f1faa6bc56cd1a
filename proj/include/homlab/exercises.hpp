#pragma once

// Verification suites addressable by exercise id, their reports, and the
// tables behind the CLI's emit command.

#include "homlab/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace homlab {

struct Check {
  std::string name;
  std::string expected;
  std::string got;
  bool pass() const { return expected == got; }
};

struct Report {
  std::string id;
  std::string algebra;
  std::uint32_t prime = 0;
  std::vector<Check> checks;
  bool pass() const;
};
Json report_to_json(const Report& r);

struct ExerciseOptions {
  std::uint32_t prime = 101;
  std::uint64_t seed = 0;
  int window_lo = -6;
  int window_hi = 6;
  int cap = 12;
};

/// Prime used where modules are enumerated: 3 when requested, otherwise 2.
std::uint32_t classification_prime(std::uint32_t requested);

std::vector<std::string> exercise_ids();
/// Throws std::invalid_argument listing the ids when `id` is unknown.
Report run_exercise(const std::string& id, const ExerciseOptions& opts);

/// dim Ext^n(x, y) for all classified indecomposables x, y and 0 <= n <= max_degree.
std::vector<TableRow> ext_table(const AlgPtr& alg, int max_degree, int cap);

/// The tilting module for a target algebra: B for lambda2, C for lambda3,
/// the regular module for lambda1; all over lambda1 at the target's prime.
Module tilting_module_for(const std::string& target, std::uint32_t prime);

}  // namespace homlab
