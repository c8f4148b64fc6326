#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "cslab/geometry.hpp"
#include "cslab/rng.hpp"

namespace cslab {

// Unit cube cut by `cuts` random halfspaces, each keeping the centre with margin.
Polytope random_clipped_cube(int d, int cuts, Rng& rng);

struct VerifyCase {
  std::string suite;
  std::string id;
  bool pass = false;
  double margin = 0.0;
  double slack = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCase> cases;
  long failures() const;
  bool ok() const { return failures() == 0; }
};

const std::vector<std::string>& verify_suites();  // without "all"

// suite: steiner | isoperimetric | cone | cylinder | valuation | splits | all.
// count: random polytopes per suite (the Steiner suite uses count / 5, at least 1).
VerifyReport verify(const std::string& suite, std::uint64_t seed, int count = 100);

void print_report(const VerifyReport& r, std::ostream& os, bool only_failures = false);

}  // namespace cslab
