#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace icps::verify {

// Seed used when the caller does not supply one; fixed so default runs are
// reproducible bit for bit on a given platform.
inline constexpr std::uint64_t kDefaultSeed = 987654321ULL;

struct SuiteResult {
  std::string name;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string worst_case;  // parameters of the worst sample, for reproduction
};

struct Options {
  std::uint64_t seed = kDefaultSeed;
  int max_cutoff = 40;       // largest M swept by the residual suite
  bool with_oracle = false;  // include the dense-diagonalization comparison
  std::map<std::string, double> tolerance_overrides;
};

// Default tolerance per suite name; throws std::invalid_argument for an
// unknown name (used to validate --tol overrides).
double default_tolerance(const std::string& suite);
const std::vector<std::string>& suite_names();

// Runs every randomized invariant suite and returns one result per suite.
std::vector<SuiteResult> run_suites(const Options& options);

}  // namespace icps::verify
