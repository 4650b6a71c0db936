#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace qmc {

struct InvariantResult {
  std::string suite;
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  double worst = 0.0;  // largest violation seen (0 when every check passed)
};

struct VerifyReport {
  std::vector<InvariantResult> results;
  bool ok() const;
  void print(std::ostream& out) const;
};

// Suites: "entropy", "classical", "markov", "optimizer" or "all".
bool is_known_suite(const std::string& suite);
VerifyReport run_verify(const std::string& suite, std::uint64_t seed);

}  // namespace qmc
