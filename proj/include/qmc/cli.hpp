#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qmc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNotConverged = 3;

// Runs one command line (without the program name). Verbs: cmi, delta, classical, ep,
// family, scan, verify.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Fixed-point with 12 decimals; magnitudes below 5e-13 print as zero.
std::string format_number(double v);
// Shortest round-trip representation, locale independent.
std::string format_csv_number(double v);

}  // namespace qmc
