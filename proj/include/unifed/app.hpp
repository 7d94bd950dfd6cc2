#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "unifed/glm.hpp"

namespace unifed::app {

// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;

// Parse and run one command; args exclude the program name.  All I/O goes
// through the supplied streams, so the whole surface is testable in
// process.
int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

// Fixed-point rendering helpers; locale-independent, so equal inputs give
// byte-equal output everywhere.
std::string format_fixed(double value, int decimals);
std::string format_full(double value);

// Deviance lines show five significant digits but never truncate the
// integer part.
std::string format_deviance(double value);

std::string significance_stars(double p);

// R-style coefficient table with significance stars, dispersion note, and
// deviance lines.
std::string render_summary(const glm::FitResult& fit);

}  // namespace unifed::app
