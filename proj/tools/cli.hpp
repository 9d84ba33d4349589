#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace epibvp::cli {

/// Exit statuses of the command-line front end.
enum Exit : int {
  kOk = 0,
  kConfigError = 1,
  kNoRealRoot = 2,
  kBracketFailure = 3,
  kNumericalFailure = 4,
};

/// Runs one command line (args[0] is the program name). Diagnostics go to
/// `err`, a short summary of written artifacts to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "1,2,3" or "start:step:stop" (inclusive).
std::vector<double> parse_lambda_list(const std::string& text);

/// Parses "a..b" into `samples` evenly spaced values, or a single value / list.
std::vector<double> parse_k_range(const std::string& text, int samples);

}  // namespace epibvp::cli
