#pragma once

#include <optional>
#include <string>
#include <utility>

namespace vqg::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Result of one command: exit code 0 (all pass), 1 (mathematical failure or insufficient
/// truncation after the retry), 2 (input or schema error), with the text for stdout/stderr.
struct Outcome {
  int exit_code = 0;
  std::string out;
  std::string err;
};

struct RunOptions {
  std::optional<int> truncation;                 // overrides the file
  std::optional<std::pair<int, int>> window;     // explicit [lo, hi) exponent range
  std::string format = "text";                   // text | json
  bool timings = false;                          // adds wall-clock seconds (not deterministic)
  bool use_cache = true;
};

// "a:b" -> (a, b); throws std::invalid_argument.
std::pair<int, int> parse_window(const std::string& text);

Outcome cmd_check(const std::string& file, const std::string& suite, const RunOptions& opt);
Outcome cmd_ope(const std::string& file, const std::string& left, const std::string& right, const RunOptions& opt);
Outcome cmd_dims(const std::string& file, const std::string& sector, int max_weight);
Outcome cmd_report(const std::string& file, const RunOptions& opt);

}  // namespace vqg::cli
