#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vqg {

enum class Status { Pass, Fail, TruncationInsufficient, Skipped };

std::string status_str(Status s);

/// First failing instance of a law, in canonical basis order.
struct Witness {
  std::string check;               // law or sub-check id
  std::vector<std::string> tuple;  // basis states in canonical syntax
  std::vector<int> exponent;       // exponent vector where sides differ (empty if not series)
  std::string lhs;
  std::string rhs;
};

struct Verdict {
  std::string name;
  Status status = Status::Pass;
  std::optional<Witness> witness;
  std::string detail;

  bool passed() const { return status == Status::Pass; }
  static Verdict pass(std::string name, std::string detail = {});
  static Verdict fail(std::string name, Witness w, std::string detail = {});
  static Verdict skipped(std::string name, std::string detail);
  static Verdict truncation(std::string name, std::string detail);
};

// Raised when a computation needs more grade or series budget than it was given.
struct TruncationInsufficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Combines sub-verdicts: the first non-pass status (fail before truncation) decides.
Verdict combine(const std::string& name, const std::vector<Verdict>& parts);

}  // namespace vqg
