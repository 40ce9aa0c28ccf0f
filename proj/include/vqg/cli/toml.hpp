#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>

namespace vqg::cli {

struct TomlError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads the TOML subset used by definition files into a JSON object:
/// comments, [table] / [a.b] headers, [[array]] tables, bare or quoted keys, basic and
/// literal strings, integers, booleans, (multi-line) arrays and inline tables.
/// Throws TomlError with the line number on anything else.
nlohmann::json parse_toml(const std::string& text);

}  // namespace vqg::cli
