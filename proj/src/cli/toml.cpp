#include "vqg/cli/toml.hpp"

#include <cctype>
#include <vector>

namespace vqg::cli {

namespace {

using nlohmann::json;

class Reader {
public:
  explicit Reader(const std::string& text) : s_(text) {}

  json document() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        table = header(root);
      } else {
        std::vector<std::string> path = key_path();
        skip_ws();
        expect('=');
        skip_ws();
        json v = value();
        assign(*table, path, std::move(v));
      }
      end_of_line();
    }
    return root;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw TomlError("line " + std::to_string(line_) + ": " + what);
  }
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  char get() {
    if (eof()) fail("unexpected end of input");
    char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }
  void skip_ws() {
    while (peek() == ' ' || peek() == '\t') get();
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') get();
  }
  // Whitespace, comments and newlines, as allowed inside arrays.
  void skip_all() {
    while (true) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r')
        get();
      else
        break;
    }
  }
  void skip_blank_lines() { skip_all(); }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (eof()) return;
    if (peek() == '\r') get();
    if (peek() != '\n') fail("expected end of line");
    get();
  }

  std::string bare_or_quoted_key() {
    if (peek() == '"' || peek() == '\'') return string_value();
    std::string k;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-') k += get();
    if (k.empty()) fail("expected a key");
    return k;
  }
  std::vector<std::string> key_path() {
    std::vector<std::string> path{bare_or_quoted_key()};
    skip_ws();
    while (peek() == '.') {
      get();
      skip_ws();
      path.push_back(bare_or_quoted_key());
      skip_ws();
    }
    return path;
  }

  json* header(json& root) {
    expect('[');
    bool array = peek() == '[';
    if (array) get();
    skip_ws();
    std::vector<std::string> path = key_path();
    expect(']');
    if (array) expect(']');
    json* t = &root;
    for (size_t i = 0; i + 1 < path.size(); ++i) t = &descend(*t, path[i]);
    const std::string& last = path.back();
    if (array) {
      json& arr = (*t)[last];
      if (arr.is_null()) arr = json::array();
      if (!arr.is_array()) fail("'" + last + "' is not an array of tables");
      arr.push_back(json::object());
      return &arr.back();
    }
    json& tab = (*t)[last];
    if (tab.is_null()) tab = json::object();
    if (!tab.is_object()) fail("'" + last + "' is not a table");
    return &tab;
  }
  // Into a table or the last element of an array of tables.
  json& descend(json& t, const std::string& k) {
    json& n = t[k];
    if (n.is_null()) n = json::object();
    if (n.is_array() && !n.empty() && n.back().is_object()) return n.back();
    if (!n.is_object()) fail("'" + k + "' is not a table");
    return n;
  }
  void assign(json& table, const std::vector<std::string>& path, json v) {
    json* t = &table;
    for (size_t i = 0; i + 1 < path.size(); ++i) t = &descend(*t, path[i]);
    if (t->contains(path.back())) fail("duplicate key '" + path.back() + "'");
    (*t)[path.back()] = std::move(v);
  }

  std::string string_value() {
    char q = get();
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = get();
      if (c == q) break;
      if (c == '\\' && q == '"') {
        char e = get();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  json value() {
    char c = peek();
    if (c == '"' || c == '\'') return string_value();
    if (c == '[') return array();
    if (c == '{') return inline_table();
    if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return true;
    }
    if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return false;
    }
    if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      if (c == '-' || c == '+') num += get();
      while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_')
        if (get() != '_') num += s_[pos_ - 1];
      if (num.empty() || num == "-" || num == "+") fail("malformed number");
      if (peek() == '.' || peek() == 'e' || peek() == 'E') fail("floating point values are not supported");
      try {
        return std::stoll(num);
      } catch (const std::out_of_range&) {
        fail("integer out of range");
      }
    }
    fail("unsupported value");
  }

  json array() {
    expect('[');
    json out = json::array();
    skip_all();
    while (peek() != ']') {
      out.push_back(value());
      skip_all();
      if (peek() == ',') {
        get();
        skip_all();
      } else if (peek() != ']') {
        fail("expected ',' or ']'");
      }
    }
    get();
    return out;
  }

  json inline_table() {
    expect('{');
    json out = json::object();
    skip_ws();
    while (peek() != '}') {
      std::vector<std::string> path = key_path();
      skip_ws();
      expect('=');
      skip_ws();
      assign(out, path, value());
      skip_ws();
      if (peek() == ',') {
        get();
        skip_ws();
      } else if (peek() != '}') {
        fail("expected ',' or '}'");
      }
    }
    get();
    return out;
  }

  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

nlohmann::json parse_toml(const std::string& text) { return Reader(text).document(); }

}  // namespace vqg::cli
