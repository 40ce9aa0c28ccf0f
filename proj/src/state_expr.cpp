#include <cctype>
#include <variant>

#include "vqg/linalg.hpp"

namespace vqg {

namespace {

class Parser {
public:
  Parser(const std::string& text, const StateContext& ctx) : ctx_(ctx) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
  }

  StateVector run() {
    if (s_.empty()) throw ParseError("empty state expression");
    StateVector v = sum();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("state expression, position " + std::to_string(pos_) + ": " + why);
  }
  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  bool eat(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  long integer() {
    size_t start = pos_;
    if (peek('-') || peek('+')) ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start || !std::isdigit(static_cast<unsigned char>(s_[pos_ - 1]))) fail("expected integer");
    return std::stol(s_.substr(start, pos_ - start));
  }

  StateVector mul(const StateVector& a, const StateVector& b) const {
    if (ctx_.product) return ctx_.product(a, b);
    return lattice_product(a, b);
  }

  StateVector vacuum() const {
    if (ctx_.rank < 0) {
      if (ctx_.lookup) {
        if (auto v = ctx_.lookup("|0>")) return *v;
      }
      return StateVector(BasisKey::unit());
    }
    return StateVector(BasisKey::lattice(std::vector<int>(ctx_.rank, 0)));
  }

  StateVector sum() {
    StateVector total;
    bool first = true;
    while (true) {
      int sign = 1;
      bool had_sign = false;
      while (peek('+') || peek('-')) {
        if (s_[pos_] == '-') sign = -sign;
        ++pos_;
        had_sign = true;
      }
      if (!first && !had_sign) break;
      StateVector t = term();
      total += sign > 0 ? t : -t;
      first = false;
      if (pos_ >= s_.size() || peek(')')) break;
    }
    return total;
  }

  // A term is a product of scalar factors and at most a chain of state factors.
  StateVector term() {
    Scalar coeff(1);
    std::optional<StateVector> state;
    do {
      auto f = factor();
      if (f.index() == 0) {
        coeff *= std::get<0>(f);
      } else {
        auto& v = std::get<1>(f);
        state = state ? mul(*state, v) : v;
      }
    } while (eat('*'));
    if (!state) state = vacuum();
    return state->scaled(coeff);
  }

  std::variant<Scalar, StateVector> factor() {
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/'))
        ++pos_;
      try {
        return Scalar(parse_rational(s_.substr(start, pos_ - start)));
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    }
    if (c == '(') {
      ++pos_;
      StateVector v = sum();
      expect(')');
      return power(v);
    }
    if (s_.compare(pos_, 3, "|0>") == 0) {
      pos_ += 3;
      return vacuum();
    }
    if (ctx_.rank >= 0 && s_.compare(pos_, 2, "e[") == 0) {
      pos_ += 2;
      std::vector<int> lam;
      if (!peek(']')) {
        do lam.push_back(static_cast<int>(integer()));
        while (eat(','));
      }
      expect(']');
      if (static_cast<int>(lam.size()) != ctx_.rank)
        fail("lattice class needs " + std::to_string(ctx_.rank) + " entries");
      return power(StateVector(BasisKey::lattice(lam)));
    }
    if (ctx_.rank >= 0 && s_.compare(pos_, 2, "a[") == 0) {
      pos_ += 2;
      long i = integer();
      expect(',');
      long n = integer();
      expect(']');
      if (i < 1 || i > ctx_.rank) fail("generator index out of range");
      if (n > -1) fail("Heisenberg mode must be negative");
      return power(StateVector(
          BasisKey::lattice(std::vector<int>(ctx_.rank, 0), {{static_cast<int>(i), static_cast<int>(-n)}})));
    }
    if (ctx_.rank >= 0 && s_.compare(pos_, 2, "h[") == 0) {
      pos_ += 2;
      long h = integer();
      expect(']');
      if (h < 0) fail("negative H-label");
      return power(StateVector(BasisKey::lattice(std::vector<int>(ctx_.rank, 0), {}, static_cast<int>(h))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      if (ctx_.lookup) {
        if (auto v = ctx_.lookup(name)) return power(*v);
      }
      if (ctx_.ring && ctx_.ring->index_of(name) >= 0) {
        Scalar p = Scalar::param(ctx_.ring, name);
        if (eat('^')) p = Scalar::param(ctx_.ring, name, static_cast<int>(integer()));
        return p;
      }
      fail("unknown name '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  StateVector power(const StateVector& v) {
    if (!eat('^')) return v;
    long k = integer();
    if (k < 0) fail("negative power of a state");
    StateVector r = vacuum();
    for (long i = 0; i < k; ++i) r = mul(r, v);
    return r;
  }

  std::string s_;
  size_t pos_ = 0;
  const StateContext& ctx_;
};

}  // namespace

StateVector parse_state(const std::string& text, const StateContext& ctx) {
  return Parser(text, ctx).run();
}

}  // namespace vqg
