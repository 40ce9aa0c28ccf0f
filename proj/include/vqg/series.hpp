#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vqg/scalar.hpp"

namespace vqg {

using Exps = std::vector<int>;

// Window sentinels; arithmetic on them saturates.
constexpr long kNegInf = std::numeric_limits<long>::min() / 4;
constexpr long kPosInf = std::numeric_limits<long>::max() / 4;

/// Per-variable validity: every coefficient with exponent < high is exact,
/// and no exponent below low ever occurs (low = kNegInf means unbounded below).
struct Bound {
  long low = kNegInf;
  long high = kPosInf;
  bool operator==(const Bound&) const = default;
};
using Window = std::vector<Bound>;

struct WindowExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VarMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Sparse multivariate formal Laurent series over a Scalar ring, with a tracked window.
class TruncatedSeries {
public:
  TruncatedSeries() = default;
  // vars are sorted lexicographically; window entries follow the sorted order.
  TruncatedSeries(std::vector<std::string> vars, Window window);

  // Exact finite series: highs are +inf and lows are the smallest occurring exponents.
  static TruncatedSeries polynomial(std::vector<std::string> vars,
                                    const std::vector<std::pair<Exps, Scalar>>& terms);
  static TruncatedSeries monomial(std::vector<std::string> vars, Exps exps, Scalar c = 1);

  const std::vector<std::string>& vars() const { return vars_; }
  const Window& window() const { return window_; }
  const std::map<Exps, Scalar>& terms() const { return terms_; }
  int var_index(const std::string& name) const;

  // Throws WindowExceeded when the exponent is outside the validity window.
  Scalar coeff(const Exps& e) const;
  void add_term(const Exps& e, const Scalar& c);
  bool is_zero() const { return terms_.empty(); }
  bool is_exact() const;

  TruncatedSeries operator-() const;
  TruncatedSeries scaled(const Scalar& c) const;
  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

  TruncatedSeries derive(const std::string& var) const;
  // Lowers highs to those of w (never raises them).
  TruncatedSeries restricted(const Window& w) const;

  // `-1/2*w^3*z^-2` style, terms by ascending exponent vector.
  std::string str() const;

private:
  void check_compatible(const TruncatedSeries& o) const;
  void prune();

  std::vector<std::string> vars_;
  Window window_;
  std::map<Exps, Scalar> terms_;
};

struct SeriesWitness {
  Exps exps;
  Scalar lhs;
  Scalar rhs;
};

// nullopt when equal on the window; otherwise the lexicographically smallest difference.
// Throws WindowExceeded if the window's highs exceed either validity window.
std::optional<SeriesWitness> equal_on_window(const TruncatedSeries& a, const TruncatedSeries& b,
                                             const Window& window);

enum class Direction { WOverZ, ZOverW };

// iota expansion of (z-w)^{-n}; `high` bounds the exponent of the small variable.
TruncatedSeries expand_binomial_inverse(int n, Direction dir, long high,
                                        const std::string& z = "z", const std::string& w = "w");

enum class GroupLaw { Additive, Multiplicative };
enum class Small { First, Second };

// s(z) in one variable -> s(z1 +_g z2). `high` bounds the small variable's exponents.
// Negative exponents in s need `small`.
TruncatedSeries shift_substitute(const TruncatedSeries& s, const std::string& z1,
                                 const std::string& z2, long high, std::optional<Small> small,
                                 GroupLaw law = GroupLaw::Additive);

// Sets var to 0; requires low <= 0 < high for var.
TruncatedSeries substitute_zero(const TruncatedSeries& s, const std::string& var);

// log(1+z) up to and including z^order.
TruncatedSeries log1p_series(const std::string& var, int order);

/// Finite Laurent polynomial in one variable (values of bicharacters and R-matrices).
class Laurent {
public:
  Laurent() = default;
  Laurent(const Scalar& c) { if (!c.is_zero()) c_[0] = c; }
  static Laurent monomial(int e, const Scalar& c = 1);

  const std::map<int, Scalar>& terms() const { return c_; }
  Scalar coeff(int e) const;
  bool is_zero() const { return c_.empty(); }
  bool is_monomial() const { return c_.size() == 1; }
  int low() const;   // requires nonzero
  int high() const;  // largest exponent; requires nonzero

  Laurent operator-() const;
  Laurent& operator+=(const Laurent& o);
  Laurent& operator-=(const Laurent& o);
  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
  friend Laurent operator*(const Laurent& a, const Laurent& b);
  Laurent scaled(const Scalar& s) const;
  bool operator==(const Laurent& o) const { return c_ == o.c_; }

  Laurent derivative() const;
  Laurent reflected() const;  // z -> -z
  TruncatedSeries to_series(const std::string& var) const;
  std::string str(const std::string& var = "z") const;

private:
  void add(int e, const Scalar& c);
  std::map<int, Scalar> c_;
};

// Binomial coefficient C(n, k) for any integer n and k >= 0.
Rational binomial(long n, long k);
Rational factorial(long n);

}  // namespace vqg
