#pragma once

#include <gmpxx.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vqg {

using Rational = mpq_class;

// Parses "p", "-p", "p/q" into a reduced rational; throws std::invalid_argument.
Rational parse_rational(const std::string& text);
std::string rational_str(const Rational& q);

/// Coefficient ring: Laurent polynomials over Q in a fixed, ordered list of parameters.
/// The parameter-free ring is Q itself.
class Ring {
public:
  explicit Ring(std::vector<std::string> params);

  const std::vector<std::string>& params() const { return params_; }
  int index_of(const std::string& name) const;  // -1 when absent
  bool operator==(const Ring& other) const { return params_ == other.params_; }

private:
  std::vector<std::string> params_;
};

using RingPtr = std::shared_ptr<const Ring>;

// Parameter names are sorted; duplicates are rejected.
RingPtr make_ring(std::vector<std::string> params);

struct RingMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact scalar: a finite Laurent polynomial over Q in the parameters of its ring.
/// A scalar without a ring is a plain rational and combines with any ring.
class Scalar {
public:
  using Monomial = std::vector<int>;
  using Term = std::pair<Monomial, Rational>;

  Scalar() = default;
  Scalar(long v) : Scalar(Rational(v)) {}
  Scalar(int v) : Scalar(Rational(v)) {}
  Scalar(const Rational& q);

  static Scalar param(const RingPtr& ring, const std::string& name, int exponent = 1);
  static Scalar monomial(const RingPtr& ring, Monomial exps, const Rational& coeff);
  // Accepts sums of terms like "3/2", "t", "-2*t^2*q^-1", "1/2*tau".
  static Scalar parse(const std::string& text, const RingPtr& ring);

  const RingPtr& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  Rational rational() const;  // throws std::domain_error if not a constant
  bool is_one() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Rational& q);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Rational& q) { return a /= q; }
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  // Canonical text: terms by ascending exponent vector, reduced fractions.
  std::string str() const;
  // Same as str() but wrapped in parentheses when there is more than one term.
  std::string factor_str() const;

private:
  void normalize();
  void adopt_ring(const RingPtr& other);

  RingPtr ring_;
  std::vector<Term> terms_;
};

RingPtr common_ring(const RingPtr& a, const RingPtr& b);

}  // namespace vqg
