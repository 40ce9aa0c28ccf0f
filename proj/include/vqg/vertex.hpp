#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vqg/linalg.hpp"
#include "vqg/series.hpp"
#include "vqg/verdict.hpp"

namespace vqg {

/// Vector-valued Laurent data: exponent -> coefficient. Holds every coefficient below the
/// `high` it was computed for; exponents not listed are zero.
using VSeries = std::map<int, StateVector>;

/// Coordinate of the group law: u(z) with u(0) = 0, u'(0) = 1.
struct GroupLawConfig {
  GroupLaw law = GroupLaw::Additive;
  // Coefficients of u(z) = sum_{k>=1} u[k-1] z^k; missing tail means zero.
  std::vector<Rational> u{Rational(1)};

  static GroupLawConfig additive();
  static GroupLawConfig multiplicative(int order);  // u = log(1+z) up to z^order
  Rational u_coeff(int k) const;                      // coefficient of z^k
};

/// Pairing evaluated as a Laurent polynomial in one variable z = z1 - z2.
struct VertexRMatrix {
  std::string name;
  std::function<Laurent(const BasisKey&, const BasisKey&)> eval;
};

VertexRMatrix trivial_vertex_rmatrix(std::function<Scalar(const BasisKey&)> counit);

struct VertexEngine {
  std::string name;
  StateVector vacuum;
  std::function<StateVector(const StateVector&)> T;
  // Y(a,z)b for basis keys: every coefficient of z^n with n < high.
  std::function<VSeries(const BasisKey&, const BasisKey&, int high)> Y;
  // Set by `memoized`: the cached series itself, which may run past `high`. Wrappers that
  // replace Y must reset it.
  std::function<std::shared_ptr<const VSeries>(const BasisKey&, const BasisKey&, int high)> Y_cached;
  std::function<int(const BasisKey&, const BasisKey&)> pole_bound;
  // Test basis of the truncated space: all keys of weight <= max_weight.
  std::function<std::vector<BasisKey>(int max_weight)> states;
  // Coproduct on basis keys, needed by the braided checks.
  std::function<StateVector(const BasisKey&)> delta;
  std::function<Scalar(const BasisKey&)> counit;
  GroupLawConfig group_law;
  KeyNames names;
  StateContext context;
};

// Bilinear extension of Y to vectors.
VSeries apply_Y(const VertexEngine& e, const StateVector& a, const StateVector& b, int high);
int pole_bound(const VertexEngine& e, const StateVector& a, const StateVector& b);

// Memoizes Y by (a, b) keeping the largest `high` computed so far.
VertexEngine memoized(VertexEngine e);

// Y(a, z) b = (e^{zT} a) . b for a commutative algebra with derivation T.
VertexEngine holomorphic_engine(std::string name, StateVector unit,
                                std::function<StateVector(const StateVector&, const StateVector&)> product,
                                std::function<StateVector(const StateVector&)> T,
                                std::function<std::vector<BasisKey>(int)> states);
// k[x] with T = d/dx; states of degree <= max_weight.
VertexEngine polynomial_engine();

// Multiplicative coordinate: Y_m(a, z) b = Y(a, u(z)) b with u = log(1+z) to `order`.
VertexEngine multiplicative_view(const VertexEngine& e, int order);
// Same change of coordinates with an arbitrary u (test hook).
VertexEngine coordinate_view(const VertexEngine& e, GroupLawConfig g);

/// Exponent windows for the checks. Without an explicit range a check uses
/// [pole, pole + degree] (one variable) or the triangle of total degree `degree` above the
/// lower bounds (two variables).
struct CheckWindow {
  std::optional<std::pair<int, int>> range;  // [lo, hi)
  int degree = 6;
};

struct Tuple3 {
  BasisKey a, b, c;
};

Verdict check_vacuum(const VertexEngine& e, const std::vector<BasisKey>& states, int degree = 4);
Verdict check_translation(const VertexEngine& e, const std::vector<BasisKey>& states, CheckWindow w = {});
Verdict check_skew_commutativity(const VertexEngine& e, const BasisKey& a, const BasisKey& b,
                                 CheckWindow w = {});
Verdict check_braided_skew_commutativity(const VertexEngine& e, const VertexRMatrix& s, const BasisKey& a,
                                         const BasisKey& b, CheckWindow w = {});
Verdict check_weak_associativity(const VertexEngine& e, const BasisKey& a, const BasisKey& b,
                                 const BasisKey& c, CheckWindow w = {});
// Skew commutativity in the s-coordinate together with the s1 s2 associativity substitution.
Verdict check_multiplicative_axioms(const VertexEngine& e, const BasisKey& a, const BasisKey& b,
                                    CheckWindow w = {});
// Delta Y = (Y (x) Y) sigma_23 (Delta (x) Delta), grouplike vacuum, T a coderivation, counit laws.
Verdict check_coproduct_compatibility(const VertexEngine& e, const std::vector<BasisKey>& states,
                                      CheckWindow w = {});

// Loops over all pairs / triples of `states` with the least-witness rule.
Verdict check_skew_all(const VertexEngine& e, const std::vector<BasisKey>& states, CheckWindow w = {});
Verdict check_braided_skew_all(const VertexEngine& e, const VertexRMatrix& s,
                               const std::vector<BasisKey>& states, CheckWindow w = {});
Verdict check_associativity_all(const VertexEngine& e, const std::vector<BasisKey>& states,
                                CheckWindow w = {});
Verdict check_multiplicative_all(const VertexEngine& e, const std::vector<BasisKey>& states,
                                 CheckWindow w = {});

// Suites over a state set.
Verdict run_commutative_suite(const VertexEngine& e, const std::vector<BasisKey>& states, CheckWindow w = {});
Verdict run_associative_suite(const VertexEngine& e, const std::vector<BasisKey>& states, CheckWindow w = {});
Verdict run_braided_suite(const VertexEngine& e, const VertexRMatrix& s, const std::vector<BasisKey>& states,
                          CheckWindow w = {});

// Renders Y(a,z)b over [lo, hi) as `c*z^n*state + ...`.
std::string render_ope(const VSeries& s, int lo, int hi, const KeyNames& names);

}  // namespace vqg
