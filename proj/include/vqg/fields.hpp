#pragma once

#include <functional>
#include <vector>

#include "vqg/vertex.hpp"

namespace vqg {

/// alpha(z) = sum_n alpha_n z^{-n-1}, evaluated key by key.
struct Field {
  // Lower bound on the z-exponents of alpha(z) b.
  std::function<int(const BasisKey&)> low;
  // Coefficient of z^k in alpha(z) b.
  std::function<StateVector(const BasisKey&, int k)> coeff;
};

int field_low(const Field& f, const StateVector& b);  // 0 for the zero vector
StateVector field_coeff(const Field& f, const StateVector& b, int k);
// alpha_n b, the coefficient of z^{-n-1}.
StateVector apply_mode(const Field& f, int n, const StateVector& b);
// alpha_n as a matrix on `basis`.
LinearMap mode(const Field& f, int n, const std::vector<BasisKey>& basis);

Field engine_field(const VertexEngine& e, const StateVector& a);
Field identity_field();
Field derivative(const Field& f);
Field scaled(const Field& f, const Scalar& c);
Field sum(const Field& f, const Field& g);
enum class NormalOrder {
  Literal,   // :alpha_n beta_m: = alpha_n beta_m for m > 0, beta_m alpha_n for m <= 0
  Creation,  // alpha_n beta_m for n < 0, beta_m alpha_n for n >= 0
};
Field normally_ordered(const Field& alpha, const Field& beta, NormalOrder split = NormalOrder::Literal);

// (z-w)^N [alpha(z) beta(w) - beta(w) alpha(z)] c = 0 for every c in `states`.
Verdict check_locality(const Field& alpha, const Field& beta, int N, const std::vector<BasisKey>& states,
                       int degree = 6);
// One term s(w - z) beta'(w) alpha'(z) of a twisted commutator.
struct BraidedTerm {
  Laurent s;
  Field alpha, beta;
};
// (z-w)^N [alpha(z) beta(w) - sum s_i(w - z) beta_i(w) alpha_i(z)] c = 0, s_i expanded with |z| < |w|.
Verdict check_braided_locality(const Field& alpha, const Field& beta, const std::vector<BraidedTerm>& twist, int N,
                               const std::vector<BasisKey>& states, int degree = 6);
// Same with Y(b, w) Y(a, z) c replaced by sum S(b1, a1)(w - z) Y(b2, w) Y(a2, z) c, |z| < |w|.
Verdict check_braided_locality(const VertexEngine& e, const VertexRMatrix& s, const BasisKey& a,
                               const BasisKey& b, int N, const std::vector<BasisKey>& states, int degree = 6);

// All pairs of `states` with N = max(0, -pole bound of Y(a,z)b); optional S twist.
Verdict check_locality_all(const VertexEngine& e, const std::vector<BasisKey>& states, int degree = 6,
                           const VertexRMatrix* s = nullptr);

}  // namespace vqg
