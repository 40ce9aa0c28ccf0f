#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "vqg/linalg.hpp"
#include "vqg/verdict.hpp"

namespace vqg {

/// Finite-dimensional bialgebra on the basis Index(0..n-1), given by structure constants.
class FinBialgebra {
public:
  using Triple = std::tuple<int, int, int, Scalar>;  // (i, j, k, c): e_i * e_j has c on e_k

  FinBialgebra(std::vector<std::string> names, RingPtr ring, const std::vector<Triple>& product,
               const std::vector<Triple>& coproduct, std::vector<Scalar> counit, StateVector unit);

  size_t dim() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const RingPtr& ring() const { return ring_; }
  std::vector<BasisKey> basis() const;
  const StateVector& unit() const { return unit_; }
  KeyNames key_names() const;
  StateContext context() const;  // parses names, "|0>" as the unit, ring parameters

  StateVector mul(const StateVector& a, const StateVector& b) const;
  // Leg-wise product of two n-fold tensors.
  StateVector mul_legs(const StateVector& x, const StateVector& y) const;
  StateVector delta(const StateVector& a) const;
  Scalar eps(const StateVector& a) const;
  // Apply the coproduct / counit to one leg of an n-fold tensor.
  StateVector delta_leg(const StateVector& x, size_t leg) const;
  StateVector eps_leg(const StateVector& x, size_t leg) const;
  StateVector unit_tensor(size_t n) const;
  // Places the legs of a two-fold element at positions (i, j) of an n-fold tensor.
  StateVector embed(const StateVector& r, size_t n, size_t i, size_t j) const;

  LinearMap product_map() const;    // A (x) A -> A on basis pairs
  LinearMap coproduct_map() const;  // A -> A (x) A
  LinearMap counit_map() const;     // A -> k (the empty tensor key)

  // Mutation hooks used by tests of the checkers.
  void set_coproduct(int i, StateVector v) { delta_[i] = std::move(v); }
  void set_product(int i, int j, StateVector v) { prod_[{i, j}] = std::move(v); }

private:
  std::vector<std::string> names_;
  RingPtr ring_;
  std::map<std::pair<int, int>, StateVector> prod_;
  std::map<int, StateVector> delta_;
  std::vector<Scalar> counit_;
  StateVector unit_;
};

FinBialgebra function_algebra_z2();              // O(Z/2), idempotents e0, e1
FinBialgebra dual_numbers(const RingPtr& ring);  // k[x]/(x^2), x primitive; basis 1, x
// k[x,y]/(x^2,y^2,xy) with x, y primitive. Only the algebra is used (not a bialgebra).
FinBialgebra square_zero_xy(const RingPtr& ring);

StateVector sign_rmatrix_literal(const FinBialgebra& a);  // (e0 - e1) (x) (e0 - e1)
StateVector sign_rmatrix(const FinBialgebra& a);          // sum (-1)^{ab} e_a (x) e_b
StateVector trivial_rmatrix(const FinBialgebra& a);       // 1 (x) 1

Verdict check_bialgebra(const FinBialgebra& a);
Verdict check_rmatrix(const FinBialgebra& a, const StateVector& r);
Verdict check_yang_baxter(const FinBialgebra& a, const StateVector& r);
// Conjugation form sigma(Delta(a)) = R Delta(a) R^{-1} using an explicit inverse.
Verdict check_almost_cocommutativity_conjugate(const FinBialgebra& a, const StateVector& r,
                                               const StateVector& r_inv);

struct SymmetryFlags {
  bool naive_symmetric = false;
  bool unitary = false;
};
SymmetryFlags check_symmetric_rmatrix(const FinBialgebra& a, const StateVector& r);

// Two-sided inverse of an element of A (x) A, when it can be found exactly:
// unipotent elements by a terminating Neumann series, otherwise Gaussian elimination
// when all structure constants are rational.
std::optional<StateVector> invert_tensor(const FinBialgebra& a, const StateVector& r);

struct TwistResult {
  Verdict precondition;
  LinearMap delta_r;  // a -> R * Delta(a)
  Verdict certificate;
};
TwistResult borcherds_twist(const FinBialgebra& a, const StateVector& r);

Verdict check_twist_compatible(const FinBialgebra& a, const StateVector& r, const StateVector& s);

/// A second product on the carrier of A, with its unit.
struct BorcherdsProduct {
  std::map<std::pair<int, int>, StateVector> table;
  StateVector unit;
  StateVector mul(const StateVector& a, const StateVector& b) const;
};
BorcherdsProduct borcherds_product_from(const FinBialgebra& a);  // m2 = m
BorcherdsProduct z2_convolution_product();                       // e_a * e_b = e_{a+b}
// Associativity, unit, A-linearity m2(Delta(a) w) = a m2(w), then the excess-intersection square.
Verdict check_borcherds_product(const FinBialgebra& a, const StateVector& r,
                                const BorcherdsProduct& m2);
// The excess-intersection square alone; with R = 1 (x) 1 and m2 = m it is bialgebra compatibility.
Verdict check_excess_intersection(const FinBialgebra& a, const StateVector& r,
                                  const BorcherdsProduct& m2);

/// Op-R-matrix given as a functional r(e_i, e_j).
using Functional = std::map<std::pair<int, int>, Scalar>;
Scalar eval_functional(const Functional& f, const BasisKey& x, const BasisKey& y);
Verdict check_op_rmatrix(const FinBialgebra& h, const Functional& r);
Functional sign_op_rmatrix();  // on O(Z/2): r(e_a, e_b) = (-1)^{ab} / 2

}  // namespace vqg
