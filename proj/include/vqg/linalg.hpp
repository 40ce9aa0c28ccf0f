#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vqg/scalar.hpp"

namespace vqg {

/// Basis element of a state space.
///  - Index:   abstract basis vector of a finite space
///  - Lattice: e^lambda times a Heisenberg monomial, optionally carrying an H-label
///  - Poly:    monomial x^exps of a polynomial algebra
///  - Tensor:  pure tensor of basis keys (flat; the empty tensor is the ground field)
struct BasisKey {
  enum class Kind : unsigned char { Index, Lattice, Poly, Tensor };
  using Mode = std::pair<int, int>;  // (generator i >= 1, mode n >= 1) for a_{i,-n}

  Kind kind = Kind::Index;
  int label = -1;
  std::vector<int> lambda;
  std::vector<Mode> modes;
  std::vector<BasisKey> factors;
  int wt = 0;  // cached weight, filled in by the factories

  static BasisKey index(int i);
  static BasisKey lattice(std::vector<int> lambda, std::vector<Mode> modes = {}, int label = -1);
  static BasisKey poly(std::vector<int> exps);
  static BasisKey tensor(const std::vector<BasisKey>& parts);  // flattens; one part -> itself
  static BasisKey unit() { return tensor({}); }

  int weight() const { return wt; }  // Heisenberg weight / polynomial degree
  std::vector<int> grade() const;  // lattice: (lambda, weight); poly: (degree); index: (0)
  size_t arity() const { return kind == Kind::Tensor ? factors.size() : 1; }
  const BasisKey& leg(size_t i) const;

  friend bool operator<(const BasisKey& a, const BasisKey& b);
  friend bool operator==(const BasisKey& a, const BasisKey& b);
};

// Canonical multiset order for Heisenberg monomials: generator ascending, mode descending.
void sort_modes(std::vector<BasisKey::Mode>& modes);

struct KeyNames {
  std::vector<std::string> index_names;  // default "b<i>"
  std::vector<std::string> poly_vars;    // default "x<i+1>", or "x" for one variable
};

std::string key_str(const BasisKey& k, const KeyNames& names = {});

/// Sparse vector: no stored zeros.
class StateVector {
public:
  StateVector() = default;
  StateVector(const BasisKey& k, const Scalar& c = 1) { add(k, c); }

  const std::map<BasisKey, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Scalar coeff(const BasisKey& k) const;
  void add(const BasisKey& k, const Scalar& c);
  // *this += c * o
  void add_scaled(const StateVector& o, const Scalar& c);

  StateVector& operator+=(const StateVector& o);
  StateVector& operator-=(const StateVector& o);
  StateVector operator-() const { return scaled(Scalar(-1)); }
  StateVector scaled(const Scalar& c) const;
  friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
  friend StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
  bool operator==(const StateVector& o) const { return terms_ == o.terms_; }

  std::string str(const KeyNames& names = {}) const;

private:
  std::map<BasisKey, Scalar> terms_;
};

StateVector tensor(const StateVector& v, const StateVector& w);
StateVector tensor(const std::vector<StateVector>& parts);
// Transposes the two legs of every key; throws std::invalid_argument on non-binary keys.
StateVector swap(const StateVector& v);
// Applies a leg permutation: result leg i is input leg perm[i].
StateVector permute_legs(const StateVector& v, const std::vector<size_t>& perm);

struct DomainMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Linear map given by explicit columns on a finite domain basis.
class LinearMap {
public:
  LinearMap() = default;
  explicit LinearMap(std::map<BasisKey, StateVector> cols) : cols_(std::move(cols)) {}

  static LinearMap identity(const std::vector<BasisKey>& basis);
  static LinearMap zero(const std::vector<BasisKey>& basis);
  static LinearMap from_function(const std::vector<BasisKey>& basis,
                                 const std::function<StateVector(const BasisKey&)>& f);

  const std::map<BasisKey, StateVector>& columns() const { return cols_; }
  std::vector<BasisKey> domain() const;
  bool has(const BasisKey& k) const { return cols_.count(k) > 0; }
  const StateVector& column(const BasisKey& k) const;
  void set_column(const BasisKey& k, StateVector v) { cols_[k] = std::move(v); }

  StateVector apply(const StateVector& v) const;
  StateVector operator()(const StateVector& v) const { return apply(v); }

  bool operator==(const LinearMap& o) const { return cols_ == o.cols_; }

private:
  std::map<BasisKey, StateVector> cols_;
};

LinearMap compose(const LinearMap& f, const LinearMap& g);  // f after g
LinearMap add_maps(const LinearMap& f, const LinearMap& g);
LinearMap scale_map(const Scalar& c, const LinearMap& f);
// f tensor g on pure tensors of the domains' keys.
StateVector apply_tensor(const LinearMap& f, const LinearMap& g, const StateVector& v);

/// A graded space with a finite, deterministic basis in every grade.
struct GradedSpace {
  std::string name;
  std::function<std::vector<BasisKey>(const std::vector<int>& grade)> enumerate;
};

size_t graded_dimension(const GradedSpace& space, const std::vector<int>& grade);

// Heisenberg monomials of total weight n on `rank` colours, canonical order.
std::vector<std::vector<BasisKey::Mode>> heisenberg_monomials(int rank, int weight);
// Grade = (lambda_1..lambda_r, weight).
GradedSpace fock_space(int rank);
// Basis of sector lambda with weights <= max_weight.
std::vector<BasisKey> fock_basis(const std::vector<int>& lambda, int max_weight, int label = -1);

// Product in k[Lambda] (x) Sym: add classes, merge monomials. Labels must agree or be absent.
BasisKey lattice_product(const BasisKey& a, const BasisKey& b);

/// Context for the state-expression grammar.
struct StateContext {
  int rank = -1;  // lattice rank for e[...] / a[i,-n]; -1 disables the lattice grammar
  RingPtr ring;
  // Named atoms (abstract basis names, polynomial variables).
  std::function<std::optional<StateVector>(const std::string&)> lookup;
  // Product of two states; defaults to lattice_product extended bilinearly.
  std::function<StateVector(const StateVector&, const StateVector&)> product;
};

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

StateVector parse_state(const std::string& text, const StateContext& ctx);
StateVector lattice_product(const StateVector& a, const StateVector& b);

}  // namespace vqg
