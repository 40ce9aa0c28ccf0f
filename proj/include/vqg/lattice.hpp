#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vqg/bialg.hpp"
#include "vqg/linalg.hpp"
#include "vqg/series.hpp"
#include "vqg/vertex.hpp"

namespace vqg {

using Vec = std::vector<int>;

/// Lattice Z^r with an integral, not necessarily symmetric, bilinear form.
struct Lattice {
  int rank = 0;
  std::vector<std::vector<int>> kappa;

  // Throws std::invalid_argument unless kappa is square and non-empty.
  static Lattice make(std::vector<std::vector<int>> kappa);
  int form(const Vec& l, const Vec& m) const;
  bool symmetric() const;
  Vec basis(int i) const;  // e_{i+1}
};

/// Bimultiplicative sign table: eps(lambda, mu) = prod eps(e_i, e_j)^{lambda_i mu_j}.
struct SignCocycle {
  std::vector<std::vector<int>> table;  // +1 or -1 on basis pairs
  int operator()(const Vec& l, const Vec& m) const;
};

// eps(e_i, e_j) = 1 for i <= j and (-1)^{kappa(e_j, e_i)} for i > j.
SignCocycle build_sign_cocycle(const Lattice& L);

// ---- the commutative bialgebra k[Lambda] (x) Sym(h[t^-1]) ----

BasisKey lattice_vacuum(int rank, int label = -1);
BasisKey lattice_exp(const Vec& lambda, int label = -1);
// T(e^lambda M) = lambda_{-1} e^lambda M + derivation on the modes.
StateVector lattice_T(const BasisKey& k);
StateVector lattice_T(const StateVector& v);
// e^lambda grouplike, modes primitive; labels are copied to both legs.
StateVector lattice_delta(const BasisKey& k);
Scalar lattice_counit(const BasisKey& k);
// Keys of all sectors with |lambda_i| <= radius and Heisenberg weight <= max_weight.
std::vector<BasisKey> lattice_states(int rank, int max_weight, int radius = 1);
std::vector<BasisKey> lattice_states(const std::vector<Vec>& sectors, int max_weight);

// ---- bicharacters ----

/// Bicharacter on lattice keys, determined by its values on pairs (e^lambda, e^mu) through
/// slot multiplicativity and T-covariance. Labels are ignored. Memoized, thread-safe.
class Bicharacter {
public:
  using Base = std::function<Laurent(const Vec&, const Vec&)>;
  Bicharacter(int rank, Base base);

  Laurent operator()(const BasisKey& x, const BasisKey& y) const;
  Laurent base(const Vec& l, const Vec& m) const { return base_(l, m); }
  int rank() const { return rank_; }
  size_t cache_size() const;
  // Same recursion without reading or filling the memo.
  Laurent fresh(const BasisKey& x, const BasisKey& y) const;

private:
  Laurent eval(const BasisKey& x, const BasisKey& y, bool memo) const;
  struct Memo;
  int rank_;
  Base base_;
  std::shared_ptr<Memo> memo_;
};

// eps(lambda, mu) z^{kappa(lambda, mu)}
Bicharacter lattice_bicharacter(const Lattice& L, const SignCocycle& eps);
// Base with no signs, z^{kappa(lambda, mu)}.
Bicharacter unsigned_bicharacter(const Lattice& L);
// Convolution inverse: eps(lambda, mu) z^{-kappa(lambda, mu)}.
Bicharacter inverse_bicharacter(const Lattice& L, const SignCocycle& eps);
// S(x, y)(z) = r(y, x)(-z) r^{-1}(x, y)(z), a bicharacter with base
// eps(mu,lambda)/eps(lambda,mu) (-1)^{kappa(mu,lambda)} z^{kappa(mu,lambda) - kappa(lambda,mu)}.
Bicharacter derived_s_bicharacter(const Lattice& L, const SignCocycle& eps);

VertexRMatrix as_rmatrix(const Bicharacter& b, std::string name);
VertexRMatrix derive_vertex_rmatrix(const Lattice& L);

// sigma R(z) * R(-z) = counit pairing, tested with the convolution inverse on pairs of states:
// sum r(y1, x1)(-z) rbar(x2, y2)(z) == eps(x) eps(y).
bool check_symmetric_vertex(const Lattice& L, const std::vector<std::pair<BasisKey, BasisKey>>& pairs);
// Default pair set: sector generators and their first Heisenberg descendants.
bool check_symmetric_vertex(const Lattice& L);

// ---- engines ----

// Y(a, z) b = sum r(a1, b1)(z) (e^{zT} a2) b2 on the lattice bialgebra; states of weight <= w
// in the sectors |lambda_i| <= 1.
VertexEngine borcherds_twist_vertex(const Lattice& L, const Bicharacter& r, std::string name = "lattice");
VertexEngine borcherds_twist_vertex(const Lattice& L);
// Untwisted (commutative holomorphic) lattice algebra.
VertexEngine holomorphic_lattice_engine(int rank);
// Lattice engine on the lambda = 0 sector, kappa the Heisenberg form.
VertexEngine heisenberg_engine(const Lattice& L);

struct HLinearData {
  FinBialgebra h;
  Functional r_h;
};
// H-coloured states: every key carries a basis label of H. The bicharacter is
// R_H(h, h') r(a, b) and the coloured product multiplies labels in H.
// Throws std::invalid_argument when (H, R_H) is not certified.
VertexEngine hlinear_lattice(const HLinearData& data, const Lattice& L);
// States: every label on every sector state of `lattice_states`.
std::vector<BasisKey> hlinear_states(size_t dim_h, int rank, int max_weight);

}  // namespace vqg
