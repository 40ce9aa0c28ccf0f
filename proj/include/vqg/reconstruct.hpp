#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqg/fields.hpp"

namespace vqg {

struct ReconstructError : std::runtime_error {
  ReconstructError(const std::string& what, std::optional<Witness> w = std::nullopt,
                   std::optional<BasisKey> key = std::nullopt)
      : std::runtime_error(what), witness(std::move(w)), unreached(std::move(key)) {}
  std::optional<Witness> witness;     // locality failure
  std::optional<BasisKey> unreached;  // spanning failure
};

struct ReconstructOptions {
  // Truncated space the generators must span.
  std::vector<BasisKey> basis;
  // Largest n used for the creation modes alpha_{-n}; 0 picks max basis weight + 2.
  int max_mode = 0;
  // Locality orders tried for every generator pair: 0, 1, ..., max_order.
  int max_order = 8;
  int degree = 6;  // locality window
  // Braided case: twist(i, j) lists the terms of the commutator of generators i and j.
  std::function<std::vector<BraidedTerm>(size_t i, size_t j)> twist;
  KeyNames names;
  std::string name = "reconstructed";
};

// Twist for primitive generator states a, b: S(b, a)(w - z) id + beta(w) alpha(z).
std::vector<BraidedTerm> primitive_twist(const VertexRMatrix& s, const StateVector& a, const StateVector& b,
                                         const Field& alpha, const Field& beta);
// Twist for grouplike generator states: S(b, a)(w - z) beta(w) alpha(z).
std::vector<BraidedTerm> grouplike_twist(const VertexRMatrix& s, const StateVector& a, const StateVector& b,
                                         const Field& alpha, const Field& beta);

// The state alpha(z)|0> at z = 0.
StateVector field_state(const Field& alpha, const StateVector& vacuum);

/// Builds Y from generating fields: the vectors alpha_{i1,-n1} ... alpha_{ik,-nk}|0> get
/// :d^{n1-1}alpha_{i1} ... d^{nk-1}alpha_{ik}: / prod (n-1)!, nested to the right.
/// Throws ReconstructError when a generator pair is not (braided) local up to max_order or
/// when some basis key is not reached.
VertexEngine reconstruct(const std::vector<Field>& generators, const StateVector& vacuum,
                         std::function<StateVector(const StateVector&)> T, const ReconstructOptions& opt);

}  // namespace vqg
