#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vqg/lattice.hpp"

namespace vqg {

/// Equivariant weights of Ext(e^lambda, e^mu) as a sum of weight lines: even lines
/// contribute (z + a tau), odd lines (z + b tau)^{-1}.
struct ExtWeights {
  std::optional<int> rk;  // defaults to #even - #odd
  std::vector<int> even;
  std::vector<int> odd;
};

using ExtWeightMap = std::map<std::pair<Vec, Vec>, ExtWeights>;

struct JoyceOptions {
  std::string tau = "tau";
  // Terms z^{rk - k} c_k kept, k < depth. Exact whenever the net odd weight is zero and
  // depth exceeds the even count.
  int depth = 8;
};

// sum_k z^{rk - k} c_k(Ext) for one weight datum, over k[tau].
Laurent joyce_series(const ExtWeights& w, const JoyceOptions& opt = {});

/// Extends weights given on basis pairs bimultiplicatively: Ext(lambda, mu) is the signed
/// sum of lambda_i mu_j copies of Ext(e_i, e_j), negative copies swapping even and odd.
/// Missing basis pairs are zero. Entries on other pairs must agree with the extension;
/// otherwise std::invalid_argument.
Bicharacter joyce_bicharacter(int rank, const ExtWeightMap& weights, const JoyceOptions& opt = {});
VertexRMatrix joyce_rmatrix_lattice(int rank, const ExtWeightMap& weights, const JoyceOptions& opt = {});

// Weights with no lines and rk = kappa on every basis pair.
ExtWeightMap rank_only_weights(const Lattice& L);

}  // namespace vqg
