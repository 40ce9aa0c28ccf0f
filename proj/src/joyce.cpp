#include "vqg/joyce.hpp"

#include <stdexcept>

namespace vqg {

namespace {

// Net line count per weight (even minus odd) and the rank.
struct Signed {
  std::map<int, int> net;
  int rk = 0;

  void add(const ExtWeights& w, int times) {
    for (int a : w.even) net[a] += times;
    for (int b : w.odd) net[b] -= times;
    rk += times * w.rk.value_or(static_cast<int>(w.even.size()) - static_cast<int>(w.odd.size()));
    std::erase_if(net, [](const auto& p) { return p.second == 0; });
  }
  bool operator==(const Signed&) const = default;
};

bool is_basis(const Vec& v) {
  int ones = 0;
  for (int x : v) {
    if (x != 0 && x != 1) return false;
    ones += x;
  }
  return ones == 1;
}

int basis_index(const Vec& v) {
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] == 1) return static_cast<int>(i);
  return -1;
}

Laurent evaluate(const Signed& s, const JoyceOptions& opt) {
  RingPtr ring = make_ring({opt.tau});
  int lines = 0;
  for (const auto& [a, n] : s.net) lines += n;
  Laurent out = Laurent::monomial(s.rk - lines);
  for (const auto& [a, n] : s.net) {
    // (z + a tau)^n = sum_k C(n, k) (a tau)^k z^{n - k}, finite for n >= 0.
    Laurent f;
    long kmax = n >= 0 ? n : opt.depth - 1;
    for (long k = 0; k <= kmax; ++k) {
      Rational c = binomial(n, k);
      Rational ak = 1;
      for (long i = 0; i < k; ++i) ak *= a;
      Scalar coeff = Scalar::monomial(ring, {static_cast<int>(k)}, c * ak);
      if (!coeff.is_zero()) f += Laurent::monomial(static_cast<int>(n - k), coeff);
    }
    out = out * f;
  }
  Laurent cut;
  for (const auto& [e, c] : out.terms())
    if (e > s.rk - opt.depth) cut += Laurent::monomial(e, c);
  return cut;
}

}  // namespace

Laurent joyce_series(const ExtWeights& w, const JoyceOptions& opt) {
  Signed s;
  s.add(w, 1);
  return evaluate(s, opt);
}

Bicharacter joyce_bicharacter(int rank, const ExtWeightMap& weights, const JoyceOptions& opt) {
  if (rank <= 0) throw std::invalid_argument("joyce: rank must be positive");
  if (opt.depth <= 0) throw std::invalid_argument("joyce: depth must be positive");
  std::vector<std::vector<ExtWeights>> base(rank, std::vector<ExtWeights>(rank, ExtWeights{0, {}, {}}));
  for (const auto& [pair, w] : weights) {
    const auto& [l, m] = pair;
    if (static_cast<int>(l.size()) != rank || static_cast<int>(m.size()) != rank)
      throw std::invalid_argument("joyce: weight key of the wrong rank");
    if (is_basis(l) && is_basis(m)) base[basis_index(l)][basis_index(m)] = w;
  }
  auto extend = [base, rank](const Vec& l, const Vec& m) {
    Signed s;
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j)
        if (l[i] * m[j] != 0) s.add(base[i][j], l[i] * m[j]);
    return s;
  };
  for (const auto& [pair, w] : weights) {
    const auto& [l, m] = pair;
    if (is_basis(l) && is_basis(m)) continue;
    Signed given;
    given.add(w, 1);
    if (!(given == extend(l, m)))
      throw std::invalid_argument("joyce: weights are not additive in each slot");
  }
  return Bicharacter(rank, [extend, opt](const Vec& l, const Vec& m) { return evaluate(extend(l, m), opt); });
}

VertexRMatrix joyce_rmatrix_lattice(int rank, const ExtWeightMap& weights, const JoyceOptions& opt) {
  return as_rmatrix(joyce_bicharacter(rank, weights, opt), "joyce");
}

ExtWeightMap rank_only_weights(const Lattice& L) {
  ExtWeightMap out;
  for (int i = 0; i < L.rank; ++i)
    for (int j = 0; j < L.rank; ++j) out[{L.basis(i), L.basis(j)}] = ExtWeights{L.kappa[i][j], {}, {}};
  return out;
}

}  // namespace vqg
