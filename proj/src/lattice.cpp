#include "vqg/lattice.hpp"

#include <stdexcept>

namespace vqg {

Lattice Lattice::make(std::vector<std::vector<int>> kappa) {
  if (kappa.empty()) throw std::invalid_argument("kappa must be non-empty");
  for (const auto& row : kappa)
    if (row.size() != kappa.size()) throw std::invalid_argument("kappa must be square");
  Lattice L;
  L.rank = static_cast<int>(kappa.size());
  L.kappa = std::move(kappa);
  return L;
}

int Lattice::form(const Vec& l, const Vec& m) const {
  int s = 0;
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) s += l[i] * kappa[i][j] * m[j];
  return s;
}

bool Lattice::symmetric() const {
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < i; ++j)
      if (kappa[i][j] != kappa[j][i]) return false;
  return true;
}

Vec Lattice::basis(int i) const {
  Vec v(rank, 0);
  v[i] = 1;
  return v;
}

int SignCocycle::operator()(const Vec& l, const Vec& m) const {
  long odd = 0;
  for (size_t i = 0; i < table.size(); ++i)
    for (size_t j = 0; j < table.size(); ++j)
      if (table[i][j] < 0) odd += static_cast<long>(l[i]) * m[j];
  return odd % 2 ? -1 : 1;
}

SignCocycle build_sign_cocycle(const Lattice& L) {
  SignCocycle e;
  e.table.assign(L.rank, std::vector<int>(L.rank, 1));
  for (int i = 0; i < L.rank; ++i)
    for (int j = 0; j < i; ++j) e.table[i][j] = L.kappa[j][i] % 2 ? -1 : 1;
  return e;
}

BasisKey lattice_vacuum(int rank, int label) { return BasisKey::lattice(Vec(rank, 0), {}, label); }

BasisKey lattice_exp(const Vec& lambda, int label) { return BasisKey::lattice(lambda, {}, label); }

StateVector lattice_T(const BasisKey& k) {
  StateVector r;
  for (size_t i = 0; i < k.lambda.size(); ++i) {
    if (k.lambda[i] == 0) continue;
    auto modes = k.modes;
    modes.push_back({static_cast<int>(i) + 1, 1});
    r.add(BasisKey::lattice(k.lambda, modes, k.label), Scalar(k.lambda[i]));
  }
  for (size_t t = 0; t < k.modes.size(); ++t) {
    if (t > 0 && k.modes[t] == k.modes[t - 1]) continue;
    size_t mult = 1;
    while (t + mult < k.modes.size() && k.modes[t + mult] == k.modes[t]) ++mult;
    auto modes = k.modes;
    modes[t].second += 1;
    r.add(BasisKey::lattice(k.lambda, modes, k.label), Scalar(static_cast<long>(mult) * k.modes[t].second));
  }
  return r;
}

StateVector lattice_T(const StateVector& v) {
  StateVector r;
  for (const auto& [k, c] : v.terms()) r += lattice_T(k).scaled(c);
  return r;
}

StateVector lattice_delta(const BasisKey& k) {
  // Distinct modes with multiplicities.
  std::vector<std::pair<BasisKey::Mode, int>> groups;
  for (const auto& m : k.modes) {
    if (!groups.empty() && groups.back().first == m)
      ++groups.back().second;
    else
      groups.push_back({m, 1});
  }
  StateVector r;
  std::vector<int> split(groups.size(), 0);
  while (true) {
    std::vector<BasisKey::Mode> left, right;
    Rational c = 1;
    for (size_t g = 0; g < groups.size(); ++g) {
      for (int t = 0; t < split[g]; ++t) left.push_back(groups[g].first);
      for (int t = split[g]; t < groups[g].second; ++t) right.push_back(groups[g].first);
      c *= binomial(groups[g].second, split[g]);
    }
    r.add(BasisKey::tensor({BasisKey::lattice(k.lambda, left, k.label), BasisKey::lattice(k.lambda, right, k.label)}),
          Scalar(c));
    size_t g = 0;
    while (g < groups.size() && split[g] == groups[g].second) split[g++] = 0;
    if (g == groups.size()) break;
    ++split[g];
  }
  return r;
}

Scalar lattice_counit(const BasisKey& k) { return Scalar(k.modes.empty() ? 1 : 0); }

std::vector<BasisKey> lattice_states(const std::vector<Vec>& sectors, int max_weight) {
  std::vector<BasisKey> out;
  for (const auto& s : sectors)
    for (auto& k : fock_basis(s, max_weight)) out.push_back(k);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BasisKey> lattice_states(int rank, int max_weight, int radius) {
  std::vector<Vec> sectors;
  Vec v(rank, -radius);
  while (true) {
    sectors.push_back(v);
    int i = 0;
    while (i < rank && v[i] == radius) v[i++] = -radius;
    if (i == rank) break;
    ++v[i];
  }
  return lattice_states(sectors, max_weight);
}

}  // namespace vqg
