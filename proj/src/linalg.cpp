#include "vqg/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace vqg {

BasisKey BasisKey::index(int i) {
  BasisKey k;
  k.kind = Kind::Index;
  k.label = i;
  return k;
}

void sort_modes(std::vector<BasisKey::Mode>& modes) {
  std::sort(modes.begin(), modes.end(), [](const BasisKey::Mode& a, const BasisKey::Mode& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
}

BasisKey BasisKey::lattice(std::vector<int> lambda, std::vector<Mode> modes, int label) {
  for (const auto& [i, n] : modes)
    if (i < 1 || n < 1) throw std::invalid_argument("bad Heisenberg mode");
  BasisKey k;
  k.kind = Kind::Lattice;
  k.label = label;
  k.lambda = std::move(lambda);
  k.modes = std::move(modes);
  sort_modes(k.modes);
  for (const auto& m : k.modes) k.wt += m.second;
  return k;
}

BasisKey BasisKey::poly(std::vector<int> exps) {
  BasisKey k;
  k.kind = Kind::Poly;
  k.lambda = std::move(exps);
  k.wt = std::accumulate(k.lambda.begin(), k.lambda.end(), 0);
  return k;
}

BasisKey BasisKey::tensor(const std::vector<BasisKey>& parts) {
  std::vector<BasisKey> flat;
  for (const auto& p : parts) {
    if (p.kind == Kind::Tensor)
      flat.insert(flat.end(), p.factors.begin(), p.factors.end());
    else
      flat.push_back(p);
  }
  if (flat.size() == 1) return flat[0];
  BasisKey k;
  k.kind = Kind::Tensor;
  k.factors = std::move(flat);
  for (const auto& f : k.factors) k.wt += f.wt;
  return k;
}

std::vector<int> BasisKey::grade() const {
  if (kind == Kind::Lattice) {
    std::vector<int> g = lambda;
    g.push_back(weight());
    return g;
  }
  return {weight()};
}

const BasisKey& BasisKey::leg(size_t i) const {
  if (kind != Kind::Tensor) {
    if (i != 0) throw std::out_of_range("leg index");
    return *this;
  }
  return factors.at(i);
}

bool operator<(const BasisKey& a, const BasisKey& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  switch (a.kind) {
    case BasisKey::Kind::Index:
      return a.label < b.label;
    case BasisKey::Kind::Lattice: {
      if (a.lambda != b.lambda) return a.lambda < b.lambda;
      int wa = a.weight(), wb = b.weight();
      if (wa != wb) return wa < wb;
      if (a.modes != b.modes) return a.modes < b.modes;
      return a.label < b.label;
    }
    case BasisKey::Kind::Poly: {
      int da = a.weight(), db = b.weight();
      if (da != db) return da < db;
      return a.lambda < b.lambda;
    }
    case BasisKey::Kind::Tensor:
      return a.factors < b.factors;
  }
  return false;
}

bool operator==(const BasisKey& a, const BasisKey& b) {
  return a.kind == b.kind && a.label == b.label && a.lambda == b.lambda && a.modes == b.modes &&
         a.factors == b.factors;
}

std::string key_str(const BasisKey& k, const KeyNames& names) {
  switch (k.kind) {
    case BasisKey::Kind::Index:
      if (k.label >= 0 && static_cast<size_t>(k.label) < names.index_names.size())
        return names.index_names[k.label];
      return "b" + std::to_string(k.label);
    case BasisKey::Kind::Poly: {
      std::string out;
      for (size_t i = 0; i < k.lambda.size(); ++i) {
        if (k.lambda[i] == 0) continue;
        std::string v = i < names.poly_vars.size()         ? names.poly_vars[i]
                        : k.lambda.size() == 1             ? std::string("x")
                                                           : "x" + std::to_string(i + 1);
        if (!out.empty()) out += "*";
        out += v;
        if (k.lambda[i] != 1) out += "^" + std::to_string(k.lambda[i]);
      }
      return out.empty() ? "1" : out;
    }
    case BasisKey::Kind::Lattice: {
      std::vector<std::string> parts;
      if (k.label >= 0) parts.push_back("h[" + std::to_string(k.label) + "]");
      for (size_t i = 0; i < k.modes.size();) {
        size_t j = i;
        while (j < k.modes.size() && k.modes[j] == k.modes[i]) ++j;
        std::string m = "a[" + std::to_string(k.modes[i].first) + ",-" +
                        std::to_string(k.modes[i].second) + "]";
        if (j - i > 1) m += "^" + std::to_string(j - i);
        parts.push_back(m);
        i = j;
      }
      bool zero = std::all_of(k.lambda.begin(), k.lambda.end(), [](int c) { return c == 0; });
      if (!zero) {
        std::string e = "e[";
        for (size_t i = 0; i < k.lambda.size(); ++i)
          e += (i ? "," : "") + std::to_string(k.lambda[i]);
        parts.push_back(e + "]");
      }
      if (parts.empty()) return "|0>";
      std::string out;
      for (size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
      return out;
    }
    case BasisKey::Kind::Tensor: {
      if (k.factors.empty()) return "1";
      std::string out;
      for (size_t i = 0; i < k.factors.size(); ++i)
        out += (i ? " ⊗ " : "") + key_str(k.factors[i], names);
      return out;
    }
  }
  return "?";
}

Scalar StateVector::coeff(const BasisKey& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Scalar() : it->second;
}

void StateVector::add(const BasisKey& k, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, ins] = terms_.emplace(k, c);
  if (!ins) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

StateVector& StateVector::operator+=(const StateVector& o) {
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

void StateVector::add_scaled(const StateVector& o, const Scalar& c) {
  if (c.is_zero()) return;
  if (c.is_one()) {
    *this += o;
    return;
  }
  for (const auto& [k, v] : o.terms_) add(k, v * c);
}

StateVector& StateVector::operator-=(const StateVector& o) {
  for (const auto& [k, c] : o.terms_) add(k, -c);
  return *this;
}

StateVector StateVector::scaled(const Scalar& c) const {
  StateVector r;
  if (c.is_zero()) return r;
  for (const auto& [k, v] : terms_) r.add(k, v * c);
  return r;
}

std::string StateVector::str(const KeyNames& names) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    std::string piece = c.factor_str() + "*" + key_str(k, names);
    if (first)
      out = piece;
    else if (piece[0] == '-')
      out += " - " + piece.substr(1);
    else
      out += " + " + piece;
    first = false;
  }
  return out;
}

StateVector tensor(const StateVector& v, const StateVector& w) {
  StateVector r;
  for (const auto& [a, ca] : v.terms())
    for (const auto& [b, cb] : w.terms()) r.add(BasisKey::tensor({a, b}), ca * cb);
  return r;
}

StateVector tensor(const std::vector<StateVector>& parts) {
  StateVector r(BasisKey::unit());
  for (const auto& p : parts) r = tensor(r, p);
  return r;
}

StateVector permute_legs(const StateVector& v, const std::vector<size_t>& perm) {
  StateVector r;
  for (const auto& [k, c] : v.terms()) {
    if (k.arity() != perm.size()) throw std::invalid_argument("leg permutation arity mismatch");
    std::vector<BasisKey> legs;
    for (size_t i : perm) legs.push_back(k.leg(i));
    r.add(BasisKey::tensor(legs), c);
  }
  return r;
}

StateVector swap(const StateVector& v) {
  for (const auto& [k, c] : v.terms())
    if (k.kind != BasisKey::Kind::Tensor || k.factors.size() != 2)
      throw std::invalid_argument("swap needs a binary tensor");
  return permute_legs(v, {1, 0});
}

LinearMap LinearMap::identity(const std::vector<BasisKey>& basis) {
  return from_function(basis, [](const BasisKey& k) { return StateVector(k); });
}

LinearMap LinearMap::zero(const std::vector<BasisKey>& basis) {
  return from_function(basis, [](const BasisKey&) { return StateVector(); });
}

LinearMap LinearMap::from_function(const std::vector<BasisKey>& basis,
                                   const std::function<StateVector(const BasisKey&)>& f) {
  std::map<BasisKey, StateVector> cols;
  for (const auto& k : basis) cols.emplace(k, f(k));
  return LinearMap(std::move(cols));
}

std::vector<BasisKey> LinearMap::domain() const {
  std::vector<BasisKey> d;
  for (const auto& [k, v] : cols_) d.push_back(k);
  return d;
}

const StateVector& LinearMap::column(const BasisKey& k) const {
  auto it = cols_.find(k);
  if (it == cols_.end()) throw DomainMismatch("basis key " + key_str(k) + " not in domain");
  return it->second;
}

StateVector LinearMap::apply(const StateVector& v) const {
  StateVector r;
  for (const auto& [k, c] : v.terms()) r += column(k).scaled(c);
  return r;
}

LinearMap compose(const LinearMap& f, const LinearMap& g) {
  std::map<BasisKey, StateVector> cols;
  for (const auto& [k, v] : g.columns()) cols.emplace(k, f.apply(v));
  return LinearMap(std::move(cols));
}

LinearMap add_maps(const LinearMap& f, const LinearMap& g) {
  if (f.domain() != g.domain()) throw DomainMismatch("add_maps: different domains");
  std::map<BasisKey, StateVector> cols;
  for (const auto& [k, v] : f.columns()) cols.emplace(k, v + g.column(k));
  return LinearMap(std::move(cols));
}

LinearMap scale_map(const Scalar& c, const LinearMap& f) {
  std::map<BasisKey, StateVector> cols;
  for (const auto& [k, v] : f.columns()) cols.emplace(k, v.scaled(c));
  return LinearMap(std::move(cols));
}

StateVector apply_tensor(const LinearMap& f, const LinearMap& g, const StateVector& v) {
  StateVector r;
  for (const auto& [k, c] : v.terms()) {
    if (k.arity() != 2) throw DomainMismatch("apply_tensor needs binary tensors");
    r += tensor(f.column(k.leg(0)), g.column(k.leg(1))).scaled(c);
  }
  return r;
}

size_t graded_dimension(const GradedSpace& space, const std::vector<int>& grade) {
  return space.enumerate(grade).size();
}

namespace {

void colored_partitions(int rank, int remaining, int max_part, int max_color,
                        std::vector<BasisKey::Mode>& cur,
                        std::vector<std::vector<BasisKey::Mode>>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  // Parts are generated in non-increasing (mode, colour) order, so each multiset once.
  for (int n = std::min(max_part, remaining); n >= 1; --n) {
    int top = n == max_part ? max_color : rank;
    for (int i = 1; i <= top; ++i) {
      cur.push_back({i, n});
      colored_partitions(rank, remaining - n, n, i, cur, out);
      cur.pop_back();
    }
  }
}

}  // namespace

std::vector<std::vector<BasisKey::Mode>> heisenberg_monomials(int rank, int weight) {
  std::vector<std::vector<BasisKey::Mode>> out;
  if (weight < 0 || rank < 1) return out;
  std::vector<BasisKey::Mode> cur;
  colored_partitions(rank, weight, weight, rank, cur, out);
  for (auto& m : out) sort_modes(m);
  std::sort(out.begin(), out.end());
  return out;
}

GradedSpace fock_space(int rank) {
  GradedSpace s;
  s.name = "fock(rank=" + std::to_string(rank) + ")";
  s.enumerate = [rank](const std::vector<int>& grade) {
    if (static_cast<int>(grade.size()) != rank + 1)
      throw std::invalid_argument("fock grade needs lambda and weight");
    std::vector<int> lambda(grade.begin(), grade.end() - 1);
    std::vector<BasisKey> keys;
    for (auto& m : heisenberg_monomials(rank, grade.back()))
      keys.push_back(BasisKey::lattice(lambda, m));
    std::sort(keys.begin(), keys.end());
    return keys;
  };
  return s;
}

std::vector<BasisKey> fock_basis(const std::vector<int>& lambda, int max_weight, int label) {
  std::vector<BasisKey> keys;
  int rank = static_cast<int>(lambda.size());
  for (int w = 0; w <= max_weight; ++w)
    for (auto& m : heisenberg_monomials(rank, w)) keys.push_back(BasisKey::lattice(lambda, m, label));
  std::sort(keys.begin(), keys.end());
  return keys;
}

BasisKey lattice_product(const BasisKey& a, const BasisKey& b) {
  if (a.kind != BasisKey::Kind::Lattice || b.kind != BasisKey::Kind::Lattice)
    throw std::invalid_argument("lattice_product needs lattice states");
  if (a.lambda.size() != b.lambda.size()) throw std::invalid_argument("lattice rank mismatch");
  std::vector<int> lam(a.lambda.size());
  for (size_t i = 0; i < lam.size(); ++i) lam[i] = a.lambda[i] + b.lambda[i];
  std::vector<BasisKey::Mode> modes = a.modes;
  modes.insert(modes.end(), b.modes.begin(), b.modes.end());
  int label = a.label;
  if (b.label >= 0) {
    if (label >= 0 && label != b.label) throw std::invalid_argument("conflicting H-labels");
    label = b.label;
  }
  return BasisKey::lattice(std::move(lam), std::move(modes), label);
}

StateVector lattice_product(const StateVector& a, const StateVector& b) {
  StateVector r;
  for (const auto& [x, cx] : a.terms())
    for (const auto& [y, cy] : b.terms()) r.add(lattice_product(x, y), cx * cy);
  return r;
}

}  // namespace vqg
