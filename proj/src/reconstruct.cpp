#include "vqg/reconstruct.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace vqg {

namespace {

Laurent pair_value(const VertexRMatrix& s, const StateVector& b, const StateVector& a) {
  Laurent out;
  for (const auto& [kb, cb] : b.terms())
    for (const auto& [ka, ca] : a.terms()) out += s.eval(kb, ka).scaled(cb * ca);
  return out;
}

// Row echelon form over Q that remembers every row as a combination of the inserted vectors.
class Echelon {
public:
  // Reduces v; returns the remainder and the combination of inserted vectors subtracted.
  std::pair<StateVector, std::map<size_t, Rational>> reduce(StateVector v) const {
    std::map<size_t, Rational> used;
    for (const auto& row : rows_) {
      Scalar c = v.coeff(row.pivot);
      if (c.is_zero()) continue;
      Rational f = c.rational() / row.lead;
      v.add_scaled(row.vec, Scalar(-f));
      for (const auto& [j, q] : row.combo) used[j] += f * q;
    }
    return {v, used};
  }

  // Adds v as inserted vector `index` if it is independent of the rows so far.
  bool insert(const StateVector& v, size_t index) {
    auto [rest, used] = reduce(v);
    if (rest.is_zero()) return false;
    Row row;
    row.vec = rest;
    row.pivot = rest.terms().begin()->first;
    row.lead = rest.terms().begin()->second.rational();
    row.combo[index] = 1;
    for (const auto& [j, q] : used) row.combo[j] -= q;
    rows_.push_back(std::move(row));
    return true;
  }

private:
  struct Row {
    StateVector vec;
    BasisKey pivot;
    Rational lead;
    std::map<size_t, Rational> combo;
  };
  std::vector<Row> rows_;
};

bool inside(const StateVector& v, const std::set<BasisKey>& basis) {
  return std::all_of(v.terms().begin(), v.terms().end(), [&](const auto& t) { return basis.count(t.first) > 0; });
}

Field derived(const Field& f, int n) {
  Field g = f;
  for (int i = 1; i < n; ++i) g = derivative(g);
  return n > 1 ? scaled(g, Scalar(1 / factorial(n - 1))) : g;
}

}  // namespace

std::vector<BraidedTerm> primitive_twist(const VertexRMatrix& s, const StateVector& a, const StateVector& b,
                                         const Field& alpha, const Field& beta) {
  return {{pair_value(s, b, a), identity_field(), identity_field()}, {Laurent(Scalar(1)), alpha, beta}};
}

std::vector<BraidedTerm> grouplike_twist(const VertexRMatrix& s, const StateVector& a, const StateVector& b,
                                         const Field& alpha, const Field& beta) {
  return {{pair_value(s, b, a), alpha, beta}};
}

StateVector field_state(const Field& alpha, const StateVector& vacuum) { return field_coeff(alpha, vacuum, 0); }

VertexEngine reconstruct(const std::vector<Field>& generators, const StateVector& vacuum,
                         std::function<StateVector(const StateVector&)> T, const ReconstructOptions& opt) {
  const std::vector<BasisKey>& basis = opt.basis;
  const std::set<BasisKey> in_basis(basis.begin(), basis.end());

  // Locality of every generator pair at some order <= max_order.
  for (size_t i = 0; i < generators.size(); ++i)
    for (size_t j = 0; j < generators.size(); ++j) {
      if (!opt.twist && j < i) continue;  // plain locality is symmetric
      Verdict last;
      for (int N = 0; N <= opt.max_order; ++N) {
        last = opt.twist ? check_braided_locality(generators[i], generators[j], opt.twist(i, j), N, basis, opt.degree)
                         : check_locality(generators[i], generators[j], N, basis, opt.degree);
        if (last.passed()) break;
      }
      if (!last.passed())
        throw ReconstructError("generators " + std::to_string(i) + " and " + std::to_string(j) + " are not local",
                               last.witness);
    }

  int max_mode = opt.max_mode;
  if (max_mode <= 0) {
    int w = 0;
    for (const auto& k : basis) w = std::max(w, k.weight());
    max_mode = w + 2;
  }

  // Breadth-first search over creation modes applied to the vacuum.
  std::vector<StateVector> reached{vacuum};
  std::vector<Field> fields{identity_field()};
  Echelon ech;
  if (!inside(vacuum, in_basis) || !ech.insert(vacuum, 0)) throw ReconstructError("vacuum outside the basis");
  std::deque<size_t> queue{0};
  while (!queue.empty()) {
    size_t parent = queue.front();
    queue.pop_front();
    for (size_t g = 0; g < generators.size(); ++g)
      for (int n = 1; n <= max_mode; ++n) {
        StateVector w = apply_mode(generators[g], -n, reached[parent]);
        if (w.is_zero() || !inside(w, in_basis)) continue;
        if (!ech.insert(w, reached.size())) continue;
        fields.push_back(normally_ordered(derived(generators[g], n), fields[parent], NormalOrder::Creation));
        reached.push_back(std::move(w));
        queue.push_back(reached.size() - 1);
      }
  }

  // Y(k) for every basis key as a combination of the reached fields.
  auto table = std::make_shared<std::map<BasisKey, Field>>();
  for (const auto& k : basis) {
    auto [rest, used] = ech.reduce(StateVector(k));
    if (!rest.is_zero()) throw ReconstructError("basis key not reached: " + key_str(k, opt.names), std::nullopt, k);
    std::optional<Field> f;
    for (const auto& [j, q] : used) {
      if (q == 0) continue;
      Field term = scaled(fields[j], Scalar(q));
      f = f ? sum(*f, term) : term;
    }
    table->emplace(k, f ? *f : Field{[](const BasisKey&) { return 0; },
                                     [](const BasisKey&, int) { return StateVector(); }});
  }

  VertexEngine e;
  e.name = opt.name;
  e.vacuum = vacuum;
  e.T = std::move(T);
  auto lookup = [table](const BasisKey& a) -> const Field& {
    auto it = table->find(a);
    if (it == table->end()) throw WindowExceeded("state outside the reconstructed space: " + key_str(a));
    return it->second;
  };
  e.Y = [lookup](const BasisKey& a, const BasisKey& b, int high) {
    const Field& f = lookup(a);
    VSeries out;
    for (int k = f.low(b); k < high; ++k) {
      StateVector v = f.coeff(b, k);
      if (!v.is_zero()) out.emplace(k, std::move(v));
    }
    return out;
  };
  e.pole_bound = [lookup](const BasisKey& a, const BasisKey& b) { return lookup(a).low(b); };
  e.states = [basis](int w) {
    std::vector<BasisKey> out;
    for (const auto& k : basis)
      if (k.weight() <= w) out.push_back(k);
    return out;
  };
  e.names = opt.names;
  return memoized(std::move(e));
}

}  // namespace vqg
