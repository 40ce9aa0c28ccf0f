#include "vqg/bialg.hpp"

#include <functional>

#include "vqg/parallel.hpp"

namespace vqg {

namespace {

BasisKey ix(int i) { return BasisKey::index(i); }

// First key (canonical order) where the two vectors differ.
std::optional<Witness> diff(const std::string& check, std::vector<std::string> tuple,
                            const StateVector& lhs, const StateVector& rhs, const KeyNames& names) {
  StateVector d = lhs - rhs;
  if (d.is_zero()) return std::nullopt;
  const BasisKey& k = d.terms().begin()->first;
  tuple.push_back(key_str(k, names));
  return Witness{check, std::move(tuple), {}, lhs.coeff(k).str(), rhs.coeff(k).str()};
}

std::optional<Witness> diff_scalar(const std::string& check, std::vector<std::string> tuple,
                                   const Scalar& lhs, const Scalar& rhs) {
  if (lhs == rhs) return std::nullopt;
  return Witness{check, std::move(tuple), {}, lhs.str(), rhs.str()};
}

// Runs a law over `n` instances with the least-witness rule.
std::optional<Witness> run_law(size_t n, const Probe<Witness>& probe) {
  auto r = first_failure<Witness>(n, probe);
  if (!r) return std::nullopt;
  return r->second;
}

// Tries laws in order and reports the first failing one.
Verdict run_laws(const std::string& name,
                 const std::vector<std::pair<size_t, Probe<Witness>>>& laws) {
  for (const auto& [n, probe] : laws)
    if (auto w = run_law(n, probe)) return Verdict::fail(name, *w);
  return Verdict::pass(name);
}

std::vector<StateVector> legs_of(const BasisKey& k) {
  std::vector<StateVector> legs;
  for (size_t i = 0; i < k.arity(); ++i) legs.emplace_back(k.leg(i));
  return legs;
}

}  // namespace

FinBialgebra::FinBialgebra(std::vector<std::string> names, RingPtr ring,
                           const std::vector<Triple>& product, const std::vector<Triple>& coproduct,
                           std::vector<Scalar> counit, StateVector unit)
    : names_(std::move(names)), ring_(std::move(ring)), counit_(std::move(counit)),
      unit_(std::move(unit)) {
  const int n = static_cast<int>(names_.size());
  auto in_range = [n](int i) { return i >= 0 && i < n; };
  if (static_cast<int>(counit_.size()) != n) throw std::invalid_argument("counit has wrong length");
  for (const auto& [i, j, k, c] : product) {
    if (!in_range(i) || !in_range(j) || !in_range(k))
      throw std::invalid_argument("product index out of range");
    prod_[{i, j}].add(ix(k), c);
  }
  for (const auto& [i, j, k, c] : coproduct) {
    if (!in_range(i) || !in_range(j) || !in_range(k))
      throw std::invalid_argument("coproduct index out of range");
    delta_[i].add(BasisKey::tensor({ix(j), ix(k)}), c);
  }
  for (const auto& [k, c] : unit_.terms())
    if (k.kind != BasisKey::Kind::Index || !in_range(k.label))
      throw std::invalid_argument("unit outside the basis");
}

std::vector<BasisKey> FinBialgebra::basis() const {
  std::vector<BasisKey> b;
  for (size_t i = 0; i < dim(); ++i) b.push_back(ix(static_cast<int>(i)));
  return b;
}

KeyNames FinBialgebra::key_names() const {
  KeyNames k;
  k.index_names = names_;
  return k;
}

StateContext FinBialgebra::context() const {
  StateContext ctx;
  ctx.ring = ring_;
  ctx.lookup = [this](const std::string& name) -> std::optional<StateVector> {
    if (name == "|0>") return unit_;
    for (size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return StateVector(ix(static_cast<int>(i)));
    return std::nullopt;
  };
  ctx.product = [this](const StateVector& a, const StateVector& b) { return mul(a, b); };
  return ctx;
}

StateVector FinBialgebra::mul(const StateVector& a, const StateVector& b) const {
  StateVector r;
  for (const auto& [x, cx] : a.terms())
    for (const auto& [y, cy] : b.terms()) {
      if (x.kind != BasisKey::Kind::Index || y.kind != BasisKey::Kind::Index)
        throw DomainMismatch("mul needs elements of A");
      auto it = prod_.find({x.label, y.label});
      if (it != prod_.end()) r += it->second.scaled(cx * cy);
    }
  return r;
}

StateVector FinBialgebra::mul_legs(const StateVector& x, const StateVector& y) const {
  StateVector r;
  for (const auto& [kx, cx] : x.terms())
    for (const auto& [ky, cy] : y.terms()) {
      if (kx.arity() != ky.arity()) throw DomainMismatch("mul_legs arity mismatch");
      std::vector<StateVector> legs;
      for (size_t i = 0; i < kx.arity(); ++i)
        legs.push_back(mul(StateVector(kx.leg(i)), StateVector(ky.leg(i))));
      r += tensor(legs).scaled(cx * cy);
    }
  return r;
}

StateVector FinBialgebra::delta(const StateVector& a) const {
  StateVector r;
  for (const auto& [k, c] : a.terms()) {
    if (k.kind != BasisKey::Kind::Index) throw DomainMismatch("delta needs elements of A");
    auto it = delta_.find(k.label);
    if (it != delta_.end()) r += it->second.scaled(c);
  }
  return r;
}

Scalar FinBialgebra::eps(const StateVector& a) const {
  Scalar s;
  for (const auto& [k, c] : a.terms()) {
    if (k.kind != BasisKey::Kind::Index) throw DomainMismatch("counit needs elements of A");
    s += counit_[k.label] * c;
  }
  return s;
}

StateVector FinBialgebra::delta_leg(const StateVector& x, size_t leg) const {
  StateVector r;
  for (const auto& [k, c] : x.terms()) {
    auto legs = legs_of(k);
    legs.at(leg) = delta(legs[leg]);
    r += tensor(legs).scaled(c);
  }
  return r;
}

StateVector FinBialgebra::eps_leg(const StateVector& x, size_t leg) const {
  StateVector r;
  for (const auto& [k, c] : x.terms()) {
    auto legs = legs_of(k);
    Scalar e = eps(legs.at(leg));
    legs.erase(legs.begin() + static_cast<long>(leg));
    r += tensor(legs).scaled(c * e);
  }
  return r;
}

StateVector FinBialgebra::unit_tensor(size_t n) const {
  return tensor(std::vector<StateVector>(n, unit_));
}

StateVector FinBialgebra::embed(const StateVector& r, size_t n, size_t i, size_t j) const {
  StateVector out;
  for (const auto& [k, c] : r.terms()) {
    if (k.arity() != 2) throw DomainMismatch("embed needs a two-fold element");
    std::vector<StateVector> legs(n, unit_);
    legs[i] = StateVector(k.leg(0));
    legs[j] = StateVector(k.leg(1));
    out += tensor(legs).scaled(c);
  }
  return out;
}

LinearMap FinBialgebra::product_map() const {
  std::map<BasisKey, StateVector> cols;
  for (const auto& x : basis())
    for (const auto& y : basis()) cols.emplace(BasisKey::tensor({x, y}), mul(StateVector(x), StateVector(y)));
  return LinearMap(std::move(cols));
}

LinearMap FinBialgebra::coproduct_map() const {
  return LinearMap::from_function(basis(), [this](const BasisKey& k) { return delta(StateVector(k)); });
}

LinearMap FinBialgebra::counit_map() const {
  return LinearMap::from_function(basis(), [this](const BasisKey& k) {
    return StateVector(BasisKey::unit(), eps(StateVector(k)));
  });
}

// ---- examples ----

FinBialgebra function_algebra_z2() {
  std::vector<FinBialgebra::Triple> m{{0, 0, 0, Scalar(1)}, {1, 1, 1, Scalar(1)}};
  std::vector<FinBialgebra::Triple> d;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) d.push_back({(a + b) % 2, a, b, Scalar(1)});
  StateVector one = StateVector(ix(0)) + StateVector(ix(1));
  return FinBialgebra({"e0", "e1"}, nullptr, m, d, {Scalar(1), Scalar(0)}, one);
}

FinBialgebra dual_numbers(const RingPtr& ring) {
  std::vector<FinBialgebra::Triple> m{{0, 0, 0, Scalar(1)}, {0, 1, 1, Scalar(1)}, {1, 0, 1, Scalar(1)}};
  std::vector<FinBialgebra::Triple> d{{0, 0, 0, Scalar(1)}, {1, 1, 0, Scalar(1)}, {1, 0, 1, Scalar(1)}};
  return FinBialgebra({"1", "x"}, ring, m, d, {Scalar(1), Scalar(0)}, StateVector(ix(0)));
}

FinBialgebra square_zero_xy(const RingPtr& ring) {
  std::vector<FinBialgebra::Triple> m{{0, 0, 0, Scalar(1)}, {0, 1, 1, Scalar(1)}, {1, 0, 1, Scalar(1)},
                                      {0, 2, 2, Scalar(1)}, {2, 0, 2, Scalar(1)}};
  std::vector<FinBialgebra::Triple> d{{0, 0, 0, Scalar(1)}, {1, 1, 0, Scalar(1)}, {1, 0, 1, Scalar(1)},
                                      {2, 2, 0, Scalar(1)}, {2, 0, 2, Scalar(1)}};
  return FinBialgebra({"1", "x", "y"}, ring, m, d, {Scalar(1), Scalar(0), Scalar(0)}, StateVector(ix(0)));
}

StateVector sign_rmatrix_literal(const FinBialgebra&) {
  StateVector chi = StateVector(ix(0)) - StateVector(ix(1));
  return tensor(chi, chi);
}

StateVector sign_rmatrix(const FinBialgebra&) {
  StateVector r;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) r.add(BasisKey::tensor({ix(a), ix(b)}), Scalar((a && b) ? -1 : 1));
  return r;
}

StateVector trivial_rmatrix(const FinBialgebra& a) { return a.unit_tensor(2); }

// ---- checks ----

Verdict check_bialgebra(const FinBialgebra& a) {
  const size_t n = a.dim();
  const KeyNames names = a.key_names();
  auto e = [](size_t i) { return StateVector(ix(static_cast<int>(i))); };
  auto nm = [&](size_t i) { return a.names()[i]; };
  std::vector<std::pair<size_t, Probe<Witness>>> laws;
  laws.push_back({n * n * n, [&](size_t t) {
                    size_t i = t / (n * n), j = (t / n) % n, k = t % n;
                    return diff("associativity", {nm(i), nm(j), nm(k)}, a.mul(a.mul(e(i), e(j)), e(k)),
                                a.mul(e(i), a.mul(e(j), e(k))), names);
                  }});
  laws.push_back({n, [&](size_t i) -> std::optional<Witness> {
                    if (auto w = diff("unit", {"|0>", nm(i)}, a.mul(a.unit(), e(i)), e(i), names)) return w;
                    return diff("unit", {nm(i), "|0>"}, a.mul(e(i), a.unit()), e(i), names);
                  }});
  laws.push_back({n * n + 1, [&](size_t t) -> std::optional<Witness> {
                    if (t == n * n) {
                      if (auto w = diff("compatibility", {"|0>"}, a.delta(a.unit()), a.unit_tensor(2), names))
                        return w;
                      return diff_scalar("compatibility", {"|0>"}, a.eps(a.unit()), Scalar(1));
                    }
                    size_t i = t / n, j = t % n;
                    if (auto w = diff("compatibility", {nm(i), nm(j)}, a.delta(a.mul(e(i), e(j))),
                                      a.mul_legs(a.delta(e(i)), a.delta(e(j))), names))
                      return w;
                    return diff_scalar("compatibility", {nm(i), nm(j)}, a.eps(a.mul(e(i), e(j))),
                                       a.eps(e(i)) * a.eps(e(j)));
                  }});
  laws.push_back({n, [&](size_t i) {
                    StateVector d = a.delta(e(i));
                    return diff("coassociativity", {nm(i)}, a.delta_leg(d, 0), a.delta_leg(d, 1), names);
                  }});
  laws.push_back({n, [&](size_t i) -> std::optional<Witness> {
                    StateVector d = a.delta(e(i));
                    if (auto w = diff("counit", {nm(i)}, a.eps_leg(d, 0), e(i), names)) return w;
                    return diff("counit", {nm(i)}, a.eps_leg(d, 1), e(i), names);
                  }});
  return run_laws("bialgebra", laws);
}

namespace {

std::vector<std::pair<size_t, Probe<Witness>>> rmatrix_laws(const FinBialgebra& a, const StateVector& r,
                                                            const std::string& prefix) {
  const KeyNames names = a.key_names();
  const size_t n = a.dim();
  std::vector<std::pair<size_t, Probe<Witness>>> laws;
  laws.push_back({1, [&a, r, names, prefix](size_t) {
                    return diff(prefix + "hexagon-1", {}, a.delta_leg(r, 0),
                                a.mul_legs(a.embed(r, 3, 0, 2), a.embed(r, 3, 1, 2)), names);
                  }});
  laws.push_back({1, [&a, r, names, prefix](size_t) {
                    return diff(prefix + "hexagon-2", {}, a.delta_leg(r, 1),
                                a.mul_legs(a.embed(r, 3, 0, 2), a.embed(r, 3, 0, 1)), names);
                  }});
  laws.push_back({2, [&a, r, names, prefix](size_t side) {
                    return diff(prefix + (side == 0 ? "counit-left" : "counit-right"), {},
                                a.eps_leg(r, side), a.unit(), names);
                  }});
  laws.push_back({n, [&a, r, names, prefix](size_t i) {
                    StateVector d = a.delta(StateVector(ix(static_cast<int>(i))));
                    return diff(prefix + "almost-cocommutativity", {a.names()[i]}, a.mul_legs(swap(d), r),
                                a.mul_legs(r, d), names);
                  }});
  return laws;
}

}  // namespace

Verdict check_rmatrix(const FinBialgebra& a, const StateVector& r) {
  return run_laws("rmatrix", rmatrix_laws(a, r, ""));
}

Verdict check_yang_baxter(const FinBialgebra& a, const StateVector& r) {
  StateVector r12 = a.embed(r, 3, 0, 1), r13 = a.embed(r, 3, 0, 2), r23 = a.embed(r, 3, 1, 2);
  auto w = diff("yang-baxter", {}, a.mul_legs(a.mul_legs(r12, r13), r23),
                a.mul_legs(a.mul_legs(r23, r13), r12), a.key_names());
  return w ? Verdict::fail("yang-baxter", *w) : Verdict::pass("yang-baxter");
}

Verdict check_almost_cocommutativity_conjugate(const FinBialgebra& a, const StateVector& r,
                                               const StateVector& r_inv) {
  const size_t n = a.dim();
  KeyNames names = a.key_names();
  return run_laws("almost-cocommutativity-conjugate",
                  {{n, [&](size_t i) {
                      StateVector d = a.delta(StateVector(ix(static_cast<int>(i))));
                      return diff("almost-cocommutativity", {a.names()[i]}, swap(d),
                                  a.mul_legs(a.mul_legs(r, d), r_inv), names);
                    }}});
}

SymmetryFlags check_symmetric_rmatrix(const FinBialgebra& a, const StateVector& r) {
  SymmetryFlags f;
  f.naive_symmetric = r == swap(r);
  f.unitary = a.mul_legs(swap(r), r) == a.unit_tensor(2);
  return f;
}

std::optional<StateVector> invert_tensor(const FinBialgebra& a, const StateVector& r) {
  const StateVector one = a.unit_tensor(2);
  // Unipotent case: r = 1 + N with N nilpotent.
  {
    StateVector nil = r - one;
    StateVector inv = one, power = one;
    const size_t bound = a.dim() * a.dim() + 1;
    for (size_t k = 1; k <= bound; ++k) {
      power = a.mul_legs(power, nil).scaled(Scalar(-1));
      if (power.is_zero()) {
        if (a.mul_legs(r, inv) == one && a.mul_legs(inv, r) == one) return inv;
        break;
      }
      inv += power;
    }
  }
  // Rational case: solve r * X = 1 by Gaussian elimination on left multiplication.
  std::vector<BasisKey> basis;
  for (const auto& x : a.basis())
    for (const auto& y : a.basis()) basis.push_back(BasisKey::tensor({x, y}));
  const size_t m = basis.size();
  std::map<BasisKey, size_t> pos;
  for (size_t i = 0; i < m; ++i) pos[basis[i]] = i;
  std::vector<std::vector<Rational>> mat(m, std::vector<Rational>(m + 1, 0));
  try {
    for (size_t col = 0; col < m; ++col) {
      StateVector img = a.mul_legs(r, StateVector(basis[col]));
      for (const auto& [k, c] : img.terms()) mat[pos.at(k)][col] = c.rational();
    }
    for (const auto& [k, c] : one.terms()) mat[pos.at(k)][m] = c.rational();
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
  for (size_t col = 0, row = 0; col < m; ++col) {
    size_t piv = row;
    while (piv < m && mat[piv][col] == 0) ++piv;
    if (piv == m) return std::nullopt;
    std::swap(mat[piv], mat[row]);
    Rational p = mat[row][col];
    for (auto& v : mat[row]) v /= p;
    for (size_t i = 0; i < m; ++i) {
      if (i == row || mat[i][col] == 0) continue;
      Rational f = mat[i][col];
      for (size_t j = col; j <= m; ++j) mat[i][j] -= f * mat[row][j];
    }
    ++row;
  }
  StateVector inv;
  for (size_t i = 0; i < m; ++i) inv.add(basis[i], Scalar(mat[i][m]));
  if (!(a.mul_legs(inv, r) == one)) return std::nullopt;
  return inv;
}

TwistResult borcherds_twist(const FinBialgebra& a, const StateVector& r) {
  TwistResult out;
  Verdict rm = check_rmatrix(a, r);
  Verdict yb = check_yang_baxter(a, r);
  out.precondition = combine("twist-precondition", {rm, yb});
  if (!out.precondition.passed()) {
    out.certificate = Verdict::skipped("twist-coassociativity", "precondition failed");
    return out;
  }
  out.delta_r = LinearMap::from_function(a.basis(), [&](const BasisKey& k) {
    return a.mul_legs(r, a.delta(StateVector(k)));
  });
  const LinearMap& dr = out.delta_r;
  auto dr_leg = [&](const StateVector& x, size_t leg) {
    StateVector res;
    for (const auto& [k, c] : x.terms()) {
      auto legs = legs_of(k);
      legs.at(leg) = dr.apply(legs[leg]);
      res += tensor(legs).scaled(c);
    }
    return res;
  };
  const size_t n = a.dim();
  KeyNames names = a.key_names();
  out.certificate = run_laws(
      "twist-coassociativity",
      {{n, [&](size_t i) {
          StateVector d = dr.apply(StateVector(ix(static_cast<int>(i))));
          return diff("twist-coassociativity", {a.names()[i]}, dr_leg(d, 0), dr_leg(d, 1), names);
        }},
       {n, [&](size_t i) -> std::optional<Witness> {
          StateVector e = StateVector(ix(static_cast<int>(i)));
          StateVector d = dr.apply(e);
          if (auto w = diff("twist-counit", {a.names()[i]}, a.eps_leg(d, 0), e, names)) return w;
          return diff("twist-counit", {a.names()[i]}, a.eps_leg(d, 1), e, names);
        }}});
  return out;
}

Verdict check_twist_compatible(const FinBialgebra& a, const StateVector& r, const StateVector& s) {
  KeyNames names = a.key_names();
  const size_t n = a.dim();
  StateVector s13 = a.embed(s, 3, 0, 2);
  std::vector<std::pair<size_t, Probe<Witness>>> laws;
  laws.push_back({1, [&](size_t) {
                    return diff("s-hexagon-1", {}, a.delta_leg(s, 0), a.mul_legs(s13, a.embed(s, 3, 1, 2)),
                                names);
                  }});
  laws.push_back({1, [&](size_t) {
                    return diff("s-hexagon-2", {}, a.delta_leg(s, 1), a.mul_legs(s13, a.embed(s, 3, 0, 1)),
                                names);
                  }});
  laws.push_back({n, [&](size_t i) {
                    StateVector d = a.delta(StateVector(ix(static_cast<int>(i))));
                    return diff("s-almost-commutativity", {a.names()[i]}, a.mul_legs(s, d), a.mul_legs(d, s),
                                names);
                  }});
  laws.push_back({2, [&](size_t which) {
                    StateVector rr = which == 0 ? a.embed(r, 3, 1, 2) : a.embed(r, 3, 0, 1);
                    return diff(which == 0 ? "r23-s13-commute" : "r12-s13-commute", {},
                                a.mul_legs(rr, s13), a.mul_legs(s13, rr), names);
                  }});
  Verdict v = run_laws("twist-compatible", laws);
  if (!v.passed()) return v;
  Verdict rs = check_rmatrix(a, a.mul_legs(r, s));
  if (!rs.passed()) {
    rs.name = "twist-compatible";
    rs.detail = "R*S is not an R-matrix";
    return rs;
  }
  return Verdict::pass("twist-compatible", "R*S certified");
}

StateVector BorcherdsProduct::mul(const StateVector& a, const StateVector& b) const {
  StateVector r;
  for (const auto& [x, cx] : a.terms())
    for (const auto& [y, cy] : b.terms()) {
      auto it = table.find({x.label, y.label});
      if (it != table.end()) r += it->second.scaled(cx * cy);
    }
  return r;
}

BorcherdsProduct borcherds_product_from(const FinBialgebra& a) {
  BorcherdsProduct p;
  for (const auto& x : a.basis())
    for (const auto& y : a.basis()) p.table[{x.label, y.label}] = a.mul(StateVector(x), StateVector(y));
  p.unit = a.unit();
  return p;
}

BorcherdsProduct z2_convolution_product() {
  BorcherdsProduct p;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) p.table[{x, y}] = StateVector(ix((x + y) % 2));
  p.unit = StateVector(ix(0));
  return p;
}

namespace {

// Borcherds laws in order; `full` adds associativity, unit and linearity before the square.
Verdict borcherds_laws(const FinBialgebra& a, const StateVector& r, const BorcherdsProduct& m2,
                       const std::string& name, bool full) {
  KeyNames names = a.key_names();
  const size_t n = a.dim();
  auto e = [](size_t i) { return StateVector(ix(static_cast<int>(i))); };
  auto nm = [&](size_t i) { return a.names()[i]; };
  // m2 applied to every pure tensor of a two-fold element.
  auto m2_two = [&](const StateVector& x) {
    StateVector out;
    for (const auto& [k, c] : x.terms())
      out += m2.mul(StateVector(k.leg(0)), StateVector(k.leg(1))).scaled(c);
    return out;
  };
  auto m2_four = [&](const StateVector& x) {
    StateVector out;
    for (const auto& [k, c] : x.terms())
      out += tensor(m2.mul(StateVector(k.leg(0)), StateVector(k.leg(1))),
                    m2.mul(StateVector(k.leg(2)), StateVector(k.leg(3))))
                 .scaled(c);
    return out;
  };

  if (full) {
    Verdict assoc = run_laws(name, {{n * n * n, [&](size_t t) {
                                       size_t i = t / (n * n), j = (t / n) % n, k = t % n;
                                       return diff("m2-associativity", {nm(i), nm(j), nm(k)},
                                                   m2.mul(m2.mul(e(i), e(j)), e(k)),
                                                   m2.mul(e(i), m2.mul(e(j), e(k))), names);
                                     }}});
    if (!assoc.passed()) {
      assoc.detail = "m2 rejected: not associative";
      return assoc;
    }
  }
  auto r_inv = invert_tensor(a, r);
  if (!r_inv) return Verdict::skipped(name, "R has no exact inverse available");
  StateVector corr = a.mul_legs(a.embed(*r_inv, 4, 0, 3), a.embed(swap(*r_inv), 4, 1, 2));

  std::vector<std::pair<size_t, Probe<Witness>>> laws;
  if (full) {
    laws.push_back({n, [&](size_t i) -> std::optional<Witness> {
                      if (auto w = diff("m2-unit", {"|0>", nm(i)}, m2.mul(m2.unit, e(i)), e(i), names)) return w;
                      return diff("m2-unit", {nm(i), "|0>"}, m2.mul(e(i), m2.unit), e(i), names);
                    }});
    laws.push_back({n * n * n, [&](size_t t) {
                      size_t i = t / (n * n), j = (t / n) % n, k = t % n;
                      StateVector xy = tensor(e(j), e(k));
                      return diff("linearity", {nm(i), nm(j), nm(k)}, m2_two(a.mul_legs(a.delta(e(i)), xy)),
                                  a.mul(e(i), m2_two(xy)), names);
                    }});
  }
  laws.push_back({n * n, [&](size_t t) {
                    size_t i = t / n, j = t % n;
                    StateVector w = permute_legs(tensor(a.delta(e(i)), a.delta(e(j))), {0, 2, 1, 3});
                    return diff("excess-intersection", {nm(i), nm(j)}, a.delta(m2.mul(e(i), e(j))),
                                m2_four(a.mul_legs(corr, w)), names);
                  }});
  return run_laws(name, laws);
}

}  // namespace

Verdict check_borcherds_product(const FinBialgebra& a, const StateVector& r, const BorcherdsProduct& m2) {
  Verdict v = borcherds_laws(a, r, m2, "borcherds-product", true);
  if (v.passed()) v.detail = "(A, R*Delta, m2) is a bialgebra in the twisted module category";
  return v;
}

Verdict check_excess_intersection(const FinBialgebra& a, const StateVector& r, const BorcherdsProduct& m2) {
  return borcherds_laws(a, r, m2, "excess-intersection", false);
}

Scalar eval_functional(const Functional& f, const BasisKey& x, const BasisKey& y) {
  auto it = f.find({x.label, y.label});
  return it == f.end() ? Scalar() : it->second;
}

namespace {

Scalar eval_functional(const Functional& f, const StateVector& x, const StateVector& y) {
  Scalar s;
  for (const auto& [kx, cx] : x.terms())
    for (const auto& [ky, cy] : y.terms()) s += eval_functional(f, kx, ky) * cx * cy;
  return s;
}

}  // namespace

Verdict check_op_rmatrix(const FinBialgebra& h, const Functional& r) {
  const size_t n = h.dim();
  KeyNames names = h.key_names();
  auto e = [](size_t i) { return StateVector(ix(static_cast<int>(i))); };
  auto nm = [&](size_t i) { return h.names()[i]; };
  // Sweedler sum of f(x_1, y_1) * g(x_2, y_2) over Delta(x) and Delta(y).
  auto pair_sum = [&](const StateVector& x, const StateVector& y,
                      const std::function<StateVector(const BasisKey&, const BasisKey&, const BasisKey&,
                                                      const BasisKey&)>& f) {
    StateVector out;
    const StateVector dx = h.delta(x), dy = h.delta(y);
    for (const auto& [kx, cx] : dx.terms())
      for (const auto& [ky, cy] : dy.terms())
        out += f(kx.leg(0), kx.leg(1), ky.leg(0), ky.leg(1)).scaled(cx * cy);
    return out;
  };
  std::vector<std::pair<size_t, Probe<Witness>>> laws;
  laws.push_back({n * n * n, [&](size_t t) -> std::optional<Witness> {
                    size_t i = t / (n * n), j = (t / n) % n, k = t % n;
                    // r(xy, z) = r(x, z_1) r(y, z_2)
                    Scalar lhs = eval_functional(r, h.mul(e(i), e(j)), e(k));
                    Scalar rhs;
                    const StateVector dz = h.delta(e(k));
                    for (const auto& [kz, cz] : dz.terms())
                      rhs += eval_functional(r, ix(int(i)), kz.leg(0)) * eval_functional(r, ix(int(j)), kz.leg(1)) * cz;
                    if (auto w = diff_scalar("op-hexagon-1", {nm(i), nm(j), nm(k)}, lhs, rhs)) return w;
                    // r(x, yz) = r(x_1, z) r(x_2, y)
                    lhs = eval_functional(r, e(i), h.mul(e(j), e(k)));
                    rhs = Scalar();
                    const StateVector dx = h.delta(e(i));
                    for (const auto& [kx, cx] : dx.terms())
                      rhs += eval_functional(r, kx.leg(0), ix(int(k))) * eval_functional(r, kx.leg(1), ix(int(j))) * cx;
                    return diff_scalar("op-hexagon-2", {nm(i), nm(j), nm(k)}, lhs, rhs);
                  }});
  laws.push_back({n, [&](size_t i) -> std::optional<Witness> {
                    if (auto w = diff_scalar("op-unit", {"|0>", nm(i)}, eval_functional(r, h.unit(), e(i)),
                                             h.eps(e(i))))
                      return w;
                    return diff_scalar("op-unit", {nm(i), "|0>"}, eval_functional(r, e(i), h.unit()), h.eps(e(i)));
                  }});
  laws.push_back({n * n, [&](size_t t) {
                    size_t i = t / n, j = t % n;
                    // r(x_1, y_1) y_2 x_2 = x_1 y_1 r(x_2, y_2)
                    StateVector lhs = pair_sum(e(i), e(j), [&](const BasisKey& x1, const BasisKey& x2,
                                                               const BasisKey& y1, const BasisKey& y2) {
                      return h.mul(StateVector(y2), StateVector(x2)).scaled(eval_functional(r, x1, y1));
                    });
                    StateVector rhs = pair_sum(e(i), e(j), [&](const BasisKey& x1, const BasisKey& x2,
                                                               const BasisKey& y1, const BasisKey& y2) {
                      return h.mul(StateVector(x1), StateVector(y1)).scaled(eval_functional(r, x2, y2));
                    });
                    return diff("op-almost-commutativity", {nm(i), nm(j)}, lhs, rhs, names);
                  }});
  return run_laws("op-rmatrix", laws);
}

Functional sign_op_rmatrix() {
  Functional f;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) f[{a, b}] = Scalar(Rational((a && b) ? -1 : 1, 2));
  return f;
}

}  // namespace vqg
