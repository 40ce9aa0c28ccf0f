#include "vqg/vertex.hpp"

#include <algorithm>
#include <mutex>
#include <shared_mutex>

#include "vqg/parallel.hpp"

namespace vqg {

namespace {

// One-variable scalar series, all exponents below a cut.
using Ser = std::map<int, Scalar>;

Ser ser_mul(const Ser& a, const Ser& b, int high) {
  Ser r;
  for (const auto& [i, x] : a)
    for (const auto& [j, y] : b) {
      if (i + j >= high) break;
      Scalar& s = r[i + j];
      s += x * y;
    }
  for (auto it = r.begin(); it != r.end();)
    it = it->second.is_zero() ? r.erase(it) : std::next(it);
  return r;
}

// Inverse of a power series with invertible rational constant term.
Ser ser_inverse(const Ser& v, int high) {
  Rational c0 = v.at(0).rational();
  Ser inv;
  for (int n = 0; n < high; ++n) {
    Scalar s = n == 0 ? Scalar(1) : Scalar();
    for (int k = 1; k <= n; ++k) {
      auto it = v.find(k);
      auto jt = inv.find(n - k);
      if (it != v.end() && jt != inv.end()) s -= it->second * jt->second;
    }
    if (!s.is_zero()) inv[n] = s / c0;
  }
  return inv;
}

// (z v(z))^m for v(0) != 0, exponents < high.
Ser zpow(const Ser& v, int m, int high) {
  if (m >= high) return {};
  int len = high - m;  // exponents of v^m needed: [0, len)
  Ser base = m >= 0 ? v : ser_inverse(v, len);
  Ser r{{0, Scalar(1)}};
  for (int i = 0; i < std::abs(m); ++i) r = ser_mul(r, base, len);
  Ser out;
  for (const auto& [e, c] : r) out[e + m] = c;
  return out;
}

// u(z) / z
Ser u_over_z(const GroupLawConfig& g, int len) {
  Ser v;
  for (int k = 0; k < len; ++k) {
    Rational c = g.u_coeff(k + 1);
    if (c != 0) v[k] = Scalar(c);
  }
  return v;
}

// (-_g z) / z: -1 (additive) or -1/(1+z) (multiplicative).
Ser minus_over_z(const GroupLawConfig& g, int len) {
  Ser v;
  if (g.law == GroupLaw::Additive) {
    v[0] = Scalar(-1);
    return v;
  }
  for (int k = 0; k < len; ++k) v[k] = Scalar(k % 2 ? 1 : -1);
  return v;
}

StateVector coeff_of(const VSeries& s, int n) {
  auto it = s.find(n);
  return it == s.end() ? StateVector() : it->second;
}

void add_to(VSeries& s, int n, const StateVector& v) {
  if (v.is_zero()) return;
  StateVector& slot = s[n];
  slot += v;
  if (slot.is_zero()) s.erase(n);
}

std::optional<Witness> vec_diff(const std::string& check, std::vector<std::string> tuple,
                                std::vector<int> exps, const StateVector& lhs, const StateVector& rhs,
                                const KeyNames& names) {
  if (lhs == rhs) return std::nullopt;
  return Witness{check, std::move(tuple), std::move(exps), lhs.str(names), rhs.str(names)};
}

std::pair<int, int> one_var_range(const CheckWindow& w, int pole) {
  if (w.range) return *w.range;
  return {pole, pole + w.degree + 1};
}

// Y_S(b, x) a = sum S(b1, a1)(x) Y(b2, x) a2, or plain Y when s is null.
VSeries twisted_Y(const VertexEngine& e, const VertexRMatrix* s, const BasisKey& b, const BasisKey& a,
                  int high) {
  if (!s) return e.Y(b, a, high);
  if (!e.delta) throw std::invalid_argument("braided check needs a coproduct");
  VSeries out;
  StateVector db = e.delta(b), da = e.delta(a);
  for (const auto& [kb, cb] : db.terms())
    for (const auto& [ka, ca] : da.terms()) {
      Laurent f = s->eval(kb.leg(0), ka.leg(0));
      if (f.is_zero()) continue;
      int flow = f.low();
      VSeries y = e.Y(kb.leg(1), ka.leg(1), high - flow);
      for (const auto& [fe, fc] : f.terms())
        for (const auto& [ye, yv] : y) {
          if (fe + ye >= high) break;
          add_to(out, fe + ye, yv.scaled(fc * cb * ca));
        }
    }
  return out;
}

int series_low(const VSeries& s, int fallback) { return s.empty() ? fallback : s.begin()->first; }

}  // namespace

GroupLawConfig GroupLawConfig::additive() { return {}; }

GroupLawConfig GroupLawConfig::multiplicative(int order) {
  GroupLawConfig g;
  g.law = GroupLaw::Multiplicative;
  g.u.clear();
  for (int k = 1; k <= order; ++k) g.u.push_back(Rational(k % 2 ? 1 : -1, k));
  return g;
}

Rational GroupLawConfig::u_coeff(int k) const {
  if (k < 1 || static_cast<size_t>(k) > u.size()) return 0;
  return u[k - 1];
}

VertexRMatrix trivial_vertex_rmatrix(std::function<Scalar(const BasisKey&)> counit) {
  return {"trivial", [counit](const BasisKey& x, const BasisKey& y) { return Laurent(counit(x) * counit(y)); }};
}

VSeries apply_Y(const VertexEngine& e, const StateVector& a, const StateVector& b, int high) {
  VSeries out;
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms())
    {
      const Scalar c = ca * cb;
      auto put = [&](int n, const StateVector& v) {
        StateVector& slot = out[n];
        slot.add_scaled(v, c);
        if (slot.is_zero()) out.erase(n);
      };
      if (e.Y_cached) {
        auto y = e.Y_cached(ka, kb, high);
        for (auto it = y->begin(); it != y->end() && it->first < high; ++it) put(it->first, it->second);
      } else {
        for (const auto& [n, v] : e.Y(ka, kb, high)) put(n, v);
      }
    }
  return out;
}

int pole_bound(const VertexEngine& e, const StateVector& a, const StateVector& b) {
  int p = 0;
  bool any = false;
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      int q = e.pole_bound(ka, kb);
      p = any ? std::min(p, q) : q;
      any = true;
    }
  return p;
}

VertexEngine memoized(VertexEngine e) {
  struct Cache {
    std::shared_mutex mu;
    std::map<std::pair<BasisKey, BasisKey>, std::pair<int, std::shared_ptr<const VSeries>>> data;
  };
  auto cache = std::make_shared<Cache>();
  auto inner = e.Y;
  e.Y_cached = [cache, inner](const BasisKey& a, const BasisKey& b, int high) {
    {
      std::shared_lock lock(cache->mu);
      auto it = cache->data.find({a, b});
      if (it != cache->data.end() && it->second.first >= high) return it->second.second;
    }
    auto fresh = std::make_shared<const VSeries>(inner(a, b, high));
    std::unique_lock lock(cache->mu);
    auto [it, inserted] = cache->data.try_emplace({a, b}, high, fresh);
    if (!inserted && it->second.first < high) it->second = {high, fresh};
    return fresh;
  };
  e.Y = [cached = e.Y_cached](const BasisKey& a, const BasisKey& b, int high) {
    auto y = cached(a, b, high);
    return VSeries(y->begin(), y->lower_bound(high));
  };
  return e;
}

VertexEngine holomorphic_engine(std::string name, StateVector unit,
                                std::function<StateVector(const StateVector&, const StateVector&)> product,
                                std::function<StateVector(const StateVector&)> T,
                                std::function<std::vector<BasisKey>(int)> states) {
  VertexEngine e;
  e.name = std::move(name);
  e.vacuum = unit;
  e.T = T;
  e.states = std::move(states);
  e.pole_bound = [](const BasisKey&, const BasisKey&) { return 0; };
  e.Y = [product, T](const BasisKey& a, const BasisKey& b, int high) {
    VSeries out;
    StateVector power(a);
    StateVector bv(b);
    for (int k = 0; k < high && !power.is_zero(); ++k) {
      add_to(out, k, product(power, bv));
      power = T(power).scaled(Scalar(Rational(1, k + 1)));
    }
    return out;
  };
  return e;
}

VertexEngine polynomial_engine() {
  auto product = [](const StateVector& a, const StateVector& b) {
    StateVector r;
    for (const auto& [x, cx] : a.terms())
      for (const auto& [y, cy] : b.terms()) r.add(BasisKey::poly({x.lambda[0] + y.lambda[0]}), cx * cy);
    return r;
  };
  auto T = [](const StateVector& a) {
    StateVector r;
    for (const auto& [x, c] : a.terms())
      if (x.lambda[0] > 0) r.add(BasisKey::poly({x.lambda[0] - 1}), c * Scalar(x.lambda[0]));
    return r;
  };
  auto states = [](int max_weight) {
    std::vector<BasisKey> s;
    for (int d = 0; d <= max_weight; ++d) s.push_back(BasisKey::poly({d}));
    return s;
  };
  VertexEngine e = holomorphic_engine("k[x]", StateVector(BasisKey::poly({0})), product, T, states);
  // x is primitive and 1 grouplike: Delta(x^n) = sum C(n,k) x^k (x) x^{n-k}.
  e.delta = [](const BasisKey& k) {
    StateVector r;
    int n = k.lambda[0];
    for (int i = 0; i <= n; ++i)
      r.add(BasisKey::tensor({BasisKey::poly({i}), BasisKey::poly({n - i})}), Scalar(binomial(n, i)));
    return r;
  };
  e.counit = [](const BasisKey& k) { return Scalar(k.lambda[0] == 0 ? 1 : 0); };
  e.names.poly_vars = {"x"};
  e.context.lookup = [](const std::string& name) -> std::optional<StateVector> {
    if (name == "x") return StateVector(BasisKey::poly({1}));
    if (name == "|0>") return StateVector(BasisKey::poly({0}));
    return std::nullopt;
  };
  e.context.product = product;
  return e;
}

VertexEngine coordinate_view(const VertexEngine& base, GroupLawConfig g) {
  VertexEngine e = base;
  e.group_law = g;
  e.Y_cached = nullptr;
  auto inner = base.Y;
  e.Y = [inner, g](const BasisKey& a, const BasisKey& b, int high) {
    VSeries out;
    // sum_m c_m u(z)^m; u^m starts at z^m, so only m < high contribute.
    VSeries y = inner(a, b, high);
    if (y.empty()) return out;
    int low = y.begin()->first;
    Ser v = u_over_z(g, std::max(1, high - low));
    for (const auto& [m, c] : y) {
      for (const auto& [n, s] : zpow(v, m, high)) add_to(out, n, c.scaled(s));
    }
    return out;
  };
  return memoized(std::move(e));
}

VertexEngine multiplicative_view(const VertexEngine& e, int order) {
  return coordinate_view(e, GroupLawConfig::multiplicative(order));
}

// ---- checks ----

Verdict check_vacuum(const VertexEngine& e, const std::vector<BasisKey>& states, int degree) {
  const size_t n = states.size();
  auto probe = [&](size_t i) -> std::optional<Witness> {
    const BasisKey& b = states[i];
    std::string bs = key_str(b, e.names);
    int lo = pole_bound(e, e.vacuum, StateVector(b));
    VSeries y = apply_Y(e, e.vacuum, StateVector(b), degree + 1);
    for (int k = std::min(lo, 0); k <= degree; ++k) {
      StateVector expect = k == 0 ? StateVector(b) : StateVector();
      if (auto w = vec_diff("vacuum", {"|0>", bs}, {k}, coeff_of(y, k), expect, e.names)) return w;
    }
    int plo = pole_bound(e, StateVector(b), e.vacuum);
    VSeries c = apply_Y(e, StateVector(b), e.vacuum, 1);
    for (int k = std::min(plo, 0); k <= 0; ++k) {
      StateVector expect = k == 0 ? StateVector(b) : StateVector();
      if (auto w = vec_diff("creation", {bs, "|0>"}, {k}, coeff_of(c, k), expect, e.names)) return w;
    }
    return std::nullopt;
  };
  auto r = first_failure<Witness>(n, probe);
  return r ? Verdict::fail("vacuum", r->second) : Verdict::pass("vacuum");
}

Verdict check_translation(const VertexEngine& e, const std::vector<BasisKey>& states, CheckWindow w) {
  const size_t n = states.size();
  auto probe = [&](size_t t) -> std::optional<Witness> {
    const BasisKey& a = states[t / n];
    const BasisKey& b = states[t % n];
    StateVector tb = e.T(StateVector(b));
    int pole = std::min(e.pole_bound(a, b), pole_bound(e, StateVector(a), tb)) - 1;
    auto [lo, hi] = one_var_range(w, pole);
    VSeries y = e.Y(a, b, hi + 1);
    VSeries ytb = apply_Y(e, StateVector(a), tb, hi);
    for (int k = lo; k < hi; ++k) {
      StateVector lhs = e.T(coeff_of(y, k)) - coeff_of(ytb, k);
      StateVector rhs = coeff_of(y, k + 1).scaled(Scalar(k + 1));
      if (auto wt = vec_diff("translation", {key_str(a, e.names), key_str(b, e.names)}, {k}, lhs, rhs, e.names))
        return wt;
    }
    return std::nullopt;
  };
  auto r = first_failure<Witness>(n * n, probe);
  return r ? Verdict::fail("translation", r->second) : Verdict::pass("translation");
}

namespace {

// Y(a,z)b against e^{u(z)T} Y_S(b, -_g z) a.
std::optional<Witness> skew_probe(const VertexEngine& e, const VertexRMatrix* s, const BasisKey& a,
                                  const BasisKey& b, const CheckWindow& w, const std::string& id) {
  auto [lo, hi] = one_var_range(w, e.pole_bound(a, b));
  if (hi <= lo) return std::nullopt;
  VSeries lhs = e.Y(a, b, hi);
  VSeries g = twisted_Y(e, s, b, a, hi);
  const GroupLawConfig& law = e.group_law;
  int glow = series_low(g, hi);
  int len = std::max(1, hi - std::min(glow, 0));
  Ser uv = u_over_z(law, len + 1);
  Ser mv = minus_over_z(law, len + 1);
  // u^j multiplies w^m with m >= glow, so it is needed below hi - glow.
  const int uhigh = hi - std::min(glow, 0);
  std::vector<Ser> upow;
  for (int j = 0; j < uhigh; ++j) upow.push_back(zpow(uv, j, uhigh));
  VSeries rhs;
  for (const auto& [m, cm] : g) {
    if (m >= hi) break;
    Ser wm = zpow(mv, m, hi);
    StateVector tj = cm;
    for (size_t j = 0; j < upow.size() && static_cast<int>(j) + m < hi && !tj.is_zero(); ++j) {
      Ser prod = ser_mul(upow[j], wm, hi);
      for (const auto& [n, c] : prod) add_to(rhs, n, tj.scaled(c));
      tj = e.T(tj).scaled(Scalar(Rational(1, static_cast<long>(j) + 1)));
    }
  }
  for (int k = std::min(lo, std::min(series_low(rhs, lo), series_low(lhs, lo))); k < hi; ++k) {
    if (auto wt = vec_diff(id, {key_str(a, e.names), key_str(b, e.names)}, {k}, coeff_of(lhs, k),
                           coeff_of(rhs, k), e.names))
      return wt;
  }
  return std::nullopt;
}

// Cleared-pole associativity on a window; `mult` selects z1 + z2 + z1 z2.
std::optional<Witness> assoc_probe(const VertexEngine& e, const BasisKey& a, const BasisKey& b,
                                   const BasisKey& c, const CheckWindow& w, bool mult, const std::string& id) {
  const int pab = e.pole_bound(a, b), pbc = e.pole_bound(b, c);
  const int N = std::max(0, -e.pole_bound(a, c));
  // Window of (p, q) exponents of (z1, z2).
  std::vector<std::pair<int, int>> cells;
  if (w.range) {
    for (int p = w.range->first; p < w.range->second; ++p)
      for (int q = w.range->first; q < w.range->second; ++q) cells.push_back({p, q});
  } else {
    for (int d = 0; d <= w.degree; ++d)
      for (int i = 0; i <= d; ++i) cells.push_back({pab + i, pbc + d - i});
  }
  if (cells.empty()) return std::nullopt;
  int maxp = pab, maxq = pbc, minq = pbc;
  for (auto [p, q] : cells) {
    maxp = std::max(maxp, p);
    maxq = std::max(maxq, q);
    minq = std::min(minq, q);
  }
  // x^N with x = z1 + z2 + c z1 z2, as (i1, i2) -> coefficient.
  std::map<std::pair<int, int>, Rational> mult_poly{{{0, 0}, Rational(1)}};
  for (int t = 0; t < N; ++t) {
    std::map<std::pair<int, int>, Rational> next;
    for (const auto& [ij, v] : mult_poly) {
      next[{ij.first + 1, ij.second}] += v;
      next[{ij.first, ij.second + 1}] += v;
      if (mult) next[{ij.first + 1, ij.second + 1}] += v;
    }
    mult_poly = std::move(next);
  }

  // Left side: Y(Y(a,z1)b, z2)c.
  VSeries yab = e.Y(a, b, maxp + 1);
  std::map<int, VSeries> lraw;
  // Only the coefficients some cell can reach: q - i2 with i2 >= 0 and p - i1 = m, i1 >= 0.
  auto lneed = [&](int m) {
    int h = minq - 1;
    for (auto [p, q] : cells)
      if (p >= m) h = std::max(h, q);
    return h + 1;
  };
  for (const auto& [m, d] : yab)
    lraw[m] = apply_Y(e, d, StateVector(c), lneed(m));
  auto lhs_at = [&](int p, int q) {
    StateVector s;
    for (const auto& [ij, v] : mult_poly) {
      auto it = lraw.find(p - ij.first);
      if (it == lraw.end()) continue;
      s += coeff_of(it->second, q - ij.second).scaled(Scalar(v));
    }
    return s;
  };

  // Right side: Y(a, x) Y(b, z2) c with z2 small.
  VSeries ybc = e.Y(b, c, maxq + 1);
  int kmax = maxp + maxq - pbc - N + 1;
  std::map<int, VSeries> g;
  // g_n is read at x-exponent p + j - t - N with j = q - n.
  auto gneed = [&](int n) {
    int h = -1 << 20;
    for (auto [p, q] : cells)
      if (q >= n) h = std::max(h, p + q - n - N);
    return std::min(h, kmax) + 1;
  };
  for (const auto& [n, f] : ybc) g[n] = apply_Y(e, StateVector(a), f, gneed(n));
  auto rhs_at = [&](int p, int q) {
    StateVector s;
    for (const auto& [n, gn] : g) {
      int j = q - n;
      if (j < 0) break;
      for (int t = 0; t <= (mult ? j : 0); ++t) {
        int m = p + j - t;  // exponent of x
        int k = m - N;
        StateVector gk = coeff_of(gn, k);
        if (gk.is_zero()) continue;
        Rational cf = binomial(m, j) * (mult ? binomial(j, t) : Rational(1));
        if (cf != 0) s += gk.scaled(Scalar(cf));
      }
    }
    return s;
  };
  std::sort(cells.begin(), cells.end());
  for (auto [p, q] : cells) {
    if (auto wt = vec_diff(id, {key_str(a, e.names), key_str(b, e.names), key_str(c, e.names)}, {p, q},
                           lhs_at(p, q), rhs_at(p, q), e.names))
      return wt;
  }
  return std::nullopt;
}

Verdict as_verdict(const std::string& name, const std::optional<Witness>& w) {
  return w ? Verdict::fail(name, *w) : Verdict::pass(name);
}

template <class F>
Verdict guarded(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const WindowExceeded& ex) {
    return Verdict::truncation(name, ex.what());
  } catch (const TruncationInsufficient& ex) {
    return Verdict::truncation(name, ex.what());
  }
}

}  // namespace

Verdict check_skew_commutativity(const VertexEngine& e, const BasisKey& a, const BasisKey& b, CheckWindow w) {
  return guarded("skew-commutativity",
                 [&] { return as_verdict("skew-commutativity", skew_probe(e, nullptr, a, b, w, "skew-commutativity")); });
}

Verdict check_braided_skew_commutativity(const VertexEngine& e, const VertexRMatrix& s, const BasisKey& a,
                                         const BasisKey& b, CheckWindow w) {
  return guarded("braided-skew-commutativity", [&] {
    return as_verdict("braided-skew-commutativity",
                      skew_probe(e, &s, a, b, w, "braided-skew-commutativity"));
  });
}

Verdict check_weak_associativity(const VertexEngine& e, const BasisKey& a, const BasisKey& b,
                                 const BasisKey& c, CheckWindow w) {
  return guarded("associativity", [&] {
    bool mult = e.group_law.law == GroupLaw::Multiplicative;
    return as_verdict("associativity", assoc_probe(e, a, b, c, w, mult, "associativity"));
  });
}

Verdict check_multiplicative_axioms(const VertexEngine& e, const BasisKey& a, const BasisKey& b, CheckWindow w) {
  if (e.group_law.law != GroupLaw::Multiplicative)
    throw std::invalid_argument("multiplicative axioms need the multiplicative group law");
  return guarded("multiplicative", [&]() -> Verdict {
    if (auto wt = skew_probe(e, nullptr, a, b, w, "multiplicative-skew")) return Verdict::fail("multiplicative", *wt);
    if (auto wt = assoc_probe(e, a, b, a, w, true, "multiplicative-associativity"))
      return Verdict::fail("multiplicative", *wt);
    return Verdict::pass("multiplicative");
  });
}

Verdict check_skew_all(const VertexEngine& e, const std::vector<BasisKey>& states, CheckWindow w) {
  const size_t n = states.size();
  return guarded("skew-commutativity", [&] {
    auto r = first_failure<Witness>(n * n, [&](size_t t) {
      return skew_probe(e, nullptr, states[t / n], states[t % n], w, "skew-commutativity");
    });
    return r ? Verdict::fail("skew-commutativity", r->second) : Verdict::pass("skew-commutativity");
  });
}

Verdict check_braided_skew_all(const VertexEngine& e, const VertexRMatrix& s,
                               const std::vector<BasisKey>& states, CheckWindow w) {
  const size_t n = states.size();
  return guarded("braided-skew-commutativity", [&] {
    auto r = first_failure<Witness>(n * n, [&](size_t t) {
      return skew_probe(e, &s, states[t / n], states[t % n], w, "braided-skew-commutativity");
    });
    return r ? Verdict::fail("braided-skew-commutativity", r->second)
             : Verdict::pass("braided-skew-commutativity");
  });
}

Verdict check_associativity_all(const VertexEngine& e, const std::vector<BasisKey>& states, CheckWindow w) {
  const size_t n = states.size();
  bool mult = e.group_law.law == GroupLaw::Multiplicative;
  return guarded("associativity", [&] {
    auto r = first_failure<Witness>(n * n * n, [&](size_t t) {
      return assoc_probe(e, states[t / (n * n)], states[(t / n) % n], states[t % n], w, mult, "associativity");
    });
    return r ? Verdict::fail("associativity", r->second) : Verdict::pass("associativity");
  });
}

Verdict check_multiplicative_all(const VertexEngine& e, const std::vector<BasisKey>& states, CheckWindow w) {
  if (e.group_law.law != GroupLaw::Multiplicative)
    throw std::invalid_argument("multiplicative axioms need the multiplicative group law");
  const size_t n = states.size();
  return guarded("multiplicative", [&]() -> Verdict {
    auto s = first_failure<Witness>(n * n, [&](size_t t) {
      return skew_probe(e, nullptr, states[t / n], states[t % n], w, "multiplicative-skew");
    });
    if (s) return Verdict::fail("multiplicative", s->second);
    auto r = first_failure<Witness>(n * n * n, [&](size_t t) {
      return assoc_probe(e, states[t / (n * n)], states[(t / n) % n], states[t % n], w, true,
                         "multiplicative-associativity");
    });
    return r ? Verdict::fail("multiplicative", r->second) : Verdict::pass("multiplicative");
  });
}

Verdict check_coproduct_compatibility(const VertexEngine& e, const std::vector<BasisKey>& states, CheckWindow w) {
  if (!e.delta || !e.counit) throw std::invalid_argument("engine has no coproduct");
  auto delta_vec = [&](const StateVector& v) {
    StateVector r;
    for (const auto& [k, c] : v.terms()) r += e.delta(k).scaled(c);
    return r;
  };
  auto eps_vec = [&](const StateVector& v) {
    Scalar s;
    for (const auto& [k, c] : v.terms()) s += e.counit(k) * c;
    return s;
  };
  auto t_leg = [&](const StateVector& x, size_t leg) {
    StateVector r;
    for (const auto& [k, c] : x.terms()) {
      std::vector<StateVector> legs{StateVector(k.leg(0)), StateVector(k.leg(1))};
      legs[leg] = e.T(legs[leg]);
      r += tensor(legs).scaled(c);
    }
    return r;
  };
  const KeyNames& nm = e.names;
  return guarded("coproduct-compatibility", [&]() -> Verdict {
    if (auto wt = vec_diff("grouplike-vacuum", {"|0>"}, {}, delta_vec(e.vacuum), tensor(e.vacuum, e.vacuum), nm))
      return Verdict::fail("coproduct-compatibility", *wt);
    if (!(eps_vec(e.vacuum) == Scalar(1)))
      return Verdict::fail("coproduct-compatibility",
                           Witness{"counit-vacuum", {"|0>"}, {}, eps_vec(e.vacuum).str(), "1"});
    const size_t n = states.size();
    auto r1 = first_failure<Witness>(n, [&](size_t i) -> std::optional<Witness> {
      StateVector b(states[i]);
      StateVector db = delta_vec(b);
      if (auto wt = vec_diff("coderivation", {key_str(states[i], nm)}, {}, delta_vec(e.T(b)),
                             t_leg(db, 0) + t_leg(db, 1), nm))
        return wt;
      Scalar et = eps_vec(e.T(b));
      if (!et.is_zero()) return Witness{"counit-translation", {key_str(states[i], nm)}, {}, et.str(), "0"};
      return std::nullopt;
    });
    if (r1) return Verdict::fail("coproduct-compatibility", r1->second);
    auto r2 = first_failure<Witness>(n * n, [&](size_t t) -> std::optional<Witness> {
      const BasisKey& a = states[t / n];
      const BasisKey& b = states[t % n];
      auto [lo, hi] = one_var_range(w, e.pole_bound(a, b));
      VSeries y = e.Y(a, b, hi);
      VSeries rhs;
      StateVector da = e.delta(a), db = e.delta(b);
      for (const auto& [ka, ca] : da.terms())
        for (const auto& [kb, cb] : db.terms()) {
          int p2 = e.pole_bound(ka.leg(1), kb.leg(1));
          int p1 = e.pole_bound(ka.leg(0), kb.leg(0));
          VSeries y1 = e.Y(ka.leg(0), kb.leg(0), hi - std::min(p2, 0) + 1);
          VSeries y2 = e.Y(ka.leg(1), kb.leg(1), hi - std::min(p1, 0) + 1);
          for (const auto& [i, v1] : y1)
            for (const auto& [j, v2] : y2) {
              if (i + j >= hi) break;
              add_to(rhs, i + j, tensor(v1, v2).scaled(ca * cb));
            }
        }
      int start = std::min(lo, series_low(rhs, lo));
      for (int k = start; k < hi; ++k)
        if (auto wt = vec_diff("coproduct", {key_str(a, nm), key_str(b, nm)}, {k}, delta_vec(coeff_of(y, k)),
                               coeff_of(rhs, k), nm))
          return wt;
      return std::nullopt;
    });
    if (r2) return Verdict::fail("coproduct-compatibility", r2->second);
    return Verdict::pass("coproduct-compatibility");
  });
}

std::string render_ope(const VSeries& s, int lo, int hi, const KeyNames& names) {
  std::string out;
  for (const auto& [n, v] : s) {
    if (n < lo || n >= hi) continue;
    for (const auto& [k, c] : v.terms()) {
      std::string piece = c.factor_str() + "*z^" + std::to_string(n) + "*" + key_str(k, names);
      if (out.empty())
        out = piece;
      else if (piece[0] == '-')
        out += " - " + piece.substr(1);
      else
        out += " + " + piece;
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace vqg
