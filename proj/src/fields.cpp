#include "vqg/fields.hpp"

#include <algorithm>

#include "vqg/parallel.hpp"

namespace vqg {

int field_low(const Field& f, const StateVector& b) {
  int lo = 0;
  bool any = false;
  for (const auto& [k, c] : b.terms()) {
    int l = f.low(k);
    lo = any ? std::min(lo, l) : l;
    any = true;
  }
  return lo;
}

StateVector field_coeff(const Field& f, const StateVector& b, int k) {
  StateVector r;
  for (const auto& [key, c] : b.terms())
    if (k >= f.low(key)) r += f.coeff(key, k).scaled(c);
  return r;
}

StateVector apply_mode(const Field& f, int n, const StateVector& b) { return field_coeff(f, b, -n - 1); }

LinearMap mode(const Field& f, int n, const std::vector<BasisKey>& basis) {
  return LinearMap::from_function(basis, [&](const BasisKey& k) { return apply_mode(f, n, StateVector(k)); });
}

Field engine_field(const VertexEngine& e, const StateVector& a) {
  Field f;
  f.low = [e, a](const BasisKey& b) { return pole_bound(e, a, StateVector(b)); };
  f.coeff = [e, a](const BasisKey& b, int k) {
    VSeries y = apply_Y(e, a, StateVector(b), k + 1);
    auto it = y.find(k);
    return it == y.end() ? StateVector() : it->second;
  };
  return f;
}

Field identity_field() {
  return {[](const BasisKey&) { return 0; },
          [](const BasisKey& b, int k) { return k == 0 ? StateVector(b) : StateVector(); }};
}

Field derivative(const Field& f) {
  return {[f](const BasisKey& b) { return f.low(b) - 1; },
          [f](const BasisKey& b, int k) {
            if (k + 1 < f.low(b) || k == -1) return StateVector();
            return f.coeff(b, k + 1).scaled(Scalar(k + 1));
          }};
}

Field scaled(const Field& f, const Scalar& c) {
  return {f.low, [f, c](const BasisKey& b, int k) { return f.coeff(b, k).scaled(c); }};
}

Field sum(const Field& f, const Field& g) {
  return {[f, g](const BasisKey& b) { return std::min(f.low(b), g.low(b)); },
          [f, g](const BasisKey& b, int k) {
            StateVector r;
            if (k >= f.low(b)) r += f.coeff(b, k);
            if (k >= g.low(b)) r += g.coeff(b, k);
            return r;
          }};
}

Field normally_ordered(const Field& alpha, const Field& beta, NormalOrder split) {
  Field f;
  if (split == NormalOrder::Literal) {
    // m > 0 terms need beta_m b != 0, so m <= -1 - low_beta(b). For m <= 0 the exponent
    // (-n-1) + (-m-1) is at least low_alpha(b) - 1.
    f.low = [alpha, beta](const BasisKey& b) {
      int lo = alpha.low(b) - 1;
      for (int m = 1; m <= -1 - beta.low(b); ++m) {
        StateVector c = apply_mode(beta, m, StateVector(b));
        if (!c.is_zero()) lo = std::min(lo, field_low(alpha, c) - m - 1);
      }
      return lo;
    };
    f.coeff = [alpha, beta](const BasisKey& b, int k) {
      StateVector r;
      StateVector bv(b);
      for (int m = 1; m <= -1 - beta.low(b); ++m) {
        StateVector c = apply_mode(beta, m, bv);
        if (!c.is_zero()) r += apply_mode(alpha, -k - 2 - m, c);
      }
      for (int n = -k - 2; n <= -1 - alpha.low(b); ++n) {
        StateVector c = apply_mode(alpha, n, bv);
        if (!c.is_zero()) r += apply_mode(beta, -k - 2 - n, c);
      }
      return r;
    };
    return f;
  }
  // alpha_+(z) beta(z) + beta(z) alpha_-(z) with alpha_- = sum_{n >= 0} alpha_n z^{-n-1}.
  f.low = [alpha, beta](const BasisKey& b) {
    int lo = beta.low(b);  // alpha_+ only adds non-negative powers
    for (int n = 0; n <= -1 - alpha.low(b); ++n) {
      StateVector c = apply_mode(alpha, n, StateVector(b));
      if (!c.is_zero()) lo = std::min(lo, field_low(beta, c) - n - 1);
    }
    return lo;
  };
  f.coeff = [alpha, beta](const BasisKey& b, int k) {
    StateVector r;
    StateVector bv(b);
    // alpha_n beta_m with n < 0: alpha_n is the coefficient of z^{-n-1}, j = -n-1 >= 0.
    for (int j = 0; k - j >= beta.low(b); ++j) {
      StateVector c = field_coeff(beta, bv, k - j);
      if (!c.is_zero()) r += field_coeff(alpha, c, j);
    }
    for (int n = 0; n <= -1 - alpha.low(b); ++n) {
      StateVector c = apply_mode(alpha, n, bv);
      if (!c.is_zero()) r += field_coeff(beta, c, k + n + 1);
    }
    return r;
  };
  return f;
}

namespace {

using Cells = std::vector<std::pair<int, int>>;

Cells triangle(int p0, int q0, int degree) {
  Cells cells;
  for (int d = 0; d <= degree; ++d)
    for (int i = 0; i <= d; ++i) cells.push_back({p0 + i, q0 + d - i});
  std::sort(cells.begin(), cells.end());
  return cells;
}

// Coefficient of z^p w^q in (z - w)^N F(z, w).
StateVector clear_poles(int N, int p, int q, const std::function<StateVector(int, int)>& F) {
  StateVector r;
  for (int k = 0; k <= N; ++k) {
    Rational c = binomial(N, k) * ((N - k) % 2 ? -1 : 1);
    r += F(p - k, q - N + k).scaled(Scalar(c));
  }
  return r;
}

// Memoized alpha_{[i]}(beta_{[j]} c) for a fixed c.
struct Nested {
  const Field& outer;
  const Field& inner;
  StateVector c;
  std::map<int, StateVector> inner_cache;
  std::map<std::pair<int, int>, StateVector> cache;

  StateVector at(int i, int j) {
    auto key = std::make_pair(i, j);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    auto jt = inner_cache.find(j);
    if (jt == inner_cache.end()) jt = inner_cache.emplace(j, field_coeff(inner, c, j)).first;
    StateVector v = jt->second.is_zero() ? StateVector() : field_coeff(outer, jt->second, i);
    cache.emplace(key, v);
    return v;
  }
};

std::optional<Witness> locality_probe(const Field& alpha, const Field& beta, int N, const BasisKey& c, int degree,
                                      const std::string& id, std::vector<std::string> tuple) {
  StateVector cv(c);
  Nested ab{alpha, beta, cv, {}, {}};  // alpha(z) beta(w) c, indexed (z, w)
  Nested ba{beta, alpha, cv, {}, {}};  // beta(w) alpha(z) c, indexed (w, z)
  int p0 = field_low(alpha, cv) - N, q0 = field_low(beta, cv) - N;
  tuple.push_back(key_str(c));
  for (auto [p, q] : triangle(p0, q0, degree)) {
    StateVector lhs = clear_poles(N, p, q, [&](int i, int j) { return ab.at(i, j); });
    StateVector rhs = clear_poles(N, p, q, [&](int i, int j) { return ba.at(j, i); });
    if (!(lhs == rhs)) return Witness{id, tuple, {p, q}, lhs.str(), rhs.str()};
  }
  return std::nullopt;
}

}  // namespace

Verdict check_locality(const Field& alpha, const Field& beta, int N, const std::vector<BasisKey>& states,
                       int degree) {
  if (N < 0) throw std::invalid_argument("locality order must be non-negative");
  auto r = first_failure<Witness>(states.size(), [&](size_t i) {
    return locality_probe(alpha, beta, N, states[i], degree, "locality", {});
  });
  return r ? Verdict::fail("locality", r->second) : Verdict::pass("locality");
}

namespace {

std::optional<Witness> twisted_locality_probe(const Field& fa, const Field& fb, const std::vector<BraidedTerm>& twist,
                                              int N, const BasisKey& c, int degree, std::vector<std::string> tuple,
                                              const KeyNames& names) {
  StateVector cv(c);
  Nested ab{fa, fb, cv, {}, {}};
  struct Leg {
    const BraidedTerm* term;
    std::unique_ptr<Nested> nested;
    int a_low;
  };
  std::vector<Leg> legs;
  for (const auto& t : twist) {
    if (t.s.is_zero()) continue;
    legs.push_back({&t, std::make_unique<Nested>(Nested{t.beta, t.alpha, cv, {}, {}}), field_low(t.alpha, cv)});
  }
  auto twisted = [&](int i, int j) {
    StateVector r;
    for (auto& l : legs)
      for (const auto& [ex, sc] : l.term->s.terms())
        // (w - z)^ex = sum_t C(ex, t) (-z)^t w^{ex - t}
        for (int t = 0; i - t >= l.a_low; ++t) {
          Rational cf = binomial(ex, t) * (t % 2 ? -1 : 1);
          StateVector v = l.nested->at(j - ex + t, i - t);
          if (!v.is_zero()) r += v.scaled(sc * Scalar(cf));
        }
    return r;
  };
  int p0 = field_low(fa, cv) - N, q0 = field_low(fb, cv) - N;
  tuple.push_back(key_str(c, names));
  for (auto [p, q] : triangle(p0, q0, degree)) {
    StateVector lhs = clear_poles(N, p, q, [&](int i, int j) { return ab.at(i, j); });
    StateVector rhs = clear_poles(N, p, q, twisted);
    if (!(lhs == rhs)) return Witness{"braided-locality", tuple, {p, q}, lhs.str(names), rhs.str(names)};
  }
  return std::nullopt;
}

// Sum over coproduct legs of S(b1, a1)(w - z) * Y(b2, w) Y(a2, z).
std::vector<BraidedTerm> engine_twist(const VertexEngine& e, const VertexRMatrix& s, const BasisKey& a,
                                      const BasisKey& b) {
  if (!e.delta) throw std::invalid_argument("braided locality needs a coproduct");
  std::vector<BraidedTerm> out;
  StateVector da = e.delta(a), db = e.delta(b);
  for (const auto& [kb, cb] : db.terms())
    for (const auto& [ka, ca] : da.terms()) {
      Laurent f = s.eval(kb.leg(0), ka.leg(0)).scaled(ca * cb);
      if (f.is_zero()) continue;
      out.push_back({f, engine_field(e, StateVector(ka.leg(1))), engine_field(e, StateVector(kb.leg(1)))});
    }
  return out;
}

std::optional<Witness> braided_locality_probe(const VertexEngine& e, const VertexRMatrix& s, const BasisKey& a,
                                              const BasisKey& b, int N, const BasisKey& c, int degree) {
  return twisted_locality_probe(engine_field(e, StateVector(a)), engine_field(e, StateVector(b)),
                                engine_twist(e, s, a, b), N, c, degree,
                                {key_str(a, e.names), key_str(b, e.names)}, e.names);
}

}  // namespace

Verdict check_braided_locality(const Field& alpha, const Field& beta, const std::vector<BraidedTerm>& twist, int N,
                               const std::vector<BasisKey>& states, int degree) {
  if (N < 0) throw std::invalid_argument("locality order must be non-negative");
  auto r = first_failure<Witness>(states.size(), [&](size_t i) {
    return twisted_locality_probe(alpha, beta, twist, N, states[i], degree, {}, {});
  });
  return r ? Verdict::fail("braided-locality", r->second) : Verdict::pass("braided-locality");
}

Verdict check_braided_locality(const VertexEngine& e, const VertexRMatrix& s, const BasisKey& a,
                               const BasisKey& b, int N, const std::vector<BasisKey>& states, int degree) {
  if (N < 0) throw std::invalid_argument("locality order must be non-negative");
  auto r = first_failure<Witness>(
      states.size(), [&](size_t i) { return braided_locality_probe(e, s, a, b, N, states[i], degree); });
  return r ? Verdict::fail("braided-locality", r->second) : Verdict::pass("braided-locality");
}

Verdict check_locality_all(const VertexEngine& e, const std::vector<BasisKey>& states, int degree,
                           const VertexRMatrix* s) {
  const size_t n = states.size();
  const std::string name = s ? "braided-locality" : "locality";
  auto r = first_failure<Witness>(n * n * n, [&](size_t t) -> std::optional<Witness> {
    const BasisKey& a = states[t / (n * n)];
    const BasisKey& b = states[(t / n) % n];
    const BasisKey& c = states[t % n];
    int N = std::max(0, -e.pole_bound(a, b));
    if (s) return braided_locality_probe(e, *s, a, b, N, c, degree);
    Field fa = engine_field(e, StateVector(a)), fb = engine_field(e, StateVector(b));
    return locality_probe(fa, fb, N, c, degree, "locality",
                          {key_str(a, e.names), key_str(b, e.names)});
  });
  return r ? Verdict::fail(name, r->second) : Verdict::pass(name);
}

Verdict run_commutative_suite(const VertexEngine& e, const std::vector<BasisKey>& states, CheckWindow w) {
  return combine("vertex-commutative",
                 {check_vacuum(e, states), check_translation(e, states, w), check_skew_all(e, states, w),
                  check_associativity_all(e, states, w), check_locality_all(e, states, w.degree)});
}

Verdict run_associative_suite(const VertexEngine& e, const std::vector<BasisKey>& states, CheckWindow w) {
  return combine("vertex-associative",
                 {check_vacuum(e, states), check_translation(e, states, w), check_associativity_all(e, states, w)});
}

Verdict run_braided_suite(const VertexEngine& e, const VertexRMatrix& s, const std::vector<BasisKey>& states,
                          CheckWindow w) {
  return combine("vertex-braided",
                 {check_vacuum(e, states), check_translation(e, states, w), check_braided_skew_all(e, s, states, w),
                  check_associativity_all(e, states, w), check_locality_all(e, states, w.degree, &s)});
}

}  // namespace vqg
