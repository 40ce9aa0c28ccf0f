#include "vqg/series.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace vqg {

namespace {

long sat_add(long a, long b) {
  if (a >= kPosInf || b >= kPosInf) return kPosInf;
  if (a <= kNegInf || b <= kNegInf) return kNegInf;
  return a + b;
}

std::vector<size_t> sort_perm(const std::vector<std::string>& vars) {
  std::vector<size_t> p(vars.size());
  std::iota(p.begin(), p.end(), 0);
  std::sort(p.begin(), p.end(), [&](size_t a, size_t b) { return vars[a] < vars[b]; });
  for (size_t i = 1; i < p.size(); ++i)
    if (vars[p[i]] == vars[p[i - 1]]) throw VarMismatch("duplicate variable " + vars[p[i]]);
  return p;
}

std::string bound_str(long v) {
  if (v <= kNegInf) return "-inf";
  if (v >= kPosInf) return "+inf";
  return std::to_string(v);
}

}  // namespace

Rational factorial(long n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(f);
}

Rational binomial(long n, long k) {
  if (k < 0) return 0;
  if (n >= 0) {
    if (k > n) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(b);
  }
  // C(n,k) = (-1)^k C(k-n-1, k)
  Rational r = binomial(k - n - 1, k);
  return (k % 2) ? Rational(-r) : r;
}

TruncatedSeries::TruncatedSeries(std::vector<std::string> vars, Window window) {
  if (vars.size() != window.size()) throw VarMismatch("window arity does not match variables");
  auto p = sort_perm(vars);
  for (size_t i : p) {
    vars_.push_back(vars[i]);
    window_.push_back(window[i]);
  }
}

TruncatedSeries TruncatedSeries::polynomial(std::vector<std::string> vars,
                                            const std::vector<std::pair<Exps, Scalar>>& terms) {
  auto p = sort_perm(vars);
  std::vector<std::string> sorted;
  for (size_t i : p) sorted.push_back(vars[i]);
  Window w(vars.size(), Bound{0, kPosInf});
  bool first = true;
  std::vector<std::pair<Exps, Scalar>> permuted;
  for (const auto& [e, c] : terms) {
    if (e.size() != vars.size()) throw VarMismatch("exponent arity mismatch");
    if (c.is_zero()) continue;
    Exps q(e.size());
    for (size_t i = 0; i < p.size(); ++i) q[i] = e[p[i]];
    for (size_t i = 0; i < q.size(); ++i)
      w[i].low = first ? q[i] : std::min<long>(w[i].low, q[i]);
    first = false;
    permuted.push_back({q, c});
  }
  TruncatedSeries s(sorted, w);
  for (const auto& [e, c] : permuted) s.add_term(e, c);
  return s;
}

TruncatedSeries TruncatedSeries::monomial(std::vector<std::string> vars, Exps exps, Scalar c) {
  return polynomial(std::move(vars), {{std::move(exps), std::move(c)}});
}

int TruncatedSeries::var_index(const std::string& name) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), name);
  if (it == vars_.end() || *it != name) return -1;
  return static_cast<int>(it - vars_.begin());
}

Scalar TruncatedSeries::coeff(const Exps& e) const {
  for (size_t i = 0; i < e.size(); ++i) {
    if (e[i] >= window_[i].high)
      throw WindowExceeded("exponent " + std::to_string(e[i]) + " of " + vars_[i] +
                           " beyond validity " + bound_str(window_[i].high));
  }
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar() : it->second;
}

void TruncatedSeries::add_term(const Exps& e, const Scalar& c) {
  if (e.size() != vars_.size()) throw VarMismatch("exponent arity mismatch");
  for (size_t i = 0; i < e.size(); ++i) {
    if (e[i] < window_[i].low || e[i] >= window_[i].high)
      throw std::out_of_range("term outside series window");
  }
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool TruncatedSeries::is_exact() const {
  return std::all_of(window_.begin(), window_.end(), [](const Bound& b) { return b.high >= kPosInf; });
}

void TruncatedSeries::check_compatible(const TruncatedSeries& o) const {
  if (vars_ != o.vars_) throw VarMismatch("series over different variables");
}

void TruncatedSeries::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    bool keep = !it->second.is_zero();
    for (size_t i = 0; keep && i < it->first.size(); ++i)
      keep = it->first[i] >= window_[i].low && it->first[i] < window_[i].high;
    it = keep ? std::next(it) : terms_.erase(it);
  }
}

TruncatedSeries TruncatedSeries::operator-() const { return scaled(Scalar(-1)); }

TruncatedSeries TruncatedSeries::scaled(const Scalar& c) const {
  TruncatedSeries r(vars_, window_);
  for (const auto& [e, v] : terms_) {
    Scalar p = v * c;
    if (!p.is_zero()) r.terms_.emplace(e, std::move(p));
  }
  return r;
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  a.check_compatible(b);
  Window w(a.window_.size());
  for (size_t i = 0; i < w.size(); ++i)
    w[i] = {std::min(a.window_[i].low, b.window_[i].low),
            std::min(a.window_[i].high, b.window_[i].high)};
  TruncatedSeries r(a.vars_, w);
  r.terms_ = a.terms_;
  for (const auto& [e, c] : b.terms_) {
    auto [it, ins] = r.terms_.emplace(e, c);
    if (!ins) it->second += c;
  }
  r.prune();
  return r;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  a.check_compatible(b);
  // An unbounded low is only admissible against an exact finite factor.
  for (size_t i = 0; i < a.window_.size(); ++i) {
    if (a.window_[i].low <= kNegInf && !b.is_exact())
      throw std::domain_error("product needs lower-bounded factors in " + a.vars_[i]);
    if (b.window_[i].low <= kNegInf && !a.is_exact())
      throw std::domain_error("product needs lower-bounded factors in " + a.vars_[i]);
  }
  Window w(a.window_.size());
  for (size_t i = 0; i < w.size(); ++i) {
    const Bound& x = a.window_[i];
    const Bound& y = b.window_[i];
    w[i].low = sat_add(x.low, y.low);
    long h1 = y.high >= kPosInf ? kPosInf : sat_add(x.low, y.high);
    long h2 = x.high >= kPosInf ? kPosInf : sat_add(y.low, x.high);
    w[i].high = std::min(h1, h2);
  }
  TruncatedSeries r(a.vars_, w);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Exps e(ea.size());
      bool inside = true;
      for (size_t i = 0; i < e.size(); ++i) {
        e[i] = ea[i] + eb[i];
        if (e[i] >= w[i].high) inside = false;
      }
      if (!inside) continue;
      auto [it, ins] = r.terms_.emplace(std::move(e), ca * cb);
      if (!ins) it->second += ca * cb;
    }
  r.prune();
  return r;
}

TruncatedSeries TruncatedSeries::derive(const std::string& var) const {
  int k = var_index(var);
  if (k < 0) throw VarMismatch("no variable " + var);
  Window w = window_;
  Bound& b = w[k];
  if (b.high < kPosInf) b.high -= 1;
  if (b.low > kNegInf) b.low = b.low >= 0 ? std::max(b.low - 1, 0L) : b.low - 1;
  TruncatedSeries r(vars_, w);
  for (const auto& [e, c] : terms_) {
    if (e[k] == 0) continue;
    Exps f = e;
    f[k] -= 1;
    if (f[k] >= b.high) continue;
    r.terms_.emplace(std::move(f), c * Scalar(e[k]));
  }
  return r;
}

TruncatedSeries TruncatedSeries::restricted(const Window& w) const {
  if (w.size() != window_.size()) throw VarMismatch("window arity mismatch");
  Window nw = window_;
  for (size_t i = 0; i < nw.size(); ++i) nw[i].high = std::min(nw[i].high, w[i].high);
  TruncatedSeries r(vars_, nw);
  r.terms_ = terms_;
  r.prune();
  return r;
}

std::string TruncatedSeries::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::string piece = c.factor_str();
    for (size_t i = 0; i < e.size(); ++i) piece += "*" + vars_[i] + "^" + std::to_string(e[i]);
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

std::optional<SeriesWitness> equal_on_window(const TruncatedSeries& a, const TruncatedSeries& b,
                                             const Window& window) {
  if (a.vars() != b.vars()) throw VarMismatch("series over different variables");
  if (window.size() != a.vars().size()) throw VarMismatch("window arity mismatch");
  for (size_t i = 0; i < window.size(); ++i) {
    if (window[i].high > a.window()[i].high || window[i].high > b.window()[i].high)
      throw WindowExceeded("requested high " + bound_str(window[i].high) + " for " + a.vars()[i] +
                           " exceeds validity (" + bound_str(a.window()[i].high) + ", " +
                           bound_str(b.window()[i].high) + ")");
  }
  auto inside = [&](const Exps& e) {
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] < window[i].low || e[i] >= window[i].high) return false;
    return true;
  };
  std::set<Exps> keys;
  for (const auto& [e, c] : a.terms())
    if (inside(e)) keys.insert(e);
  for (const auto& [e, c] : b.terms())
    if (inside(e)) keys.insert(e);
  for (const auto& e : keys) {
    Scalar x = a.coeff(e), y = b.coeff(e);
    if (x != y) return SeriesWitness{e, x, y};
  }
  return std::nullopt;
}

TruncatedSeries expand_binomial_inverse(int n, Direction dir, long high, const std::string& z,
                                        const std::string& w) {
  if (n < 1) throw std::invalid_argument("expand_binomial_inverse needs n >= 1");
  std::vector<std::string> vars{z, w};
  TruncatedSeries base;
  if (dir == Direction::WOverZ) {
    long h = high + n - 1;
    base = TruncatedSeries(vars, {Bound{kNegInf, kPosInf}, Bound{0, h}});
    for (long k = 0; k < h; ++k) {
      Exps e(2);
      e[base.var_index(z)] = static_cast<int>(-k - 1);
      e[base.var_index(w)] = static_cast<int>(k);
      base.add_term(e, 1);
    }
  } else {
    base = TruncatedSeries(vars, {Bound{0, high}, Bound{kNegInf, kPosInf}});
    for (long k = 0; k < high; ++k) {
      Exps e(2);
      e[base.var_index(z)] = static_cast<int>(k);
      e[base.var_index(w)] = static_cast<int>(-k - 1);
      base.add_term(e, -1);
    }
  }
  // (z-w)^{-n} = d_w^{n-1} (z-w)^{-1} / (n-1)!
  for (int i = 1; i < n; ++i) base = base.derive(w);
  return base.scaled(Scalar(Rational(1) / factorial(n - 1)));
}

TruncatedSeries shift_substitute(const TruncatedSeries& s, const std::string& z1,
                                 const std::string& z2, long high, std::optional<Small> small,
                                 GroupLaw law) {
  if (s.vars().size() != 1) throw VarMismatch("shift_substitute needs a one-variable series");
  const Bound& sb = s.window()[0];
  if (sb.low <= kNegInf) throw std::domain_error("shift_substitute needs a lower-bounded series");
  bool negative = !s.is_zero() && s.terms().begin()->first[0] < 0;
  if (negative && !small)
    throw std::invalid_argument("expansion direction required for negative exponents");
  Small sm = small.value_or(Small::Second);

  // Work in (big, small) coordinates, then place into the sorted variable order.
  bool exact_poly = s.is_exact() && sb.low >= 0;
  long small_high = exact_poly ? kPosInf : high;
  long big_high = exact_poly || sb.high >= kPosInf ? kPosInf : sb.high - high + 1;
  long big_low = sb.low >= 0 ? 0 : kNegInf;
  const std::string& big_name = sm == Small::Second ? z1 : z2;
  const std::string& small_name = sm == Small::Second ? z2 : z1;
  TruncatedSeries out({big_name, small_name}, {Bound{big_low, big_high}, Bound{0, small_high}});
  int ib = out.var_index(big_name), is = out.var_index(small_name);

  auto put = [&](long big, long sml, const Scalar& c) {
    if (big >= big_high || sml >= small_high) return;
    Exps e(2);
    e[ib] = static_cast<int>(big);
    e[is] = static_cast<int>(sml);
    out.add_term(e, c);
  };
  for (const auto& [e, c] : s.terms()) {
    long n = e[0];
    long kmax = n >= 0 ? n : small_high - 1;
    for (long k = 0; k <= kmax; ++k) {
      Scalar ck = c * Scalar(binomial(n, k));
      if (law == GroupLaw::Additive) {
        put(n - k, k, ck);
      } else {
        // (big + small(1+big))^n = sum_k C(n,k) big^{n-k} (1+big)^k small^k
        for (long i = 0; i <= k; ++i) put(n - k + i, k, ck * Scalar(binomial(k, i)));
      }
    }
  }
  return out;
}

TruncatedSeries substitute_zero(const TruncatedSeries& s, const std::string& var) {
  int k = s.var_index(var);
  if (k < 0) throw VarMismatch("no variable " + var);
  const Bound& b = s.window()[k];
  if (!(b.low <= 0 && 0 < b.high)) throw WindowExceeded("0 not inside the window of " + var);
  std::vector<std::string> vars;
  Window w;
  for (size_t i = 0; i < s.vars().size(); ++i)
    if (static_cast<int>(i) != k) {
      vars.push_back(s.vars()[i]);
      w.push_back(s.window()[i]);
    }
  TruncatedSeries r(vars, w);
  for (const auto& [e, c] : s.terms()) {
    if (e[k] != 0) continue;
    Exps f;
    for (size_t i = 0; i < e.size(); ++i)
      if (static_cast<int>(i) != k) f.push_back(e[i]);
    r.add_term(f, c);
  }
  return r;
}

TruncatedSeries log1p_series(const std::string& var, int order) {
  TruncatedSeries s({var}, {Bound{1, order + 1L}});
  for (int k = 1; k <= order; ++k) s.add_term({k}, Scalar(Rational(k % 2 ? 1 : -1, k)));
  return s;
}

// ---- Laurent ----

Laurent Laurent::monomial(int e, const Scalar& c) {
  Laurent l;
  l.add(e, c);
  return l;
}

void Laurent::add(int e, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, ins] = c_.emplace(e, c);
  if (!ins) {
    it->second += c;
    if (it->second.is_zero()) c_.erase(it);
  }
}

Scalar Laurent::coeff(int e) const {
  auto it = c_.find(e);
  return it == c_.end() ? Scalar() : it->second;
}

int Laurent::low() const {
  if (c_.empty()) throw std::domain_error("low() of zero Laurent polynomial");
  return c_.begin()->first;
}

int Laurent::high() const {
  if (c_.empty()) throw std::domain_error("high() of zero Laurent polynomial");
  return c_.rbegin()->first;
}

Laurent Laurent::operator-() const { return scaled(Scalar(-1)); }

Laurent& Laurent::operator+=(const Laurent& o) {
  for (const auto& [e, c] : o.c_) add(e, c);
  return *this;
}

Laurent& Laurent::operator-=(const Laurent& o) {
  for (const auto& [e, c] : o.c_) add(e, -c);
  return *this;
}

Laurent operator*(const Laurent& a, const Laurent& b) {
  Laurent r;
  for (const auto& [ea, ca] : a.c_)
    for (const auto& [eb, cb] : b.c_) r.add(ea + eb, ca * cb);
  return r;
}

Laurent Laurent::scaled(const Scalar& s) const {
  Laurent r;
  for (const auto& [e, c] : c_) r.add(e, c * s);
  return r;
}

Laurent Laurent::derivative() const {
  Laurent r;
  for (const auto& [e, c] : c_)
    if (e != 0) r.add(e - 1, c * Scalar(e));
  return r;
}

Laurent Laurent::reflected() const {
  Laurent r;
  for (const auto& [e, c] : c_) r.add(e, (e % 2) ? -c : c);
  return r;
}

TruncatedSeries Laurent::to_series(const std::string& var) const {
  std::vector<std::pair<Exps, Scalar>> t;
  for (const auto& [e, c] : c_) t.push_back({{e}, c});
  return TruncatedSeries::polynomial({var}, t);
}

std::string Laurent::str(const std::string& var) const { return to_series(var).str(); }

}  // namespace vqg
