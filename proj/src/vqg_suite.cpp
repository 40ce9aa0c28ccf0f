#include "vqg/vqg_suite.hpp"

#include <algorithm>
#include <set>

#include "vqg/parallel.hpp"
#include "vqg/series.hpp"

namespace vqg {

namespace {

using Delta = std::function<StateVector(const BasisKey&)>;

// r extended bilinearly to vectors.
Laurent pairing(const VertexRMatrix& r, const StateVector& x, const StateVector& y) {
  Laurent out;
  for (const auto& [kx, cx] : x.terms())
    for (const auto& [ky, cy] : y.terms()) out += r.eval(kx, ky).scaled(cx * cy);
  return out;
}

// Series in the sorted `vars`, with the variables of s placed by name.
TruncatedSeries embed(const TruncatedSeries& s, std::vector<std::string> vars) {
  std::sort(vars.begin(), vars.end());
  Window w(vars.size(), Bound{0, kPosInf});
  std::vector<int> where(s.vars().size());
  for (size_t i = 0; i < s.vars().size(); ++i) {
    where[i] = static_cast<int>(std::lower_bound(vars.begin(), vars.end(), s.vars()[i]) - vars.begin());
    w[where[i]] = s.window()[i];
  }
  TruncatedSeries out(vars, w);
  for (const auto& [e, c] : s.terms()) {
    Exps f(vars.size(), 0);
    for (size_t i = 0; i < e.size(); ++i) f[where[i]] = e[i];
    out.add_term(f, c);
  }
  return out;
}

// f(big + sign * small) with |small| < |big|, small powers below `high`.
TruncatedSeries shifted(const Laurent& f, const std::string& big, const std::string& small, int sign, long high,
                        const std::vector<std::string>& vars) {
  TruncatedSeries s = shift_substitute(f.to_series(big), big, small, high, Small::Second);
  if (sign < 0) {
    int k = s.var_index(small);
    TruncatedSeries flipped(s.vars(), s.window());
    for (const auto& [e, c] : s.terms()) flipped.add_term(e, e[k] % 2 ? -c : c);
    s = flipped;
  }
  // The expansion is a finite sum once the small powers are cut, so every variable is
  // bounded below by its smallest occurring exponent on the kept window.
  Window w = s.window();
  for (size_t i = 0; i < w.size(); ++i) {
    long lo = 0;
    bool any = false;
    for (const auto& [e, c] : s.terms()) {
      lo = any ? std::min<long>(lo, e[i]) : e[i];
      any = true;
    }
    w[i].low = lo;
  }
  TruncatedSeries tight(s.vars(), w);
  for (const auto& [e, c] : s.terms()) tight.add_term(e, c);
  return embed(tight, vars);
}

TruncatedSeries plain(const Laurent& f, const std::string& var, const std::vector<std::string>& vars) {
  return embed(f.to_series(var), vars);
}

std::optional<Witness> series_diff(const std::string& check, std::vector<std::string> tuple, const TruncatedSeries& lhs,
                                   const TruncatedSeries& rhs, const Window& w) {
  auto d = equal_on_window(lhs, rhs, w);
  if (!d) return std::nullopt;
  return Witness{check, std::move(tuple), d->exps, d->lhs.str(), d->rhs.str()};
}

std::optional<Witness> laurent_diff(const std::string& check, std::vector<std::string> tuple, const Laurent& lhs,
                                    const Laurent& rhs) {
  if (lhs == rhs) return std::nullopt;
  Laurent d = lhs - rhs;
  int k = d.low();
  return Witness{check, std::move(tuple), {k}, lhs.coeff(k).str(), rhs.coeff(k).str()};
}

Verdict run(const std::string& name, size_t n, const Probe<Witness>& probe) {
  try {
    auto r = first_failure<Witness>(n, probe);
    return r ? Verdict::fail(name, r->second) : Verdict::pass(name);
  } catch (const WindowExceeded& ex) {
    return Verdict::truncation(name, ex.what());
  } catch (const TruncationInsufficient& ex) {
    return Verdict::truncation(name, ex.what());
  }
}

}  // namespace

VqgReport check_vqg_suite(const VertexEngine& e, const Delta& delta, const VertexRMatrix& r,
                          const std::vector<BasisKey>& states, CheckWindow w) {
  if (!delta) throw std::invalid_argument("vqg suite needs a coproduct");
  const size_t n = states.size();
  const long H = w.degree + 1;  // small-variable powers 0..degree
  auto nm = [&](const BasisKey& k) { return key_str(k, e.names); };
  auto product = [&](const BasisKey& x, const BasisKey& y) {
    if (e.pole_bound(x, y) < 0) throw std::invalid_argument("vqg suite needs a holomorphic engine");
    VSeries s = e.Y(x, y, 1);
    auto it = s.find(0);
    return it == s.end() ? StateVector() : it->second;
  };

  VqgReport rep;
  rep.checks.push_back(run("covariance", n * n, [&](size_t t) -> std::optional<Witness> {
    const BasisKey &a = states[t / n], &b = states[t % n];
    Laurent d = r.eval(a, b).derivative();
    if (auto x = laurent_diff("covariance-left", {nm(a), nm(b)}, pairing(r, e.T(StateVector(a)), StateVector(b)), d))
      return x;
    return laurent_diff("covariance-right", {nm(a), nm(b)}, pairing(r, StateVector(a), e.T(StateVector(b))), -d);
  }));

  const std::vector<std::string> uz{"u", "z"};
  rep.checks.push_back(run("hexagons", n * n * n, [&](size_t t) -> std::optional<Witness> {
    const BasisKey &a = states[t / (n * n)], &b = states[(t / n) % n], &c = states[t % n];
    std::vector<std::string> tuple{nm(a), nm(b), nm(c)};
    Window cmp{Bound{kNegInf, H}, Bound{kNegInf, kPosInf}};
    // r(Y(a,u)b, c)(z) against sum r(a, c1)(z+u) r(b, c2)(z)
    {
      TruncatedSeries lhs(uz, {Bound{kNegInf, H}, Bound{kNegInf, kPosInf}});
      for (const auto& [k, v] : e.Y(a, b, static_cast<int>(H))) {
        const Laurent f = pairing(r, v, StateVector(c));
        for (const auto& [ez, cz] : f.terms()) lhs.add_term({k, ez}, cz);
      }
      TruncatedSeries rhs(uz, {Bound{0, H}, Bound{kNegInf, kPosInf}});
      const StateVector dc = delta(c);
      for (const auto& [kc, cc] : dc.terms())
        rhs = rhs + (shifted(r.eval(a, kc.leg(0)), "z", "u", 1, H, uz) * plain(r.eval(b, kc.leg(1)), "z", uz))
                        .scaled(cc);
      if (auto x = series_diff("hexagon-1", tuple, lhs, rhs, cmp)) return x;
    }
    // r(a, Y(b,u)c)(z) against sum r(a1, c)(z) r(a2, b)(z-u)
    {
      TruncatedSeries lhs(uz, {Bound{kNegInf, H}, Bound{kNegInf, kPosInf}});
      for (const auto& [k, v] : e.Y(b, c, static_cast<int>(H))) {
        const Laurent f = pairing(r, StateVector(a), v);
        for (const auto& [ez, cz] : f.terms()) lhs.add_term({k, ez}, cz);
      }
      TruncatedSeries rhs(uz, {Bound{0, H}, Bound{kNegInf, kPosInf}});
      const StateVector da = delta(a);
      for (const auto& [ka, ca] : da.terms())
        rhs = rhs + (plain(r.eval(ka.leg(0), c), "z", uz) * shifted(r.eval(ka.leg(1), b), "z", "u", -1, H, uz))
                        .scaled(ca);
      if (auto x = series_diff("hexagon-2", tuple, lhs, rhs, cmp)) return x;
    }
    return std::nullopt;
  }));

  rep.checks.push_back(run("almost-cocommutativity", n * n, [&](size_t t) -> std::optional<Witness> {
    const BasisKey &a = states[t / n], &b = states[t % n];
    std::map<int, StateVector> lhs, rhs;
    const StateVector da = delta(a), db = delta(b);
    for (const auto& [ka, ca] : da.terms())
      for (const auto& [kb, cb] : db.terms()) {
        const Scalar c = ca * cb;
        const Laurent first = r.eval(ka.leg(0), kb.leg(0)), second = r.eval(ka.leg(1), kb.leg(1));
        for (const auto& [ez, cz] : first.terms()) lhs[ez].add_scaled(product(kb.leg(1), ka.leg(1)), cz * c);
        for (const auto& [ez, cz] : second.terms()) rhs[ez].add_scaled(product(ka.leg(0), kb.leg(0)), cz * c);
      }
    std::erase_if(lhs, [](const auto& p) { return p.second.is_zero(); });
    std::erase_if(rhs, [](const auto& p) { return p.second.is_zero(); });
    if (lhs == rhs) return std::nullopt;
    std::set<int> keys;
    for (const auto& [k, v] : lhs) keys.insert(k);
    for (const auto& [k, v] : rhs) keys.insert(k);
    for (int k : keys)
      if (!(lhs[k] == rhs[k])) return Witness{"almost-cocommutativity", {nm(a), nm(b)}, {k}, lhs[k].str(e.names),
                                              rhs[k].str(e.names)};
    return std::nullopt;
  }));

  const std::vector<std::string> uwz{"u", "w", "z"};
  rep.checks.push_back(run("yang-baxter", n * n * n, [&](size_t t) -> std::optional<Witness> {
    const BasisKey &a = states[t / (n * n)], &b = states[(t / n) % n], &c = states[t % n];
    const StateVector da = delta(a), db = delta(b), dc = delta(c);
    // w is small in (z - w) and large in (w - u); the w-validity of the products is the
    // small cut in (z - w) plus the lowest w power of the (w - u) factors, so the cut grows
    // until the compared w-range [.., H) is covered.
    long hw = 2 * H;
    std::optional<TruncatedSeries> lhs, rhs;
    for (int attempt = 0; attempt < 3; ++attempt) {
      auto zw = [&](const Laurent& f) { return shifted(f, "z", "w", -1, hw, uwz); };
      auto zu = [&](const Laurent& f) { return shifted(f, "z", "u", -1, H, uwz); };
      auto wu = [&](const Laurent& f) { return shifted(f, "w", "u", -1, H, uwz); };
      auto acc = [](std::optional<TruncatedSeries>& s, const TruncatedSeries& x) { s = s ? *s + x : x; };
      lhs.reset();
      rhs.reset();
      for (const auto& [ka, ca] : da.terms())
        for (const auto& [kb, cb] : db.terms())
          for (const auto& [kc, cc] : dc.terms()) {
            const Scalar k = ca * cb * cc;
            const BasisKey &a1 = ka.leg(0), &a2 = ka.leg(1), &b1 = kb.leg(0), &b2 = kb.leg(1), &c1 = kc.leg(0),
                           &c2 = kc.leg(1);
            acc(lhs, (zw(r.eval(a1, b1)) * zu(r.eval(a2, c1)) * wu(r.eval(b2, c2))).scaled(k));
            acc(rhs, (wu(r.eval(b1, c1)) * zu(r.eval(a1, c2)) * zw(r.eval(a2, b2))).scaled(k));
          }
      if (!lhs) return std::nullopt;
      long valid = std::min(lhs->window()[1].high, rhs->window()[1].high);
      if (valid >= H) break;
      hw += H - valid;
    }
    Window cmp{Bound{kNegInf, H}, Bound{kNegInf, H}, Bound{kNegInf, kPosInf}};
    return series_diff("yang-baxter", {nm(a), nm(b), nm(c)}, *lhs, *rhs, cmp);
  }));

  rep.checks.push_back(run("unit", n, [&](size_t t) -> std::optional<Witness> {
    const BasisKey& a = states[t];
    Laurent eps(e.counit ? e.counit(a) : Scalar());
    StateVector vac = e.vacuum;
    if (auto x = laurent_diff("unit-left", {"|0>", nm(a)}, pairing(r, vac, StateVector(a)), eps)) return x;
    return laurent_diff("unit-right", {nm(a), "|0>"}, pairing(r, StateVector(a), vac), eps);
  }));

  rep.overall = combine("vqg", rep.checks);
  return rep;
}

VqgReport check_vqg_suite(const VertexEngine& e, const VertexRMatrix& r, const std::vector<BasisKey>& states,
                          CheckWindow w) {
  return check_vqg_suite(e, e.delta, r, states, w);
}

}  // namespace vqg
