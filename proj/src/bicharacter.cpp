#include <mutex>
#include <shared_mutex>

#include "vqg/lattice.hpp"

namespace vqg {

struct Bicharacter::Memo {
  mutable std::shared_mutex mu;
  std::map<std::pair<BasisKey, BasisKey>, Laurent> values;
};

namespace {

BasisKey strip(const BasisKey& k) { return BasisKey::lattice(k.lambda, k.modes); }

BasisKey without_first_mode(const BasisKey& k) {
  std::vector<BasisKey::Mode> rest(k.modes.begin() + 1, k.modes.end());
  return BasisKey::lattice(k.lambda, rest);
}

BasisKey single_mode(int rank, BasisKey::Mode m) { return BasisKey::lattice(Vec(rank, 0), {m}); }

Laurent nth_derivative(Laurent f, int n) {
  for (int i = 0; i < n; ++i) f = f.derivative();
  return f;
}

Vec neg(Vec v) {
  for (auto& x : v) x = -x;
  return v;
}

}  // namespace

Bicharacter::Bicharacter(int rank, Base base) : rank_(rank), base_(std::move(base)), memo_(std::make_shared<Memo>()) {}

size_t Bicharacter::cache_size() const {
  std::shared_lock lock(memo_->mu);
  return memo_->values.size();
}

Laurent Bicharacter::operator()(const BasisKey& x, const BasisKey& y) const {
  if (x.kind != BasisKey::Kind::Lattice || y.kind != BasisKey::Kind::Lattice)
    throw std::invalid_argument("bicharacter needs lattice states");
  return eval(strip(x), strip(y), true);
}

Laurent Bicharacter::fresh(const BasisKey& x, const BasisKey& y) const { return eval(strip(x), strip(y), false); }

Laurent Bicharacter::eval(const BasisKey& x, const BasisKey& y, bool memo) const {
  if (memo) {
    std::shared_lock lock(memo_->mu);
    auto it = memo_->values.find({x, y});
    if (it != memo_->values.end()) return it->second;
  }
  auto sweedler = [&](const BasisKey& y0, auto&& f) {
    Laurent s;
    const StateVector d = lattice_delta(y0);
    for (const auto& [t, c] : d.terms()) s += f(t.leg(0), t.leg(1)).scaled(c);
    return s;
  };
  const bool x_zero = std::all_of(x.lambda.begin(), x.lambda.end(), [](int v) { return v == 0; });
  const bool y_zero = std::all_of(y.lambda.begin(), y.lambda.end(), [](int v) { return v == 0; });
  Laurent out;
  if (!x.modes.empty()) {
    if (x.modes.size() == 1 && x_zero) {
      auto [i, n] = x.modes[0];
      // a_{i,-1} = T(e^{e_i}) e^{-e_i}; a_{i,-n} = T^{n-1} a_{i,-1} / (n-1)!
      Vec ei(rank_, 0);
      ei[i - 1] = 1;
      Laurent first = sweedler(y, [&](const BasisKey& y1, const BasisKey& y2) {
        return eval(lattice_exp(ei), y1, memo).derivative() * eval(lattice_exp(neg(ei)), y2, memo);
      });
      out = nth_derivative(first, n - 1).scaled(Scalar(1 / factorial(n - 1)));
    } else {
      BasisKey p = single_mode(rank_, x.modes[0]);
      BasisKey rest = without_first_mode(x);
      out = sweedler(y, [&](const BasisKey& y1, const BasisKey& y2) {
        return eval(p, y1, memo) * eval(rest, y2, memo);
      });
    }
  } else if (!y.modes.empty()) {
    if (y.modes.size() == 1 && y_zero) {
      auto [j, n] = y.modes[0];
      Vec ej(rank_, 0);
      ej[j - 1] = 1;
      Laurent first = -(base_(x.lambda, ej).derivative() * base_(x.lambda, neg(ej)));
      Rational c = (n % 2 ? 1 : -1) / factorial(n - 1);
      out = nth_derivative(first, n - 1).scaled(Scalar(c));
    } else {
      BasisKey q = single_mode(rank_, y.modes[0]);
      out = eval(x, q, memo) * eval(x, without_first_mode(y), memo);
    }
  } else {
    out = base_(x.lambda, y.lambda);
  }
  if (memo) {
    std::unique_lock lock(memo_->mu);
    memo_->values.emplace(std::make_pair(x, y), out);
  }
  return out;
}

Bicharacter lattice_bicharacter(const Lattice& L, const SignCocycle& eps) {
  return Bicharacter(L.rank, [L, eps](const Vec& l, const Vec& m) {
    return Laurent::monomial(L.form(l, m), Scalar(eps(l, m)));
  });
}

Bicharacter unsigned_bicharacter(const Lattice& L) {
  return Bicharacter(L.rank, [L](const Vec& l, const Vec& m) { return Laurent::monomial(L.form(l, m)); });
}

Bicharacter inverse_bicharacter(const Lattice& L, const SignCocycle& eps) {
  return Bicharacter(L.rank, [L, eps](const Vec& l, const Vec& m) {
    return Laurent::monomial(-L.form(l, m), Scalar(eps(l, m)));
  });
}

Bicharacter derived_s_bicharacter(const Lattice& L, const SignCocycle& eps) {
  return Bicharacter(L.rank, [L, eps](const Vec& l, const Vec& m) {
    int kml = L.form(m, l), klm = L.form(l, m);
    int sign = eps(m, l) * eps(l, m) * (kml % 2 ? -1 : 1);  // eps is +-1, so a ratio is a product
    return Laurent::monomial(kml - klm, Scalar(sign));
  });
}

VertexRMatrix as_rmatrix(const Bicharacter& b, std::string name) {
  return {std::move(name), [b](const BasisKey& x, const BasisKey& y) { return b(x, y); }};
}

VertexRMatrix derive_vertex_rmatrix(const Lattice& L) {
  return as_rmatrix(derived_s_bicharacter(L, build_sign_cocycle(L)), "derived-S");
}

bool check_symmetric_vertex(const Lattice& L, const std::vector<std::pair<BasisKey, BasisKey>>& pairs) {
  SignCocycle eps = build_sign_cocycle(L);
  Bicharacter r = lattice_bicharacter(L, eps);
  Bicharacter rbar = inverse_bicharacter(L, eps);
  for (const auto& [x, y] : pairs) {
    Laurent s;
    const StateVector dx = lattice_delta(x), dy = lattice_delta(y);
    for (const auto& [tx, cx] : dx.terms())
      for (const auto& [ty, cy] : dy.terms())
        s += (r(ty.leg(0), tx.leg(0)).reflected() * rbar(tx.leg(1), ty.leg(1))).scaled(cx * cy);
    if (!(s == Laurent(lattice_counit(x) * lattice_counit(y)))) return false;
  }
  return true;
}

bool check_symmetric_vertex(const Lattice& L) {
  std::vector<BasisKey> keys;
  for (int i = 0; i < L.rank; ++i) {
    keys.push_back(lattice_exp(L.basis(i)));
    keys.push_back(BasisKey::lattice(Vec(L.rank, 0), {{i + 1, 1}}));
  }
  std::vector<std::pair<BasisKey, BasisKey>> pairs;
  for (const auto& x : keys)
    for (const auto& y : keys) pairs.push_back({x, y});
  return check_symmetric_vertex(L, pairs);
}

}  // namespace vqg
