#include <mutex>
#include <shared_mutex>

#include "vqg/lattice.hpp"

namespace vqg {

namespace {

// T^k a / k! for k = 0, 1, ..., cached per key.
class ExpT {
public:
  explicit ExpT(std::function<StateVector(const StateVector&)> T) : T_(std::move(T)) {}

  StateVector term(const BasisKey& a, int k) {
    {
      std::shared_lock lock(mu_);
      auto it = cache_.find(a);
      if (it != cache_.end() && static_cast<int>(it->second.size()) > k) return it->second[k];
    }
    std::vector<StateVector> terms;
    {
      std::shared_lock lock(mu_);
      auto it = cache_.find(a);
      if (it != cache_.end()) terms = it->second;
    }
    if (terms.empty()) terms.push_back(StateVector(a));
    while (static_cast<int>(terms.size()) <= k) {
      long j = static_cast<long>(terms.size());
      terms.push_back(T_(terms.back()).scaled(Scalar(Rational(1, j))));
    }
    StateVector out = terms[k];
    std::unique_lock lock(mu_);
    auto& slot = cache_[a];
    if (slot.size() < terms.size()) slot = std::move(terms);
    return out;
  }

private:
  std::function<StateVector(const StateVector&)> T_;
  std::shared_mutex mu_;
  std::map<BasisKey, std::vector<StateVector>> cache_;
};

void add_at(VSeries& s, int n, const StateVector& v) {
  if (v.is_zero()) return;
  StateVector& slot = s[n];
  slot += v;
  if (slot.is_zero()) s.erase(n);
}

// Shared body of the twisted engines: sum over coproduct legs of
// pairing(a1, b1)(z) * (e^{zT} a2) . b2.
VSeries twisted_product(const StateVector& da, const StateVector& db,
                        const std::function<Laurent(const BasisKey&, const BasisKey&)>& pairing,
                        const std::function<StateVector(const StateVector&, const StateVector&)>& product,
                        ExpT& expt, int high) {
  VSeries out;
  for (const auto& [ta, ca] : da.terms())
    for (const auto& [tb, cb] : db.terms()) {
      Laurent f = pairing(ta.leg(0), tb.leg(0));
      if (f.is_zero()) continue;
      const BasisKey& a2 = ta.leg(1);
      StateVector b2(tb.leg(1));
      for (const auto& [e, fc] : f.terms())
        for (int k = 0; e + k < high; ++k) {
          StateVector t = expt.term(a2, k);
          if (t.is_zero()) break;
          add_at(out, e + k, product(t, b2).scaled(fc * ca * cb));
        }
    }
  return out;
}

int lattice_pole(const Bicharacter& r, const BasisKey& a, const BasisKey& b) {
  Laurent base = r.base(a.lambda, b.lambda);
  return base.low() - a.weight() - b.weight();
}

}  // namespace

VertexEngine borcherds_twist_vertex(const Lattice& L, const Bicharacter& r, std::string name) {
  VertexEngine e;
  e.name = std::move(name);
  e.vacuum = StateVector(lattice_vacuum(L.rank));
  e.T = [](const StateVector& v) { return lattice_T(v); };
  auto expt = std::make_shared<ExpT>(e.T);
  auto product = [](const StateVector& x, const StateVector& y) { return lattice_product(x, y); };
  e.Y = [r, expt, product](const BasisKey& a, const BasisKey& b, int high) {
    return twisted_product(lattice_delta(a), lattice_delta(b), [&r](const BasisKey& x, const BasisKey& y) { return r(x, y); },
                           product, *expt, high);
  };
  e.pole_bound = [r](const BasisKey& a, const BasisKey& b) { return lattice_pole(r, a, b); };
  const int rank = L.rank;
  e.states = [rank](int w) { return lattice_states(rank, w, 1); };
  e.delta = [](const BasisKey& k) { return lattice_delta(k); };
  e.counit = [](const BasisKey& k) { return lattice_counit(k); };
  e.context.rank = L.rank;
  return memoized(std::move(e));
}

VertexEngine borcherds_twist_vertex(const Lattice& L) {
  return borcherds_twist_vertex(L, lattice_bicharacter(L, build_sign_cocycle(L)));
}

VertexEngine holomorphic_lattice_engine(int rank) {
  Bicharacter one(rank, [](const Vec&, const Vec&) { return Laurent(Scalar(1)); });
  Lattice L = Lattice::make(std::vector<std::vector<int>>(rank, std::vector<int>(rank, 0)));
  VertexEngine e = borcherds_twist_vertex(L, one, "holomorphic-lattice");
  e.pole_bound = [](const BasisKey&, const BasisKey&) { return 0; };
  return e;
}

VertexEngine heisenberg_engine(const Lattice& L) {
  VertexEngine e = borcherds_twist_vertex(L, lattice_bicharacter(L, build_sign_cocycle(L)), "heisenberg");
  const int rank = L.rank;
  e.states = [rank](int w) { return fock_basis(Vec(rank, 0), w); };
  return e;
}

std::vector<BasisKey> hlinear_states(size_t dim_h, int rank, int max_weight) {
  std::vector<BasisKey> out;
  for (const auto& k : lattice_states(rank, max_weight, 1))
    for (size_t h = 0; h < dim_h; ++h) out.push_back(BasisKey::lattice(k.lambda, k.modes, static_cast<int>(h)));
  std::sort(out.begin(), out.end());
  return out;
}

VertexEngine hlinear_lattice(const HLinearData& data, const Lattice& L) {
  Verdict hb = check_bialgebra(data.h);
  if (!hb.passed()) throw std::invalid_argument("H is not a bialgebra: " + hb.witness->check);
  Verdict hr = check_op_rmatrix(data.h, data.r_h);
  if (!hr.passed()) throw std::invalid_argument("R_H is not an op-R-matrix: " + hr.witness->check);

  auto h = std::make_shared<FinBialgebra>(data.h);
  Functional rh = data.r_h;
  Bicharacter r = lattice_bicharacter(L, build_sign_cocycle(L));
  const int rank = L.rank;

  auto unlabel = [](const BasisKey& k) { return BasisKey::lattice(k.lambda, k.modes); };
  auto relabel = [](const BasisKey& k, int label) { return BasisKey::lattice(k.lambda, k.modes, label); };
  // Labels multiply in H; the lattice parts multiply as before.
  auto product = [h, unlabel, relabel](const StateVector& x, const StateVector& y) {
    StateVector out;
    for (const auto& [kx, cx] : x.terms())
      for (const auto& [ky, cy] : y.terms()) {
        StateVector lab = h->mul(StateVector(BasisKey::index(kx.label)), StateVector(BasisKey::index(ky.label)));
        BasisKey body = lattice_product(unlabel(kx), unlabel(ky));
        for (const auto& [kl, cl] : lab.terms()) out.add(relabel(body, kl.label), cx * cy * cl);
      }
    return out;
  };
  auto delta = [h, unlabel, relabel](const BasisKey& k) {
    StateVector out;
    StateVector dh = h->delta(StateVector(BasisKey::index(k.label)));
    StateVector dx = lattice_delta(unlabel(k));
    for (const auto& [th, ch] : dh.terms())
      for (const auto& [tx, cx] : dx.terms())
        out.add(BasisKey::tensor({relabel(tx.leg(0), th.leg(0).label), relabel(tx.leg(1), th.leg(1).label)}), ch * cx);
    return out;
  };

  VertexEngine e;
  e.name = "hlinear-lattice";
  for (const auto& [k, c] : h->unit().terms()) e.vacuum.add(lattice_vacuum(rank, k.label), c);
  e.T = [](const StateVector& v) { return lattice_T(v); };
  auto expt = std::make_shared<ExpT>(e.T);
  auto pairing = [r, rh, unlabel](const BasisKey& x, const BasisKey& y) {
    Scalar c = eval_functional(rh, BasisKey::index(x.label), BasisKey::index(y.label));
    if (c.is_zero()) return Laurent();
    return r(unlabel(x), unlabel(y)).scaled(c);
  };
  e.Y = [delta, pairing, product, expt](const BasisKey& a, const BasisKey& b, int high) {
    return twisted_product(delta(a), delta(b), pairing, product, *expt, high);
  };
  e.pole_bound = [r](const BasisKey& a, const BasisKey& b) { return lattice_pole(r, a, b); };
  const size_t dim = h->dim();
  e.states = [dim, rank](int w) { return hlinear_states(dim, rank, w); };
  e.delta = delta;
  e.counit = [h, unlabel](const BasisKey& k) {
    return h->eps(StateVector(BasisKey::index(k.label))) * lattice_counit(unlabel(k));
  };
  e.context.rank = rank;
  e.context.product = product;
  return memoized(std::move(e));
}

}  // namespace vqg
