#include <doctest.h>

#include <numeric>
#include <stdexcept>
#include <vector>

#include "vqg/joyce.hpp"
#include "vqg/lattice.hpp"
#include "vqg/parallel.hpp"
#include "vqg/vqg_suite.hpp"

using namespace vqg;

namespace {

BasisKey mono(int rank, std::vector<BasisKey::Mode> modes) { return BasisKey::lattice(Vec(rank, 0), modes); }

// Wick contraction oracle for z^{kappa(lambda, mu)} extended to Heisenberg monomials:
//   <a_{i,-m} b_{j,-n}> = kappa_ij (-1)^{m-1} (m+n-1)! / ((m-1)! (n-1)!) z^{-m-n}
//   <a_{i,-m} e^mu>     = kappa(e_i, mu) (-1)^{m-1} z^{-m}
//   <e^lambda b_{j,-n}> = -kappa(lambda, e_j) z^{-n}
// summed over partial matchings between the left and right modes.
Laurent wick(const Lattice& L, const BasisKey& x, const BasisKey& y) {
  const auto& lm = x.modes;
  const auto& rm = y.modes;
  auto kap = [&](int i, const Vec& v) { return L.form(L.basis(i - 1), v); };
  auto kapr = [&](const Vec& v, int j) { return L.form(v, L.basis(j - 1)); };
  auto pair = [&](size_t p, size_t q) {
    auto [i, m] = lm[p];
    auto [j, n] = rm[q];
    Rational c = factorial(m + n - 1) / (factorial(m - 1) * factorial(n - 1));
    c *= L.kappa[i - 1][j - 1] * ((m - 1) % 2 ? -1 : 1);
    return Laurent::monomial(-m - n, Scalar(c));
  };
  auto left_single = [&](size_t p) {
    auto [i, m] = lm[p];
    return Laurent::monomial(-m, Scalar(kap(i, y.lambda) * ((m - 1) % 2 ? -1 : 1)));
  };
  auto right_single = [&](size_t q) {
    auto [j, n] = rm[q];
    return Laurent::monomial(-n, Scalar(-kapr(x.lambda, j)));
  };
  Laurent total;
  std::vector<int> used(rm.size(), 0);
  std::function<void(size_t, Laurent)> go = [&](size_t p, Laurent acc) {
    if (p == lm.size()) {
      for (size_t q = 0; q < rm.size(); ++q)
        if (!used[q]) acc = acc * right_single(q);
      total += acc;
      return;
    }
    go(p + 1, acc * left_single(p));
    for (size_t q = 0; q < rm.size(); ++q) {
      if (used[q]) continue;
      used[q] = 1;
      go(p + 1, acc * pair(p, q));
      used[q] = 0;
    }
  };
  go(0, Laurent::monomial(L.form(x.lambda, y.lambda)));
  return total;
}

int odd_diagonal(const Lattice& L) {
  for (int i = 0; i < L.rank; ++i)
    if (L.kappa[i][i] % 2) return 1;
  return 0;
}

}  // namespace

TEST_CASE("lattice input validation") {
  CHECK_THROWS_AS(Lattice::make({}), std::invalid_argument);
  CHECK_THROWS_AS(Lattice::make({{1, 2}, {3}}), std::invalid_argument);
  auto L = Lattice::make({{0, 1}, {0, 0}});
  CHECK_FALSE(L.symmetric());
  CHECK(L.form({1, 0}, {0, 1}) == 1);
  CHECK(L.form({0, 1}, {1, 0}) == 0);
}

TEST_CASE("bicharacter on generators") {
  auto L = Lattice::make({{2, 1}, {-1, 3}});
  auto r = unsigned_bicharacter(L);
  CHECK(r(lattice_exp({1, 0}), lattice_exp({0, 1})) == Laurent::monomial(1));
  CHECK(r(lattice_exp({0, 1}), lattice_exp({1, 0})) == Laurent::monomial(-1));
  CHECK(r(lattice_exp({1, 1}), lattice_exp({-1, 1})) == Laurent::monomial(L.form({1, 1}, {-1, 1})));
  // Counit values on the vacuum.
  CHECK(r(lattice_vacuum(2), mono(2, {{1, 1}})) == Laurent());
  CHECK(r(lattice_vacuum(2), lattice_vacuum(2)) == Laurent(Scalar(1)));
}

TEST_CASE("bicharacter agrees with Wick contractions") {
  CHECK(wick(Lattice::make({{1}}), mono(1, {{1, 1}}), mono(1, {{1, 3}})) == Laurent::monomial(-4, 3));
  CHECK(wick(Lattice::make({{1}}), mono(1, {{1, 1}, {1, 1}}), mono(1, {{1, 2}, {1, 2}})) == Laurent::monomial(-6, 8));
  CHECK(wick(Lattice::make({{1}}), mono(1, {{1, 1}, {1, 1}}), mono(1, {{1, 3}, {1, 1}})) == Laurent::monomial(-6, 6));
  for (auto kappa : std::vector<std::vector<std::vector<int>>>{{{1}}, {{3}}, {{0, 1}, {0, 0}}, {{2, 1}, {-1, 1}}}) {
    auto L = Lattice::make(kappa);
    auto r = unsigned_bicharacter(L);
    auto st = lattice_states(L.rank, L.rank == 1 ? 4 : 2, 1);
    int bad = 0;
    for (const auto& x : st)
      for (const auto& y : st)
        if (!(r(x, y) == wick(L, x, y))) ++bad;
    CHECK_MESSAGE(bad == 0, "rank " << L.rank);
  }
}

TEST_CASE("memoized and fresh bicharacter values agree") {
  auto L = Lattice::make({{0, 1}, {0, 0}});
  auto r = lattice_bicharacter(L, build_sign_cocycle(L));
  auto st = lattice_states(2, 2, 1);
  for (Exec mode : {Exec::Serial, Exec::Parallel}) {
    ExecScope scope(mode);
    int bad = 0;
    for (const auto& x : st)
      for (const auto& y : st)
        if (!(r(x, y) == r.fresh(x, y))) ++bad;
    CHECK(bad == 0);
  }
  CHECK(r.cache_size() > 0);
}

TEST_CASE("sign cocycle") {
  SUBCASE("bimultiplicative") {
    auto L = Lattice::make({{1, 1}, {0, 3}});
    auto eps = build_sign_cocycle(L);
    for (Vec a : {Vec{1, 0}, Vec{1, 1}, Vec{-1, 2}})
      for (Vec b : {Vec{0, 1}, Vec{2, -1}, Vec{1, 1}}) {
        Vec ab{a[0] + b[0], a[1] + b[1]};
        CHECK(eps(ab, b) == eps(a, b) * eps(b, b));
        CHECK(eps(b, ab) == eps(b, a) * eps(b, b));
      }
  }
  SUBCASE("swap ratio on symmetric lattices") {
    for (auto kappa : std::vector<std::vector<std::vector<int>>>{{{2, 1}, {1, 2}}, {{0, 1}, {1, 0}}, {{2, -1}, {-1, 4}}}) {
      auto L = Lattice::make(kappa);
      auto eps = build_sign_cocycle(L);
      for (Vec a : {Vec{1, 0}, Vec{0, 1}, Vec{1, 1}})
        for (Vec b : {Vec{1, 0}, Vec{0, 1}, Vec{1, -1}}) {
          int want = (L.form(a, b) + L.form(a, a) * L.form(b, b)) % 2 ? -1 : 1;
          CHECK(eps(a, b) * eps(b, a) == want);
        }
    }
  }
  SUBCASE("hyperbolic plane needs the one-sided table") {
    auto L = Lattice::make({{0, 1}, {1, 0}});
    auto V = borcherds_twist_vertex(L);
    CHECK(check_skew_all(V, V.states(0), CheckWindow{std::nullopt, 4}).passed());
    // Table symmetric in the exponent: eps(e2, e1) = (-1)^{1+1} = 1.
    SignCocycle even;
    even.table = {{1, 1}, {1, 1}};
    auto W = borcherds_twist_vertex(L, lattice_bicharacter(L, even), "even-table");
    Verdict v = check_skew_all(W, W.states(0), CheckWindow{std::nullopt, 4});
    REQUIRE(v.status == Status::Fail);
    REQUIRE(v.witness);
  }
}

TEST_CASE("derived S bicharacter") {
  auto L = Lattice::make({{0, 1}, {0, 0}});
  auto eps = build_sign_cocycle(L);
  auto r = lattice_bicharacter(L, eps);
  auto rinv = inverse_bicharacter(L, eps);
  auto s = derived_s_bicharacter(L, eps);
  auto st = lattice_states(2, 1, 1);
  for (const auto& x : st)
    for (const auto& y : st) {
      // Convolution in the primitive/grouplike coproduct.
      Laurent want;
      const StateVector dx = lattice_delta(x), dy = lattice_delta(y);
      for (const auto& [tx, cx] : dx.terms())
        for (const auto& [ty, cy] : dy.terms())
          want += (r(ty.leg(0), tx.leg(0)).reflected() * rinv(tx.leg(1), ty.leg(1))).scaled(cx * cy);
      CHECK_MESSAGE(s(x, y) == want, key_str(x) << " " << key_str(y));
    }
  CHECK(s(lattice_exp({1, 0}), lattice_exp({0, 1})) == Laurent::monomial(-1, -1));
}

TEST_CASE("convolution inverse") {
  auto L = Lattice::make({{2, 1}, {0, 1}});
  auto eps = build_sign_cocycle(L);
  auto r = lattice_bicharacter(L, eps);
  auto rinv = inverse_bicharacter(L, eps);
  for (const auto& x : lattice_states(2, 1, 1))
    for (const auto& y : lattice_states(2, 1, 1)) {
      Laurent s;
      const StateVector dx = lattice_delta(x), dy = lattice_delta(y);
      for (const auto& [tx, cx] : dx.terms())
        for (const auto& [ty, cy] : dy.terms()) s += (r(tx.leg(0), ty.leg(0)) * rinv(tx.leg(1), ty.leg(1))).scaled(cx * cy);
      CHECK(s == Laurent(lattice_counit(x) * lattice_counit(y)));
    }
}

TEST_CASE("symmetric vertex R-matrices") {
  CHECK(check_symmetric_vertex(Lattice::make({{2}})));
  CHECK(check_symmetric_vertex(Lattice::make({{2, 1}, {1, 2}})));
  CHECK_FALSE(check_symmetric_vertex(Lattice::make({{0, 1}, {0, 0}})));
  CHECK_FALSE(check_symmetric_vertex(Lattice::make({{2, 1}, {0, 2}})));
  // Odd self-pairing: the signed R is not symmetric even though kappa is.
  CHECK_FALSE(check_symmetric_vertex(Lattice::make({{1}})));
  int mismatches = 0, odd = 0;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c)
        for (int d = -2; d <= 2; ++d) {
          auto L = Lattice::make({{a, b}, {c, d}});
          if (check_symmetric_vertex(L) != L.symmetric()) {
            ++mismatches;
            odd += L.symmetric() && odd_diagonal(L);
          }
        }
  CHECK(mismatches == 80);
  CHECK(odd == 80);
}

TEST_CASE("lattice engines") {
  SUBCASE("symmetric kappa gives a commutative vertex algebra") {
    auto V = borcherds_twist_vertex(Lattice::make({{2, -1}, {-1, 2}}));
    CHECK(run_commutative_suite(V, V.states(0), CheckWindow{std::nullopt, 4}).passed());
  }
  SUBCASE("any kappa satisfies the associative axioms") {
    auto V = borcherds_twist_vertex(Lattice::make({{1, 2}, {-1, 0}}));
    CHECK(run_associative_suite(V, V.states(0), CheckWindow{std::nullopt, 4}).passed());
    CHECK(check_braided_skew_all(V, derive_vertex_rmatrix(Lattice::make({{1, 2}, {-1, 0}})), V.states(0),
                                 CheckWindow{std::nullopt, 4})
              .passed());
  }
  SUBCASE("nonsymmetric kappa is not commutative") {
    auto V = borcherds_twist_vertex(Lattice::make({{0, 1}, {0, 0}}));
    Verdict v = check_skew_all(V, V.states(0));
    REQUIRE(v.status == Status::Fail);
    CHECK(v.witness->tuple.size() == 2);
  }
  SUBCASE("OPE of opposite classes") {
    auto V = borcherds_twist_vertex(Lattice::make({{2}}));
    VSeries s = V.Y(lattice_exp({1}), lattice_exp({-1}), 0);
    REQUIRE_FALSE(s.empty());
    CHECK(s.begin()->first == -2);
  }
}

TEST_CASE("vertex quantum group suite") {
  auto A = holomorphic_lattice_engine(2);
  auto st = lattice_states(2, 0, 1);
  CheckWindow w{std::nullopt, 4};
  for (auto kappa : std::vector<std::vector<std::vector<int>>>{{{0, 1}, {0, 0}}, {{2, 1}, {-1, 0}}}) {
    auto L = Lattice::make(kappa);
    VqgReport rep = check_vqg_suite(A, as_rmatrix(lattice_bicharacter(L, build_sign_cocycle(L)), "r"), st, w);
    REQUIRE(rep.checks.size() == 5);
    for (const auto& v : rep.checks) CHECK_MESSAGE(v.passed(), v.name << " " << v.detail);
    CHECK(rep.overall.passed());
  }
  SUBCASE("a broken sign table fails a hexagon") {
    auto L = Lattice::make({{0, 1}, {0, 0}});
    // Not bimultiplicative: the value on e1 + e2 drops its sign.
    Bicharacter bad(2, [L](const Vec& l, const Vec& m) {
      int sg = (l[1] * m[0]) % 2 ? -1 : 1;
      if (l == Vec{1, 1}) sg = 1;
      return Laurent::monomial(L.form(l, m), Scalar(sg));
    });
    VqgReport rep = check_vqg_suite(A, as_rmatrix(bad, "bad"), st, w);
    CHECK(rep.checks[1].status == Status::Fail);
    CHECK(rep.overall.status == Status::Fail);
  }
  SUBCASE("hexagons imply Yang-Baxter on every tested input") {
    for (auto kappa : std::vector<std::vector<std::vector<int>>>{{{1}}, {{2}}, {{-1}}}) {
      auto L = Lattice::make(kappa);
      auto A1 = holomorphic_lattice_engine(1);
      for (const auto& r : {lattice_bicharacter(L, build_sign_cocycle(L)), unsigned_bicharacter(L)}) {
        VqgReport rep = check_vqg_suite(A1, as_rmatrix(r, "r"), lattice_states(1, 1, 1), w);
        if (rep.checks[1].passed()) CHECK(rep.checks[3].passed());
      }
    }
  }
}

TEST_CASE("Joyce R-matrix") {
  RingPtr ring = make_ring({"tau"});
  Scalar tau = Scalar::param(ring, "tau");
  SUBCASE("even weights give elementary symmetric Chern classes") {
    Laurent two = joyce_series({std::nullopt, {1, 1}, {}});
    CHECK(two == Laurent::monomial(2) + Laurent::monomial(1, tau * Scalar(2)) + Laurent(tau * tau));
    Laurent three = joyce_series({std::nullopt, {1, 2, 3}, {}});
    CHECK(three.coeff(3) == Scalar(1));
    CHECK(three.coeff(2) == tau * Scalar(6));
    CHECK(three.coeff(1) == tau * tau * Scalar(11));
    CHECK(three.coeff(0) == tau * tau * tau * Scalar(6));
  }
  SUBCASE("odd weight expands geometrically") {
    Laurent inv = joyce_series({std::nullopt, {}, {1}}, {"tau", 5});
    Scalar p = 1;
    for (int k = 0; k < 5; ++k) {
      CHECK(inv.coeff(-1 - k) == p);
      p = p * (-tau);
    }
    CHECK(inv.terms().size() == 5);
  }
  SUBCASE("rank shifts the leading power") {
    CHECK(joyce_series({3, {}, {}}) == Laurent::monomial(3));
    CHECK(joyce_series({3, {0}, {}}) == Laurent::monomial(3));
    CHECK(joyce_series({1, {2}, {}}) == Laurent::monomial(1) + Laurent(tau * Scalar(2)));
  }
  SUBCASE("empty weights reproduce the unsigned lattice bicharacter") {
    auto L = Lattice::make({{0, 1}, {0, 0}});
    auto j = joyce_bicharacter(2, rank_only_weights(L));
    auto u = unsigned_bicharacter(L);
    for (const auto& x : lattice_states(2, 1, 1))
      for (const auto& y : lattice_states(2, 1, 1)) CHECK(j(x, y) == u(x, y));
  }
  SUBCASE("bimultiplicative extension") {
    ExtWeightMap m;
    m[{{1, 0}, {0, 1}}] = {std::nullopt, {1}, {}};
    auto j = joyce_bicharacter(2, m);
    CHECK(j.base({2, 0}, {0, 1}) == joyce_series({std::nullopt, {1, 1}, {}}));
    CHECK(j.base({-1, 0}, {0, 1}) == joyce_series({std::nullopt, {}, {1}}));
    CHECK(j.base({0, 1}, {1, 0}) == Laurent(Scalar(1)));
    // A consistent entry off the basis is accepted.
    m[{{2, 0}, {0, 1}}] = {std::nullopt, {1, 1}, {}};
    CHECK_NOTHROW(joyce_bicharacter(2, m));
  }
  SUBCASE("non-additive weights are rejected") {
    ExtWeightMap m;
    m[{{1, 0}, {1, 0}}] = {std::nullopt, {1}, {}};
    m[{{2, 0}, {1, 0}}] = {std::nullopt, {1}, {}};
    CHECK_THROWS_AS(joyce_bicharacter(2, m), std::invalid_argument);
    ExtWeightMap wrong_rank;
    wrong_rank[{{1}, {1}}] = {};
    CHECK_THROWS_AS(joyce_bicharacter(2, wrong_rank), std::invalid_argument);
  }
  SUBCASE("empty weights give the unsigned verdicts") {
    auto L = Lattice::make({{0, 1}, {0, 0}});
    auto A = holomorphic_lattice_engine(2);
    auto st = lattice_states(2, 0, 1);
    CheckWindow w{std::nullopt, 3};
    VqgReport a = check_vqg_suite(A, joyce_rmatrix_lattice(2, rank_only_weights(L)), st, w);
    VqgReport b = check_vqg_suite(A, as_rmatrix(unsigned_bicharacter(L), "r0"), st, w);
    REQUIRE(a.checks.size() == b.checks.size());
    for (size_t i = 0; i < a.checks.size(); ++i) CHECK(a.checks[i].status == b.checks[i].status);
  }
}

TEST_CASE("H-linear lattice") {
  auto L = Lattice::make({{1}});
  SUBCASE("trivial H reduces to the lattice engine") {
    FinBialgebra k({"1"}, nullptr, {{0, 0, 0, Scalar(1)}}, {{0, 0, 0, Scalar(1)}}, {Scalar(1)}, StateVector(BasisKey::index(0)));
    Functional one{{{0, 0}, Scalar(1)}};
    auto H = hlinear_lattice({k, one}, L);
    auto V = borcherds_twist_vertex(L);
    for (const auto& a : lattice_states(1, 1, 1))
      for (const auto& b : lattice_states(1, 1, 1)) {
        BasisKey la = BasisKey::lattice(a.lambda, a.modes, 0), lb = BasisKey::lattice(b.lambda, b.modes, 0);
        VSeries hs = H.Y(la, lb, 3), vs = V.Y(a, b, 3);
        REQUIRE(hs.size() == vs.size());
        for (const auto& [n, v] : vs) {
          StateVector relabelled;
          for (const auto& [kk, c] : v.terms()) relabelled.add(BasisKey::lattice(kk.lambda, kk.modes, 0), c);
          CHECK(hs.at(n) == relabelled);
        }
      }
  }
  SUBCASE("sign functional on O(Z/2)") {
    auto H = hlinear_lattice({function_algebra_z2(), sign_op_rmatrix()}, L);
    BasisKey e11 = BasisKey::lattice({1}, {}, 1), e10 = BasisKey::lattice({1}, {}, 0);
    Scalar c11 = H.Y(e11, e11, 2).begin()->second.terms().begin()->second;
    Scalar c01 = H.Y(e10, e11, 2).begin()->second.terms().begin()->second;
    CHECK(c11 == -c01);
  }
  SUBCASE("uncertified H is rejected") {
    auto ring = make_ring({"t"});
    Functional f{{{0, 0}, Scalar(1)}, {{0, 1}, Scalar(0)}, {{1, 0}, Scalar(0)}, {{1, 1}, Scalar(1)}};
    CHECK_THROWS_AS(hlinear_lattice({dual_numbers(ring), f}, L), std::invalid_argument);
  }
}
