#include <doctest.h>

#include <map>
#include <set>
#include <vector>

#include "vqg/fields.hpp"
#include "vqg/lattice.hpp"
#include "vqg/parallel.hpp"
#include "vqg/reconstruct.hpp"

using namespace vqg;

namespace {

BasisKey mono(std::vector<BasisKey::Mode> modes, int rank = 1) { return BasisKey::lattice(Vec(rank, 0), modes); }
BasisKey alpha1() { return mono({{1, 1}}); }
BasisKey x(int n) { return BasisKey::poly({n}); }

// Partitions of n by the pentagonal-free recurrence p(n, k) on the largest part.
size_t partitions(int n, int k) {
  if (n == 0) return 1;
  if (k == 0) return 0;
  return partitions(n, k - 1) + (k <= n ? partitions(n - k, k) : 0);
}

// Two-coloured partitions: convolution of the one-colour counts.
size_t coloured2(int n) {
  size_t s = 0;
  for (int i = 0; i <= n; ++i) s += partitions(i, i) * partitions(n - i, n - i);
  return s;
}

LinearMap commutator(const LinearMap& f, const LinearMap& g) {
  return add_maps(compose(f, g), scale_map(Scalar(-1), compose(g, f)));
}

// Keeps only the columns on `basis` and drops components outside it.
LinearMap restrict(const LinearMap& f, const std::vector<BasisKey>& basis) {
  std::set<BasisKey> in(basis.begin(), basis.end());
  std::map<BasisKey, StateVector> cols;
  for (const auto& k : basis) {
    StateVector v;
    for (const auto& [kk, c] : f.column(k).terms())
      if (in.count(kk)) v.add(kk, c);
    cols[k] = v;
  }
  return LinearMap(cols);
}

int compare_engines(const VertexEngine& A, const VertexEngine& B, const std::vector<BasisKey>& states, int span) {
  int bad = 0;
  for (const auto& a : states)
    for (const auto& b : states) {
      int lo = std::min(A.pole_bound(a, b), B.pole_bound(a, b));
      if (!(A.Y(a, b, lo + span) == B.Y(a, b, lo + span))) ++bad;
    }
  return bad;
}

}  // namespace

TEST_CASE("Fock sector dimensions follow partition counts") {
  auto fock1 = fock_space(1);
  std::vector<size_t> got;
  for (int n = 0; n <= 6; ++n) got.push_back(graded_dimension(fock1, {0, n}));
  CHECK(got == std::vector<size_t>{1, 1, 2, 3, 5, 7, 11});
  for (int n = 0; n <= 8; ++n) CHECK(graded_dimension(fock1, {0, n}) == partitions(n, n));
  auto fock2 = fock_space(2);
  for (int n = 0; n <= 6; ++n) CHECK(graded_dimension(fock2, {0, 0, n}) == coloured2(n));
  CHECK(graded_dimension(fock2, {0, 0, 2}) == 5);
}

TEST_CASE("vacuum field acts as the identity") {
  auto H = heisenberg_engine(Lattice::make({{1}}));
  Field id = engine_field(H, H.vacuum);
  for (const auto& b : H.states(3)) {
    for (int n = -3; n <= 3; ++n) {
      StateVector want = n == -1 ? StateVector(b) : StateVector();
      CHECK(apply_mode(id, n, StateVector(b)) == want);
    }
  }
  CHECK(check_vacuum(H, H.states(3)).passed());
}

TEST_CASE("Heisenberg mode commutators") {
  for (int k : {1, 2, 3}) {
    auto H = heisenberg_engine(Lattice::make({{k}}));
    auto basis = H.states(4);
    Field a = engine_field(H, StateVector(alpha1()));
    for (int m = -4; m <= 4; ++m)
      for (int n = -4; n <= 4; ++n)
        for (const auto& b : basis) {
          StateVector v(b);
          StateVector c = apply_mode(a, m, apply_mode(a, n, v)) - apply_mode(a, n, apply_mode(a, m, v));
          StateVector want = m + n == 0 ? v.scaled(Scalar(m * k)) : StateVector();
          CHECK_MESSAGE(c == want, "k=" << k << " m=" << m << " n=" << n << " on " << key_str(b));
        }
  }
}

TEST_CASE("mode matrices commute as on the Heisenberg algebra") {
  auto H = heisenberg_engine(Lattice::make({{2}}));
  Field a = engine_field(H, StateVector(alpha1()));
  // alpha_1 alpha_{-1} - alpha_{-1} alpha_1 on weight <= 2, via matrices on weight <= 3.
  auto small = H.states(2), big = H.states(3);
  LinearMap up = mode(a, -1, small), down = mode(a, 1, big);
  LinearMap down_small = mode(a, 1, small), up_big = mode(a, -1, H.states(1));
  LinearMap lhs = compose(down, up);
  std::map<BasisKey, StateVector> cols;
  for (const auto& k : small) cols[k] = lhs.column(k) - up_big.apply(down_small.column(k));
  CHECK(LinearMap(cols) == scale_map(Scalar(2), LinearMap::identity(small)));
}

TEST_CASE("modes of a derivative field shift index") {
  auto H = heisenberg_engine(Lattice::make({{1}}));
  Field a = engine_field(H, StateVector(alpha1()));
  Field da = derivative(a);
  for (const auto& b : H.states(3))
    for (int n = -3; n <= 3; ++n)
      CHECK(apply_mode(da, n, StateVector(b)) == apply_mode(a, n - 1, StateVector(b)).scaled(Scalar(-n)));
}

TEST_CASE("Heisenberg OPE of alpha with itself") {
  auto H = heisenberg_engine(Lattice::make({{3}}));
  VSeries s = H.Y(alpha1(), alpha1(), 1);
  CHECK(s.begin()->first == -2);
  CHECK(s.at(-2) == H.vacuum.scaled(Scalar(3)));
  CHECK(s.count(-1) == 0);
  CHECK(s.at(0) == StateVector(mono({{1, 1}, {1, 1}})));
}

TEST_CASE("normal ordering") {
  auto H = heisenberg_engine(Lattice::make({{1}}));
  Field a = engine_field(H, StateVector(alpha1()));
  SUBCASE("identity on the left") {
    Field f = normally_ordered(identity_field(), a);
    for (const auto& b : H.states(2))
      for (int k = -3; k < 2; ++k) CHECK(field_coeff(f, StateVector(b), k) == field_coeff(a, StateVector(b), k));
  }
  SUBCASE(":alpha alpha: on the vacuum") {
    Field f = normally_ordered(a, a);
    CHECK(field_coeff(f, H.vacuum, 0) == StateVector(mono({{1, 1}, {1, 1}})));
  }
  SUBCASE("normal order is not commutative") {
    // alpha_(1) a^2 = 2 alpha is not killed by d^2, so the two orders differ.
    Field sq = engine_field(H, StateVector(mono({{1, 1}, {1, 1}})));
    Field f = normally_ordered(a, sq);
    Field g = normally_ordered(sq, a);
    bool differ = false;
    for (const auto& b : H.states(2))
      for (int k = -4; k < 2 && !differ; ++k)
        differ = !(field_coeff(f, StateVector(b), k) == field_coeff(g, StateVector(b), k));
    CHECK(differ);
  }
  SUBCASE("the creation split reproduces the cube state") {
    // Y(a_{-1}^3 |0>, z)|0> at z^{-1}: zero for the vertex operator, nonzero for the literal split.
    Field sq_c = normally_ordered(a, a, NormalOrder::Creation);
    Field cube_c = normally_ordered(a, sq_c, NormalOrder::Creation);
    Field cube_engine = engine_field(H, StateVector(mono({{1, 1}, {1, 1}, {1, 1}})));
    for (int k = -2; k < 3; ++k) CHECK(field_coeff(cube_c, H.vacuum, k) == field_coeff(cube_engine, H.vacuum, k));
    Field sq_l = normally_ordered(a, a);
    Field cube_l = normally_ordered(a, sq_l);
    CHECK_FALSE(field_coeff(cube_l, H.vacuum, -1).is_zero());
  }
}

TEST_CASE("vacuum axiom mutation is caught") {
  auto P = polynomial_engine();
  CHECK(check_vacuum(P, P.states(5)).passed());
  auto bad = P;
  auto Y = P.Y;
  auto vac = P.vacuum.terms().begin()->first;
  bad.Y = [Y, vac](const BasisKey& a, const BasisKey& b, int high) {
    VSeries s = Y(a, b, high);
    if (a == vac && b == x(1)) s[0] = StateVector(x(2));
    return s;
  };
  bad.Y_cached = nullptr;
  Verdict v = check_vacuum(bad, bad.states(5));
  REQUIRE(v.status == Status::Fail);
  REQUIRE(v.witness);
}

TEST_CASE("lattice vertex operator on the vacuum returns the state") {
  auto V = borcherds_twist_vertex(Lattice::make({{2}}));
  BasisKey e1 = lattice_exp({1});
  VSeries s = V.Y(e1, lattice_vacuum(1), 1);
  CHECK(s.begin()->first >= 0);
  CHECK(s.at(0) == StateVector(e1));
}

TEST_CASE("translation covariance") {
  auto P = polynomial_engine();
  CHECK(check_translation(P, P.states(5)).passed());
  auto H = heisenberg_engine(Lattice::make({{1}}));
  CHECK(check_translation(H, {alpha1(), lattice_vacuum(1)}, CheckWindow{{{-3, 3}}, 6}).passed());
  auto bad = H;
  bad.T = [](const StateVector&) { return StateVector(); };
  Verdict v = check_translation(bad, H.states(2));
  REQUIRE(v.status == Status::Fail);
  REQUIRE(v.witness);
}

TEST_CASE("skew commutativity") {
  auto P = polynomial_engine();
  CHECK(check_skew_all(P, P.states(3)).passed());
  auto V = borcherds_twist_vertex(Lattice::make({{2}}));
  CHECK(check_skew_commutativity(V, lattice_exp({1}), lattice_exp({1}), CheckWindow{{{-2, 4}}, 6}).passed());

  auto L = Lattice::make({{0, 1}, {0, 0}});
  auto N = borcherds_twist_vertex(L);
  Verdict plain = check_skew_commutativity(N, lattice_exp({1, 0}), lattice_exp({0, 1}));
  REQUIRE(plain.status == Status::Fail);
  REQUIRE(plain.witness);
  CHECK(check_braided_skew_commutativity(N, derive_vertex_rmatrix(L), lattice_exp({1, 0}), lattice_exp({0, 1}))
            .passed());
}

TEST_CASE("trivial braiding reduces to plain skew commutativity") {
  auto V = borcherds_twist_vertex(Lattice::make({{2}}));
  auto one = trivial_vertex_rmatrix(lattice_counit);
  auto st = V.states(1);
  CHECK(check_braided_skew_all(V, one, st).status == check_skew_all(V, st).status);
  auto L = Lattice::make({{0, 1}, {0, 0}});
  auto N = borcherds_twist_vertex(L);
  auto nst = N.states(0);
  CHECK(check_braided_skew_all(N, one, nst).status == Status::Fail);
  CHECK(check_skew_all(N, nst).status == Status::Fail);
}

TEST_CASE("wrong braiding sign is caught") {
  auto L = Lattice::make({{0, 1}, {0, 0}});
  auto N = borcherds_twist_vertex(L);
  auto S = derive_vertex_rmatrix(L);
  VertexRMatrix flipped{"flipped", [S](const BasisKey& a, const BasisKey& b) { return -S.eval(a, b); }};
  Verdict v = check_braided_skew_commutativity(N, flipped, lattice_exp({1, 0}), lattice_exp({0, 1}));
  REQUIRE(v.status == Status::Fail);
  REQUIRE(v.witness);
}

TEST_CASE("weak associativity") {
  auto P = polynomial_engine();
  CHECK(check_weak_associativity(P, x(1), x(1), x(1)).passed());
  auto H = heisenberg_engine(Lattice::make({{1}}));
  CHECK(check_weak_associativity(H, alpha1(), alpha1(), lattice_vacuum(1), CheckWindow{std::nullopt, 4}).passed());
  auto V = borcherds_twist_vertex(Lattice::make({{2}}));
  CHECK(check_weak_associativity(V, lattice_exp({1}), lattice_exp({1}), lattice_exp({-1})).passed());
}

TEST_CASE("locality of generating fields") {
  auto H = heisenberg_engine(Lattice::make({{1}}));
  Field a = engine_field(H, StateVector(alpha1()));
  auto st = H.states(3);
  CHECK(check_locality(a, a, 2, st).passed());
  Verdict low = check_locality(a, a, 1, st);
  REQUIRE(low.status == Status::Fail);
  CHECK(low.witness->exponent.size() == 2);
  CHECK(check_locality(identity_field(), a, 0, st).passed());

  auto V = borcherds_twist_vertex(Lattice::make({{2}}));
  Field e1 = engine_field(V, StateVector(lattice_exp({1})));
  CHECK(check_locality(e1, e1, 2, V.states(1)).passed());
}

TEST_CASE("braided locality with the derived S") {
  auto L = Lattice::make({{0, 1}, {0, 0}});
  auto N = borcherds_twist_vertex(L);
  auto S = derive_vertex_rmatrix(L);
  auto st = N.states(0);
  BasisKey a = lattice_exp({1, 0}), b = lattice_exp({0, 1});
  int n = std::max(0, -N.pole_bound(a, b));
  CHECK(check_braided_locality(N, S, a, b, n, st).passed());
  CHECK(check_locality_all(N, st, 6, &S).passed());
  auto H = heisenberg_engine(Lattice::make({{1, 0}, {0, 1}}));
  Verdict short_n = check_braided_locality(H, trivial_vertex_rmatrix(lattice_counit), mono({{1, 1}}, 2),
                                           mono({{1, 1}}, 2), 1, H.states(2));
  REQUIRE(short_n.status == Status::Fail);
  CHECK(short_n.witness->exponent.size() == 2);
}

TEST_CASE("full commutative suite on the polynomial algebra") {
  auto P = polynomial_engine();
  for (Exec mode : {Exec::Serial, Exec::Parallel}) {
    ExecScope scope(mode);
    CHECK(run_commutative_suite(P, P.states(5)).passed());
  }
}

TEST_CASE("memoized and fresh evaluations agree") {
  auto L = Lattice::make({{2}});
  auto fresh = borcherds_twist_vertex(L);
  fresh.Y_cached = nullptr;
  auto memo = memoized(borcherds_twist_vertex(L));
  auto st = fresh.states(2);
  CHECK(compare_engines(fresh, memo, st, 5) == 0);
  // Second pass reads from the cache, at a smaller and a larger window.
  CHECK(compare_engines(fresh, memo, st, 3) == 0);
  CHECK(compare_engines(fresh, memo, st, 7) == 0);
}

TEST_CASE("reconstruction") {
  SUBCASE("Heisenberg field recovers the lattice-built engine") {
    auto H = heisenberg_engine(Lattice::make({{1}}));
    auto st = H.states(3);
    ReconstructOptions o;
    o.basis = st;
    auto R = reconstruct({engine_field(H, StateVector(alpha1()))}, H.vacuum, H.T, o);
    CHECK(compare_engines(H, R, st, 6) == 0);
  }
  SUBCASE("multiplication field recovers the holomorphic engine") {
    auto P = polynomial_engine();
    auto st = P.states(5);
    ReconstructOptions o;
    o.basis = st;
    o.names = P.names;
    auto R = reconstruct({engine_field(P, StateVector(x(1)))}, P.vacuum, P.T, o);
    CHECK(compare_engines(P, R, st, 6) == 0);
  }
  SUBCASE("no generators on the one-dimensional space") {
    auto P = polynomial_engine();
    ReconstructOptions o;
    o.basis = {x(0)};
    auto R = reconstruct({}, P.vacuum, P.T, o);
    VSeries s = R.Y(x(0), x(0), 3);
    REQUIRE(s.size() == 1);
    CHECK(s.at(0) == StateVector(x(0)));
  }
  SUBCASE("unreached basis key") {
    auto P = polynomial_engine();
    ReconstructOptions o;
    o.basis = P.states(3);
    try {
      reconstruct({}, P.vacuum, P.T, o);
      FAIL("expected ReconstructError");
    } catch (const ReconstructError& err) {
      REQUIRE(err.unreached);
      CHECK(*err.unreached == x(1));
    }
  }
  SUBCASE("braided generators with the derived S") {
    auto L = Lattice::make({{0, 1}, {0, 0}});
    auto N = borcherds_twist_vertex(L);
    auto S = derive_vertex_rmatrix(L);
    std::vector<StateVector> gens{StateVector(mono({{1, 1}}, 2)), StateVector(mono({{2, 1}}, 2))};
    std::vector<Field> fields;
    for (const auto& g : gens) fields.push_back(engine_field(N, g));
    ReconstructOptions o;
    o.basis = fock_basis({0, 0}, 2);
    o.twist = [&](size_t i, size_t j) { return primitive_twist(S, gens[i], gens[j], fields[i], fields[j]); };
    auto R = reconstruct(fields, N.vacuum, N.T, o);
    CHECK(compare_engines(N, R, o.basis, 5) == 0);
  }
}

TEST_CASE("multiplicative coordinate") {
  auto P = polynomial_engine();
  auto Pm = multiplicative_view(P, 10);
  CHECK(check_multiplicative_all(Pm, P.states(2), CheckWindow{std::nullopt, 4}).passed());

  auto V = borcherds_twist_vertex(Lattice::make({{2}}));
  auto st = V.states(0);
  CHECK(check_multiplicative_all(multiplicative_view(V, 12), st, CheckWindow{std::nullopt, 4}).passed());

  // u(z) = z on the multiplicative law.
  GroupLawConfig wrong;
  wrong.law = GroupLaw::Multiplicative;
  wrong.u = {Rational(1)};
  Verdict v = check_multiplicative_all(coordinate_view(V, wrong), st, CheckWindow{std::nullopt, 4});
  REQUIRE(v.status == Status::Fail);
  REQUIRE(v.witness);
}

TEST_CASE("coproduct compatibility") {
  // The coproduct is compatible with the untwisted product; the twist multiplies z-powers.
  auto A = holomorphic_lattice_engine(1);
  CHECK(check_coproduct_compatibility(A, A.states(1), CheckWindow{std::nullopt, 4}).passed());
  auto P = polynomial_engine();
  // x primitive with T = d/dx: Delta T x = 1 (x) 1 but (T (x) 1 + 1 (x) T) Delta x = 2 (1 (x) 1).
  CHECK(check_coproduct_compatibility(P, P.states(3), CheckWindow{std::nullopt, 4}).status == Status::Fail);
  auto V = borcherds_twist_vertex(Lattice::make({{2}}));
  CHECK(check_coproduct_compatibility(V, V.states(0), CheckWindow{std::nullopt, 4}).status == Status::Fail);
  auto H = A;
  auto bad = H;
  auto vac = H.vacuum.terms().begin()->first;
  auto d = H.delta;
  bad.delta = [d, vac](const BasisKey& k) {
    StateVector out = d(k);
    if (k == vac) out += tensor(StateVector(alpha1()), StateVector(alpha1()));
    return out;
  };
  Verdict v = check_coproduct_compatibility(bad, H.states(2), CheckWindow{std::nullopt, 4});
  REQUIRE(v.status == Status::Fail);
  REQUIRE(v.witness);
}

TEST_CASE("rendering") {
  auto H = heisenberg_engine(Lattice::make({{1}}));
  std::string s = render_ope(H.Y(alpha1(), alpha1(), 1), -3, 1, {});
  CHECK(s.find("z^-2") != std::string::npos);
  CHECK(s.find("a[1,-1]^2") != std::string::npos);
}
