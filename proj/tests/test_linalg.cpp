#include <doctest.h>

#include <random>

#include "vqg/linalg.hpp"

using namespace vqg;

namespace {

BasisKey e(int i) { return BasisKey::index(i); }
BasisKey xp(int n) { return BasisKey::poly({n}); }

// Independent count of r-coloured partitions of n: coefficient of q^n in prod (1-q^k)^{-r}.
long coloured_partition_count(int r, int n) {
  std::vector<long> c(n + 1, 0);
  c[0] = 1;
  for (int k = 1; k <= n; ++k)
    for (int rep = 0; rep < r; ++rep)
      for (int m = k; m <= n; ++m) c[m] += c[m - k];
  return c[n];
}

StateVector random_vec(std::mt19937& rng, int dim) {
  std::uniform_int_distribution<int> v(-3, 3);
  StateVector s;
  for (int i = 0; i < dim; ++i) s.add(e(i), v(rng));
  return s;
}

}  // namespace

TEST_CASE("tensor products") {
  CHECK(tensor(StateVector(e(0)), StateVector(e(0))) ==
        StateVector(BasisKey::tensor({e(0), e(0)})));
  auto v = tensor(StateVector(e(0)) + StateVector(e(1)), StateVector(e(0)));
  CHECK(v.terms().size() == 2);
  CHECK(v.coeff(BasisKey::tensor({e(1), e(0)})) == Scalar(1));
  CHECK(tensor(StateVector(), StateVector(e(1))).is_zero());
  CHECK(tensor(StateVector(BasisKey::unit()), StateVector(e(1))) == StateVector(e(1)));
}

TEST_CASE("swap is an involution and linear") {
  CHECK(swap(StateVector(BasisKey::tensor({e(0), e(1)}))) ==
        StateVector(BasisKey::tensor({e(1), e(0)})));
  std::mt19937 rng(3);
  for (int t = 0; t < 10; ++t) {
    auto a = tensor(random_vec(rng, 3), random_vec(rng, 3));
    auto b = tensor(random_vec(rng, 3), random_vec(rng, 3));
    CHECK(swap(swap(a)) == a);
    CHECK(swap(a + b) == swap(a) + swap(b));
  }
  CHECK_THROWS(swap(StateVector(e(0))));
}

TEST_CASE("linear maps") {
  std::vector<BasisKey> basis;
  for (int n = 0; n <= 4; ++n) basis.push_back(xp(n));
  auto id = LinearMap::identity(basis);
  auto zero = LinearMap::zero(basis);
  auto d = LinearMap::from_function(basis, [](const BasisKey& k) {
    int n = k.lambda[0];
    return n == 0 ? StateVector() : StateVector(BasisKey::poly({n - 1}), n);
  });
  StateVector x2(xp(2));
  CHECK(id.apply(x2) == x2);
  CHECK(zero.apply(x2).is_zero());
  CHECK(d.apply(x2) == StateVector(xp(1), 2));
  CHECK(compose(id, d) == d);
  CHECK(add_maps(d, id).apply(x2) == d.apply(x2) + x2);
  CHECK(scale_map(Scalar(3), d).apply(x2) == d.apply(x2).scaled(3));
  CHECK_THROWS_AS(d.apply(StateVector(xp(7))), DomainMismatch);
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> c(-4, 4);
  for (int t = 0; t < 10; ++t) {
    StateVector v, w;
    for (auto& k : basis) {
      v.add(k, c(rng));
      w.add(k, c(rng));
    }
    Scalar a(c(rng)), b(c(rng));
    CHECK(d.apply(v.scaled(a) + w.scaled(b)) == d.apply(v).scaled(a) + d.apply(w).scaled(b));
  }
}

TEST_CASE("Fock space dimensions match coloured partition counts") {
  auto f1 = fock_space(1);
  std::vector<size_t> expect{1, 1, 2, 3, 5, 7, 11};
  for (int n = 0; n <= 6; ++n) CHECK(graded_dimension(f1, {0, n}) == expect[n]);
  auto f2 = fock_space(2);
  CHECK(graded_dimension(f2, {0, 0, 2}) == 5);
  for (int r = 1; r <= 3; ++r) {
    auto f = fock_space(r);
    for (int n = 0; n <= 7; ++n) {
      std::vector<int> g(r, 0);
      g.push_back(n);
      CHECK(graded_dimension(f, g) == static_cast<size_t>(coloured_partition_count(r, n)));
    }
  }
  CHECK(graded_dimension(f1, {5, 0}) == 1);
}

TEST_CASE("basis enumeration is deterministic and sorted") {
  auto a = fock_basis({0, 1}, 4);
  auto b = fock_basis({0, 1}, 4);
  CHECK(a == b);
  CHECK(std::is_sorted(a.begin(), a.end()));
  auto monos = heisenberg_monomials(2, 2);
  REQUIRE(monos.size() == 5);
  std::vector<std::string> names;
  for (auto& m : monos) names.push_back(key_str(BasisKey::lattice({0, 0}, m)));
  std::vector<std::string> sorted = names;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<std::string>{"a[1,-1]*a[2,-1]", "a[1,-1]^2", "a[1,-2]",
                                           "a[2,-1]^2", "a[2,-2]"});
}

TEST_CASE("state expression grammar") {
  StateContext ctx;
  ctx.rank = 2;
  auto v = parse_state("3/2*a[1,-2]*a[1,-1]*e[1,0] + e[0,1]", ctx);
  CHECK(v.str() == "1*e[0,1] + 3/2*a[1,-2]*a[1,-1]*e[1,0]");
  CHECK(parse_state(" |0> ", ctx) == StateVector(BasisKey::lattice({0, 0})));
  CHECK(parse_state("a[1,-1]^2 - a[1,-1]*a[1,-1]", ctx).is_zero());
  CHECK(parse_state("e[1,0]*e[-1,0]", ctx) == StateVector(BasisKey::lattice({0, 0})));
  CHECK(parse_state("-e[1,1]", ctx).coeff(BasisKey::lattice({1, 1})) == Scalar(-1));
  CHECK_THROWS_AS(parse_state("e[1]", ctx), ParseError);
  CHECK_THROWS_AS(parse_state("a[3,-1]", ctx), ParseError);
  CHECK_THROWS_AS(parse_state("a[1,1]", ctx), ParseError);
  CHECK_THROWS_AS(parse_state("e[1,0] +", ctx), ParseError);
  CHECK_THROWS_AS(parse_state("", ctx), ParseError);

  StateContext abs;
  abs.lookup = [](const std::string& n) -> std::optional<StateVector> {
    if (n == "e0") return StateVector(BasisKey::index(0));
    if (n == "e1") return StateVector(BasisKey::index(1));
    return std::nullopt;
  };
  CHECK(parse_state("e0 - 1/2*e1", abs).coeff(BasisKey::index(1)) == Scalar(Rational(-1, 2)));
  CHECK_THROWS_AS(parse_state("e2", abs), ParseError);
}
