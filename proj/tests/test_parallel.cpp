#include <doctest.h>

#include <random>
#include <stdexcept>

#include "vqg/parallel.hpp"
#include "vqg/verdict.hpp"

using namespace vqg;

TEST_CASE("serial and parallel loops report the same least failure") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    size_t n = 1 + rng() % 400;
    std::vector<bool> bad(n);
    for (size_t i = 0; i < n; ++i) bad[i] = rng() % 37 == 0;
    Probe<int> probe = [&](size_t i) -> std::optional<int> {
      if (bad[i]) return static_cast<int>(i) * 3;
      return std::nullopt;
    };
    auto s = first_failure_serial<int>(n, probe);
    auto p = first_failure_parallel<int>(n, probe);
    REQUIRE(s.has_value() == p.has_value());
    if (s) {
      CHECK(s->first == p->first);
      CHECK(s->second == p->second);
    }
  }
}

TEST_CASE("exceptions are ordered with failures by index") {
  Probe<int> throws_late = [](size_t i) -> std::optional<int> {
    if (i == 90) throw std::runtime_error("late");
    if (i == 40) return 40;
    return std::nullopt;
  };
  auto r = first_failure_parallel<int>(100, throws_late);
  REQUIRE(r);
  CHECK(r->first == 40);

  Probe<int> throws_early = [](size_t i) -> std::optional<int> {
    if (i == 10) throw std::runtime_error("early");
    if (i == 40) return 40;
    return std::nullopt;
  };
  CHECK_THROWS_WITH(first_failure_parallel<int>(100, throws_early), "early");
  CHECK_THROWS_WITH(first_failure_serial<int>(100, throws_early), "early");
}

TEST_CASE("exec scope restores the mode") {
  Exec before = exec_mode();
  {
    ExecScope s(Exec::Serial);
    CHECK(exec_mode() == Exec::Serial);
    {
      ExecScope p(Exec::Parallel);
      CHECK(exec_mode() == Exec::Parallel);
    }
    CHECK(exec_mode() == Exec::Serial);
  }
  CHECK(exec_mode() == before);
  CHECK(worker_count() >= 1);
}

TEST_CASE("verdict combination") {
  Witness w{"law", {"a"}, {}, "1", "2"};
  auto v = combine("all", {Verdict::pass("x"), Verdict::truncation("y", "short"), Verdict::fail("z", w)});
  CHECK(v.status == Status::Fail);
  CHECK(v.witness->check == "law");
  auto t = combine("all", {Verdict::pass("x"), Verdict::truncation("y", "short")});
  CHECK(t.status == Status::TruncationInsufficient);
  CHECK(combine("all", {Verdict::pass("x")}).passed());
  CHECK(status_str(Status::Pass) == "pass");
}
