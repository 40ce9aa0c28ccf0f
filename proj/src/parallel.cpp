#include "vqg/parallel.hpp"

#include <omp.h>

#include "vqg/verdict.hpp"

namespace vqg {

namespace {
std::atomic<Exec> g_mode{Exec::Parallel};
}

Exec exec_mode() { return g_mode.load(); }
void set_exec_mode(Exec mode) { g_mode.store(mode); }
int worker_count() { return omp_get_max_threads(); }

std::string status_str(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::TruncationInsufficient: return "truncation-insufficient";
    case Status::Skipped: return "skipped";
  }
  return "?";
}

Verdict Verdict::pass(std::string name, std::string detail) {
  return Verdict{std::move(name), Status::Pass, std::nullopt, std::move(detail)};
}

Verdict Verdict::fail(std::string name, Witness w, std::string detail) {
  return Verdict{std::move(name), Status::Fail, std::move(w), std::move(detail)};
}

Verdict Verdict::skipped(std::string name, std::string detail) {
  return Verdict{std::move(name), Status::Skipped, std::nullopt, std::move(detail)};
}

Verdict Verdict::truncation(std::string name, std::string detail) {
  return Verdict{std::move(name), Status::TruncationInsufficient, std::nullopt, std::move(detail)};
}

Verdict combine(const std::string& name, const std::vector<Verdict>& parts) {
  for (const auto& p : parts)
    if (p.status == Status::Fail) {
      Verdict v = p;
      v.name = name;
      if (v.detail.empty()) v.detail = p.name;
      return v;
    }
  for (const auto& p : parts)
    if (p.status == Status::TruncationInsufficient) {
      Verdict v = p;
      v.name = name;
      return v;
    }
  return Verdict::pass(name);
}

}  // namespace vqg
