#include "vqg/cli/commands.hpp"

#include <chrono>
#include <json.hpp>
#include <sstream>

#include "vqg/cli/cache.hpp"
#include "vqg/cli/definition.hpp"
#include "vqg/fields.hpp"
#include "vqg/vqg_suite.hpp"

namespace vqg::cli {

namespace {

using nlohmann::json;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SuiteRun {
  std::string suite;
  std::vector<Verdict> checks;
  Status status = Status::Pass;
  CheckWindow window;
  bool retried = false;
  double seconds = 0;
};

// Engine of the definition with the persistent OPE cache attached.
class Session {
public:
  Session(const Definition& d, int truncation, bool use_cache) : d_(d), truncation_(truncation) {
    if (use_cache && is_vertex_kind(d.kind)) {
      cache_ = OpeCache(OpeCache::default_directory() / OpeCache::entry_name(d.digest, truncation));
      cache_.load();
    }
  }
  ~Session() {
    try {
      cache_.save();
    } catch (...) {
    }
  }
  const VertexEngine& engine() {
    if (!engine_) engine_ = cache_.wrap(make_engine(d_));
    return *engine_;
  }

private:
  const Definition& d_;
  int truncation_;
  OpeCache cache_;
  std::optional<VertexEngine> engine_;
};

std::vector<Verdict> suite_checks(const Definition& d, Session& s, const std::string& suite, int trunc,
                                  CheckWindow w) {
  if (d.kind == Kind::FiniteBialgebra) {
    const FinBialgebra& a = *d.bialgebra;
    if (suite == "bialgebra") return {check_bialgebra(a)};
    if (!d.rmatrix) return {Verdict::skipped(suite, "no rmatrix block")};
    if (suite == "rmatrix") return {check_rmatrix(a, *d.rmatrix)};
    if (suite == "yang-baxter") return {check_yang_baxter(a, *d.rmatrix)};
    TwistResult t = borcherds_twist(a, *d.rmatrix);
    return {t.precondition, t.certificate};
  }
  std::vector<BasisKey> states = test_states(d, trunc);
  if (suite == "vqg") {
    VertexRMatrix r = d.kind == Kind::JoyceLattice
                          ? joyce_rmatrix_lattice(d.rank, d.ext, d.joyce)
                          : as_rmatrix(lattice_bicharacter(*d.lattice, build_sign_cocycle(*d.lattice)), "r");
    const VertexEngine& a = d.kind == Kind::JoyceLattice ? s.engine() : holomorphic_lattice_engine(d.rank);
    return check_vqg_suite(a, r, states, w).checks;
  }
  const VertexEngine& e = s.engine();
  if (suite == "multiplicative") return {check_multiplicative_all(multiplicative_view(e, w.degree + 8), states, w)};
  std::vector<Verdict> out{check_vacuum(e, states, w.degree), check_translation(e, states, w)};
  if (suite == "vertex-commutative") {
    out.push_back(check_skew_all(e, states, w));
    out.push_back(check_associativity_all(e, states, w));
    out.push_back(check_locality_all(e, states, w.degree));
  } else if (suite == "vertex-associative") {
    out.push_back(check_associativity_all(e, states, w));
  } else {  // vertex-braided
    VertexRMatrix S = derive_vertex_rmatrix(*d.lattice);
    out.push_back(check_braided_skew_all(e, S, states, w));
    out.push_back(check_associativity_all(e, states, w));
    out.push_back(check_locality_all(e, states, w.degree, &S));
  }
  return out;
}

CheckWindow doubled(CheckWindow w) {
  w.degree *= 2;
  if (w.range) w.range->second += w.range->second - w.range->first;
  return w;
}

SuiteRun run_suite(const Definition& d, Session& s, const std::string& suite, int trunc, CheckWindow w) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteRun run;
  run.suite = suite;
  run.window = w;
  run.checks = suite_checks(d, s, suite, trunc, w);
  run.status = combine(suite, run.checks).status;
  if (run.status == Status::TruncationInsufficient) {
    run.window = doubled(w);
    run.retried = true;
    run.checks = suite_checks(d, s, suite, trunc, run.window);
    run.status = combine(suite, run.checks).status;
  }
  bool all_skipped = !run.checks.empty();
  for (const auto& c : run.checks) all_skipped = all_skipped && c.status == Status::Skipped;
  if (all_skipped) run.status = Status::Skipped;
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

json witness_json(const Witness& w) {
  return {{"check", w.check}, {"tuple", w.tuple}, {"exponent", w.exponent}, {"lhs", w.lhs}, {"rhs", w.rhs}};
}

json suite_json(const SuiteRun& r, bool timings) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json j = {{"name", c.name}, {"status", status_str(c.status)}, {"detail", c.detail}};
    if (c.witness) j["witness"] = witness_json(*c.witness);
    checks.push_back(j);
  }
  json window = {{"degree", r.window.degree}};
  window["range"] = r.window.range ? json{r.window.range->first, r.window.range->second} : json(nullptr);
  json out = {{"suite", r.suite},   {"status", status_str(r.status)}, {"checks", checks},
              {"window", window},   {"retried", r.retried}};
  if (timings) out["seconds"] = r.seconds;
  return out;
}

std::string suite_text(const SuiteRun& r, bool timings) {
  std::ostringstream os;
  os << "suite " << r.suite << ": " << status_str(r.status);
  if (r.retried) os << " (retried with window degree " << r.window.degree << ")";
  if (timings) os << " [" << r.seconds << " s]";
  os << "\n";
  for (const auto& c : r.checks) {
    os << "  " << c.name << ": " << status_str(c.status);
    if (!c.detail.empty() && c.status != Status::Pass) os << " (" << c.detail << ")";
    os << "\n";
    if (c.witness) {
      const Witness& w = *c.witness;
      os << "    witness " << w.check << " on (";
      for (size_t i = 0; i < w.tuple.size(); ++i) os << (i ? ", " : "") << w.tuple[i];
      os << ")";
      if (!w.exponent.empty()) {
        os << " at exponent (";
        for (size_t i = 0; i < w.exponent.size(); ++i) os << (i ? ", " : "") << w.exponent[i];
        os << ")";
      }
      os << ": lhs = " << w.lhs << ", rhs = " << w.rhs << "\n";
    }
  }
  return os.str();
}

int exit_for(Status s) { return s == Status::Pass || s == Status::Skipped ? 0 : 1; }

json header_json(const Definition& d, int trunc) {
  return {{"kind", kind_str(d.kind)},
          {"name", d.name},
          {"digest", d.digest},
          {"tool_version", kToolVersion},
          {"truncation", trunc}};
}

std::string header_text(const Definition& d, int trunc) {
  return "vqg " + std::string(kToolVersion) + ": " + kind_str(d.kind) + " '" + d.name + "', truncation " +
         std::to_string(trunc) + ", digest " + d.digest.substr(0, 16) + "\n";
}

CheckWindow effective_window(const Definition& d, const RunOptions& opt) {
  CheckWindow w = d.window;
  if (opt.window) w.range = opt.window;
  return w;
}

int effective_truncation(const Definition& d, const RunOptions& opt) {
  int t = opt.truncation.value_or(d.truncation);
  if (t < 1) throw InputError("truncation must be at least 1");
  return t;
}

template <class F>
Outcome guard(F&& f) {
  try {
    return f();
  } catch (const DefinitionError& ex) {
    return {2, "", std::string("error: ") + ex.what() + "\n"};
  } catch (const InputError& ex) {
    return {2, "", std::string("error: ") + ex.what() + "\n"};
  } catch (const ParseError& ex) {
    return {2, "", std::string("error: ") + ex.what() + "\n"};
  } catch (const WindowExceeded& ex) {
    return {1, "", std::string("truncation insufficient: ") + ex.what() + "\nadvice: widen --window or raise --truncation\n"};
  } catch (const TruncationInsufficient& ex) {
    return {1, "", std::string("truncation insufficient: ") + ex.what() + "\nadvice: widen --window or raise --truncation\n"};
  } catch (const std::invalid_argument& ex) {
    return {2, "", std::string("error: ") + ex.what() + "\n"};
  }
}

void check_format(const std::string& f) {
  if (f != "text" && f != "json") throw InputError("format must be text or json");
}

}  // namespace

std::pair<int, int> parse_window(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("window must look like lo:hi");
  try {
    size_t used = 0;
    int lo = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("bad lo");
    std::string rest = text.substr(colon + 1);
    int hi = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("bad hi");
    if (lo >= hi) throw std::invalid_argument("empty window");
    return {lo, hi};
  } catch (const std::exception&) {
    throw std::invalid_argument("window must look like lo:hi with lo < hi, got '" + text + "'");
  }
}

Outcome cmd_check(const std::string& file, const std::string& suite, const RunOptions& opt) {
  return guard([&]() -> Outcome {
    check_format(opt.format);
    Definition d = load_definition(file);
    const auto& known = all_suites();
    if (std::find(known.begin(), known.end(), suite) == known.end()) throw InputError("unknown suite '" + suite + "'");
    auto app = applicable_suites(d);
    if (std::find(app.begin(), app.end(), suite) == app.end())
      throw InputError("suite '" + suite + "' does not apply to kind " + kind_str(d.kind));
    int trunc = effective_truncation(d, opt);
    Session s(d, trunc, opt.use_cache);
    SuiteRun r = run_suite(d, s, suite, trunc, effective_window(d, opt));
    Outcome o;
    o.exit_code = exit_for(r.status);
    if (opt.format == "json") {
      json j = header_json(d, trunc);
      j.update(suite_json(r, opt.timings));
      o.out = j.dump(2) + "\n";
    } else {
      o.out = header_text(d, trunc) + suite_text(r, opt.timings);
    }
    return o;
  });
}

Outcome cmd_report(const std::string& file, const RunOptions& opt) {
  return guard([&]() -> Outcome {
    check_format(opt.format);
    Definition d = load_definition(file);
    int trunc = effective_truncation(d, opt);
    Session s(d, trunc, opt.use_cache);
    std::vector<SuiteRun> runs;
    for (const auto& suite : applicable_suites(d)) runs.push_back(run_suite(d, s, suite, trunc, effective_window(d, opt)));
    std::vector<Verdict> overall;
    for (const auto& r : runs) overall.push_back(Verdict{r.suite, r.status, std::nullopt, ""});
    Status st = combine("report", overall).status;
    Outcome o;
    o.exit_code = exit_for(st);
    if (opt.format == "json") {
      json j = header_json(d, trunc);
      json suites = json::object();
      for (const auto& r : runs) suites[r.suite] = suite_json(r, opt.timings);
      j["suites"] = suites;
      j["status"] = status_str(st);
      o.out = j.dump(2) + "\n";
    } else {
      o.out = header_text(d, trunc);
      for (const auto& r : runs) o.out += suite_text(r, opt.timings);
      o.out += "overall: " + status_str(st) + "\n";
    }
    return o;
  });
}

Outcome cmd_ope(const std::string& file, const std::string& left, const std::string& right, const RunOptions& opt) {
  return guard([&]() -> Outcome {
    Definition d = load_definition(file);
    if (!is_vertex_kind(d.kind)) throw InputError("ope needs a vertex algebra kind");
    int trunc = effective_truncation(d, opt);
    Session s(d, trunc, opt.use_cache);
    const VertexEngine& e = s.engine();
    StateVector a = parse_state(left, e.context), b = parse_state(right, e.context);
    int lo, hi;
    if (opt.window) {
      std::tie(lo, hi) = *opt.window;
    } else {
      lo = pole_bound(e, a, b);
      hi = lo + d.window.degree;
    }
    VSeries y = apply_Y(e, a, b, hi);
    return {0, render_ope(y, lo, hi, e.names) + "\n", ""};
  });
}

Outcome cmd_dims(const std::string& file, const std::string& sector, int max_weight) {
  return guard([&]() -> Outcome {
    Definition d = load_definition(file);
    if (d.kind == Kind::FiniteBialgebra) throw InputError("dims needs a graded vertex algebra kind");
    if (max_weight < 0) throw InputError("max-weight must be non-negative");
    if (max_weight > d.truncation)
      throw InputError("max-weight " + std::to_string(max_weight) + " beyond the truncation " +
                       std::to_string(d.truncation));
    Vec lambda;
    std::stringstream ss(sector);
    for (std::string part; std::getline(ss, part, ',');) {
      try {
        size_t used = 0;
        lambda.push_back(std::stoi(part, &used));
        if (used != part.size()) throw std::invalid_argument(part);
      } catch (const std::exception&) {
        throw InputError("sector must be comma-separated integers, got '" + sector + "'");
      }
    }
    std::ostringstream os;
    if (d.kind == Kind::Holomorphic) {
      if (lambda != Vec{0}) throw InputError("the polynomial algebra has only sector 0");
      for (int w = 0; w <= max_weight; ++w) os << w << " 1\n";
      return {0, os.str(), ""};
    }
    if (static_cast<int>(lambda.size()) != d.rank)
      throw InputError("sector needs " + std::to_string(d.rank) + " components");
    int radius = d.kind == Kind::Heisenberg ? 0 : d.radius;
    for (int c : lambda)
      if (std::abs(c) > radius) throw InputError("sector outside the truncation (radius " + std::to_string(radius) + ")");
    size_t labels = d.kind == Kind::HLinearLattice ? d.bialgebra->dim() : 1;
    GradedSpace fock = fock_space(d.rank);
    for (int w = 0; w <= max_weight; ++w) {
      Vec grade = lambda;
      grade.push_back(w);
      os << w << " " << graded_dimension(fock, grade) * labels << "\n";
    }
    return {0, os.str(), ""};
  });
}

}  // namespace vqg::cli
