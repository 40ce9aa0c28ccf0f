#include "vqg/cli/definition.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "vqg/cli/toml.hpp"

namespace vqg::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw DefinitionError(what); }

const json& need(const json& j, const std::string& key) {
  if (!j.contains(key)) bad("missing key '" + key + "'");
  return j.at(key);
}

int as_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) bad(what + " must be an integer");
  long long v = j.get<long long>();
  if (v < -1000000 || v > 1000000) bad(what + " is out of range");
  return static_cast<int>(v);
}

std::string as_string(const json& j, const std::string& what) {
  if (!j.is_string()) bad(what + " must be a string");
  return j.get<std::string>();
}

Vec int_list(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be an array of integers");
  Vec out;
  for (const auto& x : j) out.push_back(as_int(x, what));
  return out;
}

Scalar scalar(const json& j, const RingPtr& ring, const std::string& what) {
  if (j.is_number_integer()) return Scalar(as_int(j, what));
  try {
    return Scalar::parse(as_string(j, what), ring);
  } catch (const std::exception& ex) {
    bad(what + ": " + ex.what());
  }
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) bad("unknown key '" + k + "' in " + where);
}

Lattice read_kappa(const json& j) {
  const json& k = need(j, "kappa");
  if (!k.is_array() || k.empty()) bad("kappa must be a non-empty array of rows");
  std::vector<std::vector<int>> rows;
  for (const auto& row : k) rows.push_back(int_list(row, "kappa entry"));
  for (const auto& row : rows)
    if (row.size() != rows.size()) bad("kappa must be square");
  return Lattice::make(rows);
}

// Finite bialgebra block: basis, parameters, unit, counit, product, coproduct.
FinBialgebra read_bialgebra(const json& j, const std::string& where) {
  std::vector<std::string> names;
  for (const auto& n : need(j, "basis")) names.push_back(as_string(n, "basis name"));
  if (names.empty()) bad(where + ": empty basis");
  std::vector<std::string> params;
  if (j.contains("parameters"))
    for (const auto& p : j.at("parameters")) params.push_back(as_string(p, "parameter"));
  RingPtr ring = params.empty() ? nullptr : make_ring(params);

  auto triples = [&](const char* key) {
    std::vector<FinBialgebra::Triple> out;
    for (const auto& t : need(j, key)) {
      if (!t.is_array() || t.size() != 4) bad(std::string(key) + " entries are [i, j, k, coefficient]");
      out.emplace_back(as_int(t[0], key), as_int(t[1], key), as_int(t[2], key), scalar(t[3], ring, key));
    }
    return out;
  };
  std::vector<Scalar> counit;
  for (const auto& c : need(j, "counit")) counit.push_back(scalar(c, ring, "counit"));

  StateContext ctx;
  ctx.ring = ring;
  ctx.lookup = [names](const std::string& n) -> std::optional<StateVector> {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return StateVector(BasisKey::index(static_cast<int>(i)));
    return std::nullopt;
  };
  StateVector unit;
  try {
    unit = parse_state(as_string(need(j, "unit"), "unit"), ctx);
  } catch (const ParseError& ex) {
    bad(where + ": unit: " + ex.what());
  }
  try {
    return FinBialgebra(names, ring, triples("product"), triples("coproduct"), counit, unit);
  } catch (const std::invalid_argument& ex) {
    bad(where + ": " + ex.what());
  }
}

ExtWeights read_ext(const json& e) {
  only_keys(e, {"lambda", "mu", "rk", "even", "odd"}, "ext entry");
  ExtWeights w;
  if (e.contains("rk")) w.rk = as_int(e.at("rk"), "rk");
  if (e.contains("even")) w.even = int_list(e.at("even"), "even weights");
  if (e.contains("odd")) w.odd = int_list(e.at("odd"), "odd weights");
  return w;
}

}  // namespace

std::string kind_str(Kind k) {
  switch (k) {
    case Kind::FiniteBialgebra: return "finite-bialgebra";
    case Kind::Holomorphic: return "holomorphic";
    case Kind::Heisenberg: return "heisenberg";
    case Kind::Lattice: return "lattice";
    case Kind::HLinearLattice: return "hlinear-lattice";
    case Kind::JoyceLattice: return "joyce-lattice";
  }
  return "?";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

Definition load_definition(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_definition(ss.str());
}

Definition parse_definition(const std::string& text) {
  json j;
  try {
    j = parse_toml(text);
  } catch (const TomlError& ex) {
    bad(ex.what());
  }
  Definition d;
  d.digest = sha256_hex(text);
  const std::string kind = as_string(need(j, "kind"), "kind");
  static const std::map<std::string, Kind> kinds{
      {"finite-bialgebra", Kind::FiniteBialgebra}, {"holomorphic", Kind::Holomorphic},
      {"heisenberg", Kind::Heisenberg},           {"lattice", Kind::Lattice},
      {"hlinear-lattice", Kind::HLinearLattice},  {"joyce-lattice", Kind::JoyceLattice}};
  auto it = kinds.find(kind);
  if (it == kinds.end()) bad("unknown kind '" + kind + "'");
  d.kind = it->second;
  d.name = j.contains("name") ? as_string(j.at("name"), "name") : kind;

  std::set<std::string> common{"kind", "name", "truncation", "window"};
  std::set<std::string> allowed = common;
  switch (d.kind) {
    case Kind::FiniteBialgebra:
      allowed.insert({"basis", "parameters", "unit", "counit", "product", "coproduct", "rmatrix"});
      break;
    case Kind::Holomorphic: allowed.insert("algebra"); break;
    case Kind::Heisenberg: allowed.insert("kappa"); break;
    case Kind::Lattice: allowed.insert({"kappa", "radius"}); break;
    case Kind::HLinearLattice: allowed.insert({"kappa", "radius", "h", "r"}); break;
    case Kind::JoyceLattice: allowed.insert({"rank", "radius", "tau", "depth", "ext"}); break;
  }
  only_keys(j, allowed, "definition");

  if (j.contains("truncation")) d.truncation = as_int(j.at("truncation"), "truncation");
  if (d.truncation < 1) bad("truncation must be at least 1");
  if (j.contains("radius")) d.radius = as_int(j.at("radius"), "radius");
  if (d.radius < 0) bad("radius must be non-negative");
  if (j.contains("window")) {
    const json& w = j.at("window");
    if (!w.is_object()) bad("window must be a table");
    only_keys(w, {"degree", "range"}, "window");
    if (w.contains("degree")) d.window.degree = as_int(w.at("degree"), "window degree");
    if (d.window.degree < 1) bad("window degree must be positive");
    if (w.contains("range")) {
      Vec r = int_list(w.at("range"), "window range");
      if (r.size() != 2 || r[0] >= r[1]) bad("window range must be [lo, hi] with lo < hi");
      d.window.range = std::make_pair(r[0], r[1]);
    }
  }

  try {
    switch (d.kind) {
      case Kind::FiniteBialgebra: {
        d.bialgebra = read_bialgebra(j, "definition");
        if (j.contains("rmatrix")) {
          const json& r = j.at("rmatrix");
          only_keys(r, {"terms"}, "rmatrix");
          StateVector rv;
          int n = static_cast<int>(d.bialgebra->dim());
          for (const auto& t : need(r, "terms")) {
            if (!t.is_array() || t.size() != 3) bad("rmatrix terms are [i, j, coefficient]");
            int a = as_int(t[0], "rmatrix index"), b = as_int(t[1], "rmatrix index");
            if (a < 0 || b < 0 || a >= n || b >= n) bad("rmatrix index out of range");
            rv += StateVector(BasisKey::tensor({BasisKey::index(a), BasisKey::index(b)}),
                              scalar(t[2], d.bialgebra->ring(), "rmatrix coefficient"));
          }
          d.rmatrix = rv;
        }
        break;
      }
      case Kind::Holomorphic: {
        std::string alg = j.contains("algebra") ? as_string(j.at("algebra"), "algebra") : "polynomial";
        if (alg != "polynomial") bad("holomorphic algebra must be 'polynomial'");
        d.rank = 1;
        break;
      }
      case Kind::Heisenberg:
      case Kind::Lattice:
        d.lattice = read_kappa(j);
        d.rank = d.lattice->rank;
        break;
      case Kind::HLinearLattice: {
        d.lattice = read_kappa(j);
        d.rank = d.lattice->rank;
        const json& h = need(j, "h");
        if (!h.is_object()) bad("h must be a table");
        only_keys(h, {"basis", "parameters", "unit", "counit", "product", "coproduct"}, "h");
        d.bialgebra = read_bialgebra(h, "h");
        int n = static_cast<int>(d.bialgebra->dim());
        for (const auto& t : need(j, "r")) {
          if (!t.is_array() || t.size() != 3) bad("r entries are [i, j, coefficient]");
          int a = as_int(t[0], "r index"), b = as_int(t[1], "r index");
          if (a < 0 || b < 0 || a >= n || b >= n) bad("r index out of range");
          d.r_h[{a, b}] = scalar(t[2], d.bialgebra->ring(), "r coefficient");
        }
        // Certification happens here so that schema errors surface before any suite runs.
        hlinear_lattice({*d.bialgebra, d.r_h}, *d.lattice);
        break;
      }
      case Kind::JoyceLattice: {
        d.rank = as_int(need(j, "rank"), "rank");
        if (d.rank < 1 || d.rank > 8) bad("rank must be between 1 and 8");
        if (j.contains("tau")) d.joyce.tau = as_string(j.at("tau"), "tau");
        if (j.contains("depth")) d.joyce.depth = as_int(j.at("depth"), "depth");
        if (j.contains("ext")) {
          const json& ext = j.at("ext");
          if (!ext.is_array()) bad("ext must be an array of tables");
          for (const auto& e : ext) {
            if (!e.is_object()) bad("ext entries must be tables");
            Vec l = int_list(need(e, "lambda"), "lambda"), m = int_list(need(e, "mu"), "mu");
            if (d.ext.count({l, m})) bad("duplicate ext entry");
            d.ext[{l, m}] = read_ext(e);
          }
        }
        joyce_bicharacter(d.rank, d.ext, d.joyce);  // validates additivity
        break;
      }
    }
  } catch (const std::invalid_argument& ex) {
    bad(ex.what());
  }
  return d;
}

bool is_vertex_kind(Kind k) { return k != Kind::FiniteBialgebra; }

VertexEngine make_engine(const Definition& d) {
  switch (d.kind) {
    case Kind::Holomorphic: return polynomial_engine();
    case Kind::Heisenberg: return heisenberg_engine(*d.lattice);
    case Kind::Lattice: return borcherds_twist_vertex(*d.lattice);
    case Kind::HLinearLattice: return hlinear_lattice({*d.bialgebra, d.r_h}, *d.lattice);
    case Kind::JoyceLattice: return holomorphic_lattice_engine(d.rank);
    case Kind::FiniteBialgebra: break;
  }
  throw DefinitionError("a finite bialgebra has no vertex engine");
}

std::vector<BasisKey> test_states(const Definition& d, int truncation) {
  switch (d.kind) {
    case Kind::Holomorphic: return polynomial_engine().states(truncation);
    case Kind::Heisenberg: return fock_basis(Vec(d.rank, 0), truncation);
    case Kind::Lattice:
    case Kind::JoyceLattice: return lattice_states(d.rank, truncation, d.radius);
    case Kind::HLinearLattice: {
      std::vector<BasisKey> out;
      for (const auto& k : lattice_states(d.rank, truncation, d.radius))
        for (size_t h = 0; h < d.bialgebra->dim(); ++h)
          out.push_back(BasisKey::lattice(k.lambda, k.modes, static_cast<int>(h)));
      std::sort(out.begin(), out.end());
      return out;
    }
    case Kind::FiniteBialgebra: return d.bialgebra->basis();
  }
  return {};
}

const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> s{"bialgebra",          "rmatrix",        "yang-baxter",
                                          "twist",              "vertex-commutative", "vertex-associative",
                                          "vertex-braided",     "vqg",            "multiplicative"};
  return s;
}

std::vector<std::string> applicable_suites(const Definition& d) {
  switch (d.kind) {
    case Kind::FiniteBialgebra: return {"bialgebra", "rmatrix", "yang-baxter", "twist"};
    case Kind::Holomorphic: return {"vertex-commutative", "vertex-associative", "multiplicative"};
    case Kind::Heisenberg:
      return {"vertex-commutative", "vertex-associative", "vertex-braided", "multiplicative"};
    case Kind::Lattice:
      return {"vertex-commutative", "vertex-associative", "vertex-braided", "vqg", "multiplicative"};
    case Kind::HLinearLattice: return {"vertex-commutative", "vertex-associative"};
    case Kind::JoyceLattice: return {"vqg"};
  }
  return {};
}

}  // namespace vqg::cli
