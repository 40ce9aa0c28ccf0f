#include "vqg/cli/cache.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <map>
#include <mutex>
#include <sstream>

#include "vqg/cli/definition.hpp"

namespace vqg::cli {

using nlohmann::json;

struct OpeCache::Store {
  struct Entry {
    int high;
    VSeries series;
  };
  mutable std::mutex mu;
  std::map<std::pair<BasisKey, BasisKey>, Entry> entries;
  std::vector<std::string> params;  // ring parameters seen in stored scalars
  bool dirty = false;
};

namespace {

json key_json(const BasisKey& k) {
  json j = json::object();
  j["kind"] = static_cast<int>(k.kind);
  j["label"] = k.label;
  j["lambda"] = k.lambda;
  json modes = json::array();
  for (const auto& [i, n] : k.modes) modes.push_back({i, n});
  j["modes"] = modes;
  json f = json::array();
  for (const auto& p : k.factors) f.push_back(key_json(p));
  j["factors"] = f;
  return j;
}

BasisKey key_from(const json& j) {
  switch (static_cast<BasisKey::Kind>(j.at("kind").get<int>())) {
    case BasisKey::Kind::Index: return BasisKey::index(j.at("label").get<int>());
    case BasisKey::Kind::Poly: return BasisKey::poly(j.at("lambda").get<std::vector<int>>());
    case BasisKey::Kind::Lattice: {
      std::vector<BasisKey::Mode> modes;
      for (const auto& m : j.at("modes")) modes.emplace_back(m.at(0).get<int>(), m.at(1).get<int>());
      return BasisKey::lattice(j.at("lambda").get<std::vector<int>>(), modes, j.at("label").get<int>());
    }
    case BasisKey::Kind::Tensor: {
      std::vector<BasisKey> parts;
      for (const auto& p : j.at("factors")) parts.push_back(key_from(p));
      return BasisKey::tensor(parts);
    }
  }
  throw std::invalid_argument("bad key kind");
}

json vector_json(const StateVector& v, std::vector<std::string>& params) {
  json out = json::array();
  for (const auto& [k, c] : v.terms()) {
    if (c.ring())
      for (const auto& p : c.ring()->params())
        if (std::find(params.begin(), params.end(), p) == params.end()) params.push_back(p);
    out.push_back({key_json(k), c.str()});
  }
  return out;
}

StateVector vector_from(const json& j, const RingPtr& ring) {
  StateVector v;
  for (const auto& t : j) v.add(key_from(t.at(0)), Scalar::parse(t.at(1).get<std::string>(), ring));
  return v;
}

}  // namespace

OpeCache::OpeCache() : store_(std::make_shared<Store>()) {}
OpeCache::OpeCache(std::filesystem::path file) : store_(std::make_shared<Store>()), file_(std::move(file)) {}

std::filesystem::path OpeCache::default_directory() {
  if (const char* d = std::getenv("VQG_CACHE_DIR"); d && *d) return d;
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::filesystem::path(x) / "vqg";
  if (const char* h = std::getenv("HOME"); h && *h) return std::filesystem::path(h) / ".cache" / "vqg";
  return ".vqg-cache";
}

std::string OpeCache::entry_name(const std::string& digest, int truncation) {
  return sha256_hex(digest + "\n" + std::to_string(truncation) + "\n" + kToolVersion) + ".json";
}

void OpeCache::load() {
  if (file_.empty()) return;
  std::ifstream in(file_);
  if (!in) return;
  try {
    json j = json::parse(in);
    if (j.at("version").get<std::string>() != kToolVersion) return;
    auto params = j.at("params").get<std::vector<std::string>>();
    RingPtr ring = params.empty() ? nullptr : make_ring(params);
    std::map<std::pair<BasisKey, BasisKey>, Store::Entry> loaded;
    for (const auto& e : j.at("entries")) {
      VSeries s;
      for (const auto& t : e.at("series")) s.emplace(t.at(0).get<int>(), vector_from(t.at(1), ring));
      loaded[{key_from(e.at("a")), key_from(e.at("b"))}] = {e.at("high").get<int>(), std::move(s)};
    }
    std::lock_guard lock(store_->mu);
    store_->entries = std::move(loaded);
    store_->params = params;
    store_->dirty = false;
  } catch (const std::exception&) {
    // Malformed cache: start empty.
  }
}

void OpeCache::save() const {
  if (file_.empty()) return;
  std::lock_guard lock(store_->mu);
  if (!store_->dirty) return;
  json entries = json::array();
  std::vector<std::string> params = store_->params;
  for (const auto& [ab, e] : store_->entries) {
    json series = json::array();
    for (const auto& [n, v] : e.series) series.push_back({n, vector_json(v, params)});
    entries.push_back({{"a", key_json(ab.first)}, {"b", key_json(ab.second)}, {"high", e.high}, {"series", series}});
  }
  std::sort(params.begin(), params.end());
  json j = {{"version", kToolVersion}, {"params", params}, {"entries", entries}};
  std::error_code ec;
  std::filesystem::create_directories(file_.parent_path(), ec);
  auto tmp = file_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << j.dump();
  }
  std::filesystem::rename(tmp, file_, ec);
}

VertexEngine OpeCache::wrap(const VertexEngine& e) const {
  VertexEngine w = e;
  auto store = store_;
  auto inner = e.Y;
  w.Y_cached = nullptr;
  w.Y = [store, inner](const BasisKey& a, const BasisKey& b, int high) {
    {
      std::lock_guard lock(store->mu);
      auto it = store->entries.find({a, b});
      if (it != store->entries.end() && it->second.high >= high) {
        const VSeries& s = it->second.series;
        return VSeries(s.begin(), s.lower_bound(high));
      }
    }
    VSeries s = inner(a, b, high);
    std::lock_guard lock(store->mu);
    auto [it, inserted] = store->entries.try_emplace({a, b}, Store::Entry{high, s});
    if (!inserted && high > it->second.high) it->second = {high, s};
    if (inserted || it->second.high == high) store->dirty = true;
    return s;
  };
  return w;
}

size_t OpeCache::size() const {
  std::lock_guard lock(store_->mu);
  return store_->entries.size();
}

}  // namespace vqg::cli
