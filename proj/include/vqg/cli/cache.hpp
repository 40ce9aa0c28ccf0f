#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "vqg/cli/commands.hpp"
#include "vqg/vertex.hpp"

namespace vqg::cli {



/// Persistent OPE table: Y(a, z)b series keyed by (a, b), each valid below its `high`.
/// The cache is advisory: a missing, stale or malformed file only costs recomputation.
class OpeCache {
public:
  OpeCache();  // in memory only
  explicit OpeCache(std::filesystem::path file);

  // VQG_CACHE_DIR, else $XDG_CACHE_HOME/vqg, else $HOME/.cache/vqg, else ./.vqg-cache.
  static std::filesystem::path default_directory();
  // Content address of (definition digest, truncation, tool version).
  static std::string entry_name(const std::string& digest, int truncation);

  void load();
  // Writes through a temporary file and a rename; does nothing when nothing changed.
  void save() const;

  // Engine whose Y reads from and fills this cache.
  VertexEngine wrap(const VertexEngine& e) const;
  size_t size() const;
  const std::filesystem::path& file() const { return file_; }

private:
  struct Store;
  std::shared_ptr<Store> store_;
  std::filesystem::path file_;
};

}  // namespace vqg::cli
