#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqg/bialg.hpp"
#include "vqg/joyce.hpp"
#include "vqg/lattice.hpp"

namespace vqg::cli {

struct DefinitionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Kind { FiniteBialgebra, Holomorphic, Heisenberg, Lattice, HLinearLattice, JoyceLattice };

std::string kind_str(Kind k);

/// A validated algebra definition file.
struct Definition {
  Kind kind = Kind::Lattice;
  std::string name;
  std::string digest;  // SHA-256 of the file bytes
  int truncation = 2;  // grade bound: max Heisenberg weight or polynomial degree
  int radius = 1;      // lattice classes |lambda_i| <= radius
  CheckWindow window;

  int rank = 0;
  std::optional<Lattice> lattice;
  std::optional<FinBialgebra> bialgebra;  // finite-bialgebra, and H for hlinear-lattice
  std::optional<StateVector> rmatrix;     // finite-bialgebra
  Functional r_h;                         // hlinear-lattice
  ExtWeightMap ext;                       // joyce-lattice
  JoyceOptions joyce;
};

// Throws DefinitionError on unreadable files, TOML errors and schema violations.
Definition load_definition(const std::string& path);
Definition parse_definition(const std::string& text);

bool is_vertex_kind(Kind k);
// Vertex engine of the definition (all kinds except finite-bialgebra).
VertexEngine make_engine(const Definition& d);
// Test states of the truncated space.
std::vector<BasisKey> test_states(const Definition& d, int truncation);
// Suites that apply to the kind, in report order.
std::vector<std::string> applicable_suites(const Definition& d);
const std::vector<std::string>& all_suites();

std::string sha256_hex(const std::string& bytes);

}  // namespace vqg::cli
