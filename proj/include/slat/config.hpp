#pragma once

// JSON model configurations: parsing and validation with path diagnostics.
//
// Euclidean model:
//   {"kind": "euclid", "ambient_dimension": 2, "grid": {"n": 201, "half_length": 12},
//    "scheme": "fd", "subspaces": [{"id": "X1", "axes": [1]}, ...],
//    "semilattice": {...}?, "interactions": [...], "couplings": [...]}
// Group model:
//   {"kind": "group", "cyclic_orders": [4],
//    "subgroups": [{"id": "Y", "generators": [[2]]}, ...],
//    "semilattice": {...}?, "suite": {...}?, "corrupt": "hyz"?}
// A semilattice is {"elements": [{"id", "dim"}], "meet": [[id, ...], ...]};
// without one, meets are axis-set (resp. subgroup) intersections.

#include <optional>
#include <string>
#include <variant>

#include "slat/algebra_suite.hpp"
#include "slat/diagnostics.hpp"
#include "slat/errors.hpp"
#include "slat/euclid_model.hpp"
#include "slat/fingroup.hpp"

namespace slat {

inline constexpr int kSchemaVersion = 1;
/// Largest total dimension accepted for a Euclidean model.
inline constexpr Eigen::Index kMaxTotalDim = 250000;
inline constexpr int kMaxGroupOrder = 36;

struct EuclidConfig {
  int ambient_dimension = 0;
  ModelSpec model;
};

struct GroupConfig {
  FinAbGroup group;
  std::optional<GroupModel> model;
  SuiteOptions suite;
  ModelOptions model_options;
};

using Config = std::variant<EuclidConfig, GroupConfig>;

struct ParseResult {
  std::optional<Config> config;
  Diagnostics diagnostics;
  bool ok() const { return config.has_value() && diagnostics.empty(); }
};

/// Throws InputError on malformed JSON; semantic problems become diagnostics.
ParseResult parse_config(const std::string& text);
/// Reads the file into `bytes` and parses it. Throws InputError when unreadable.
ParseResult load_config(const std::string& path, std::string& bytes);

}  // namespace slat
