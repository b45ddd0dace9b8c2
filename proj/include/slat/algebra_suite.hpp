#pragma once

// Span identities between kernel-operator spaces on finite abelian groups,
// checked by rank triples.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slat/fingroup.hpp"

namespace slat {

/// One identity instance. For span identities the triple is
/// (rank lhs, rank rhs, rank lhs+rhs); for containment it is
/// (rank outer, rank inner, rank outer+inner); for dimension formulas it is
/// (rank, predicted, rank); for the morphism check it is (defective samples,
/// 0, defective samples).
struct IdentityCheck {
  std::string identity;
  std::string instance;
  RankTriple ranks;
  bool passed = false;
};

struct IdentityTally {
  int passed = 0;
  int total = 0;
};

struct SuiteReport {
  std::string group;
  std::vector<IdentityCheck> checks;
  double seconds = 0.0;

  bool passed() const;
  std::map<std::string, IdentityTally> tally() const;
  std::vector<IdentityCheck> failures() const;
};

/// Identity names used in reports.
namespace ident {
inline constexpr const char* kHyz = "hyz";
inline constexpr const char* kHyz1 = "hyz1";
inline constexpr const char* kFactor = "factor";
inline constexpr const char* kProduct = "product";
inline constexpr const char* kXyzef = "xyzef";
inline constexpr const char* kMorita = "morita";
inline constexpr const char* kPhi = "phi";
inline constexpr const char* kTensor = "tensor";
inline constexpr const char* kGraded = "graded";
inline constexpr const char* kSubalgebra = "subalgebra";
inline constexpr const char* kIdeal = "ideal";
inline constexpr const char* kMorphism = "morphism";
inline constexpr const char* kGeneration = "generation";
}  // namespace ident

struct SuiteOptions {
  /// Only subgroups of at most this order take part; 0 keeps all.
  int max_subgroup_order = 0;
  /// Instances per identity; 0 runs every instance, otherwise a seeded sample.
  std::size_t max_instances = 0;
  std::uint64_t seed = 1;
  /// Negative control: the named identity compares against its expected span
  /// with the last basis vector removed.
  std::optional<std::string> corrupt;
};

/// hyz, hyz1, factor, product, xyzef, morita, phi and tensor over the
/// subgroups of g. Morita runs on every filter {H >= W} of the subgroup lattice.
SuiteReport verify_group_identities(const FinAbGroup& g, const SuiteOptions& opt = {});

/// Rank of C(z1) + C(z2) against the two ranks, for z1 != z2.
struct ComponentOverlap {
  std::string z1;
  std::string z2;
  RankTriple ranks;
};

struct ModelOptions {
  bool generation = true;
  PauliFierzOptions pauli_fierz;
  /// Products sampled per morphism check.
  std::size_t morphism_pairs = 64;
  std::uint64_t seed = 1;
  std::optional<std::string> corrupt;
};

struct ModelReport {
  std::vector<IdentityCheck> checks;
  std::vector<ComponentOverlap> overlaps;
  double seconds = 0.0;

  bool passed() const;
  std::map<std::string, IdentityTally> tally() const;
};

/// Graded product law, morita on the model lattice, subalgebra C(>=s) and ideal
/// C(not >=s) for every s, the morphism property of the projection onto C(>=s)
/// where the two summands are independent, and generation by Pauli-Fierz
/// resolvents. Component overlaps are reported, not asserted.
ModelReport verify_model(const GroupModel& m, const ModelOptions& opt = {});

/// Algebra generated by pauli_fierz_seeds against assemble_C.
IdentityCheck check_generation(const GroupModel& m, const PauliFierzOptions& opt = {});

}  // namespace slat
