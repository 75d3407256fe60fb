#pragma once

// Ambient class models: a downward-closed finite class world, a multiverse
// of universes, and the model description file format.
//
// Model files are line oriented:
//
//   # comment
//   universe V = { {}, 1, 2, 3, {3} }
//   universe L = { 1 } membership { (1, 1) }
//   universe F = fragment 4
//   multiverse = [V, L]
//   world fragment 4          (or: world rank 7)
//
// A universe given by a carrier literal defaults to standard membership;
// `membership { (a, b), ... }` overrides it. Without a `world` clause the
// class world is the pair closure of the carriers below max carrier rank + 3.

#include <string>
#include <vector>

#include "mverse/universe.hpp"

namespace mverse {

struct AmbientModel {
  std::string name;
  std::vector<HfSet> class_world;  // canonical order, downward closed
  std::vector<Universe> multiverse;
  std::size_t rank_bound = 0;  // class_world ⊆ { x : rank(x) < rank_bound }

  bool world_contains(HfSet s) const;
  const Universe* find_universe(const std::string& name) const;
  /// The multiverse as a set: { carrier set of each universe }.
  HfSet multiverse_set() const;
  /// Evaluation view: domain = class_world, true ∈, a constant per universe
  /// name (bound to its carrier set) plus M (the multiverse set), and each
  /// universe's relation available for in_V-tagged atoms.
  Structure ambient_structure() const;

 private:
  mutable std::unordered_set<std::uint32_t> index_;
};

/// Downward closure of `seeds`, plus one generation of Kuratowski pairs over
/// the seeds, everything of rank >= rank_bound dropped.
std::vector<HfSet> world_closure(std::vector<HfSet> seeds, std::size_t rank_bound,
                                 std::size_t ceiling = std::size_t{1} << 16);

/// The five-element universe {∅, 1, 2, 3, {3}} with a one-universe
/// multiverse, inside a pair-closed world of rank < 7.
AmbientModel build_weak_model(std::size_t world_rank_bound = 7);

/// Universe and class world both equal to the rank-k fragment.
AmbientModel build_fragment_model(std::size_t k);

/// The one-element universe {∅}.
AmbientModel build_singleton_model();

/// Two disjointly named copies of the {∅} universe; exercises multi-object
/// 2-categorical structure.
AmbientModel build_twins_model();

AmbientModel parse_model(std::string_view text, std::string name);
AmbientModel load_model_file(const std::string& path);

/// Resolves the shipped names (weak, singleton, twins, frag2..frag5) or
/// falls back to reading a file at the given path.
AmbientModel resolve_model(const std::string& name_or_path);

/// The shipped model names.
std::vector<std::string> builtin_model_names();

}  // namespace mverse
