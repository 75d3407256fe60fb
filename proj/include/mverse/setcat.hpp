#pragma once

// Categories of sets inside universes: internal functions as arrows,
// V-category recognition, functor and natural-transformation enumeration,
// functor categories, and the finite slice of the 2-category of universes.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mverse/category.hpp"
#include "mverse/model.hpp"

namespace mverse {

/// Thrown when V-category data does not decode (component not a function,
/// wrong domain, ...).
class MalformedError : public std::runtime_error {
 public:
  explicit MalformedError(const std::string& what) : std::runtime_error(what) {}
};

/// All f in the carrier whose decoded graph is an entire functional relation
/// from x to y. Plain Kuratowski decoding; the universe must be standard.
std::vector<HfSet> internal_functions(const Universe& u, HfSet x, HfSet y);

struct SetCategoryOptions {
  std::size_t object_guard = 64;  // full build cap
  std::optional<std::size_t> sample;  // build over a deterministic sample instead
  std::uint64_t seed = 0;
};

/// Objects = carrier elements, arrows = internal functions (labelled with
/// their dom/cod, so one graph can appear in several homs), identity where
/// the diagonal graph is a carrier element, composites where the relational
/// composite's graph is one. The law report documents exactly what is
/// missing.
std::pair<FinCategory, LawReport> build_set_category(const Universe& u,
                                                     const SetCategoryOptions& opts = {});

enum class VSize { VSmall, VLocallySmall, VLarge };
std::string vsize_name(VSize s);

struct VCategoryData {
  HfSet objects, homs, dom, cod, id, comp;
};

struct VCategoryReport {
  bool is_v_category = false;
  VSize size = VSize::VLarge;
  std::string diagnostic;  // first failed requirement, empty when good
  std::optional<FinCategory> decoded;
  LawReport laws;
};

/// Checks the six components: Ob and Hom must be carrier subsets, the four
/// maps carrier elements that decode to functions with the stated domains
/// and codomains (comp over the Kuratowski-encoded composable pairs), then
/// law-checks the decoded category. Structurally undecodable components
/// throw MalformedError; merely out-of-carrier ones report false.
VCategoryReport check_v_category(const Universe& u, const VCategoryData& data);

struct Functor {
  std::string name;
  std::vector<std::size_t> object_map;
  std::vector<std::size_t> arrow_map;
  bool operator==(const Functor&) const = default;
};

/// All maps preserving dom/cod, identities and composition, in a
/// deterministic order; guarded by `ceiling` on the raw search space.
std::vector<Functor> enumerate_functors(const FinCategory& c, const FinCategory& d,
                                        std::size_t ceiling = std::size_t{1} << 20);

struct NatTransform {
  std::size_t from = 0, to = 0;               // functor indices
  std::vector<std::size_t> components;        // arrow of d per object of c
  bool operator==(const NatTransform&) const = default;
};

/// Component families making every naturality square commute.
std::vector<NatTransform> natural_transformations(const FinCategory& c, const FinCategory& d,
                                                  const std::vector<Functor>& functors,
                                                  std::size_t from, std::size_t to);

/// Objects = functors, arrows = natural transformations, identities and
/// composition pointwise. Requires d to have the identities and composites
/// the construction uses.
FinCategory functor_category(const FinCategory& c, const FinCategory& d,
                             std::size_t ceiling = std::size_t{1} << 20);

struct VerseSlice {
  struct Excluded {
    std::string universe;
    LawReport report;
  };
  std::vector<std::string> objects;  // universes whose Set_V is a category
  std::map<std::string, FinCategory> set_categories;
  std::map<std::pair<std::string, std::string>, FinCategory> hom_categories;
  std::vector<Excluded> excluded;
  bool interchange_checked = false;
  bool interchange_ok = false;
};

/// Set_V for every universe that passes the law check, functor categories
/// between each ordered pair of admitted objects, and a Godement
/// interchange sweep over all available 2-cells.
VerseSlice verse_slice(const AmbientModel& m, const SetCategoryOptions& opts = {},
                       std::size_t functor_ceiling = std::size_t{1} << 20);

}  // namespace mverse
