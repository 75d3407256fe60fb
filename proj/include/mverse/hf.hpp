#pragma once

// Canonical hereditarily finite sets.
//
// Every set is interned in a global pool; structurally equal sets share one
// id, so equality is an id comparison and member vectors are stored in one
// fixed total order (rank first, then lexicographic on members). All values
// are immutable after construction.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mverse {

/// Thrown when a construction would exceed a configured resource ceiling.
class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on malformed literal or formula text; carries a 0-based offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Handle to an interned hereditarily finite set. Copy is trivial;
/// equality is representation identity.
class HfSet {
 public:
  HfSet();  // the empty set
  bool operator==(const HfSet&) const = default;
  std::uint32_t id() const { return id_; }
  static HfSet from_id(std::uint32_t id);  // id must come from this process

 private:
  explicit HfSet(std::uint32_t id) : id_(id) {}
  std::uint32_t id_;
  friend class HfPool;
};

inline constexpr std::size_t kDefaultCeiling = std::size_t{1} << 16;

/// The set with exactly the given members; duplicates collapse, order is
/// irrelevant.
HfSet canonical_set(std::span<const HfSet> members);
HfSet canonical_set(std::initializer_list<HfSet> members);
HfSet canonical_set(const std::vector<HfSet>& members);

HfSet empty_set();

/// von Neumann numeral: nat(0) = {} and nat(n+1) = nat(n) ∪ {nat(n)}.
HfSet nat(std::size_t n, std::size_t ceiling = kDefaultCeiling);

/// 0 for the empty set, otherwise 1 + max rank of the members.
std::size_t hf_rank(HfSet s);

std::span<const HfSet> hf_members(HfSet s);
std::size_t hf_card(HfSet s);
bool hf_contains(HfSet s, HfSet elem);  // elem ∈ s
bool hf_subset(HfSet a, HfSet b);       // a ⊆ b

/// The canonical total order: by rank, then lexicographically on the
/// (already canonical) member sequences.
int hf_compare(HfSet a, HfSet b);
bool hf_less(HfSet a, HfSet b);

/// (x, y) = {{x}, {x, y}}.
HfSet kuratowski_pair(HfSet x, HfSet y);

/// Inverse of kuratowski_pair; empty when p is not pair-shaped.
std::optional<std::pair<HfSet, HfSet>> decode_pair(HfSet p);

/// Members of members of x.
HfSet union_all(HfSet x);
HfSet binary_union(HfSet x, HfSet y);

/// All subsets of x; cardinality 2^|x|, guarded by `ceiling`.
HfSet powerset(HfSet x, std::size_t ceiling = kDefaultCeiling);

/// {(a, b) : a ∈ x, b ∈ y} with Kuratowski pairs, guarded by `ceiling`.
HfSet cartesian_product(HfSet x, HfSet y, std::size_t ceiling = kDefaultCeiling);

/// n when s is the von Neumann numeral nat(n).
std::optional<std::size_t> as_numeral(HfSet s);

/// Everything reachable from s by iterated membership (s itself excluded),
/// in canonical order.
std::vector<HfSet> transitive_closure(HfSet s);

/// Plain brace notation, members in canonical order: {}, {{}, {{}}} ...
std::string to_string(HfSet s);
/// Brace notation with von Neumann numerals printed as decimal digits.
std::string to_string_sugared(HfSet s);

/// Literal grammar: `{}`, `{e1, e2, ...}`, decimal numerals as von Neumann
/// sugar; whitespace insensitive; duplicates and ordering are canonicalized.
HfSet parse_hf(std::string_view text);

struct HfSetHash {
  std::size_t operator()(HfSet s) const { return s.id(); }
};
struct HfSetLess {
  bool operator()(HfSet a, HfSet b) const { return hf_less(a, b); }
};

/// Sorts into canonical order and drops duplicates, in place.
void canonicalize(std::vector<HfSet>& xs);

}  // namespace mverse
