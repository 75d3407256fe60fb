#pragma once

// Explicit finite categories: objects, arrows with dom/cod, a partial
// identity assignment and a partial composition table, plus the law checker
// that decides whether the data is an actual category or only a partial one.
//
// Category files are a plain-text table:
//
//   objects: a b
//   arrow id_a : a -> a
//   arrow f : a -> b
//   identity a = id_a
//   compose g f = h          (g ∘ f = h, f first)

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mverse/hf.hpp"

namespace mverse {

struct FinCategory {
  struct Arrow {
    std::string name;
    std::size_t dom = 0;
    std::size_t cod = 0;
    std::optional<HfSet> graph;  // for HF-backed arrows
  };

  std::string name;
  std::vector<std::string> object_names;
  std::vector<std::optional<HfSet>> object_values;  // HF-backed objects
  std::vector<Arrow> arrows;
  std::vector<std::optional<std::size_t>> identity;          // per object
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> compose;  // (f, g) -> f∘g

  std::size_t add_object(std::string name, std::optional<HfSet> value = std::nullopt);
  std::size_t add_arrow(std::string name, std::size_t dom, std::size_t cod,
                        std::optional<HfSet> graph = std::nullopt);
  std::optional<std::size_t> composite(std::size_t f, std::size_t g) const;
  std::vector<std::size_t> hom(std::size_t x, std::size_t y) const;
  std::optional<std::size_t> object_index(const std::string& name) const;
  std::optional<std::size_t> arrow_index(const std::string& name) const;
};

struct LawReport {
  std::vector<std::size_t> missing_identities;  // object indices
  std::vector<std::pair<std::size_t, std::size_t>> non_closed_compositions;
  // (identity arrow, other arrow, wrong composite)
  std::vector<std::array<std::size_t, 3>> identity_violations;
  // (f, g, h) with (f∘g)∘h != f∘(g∘h)
  std::vector<std::array<std::size_t, 3>> associativity_violations;
  bool is_category() const {
    return missing_identities.empty() && non_closed_compositions.empty() &&
           identity_violations.empty() && associativity_violations.empty();
  }
  std::string verdict() const { return is_category() ? "category" : "partial"; }
};

/// Identity existence and unit laws, closure of composition over composable
/// pairs, and associativity over every fully composed triple.
LawReport check_category_laws(const FinCategory& c);

std::string law_report_text(const FinCategory& c, const LawReport& r);

FinCategory parse_category(std::string_view text, std::string name);
FinCategory load_category_file(const std::string& path);
std::string category_to_text(const FinCategory& c);

/// Stock categories used by tests and docs.
FinCategory terminal_category();
FinCategory discrete_category(std::size_t n);
FinCategory arrow_category();  // two objects, one non-identity arrow

}  // namespace mverse
