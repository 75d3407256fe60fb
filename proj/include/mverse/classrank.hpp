#pragma once

// Good / pseudo-good / esoteric classification of classes over a finite
// ambient model. Iterated-powerclass membership is decided by recursion on
// the HF graph of the class; powerclasses are never materialized.

#include <map>
#include <optional>
#include <string>

#include "mverse/model.hpp"

namespace mverse {

/// x ∈ P^n(base)? n = 0 tests plain membership in `base`; n > 0 holds iff
/// every member of x satisfies the test at n - 1.
bool in_iterated_powerclass(HfSet x, const std::vector<HfSet>& base, std::size_t n,
                            std::size_t guard = 8);

/// Least n with in_iterated_powerclass(x, carrier(v), n), if any within the
/// guard.
std::optional<std::size_t> good_rank(HfSet x, const Universe& v, std::size_t guard = 8);

struct Classification {
  std::map<std::string, std::optional<std::size_t>> good;  // per universe
  std::optional<std::size_t> pseudo_good;  // base ∪M (all carrier elements)
  std::optional<std::size_t> esoteric;     // base M (the carrier sets)
  std::size_t guard = 8;
  /// All three searches exhausted the guard.
  bool strange_within_bounds() const;
};

/// All rank computations at once; reported ranks are minimal because the
/// search ascends from 0.
Classification classify(HfSet x, const AmbientModel& m, std::size_t guard = 8);

}  // namespace mverse
