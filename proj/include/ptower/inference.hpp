#pragma once

// Prediction for towers known only through observed layers, assuming the
// ramification hypothesis holds (asserted by the caller, never checked).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptower/abelian_type.hpp"

namespace ptower {

/// Either the type or only e_n = log_p |A_n| may be known.
struct ObservedLevel {
  int n = 0;
  std::optional<AbelianType> type;
  std::optional<long long> e;
};

struct ObservedTower {
  std::uint64_t p = 0;
  std::vector<ObservedLevel> levels;
  bool ramhyp_asserted = false;
};

struct Inference {
  bool applicable = false;
  /// Stabilization depth used; nullopt means A_1 ≅ A_0 itself.
  std::optional<int> k;
  /// The predicted A_n (or A_n / p^k A_n) for n >= 1.
  AbelianType predicted;
  /// One-line verdict, e.g. "A_n ≅ Z/37 for all n ≥ 1".
  std::string summary;
};

/// Throws RamHypNotAsserted, MissingLevels (levels 0 and 1 are required and
/// must be distinct and contiguous from 0), and TheoremViolation when a
/// later observed level contradicts the prediction.
Inference infer(const ObservedTower& obs, std::optional<int> k = std::nullopt);

}  // namespace ptower
