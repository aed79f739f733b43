#pragma once

// Layers A_n = X̄ / ω_n C̄ of a potential cyclic p-tower, stabilization
// checks, and growth fitting e_n = μ p^n + λ n + ν.

#include <cstdint>
#include <optional>
#include <vector>

#include "ptower/abelian_type.hpp"
#include "ptower/iwasawa.hpp"
#include "ptower/module.hpp"

namespace ptower {

struct TowerInstance {
  FiniteHModule module;
  Submodule c_bar;
  /// Tower length; nullopt is the unbounded (potential Z_p) case.
  std::optional<int> d;
};

/// C̄ = span(c_bar_gens). Throws PreconditionViolation unless
/// (σ - 1)X̄ ⊆ C̄ and σ^{p^d} = 1 when d is finite.
TowerInstance make_tower(FiniteHModule module, const std::vector<Element>& c_bar_gens,
                         std::optional<int> d);

struct LayerRecord {
  int n;
  AbelianType type;
  long long e;
};

struct LayerReport {
  std::vector<LayerRecord> levels;
  /// First s with A_s ≅ A_{s+1} among the computed levels.
  std::optional<int> stable_from;

  std::vector<long long> exponents() const;
};

/// ω_n C̄ as a submodule of X̄.
Submodule omega_image(const TowerInstance& inst, int n);

/// Throws LevelOutOfRange for n > d.
AbelianType layer(const TowerInstance& inst, int n);

/// Levels 0..n_max. Checks ω_n C̄ ⊆ ω_{n-1} C̄ at every step (the norm map is
/// onto) and throws TheoremViolation otherwise.
LayerReport layer_sequence(const TowerInstance& inst, int n_max);

/// nullopt stands for "full": compare the groups themselves.
using StabilizationDepth = std::optional<int>;

struct StabilizationVerdict {
  bool hypothesis_holds = false;
  /// Only meaningful when the hypothesis holds.
  bool conclusion_verified = false;
  /// Every generator of C̄ lies in p^k X̄ (k = e_1 for "full").
  bool c_in_pkX = false;

  friend bool operator==(const StabilizationVerdict&, const StabilizationVerdict&) = default;
};

/// A_1/p^k ≅ A_0/p^k  ⇒  A_n/p^k ≅ A_0/p^k for n <= n_max. Throws
/// TheoremViolation when the hypothesis holds and the conclusion or the
/// witness C̄ ⊆ p^k X̄ fails.
StabilizationVerdict check_stabilization(const TowerInstance& inst, StabilizationDepth k, int n_max);
StabilizationVerdict check_stabilization(const LayerReport& report, const TowerInstance& inst,
                                         StabilizationDepth k);

/// Same statement phrased with rank_{p^i}, i <= k.
StabilizationVerdict rank_stabilization(const TowerInstance& inst, StabilizationDepth k, int n_max);
StabilizationVerdict rank_stabilization(const LayerReport& report, const TowerInstance& inst,
                                        StabilizationDepth k);

struct GrowthFit {
  long long mu;
  long long lambda;
  long long nu;
  int n0;

  friend bool operator==(const GrowthFit&, const GrowthFit&) = default;
};

/// Smallest n0 such that e_n = μ p^n + λ n + ν exactly for every n >= n0,
/// with at least three points in the suffix and μ, λ >= 0. Throws
/// PreconditionViolation for fewer than four values and NoStableFit when no
/// suffix fits.
GrowthFit fit_growth(const std::vector<long long>& e, std::uint64_t p);

/// Λ/(p^mu) when poly is empty, Λ/(P^power) otherwise.
struct ElementarySummand {
  int mu = 0;
  std::optional<DistinguishedPoly> poly;
  int power = 1;

  static ElementarySummand p_power(int mu);
  static ElementarySummand distinguished(DistinguishedPoly P, int power);
};

struct ElementaryModule {
  std::uint64_t p;
  std::vector<ElementarySummand> summands;
};

struct ElementaryGrowth {
  LayerReport report;
  /// nullopt when there are too few levels or no suffix fits yet.
  std::optional<GrowthFit> fit;
  /// Σ μ_i and Σ k_j deg P_j.
  long long expected_mu;
  long long expected_lambda;
};

/// Layers of the elementary module, summand by summand. InfiniteQuotient is
/// propagated when some P^k shares a factor with ω_n.
ElementaryGrowth elementary_growth(const ElementaryModule& m, int n_max, const CompanionOptions& opts = {});

struct TowerBounds {
  /// |X̄| <= p^max_log_order.
  int max_log_order = 8;
  int max_rank = 4;
  /// Random elements added to (σ - 1)X̄ when building C̄.
  int extra_generators = 2;
  bool allow_unbounded = true;
};

/// Deterministic in (p, bounds, seed).
TowerInstance random_instance(std::uint64_t p, const TowerBounds& bounds, std::uint64_t seed);

}  // namespace ptower
