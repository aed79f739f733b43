#pragma once

// Finite models of Gal(L/F) = X ⋊ (H ⋊ Δ) with twisted inertia sections:
// a brute-force subgroup-closure oracle for X / Y_n and the closed form
// X / (ω_n C + D) it is compared against.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptower/abelian_type.hpp"
#include "ptower/module.hpp"
#include "ptower/tower.hpp"

namespace ptower {

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 20;
inline constexpr int kMaxDeltaOrder = 12;

/// A small finite group given by its multiplication table.
class DeltaGroup {
 public:
  /// table[a][b] = a * b. Throws InvalidGroupTable unless the table is a
  /// group of order at most kMaxDeltaOrder.
  static DeltaGroup from_table(std::string name, std::vector<std::vector<int>> table);
  /// "trivial", "Z2", "Z3", "S3".
  static DeltaGroup preset(std::string_view name);
  static std::vector<std::string> preset_names();

  const std::string& name() const { return name_; }
  int order() const { return static_cast<int>(table_.size()); }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inverse_[a]; }
  const std::vector<std::vector<int>>& table() const { return table_; }

  bool is_subgroup(const std::vector<int>& elems) const;
  /// Every subgroup, each as a sorted element list.
  std::vector<std::vector<int>> subgroups() const;

 private:
  DeltaGroup() = default;
  std::string name_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  int identity_ = 0;
};

/// Every homomorphism Δ -> (Z/p^d)^×, as the list of images u_δ.
std::vector<std::vector<std::uint64_t>> unit_homomorphisms(const DeltaGroup& delta, std::uint64_t p, int d);

/// G = H ⋊ Δ with H = <h> ≅ Z/p^d and δ h δ^{-1} = h^{u_δ}. Element h^i δ has
/// index i * |Δ| + δ.
class FiniteGroupG {
 public:
  /// Throws ActionNotHomomorphism unless u is a homomorphism into the units.
  FiniteGroupG(std::uint64_t p, int d, DeltaGroup delta, std::vector<std::uint64_t> u);

  std::uint64_t p() const { return p_; }
  int d() const { return d_; }
  std::uint64_t h_order() const { return q_; }
  const DeltaGroup& delta() const { return delta_; }
  std::uint64_t u(int delta) const { return u_[delta]; }
  const std::vector<std::uint64_t>& u() const { return u_; }
  int order() const { return static_cast<int>(q_) * delta_.order(); }

  int element(std::uint64_t i, int delta) const {
    return static_cast<int>((i % q_) * static_cast<std::uint64_t>(delta_.order())) + delta;
  }
  std::uint64_t h_exponent(int g) const { return static_cast<std::uint64_t>(g / delta_.order()); }
  int delta_part(int g) const { return g % delta_.order(); }
  int identity() const { return element(0, delta_.identity()); }
  int h() const { return element(1 % q_, delta_.identity()); }
  int mul(int a, int b) const;
  int inv(int a) const;
  int pow(int a, std::uint64_t k) const;

  /// g ∈ G_n = H^{p^n} ⋊ Δ
  bool in_level(int g, int n) const;
  std::vector<int> level_elements(int n) const;

 private:
  std::uint64_t p_;
  int d_;
  std::uint64_t q_;
  DeltaGroup delta_;
  std::vector<std::uint64_t> u_;
};

/// 𝒢 = X ⋊ G, (x, g)(y, g') = (x + g·y, gg'), where h acts through σ and δ
/// through tau[δ].
class DescentGroup {
 public:
  struct Elem {
    Element x;
    int g;
    friend bool operator==(const Elem&, const Elem&) = default;
  };

  const FiniteGroupG& G() const { return g_; }
  const FiniteHModule& X() const { return x_; }
  const std::vector<ModMatrix>& tau() const { return tau_; }
  /// |X| * |G|
  std::uint64_t order() const;
  std::uint64_t x_size() const { return x_size_; }

  /// σ^i τ_δ for g = h^i δ.
  const ModMatrix& action(int g) const { return action_[g]; }
  Element act(int g, const Element& x) const { return x_.act(action_[g], x); }

  Elem mul(const Elem& a, const Elem& b) const;
  Elem inv(const Elem& a) const;
  Elem pow(const Elem& a, std::uint64_t k) const;

  /// Mixed-radix index of x in [0, |X|).
  std::uint64_t encode(const Element& x) const;
  Element decode(std::uint64_t index) const;

 private:
  friend DescentGroup build_group(FiniteGroupG, FiniteHModule, std::vector<ModMatrix>, std::uint64_t);
  DescentGroup(FiniteGroupG g, FiniteHModule x, std::vector<ModMatrix> tau)
      : g_(std::move(g)), x_(std::move(x)), tau_(std::move(tau)) {}

  FiniteGroupG g_;
  FiniteHModule x_;
  std::vector<ModMatrix> tau_;
  std::vector<ModMatrix> action_;
  std::uint64_t x_size_ = 1;
};

/// Validates that g ↦ action(g) is a homomorphism G -> Aut(X) extending σ
/// (ActionNotHomomorphism, WellDefinednessViolation) and that |X|·|G| fits
/// in the budget (BudgetExceeded).
DescentGroup build_group(FiniteGroupG G, FiniteHModule X, std::vector<ModMatrix> tau,
                         std::uint64_t budget = kDefaultBudget);

/// I_w = <(a, h), (b_δ, δ) : δ ∈ Δ_i>, b aligned with delta_subgroup.
struct InertiaSection {
  std::vector<int> delta_subgroup;
  Element a;
  std::vector<Element> b;
};

struct DescentInstance {
  DescentGroup group;
  std::vector<InertiaSection> sections;

  int d() const { return group.G().d(); }
  std::uint64_t p() const { return group.G().p(); }
};

/// Checks section 1 is (Δ, 0, 0), every Δ_i is a subgroup, ω_d a_i = 0 and
/// each I_{w_i} has order p^d |Δ_i| with trivial intersection with X.
/// Throws PreconditionViolation.
DescentInstance make_descent_instance(DescentGroup group, std::vector<InertiaSection> sections);

/// Every element of I_{w_i}, by subgroup closure.
std::vector<DescentGroup::Elem> section_elements(const DescentGroup& group, const InertiaSection& s,
                                                 std::uint64_t budget = kDefaultBudget);

struct BruteForceOptions {
  std::uint64_t budget = kDefaultBudget;
  /// Also check [𝒢_n, 𝒢_n] = I_{G_n}X ⋊ [I_w, I_w]; throws TheoremViolation.
  bool verify_commutator = false;
};

struct BruteForceLayer {
  AbelianType type;
  /// Y_n = X ∩ <I_{G_n}X, I_{w_i} ∩ 𝒢_n>, sorted.
  std::vector<Element> y;
};

BruteForceLayer bruteforce_layer(const DescentInstance& inst, int n, const BruteForceOptions& opts = {});
AbelianType bruteforce_class_quotient(const DescentInstance& inst, int n, const BruteForceOptions& opts = {});

/// C = <(σ-1)X, a_2, ..., a_r>_H
Submodule descent_c(const DescentInstance& inst);
/// D = <I_Δ X, b_{δ,i}>_H
Submodule descent_d(const DescentInstance& inst);
/// ω_n C + D
Submodule closed_form_submodule(const DescentInstance& inst, int n);
AbelianType closed_form_quotient(const DescentInstance& inst, int n);

/// X̄ = X/D, C̄ = (C + D)/D, same d.
TowerInstance compile_to_tower(const DescentInstance& inst);

struct OracleLevel {
  int n;
  AbelianType bruteforce;
  AbelianType closed_form;
  AbelianType tower;
  /// bruteforce == closed_form == tower
  bool equal;
  /// Y_n and ω_n C + D are the same subgroup of X.
  bool same_subgroup;
};

struct OracleWitness {
  int n;
  /// Least element (in index order) lying in exactly one of the two sides.
  Element element;
  bool in_bruteforce;
};

struct OracleReport {
  std::vector<OracleLevel> levels;
  /// Set for the first level whose types differ.
  std::optional<OracleWitness> witness;

  bool all_equal() const;
};

OracleReport compare_oracle(const DescentInstance& inst, int n_min, int n_max, const BruteForceOptions& opts = {});

/// In (Z/p^N)[G_n], every g - 1 lies in the left (Z/p^N)[H^{p^n}]-span of
/// h^{p^n} - 1 and {δ - 1}.
bool augmentation_check(const FiniteGroupG& G, int n, int precision, std::uint64_t budget = kDefaultBudget);

struct DescentBounds {
  /// |X| <= p^max_log_order before the budget check.
  int max_log_order = 6;
  int max_sections = 3;
  std::uint64_t budget = std::uint64_t{1} << 18;
  int max_retries = 64;
  /// Force u = 1 (direct product H × Δ).
  bool direct_product = false;
};

/// Deterministic in all arguments. Throws GenerationFailed after max_retries.
DescentInstance random_descent_instance(std::uint64_t p, int d, const DeltaGroup& delta, const DescentBounds& bounds,
                                        std::uint64_t seed);

}  // namespace ptower
