#pragma once

// Finite abelian p-groups X = ⊕ Z/p^{e_i} carrying the action of a generator
// h of a cyclic p-group (the matrix sigma), their H-submodules and quotients.
//
// Elements are integer vectors with component i reduced mod p^{e_i}. All
// linear algebra runs over Z/p^{e_1} with the relation lattice generated by
// p^{e_i} * basis_i, so a single Smith form answers structural questions.
// Endomorphisms act on column vectors: (σx)_i = Σ_j σ_ij x_j.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ptower/abelian_type.hpp"
#include "ptower/iwasawa.hpp"
#include "ptower/padic.hpp"

namespace ptower {

using Element = std::vector<std::uint64_t>;

std::string format_element(const Element& x);

struct ModuleOptions {
  /// Bound for the order check σ^{p^k} = 1; negative selects
  /// e_1 + ceil(log_p r) + 2.
  int k_max = -1;
};

class FiniteHModule {
 public:
  std::uint64_t p() const { return p_; }
  const std::vector<int>& exponents() const { return exponents_; }
  std::size_t rank() const { return exponents_.size(); }
  /// e_1, or 0 for the trivial module.
  int top_exponent() const { return exponents_.empty() ? 0 : exponents_.front(); }
  long long log_order() const;
  /// Z/p^{max(e_1, 1)}: the ring every matrix of this module lives over.
  const RingParams& ambient() const { return ambient_; }
  const ModMatrix& sigma() const { return sigma_; }
  /// Minimal k with σ^{p^k} = 1.
  int order_exponent() const { return order_exponent_; }
  AbelianType type() const { return AbelianType(exponents_); }

  std::uint64_t component_modulus(std::size_t i) const;

  Element zero() const { return Element(rank(), 0); }
  Element basis(std::size_t i) const;
  Element reduce(const std::vector<std::int64_t>& x) const;
  /// Reduce a vector over the ambient ring componentwise.
  Element reduce_residues(Element x) const;
  Element add(const Element& a, const Element& b) const;
  Element sub(const Element& a, const Element& b) const;
  Element scale(std::uint64_t c, const Element& x) const;
  bool is_zero(const Element& x) const;

  /// Reduce row i of an ambient matrix mod p^{e_i}.
  ModMatrix reduce_endomorphism(ModMatrix m) const;
  Element act(const ModMatrix& endo, const Element& x) const;
  ModMatrix compose(const ModMatrix& a, const ModMatrix& b) const;
  ModMatrix identity() const { return ModMatrix::identity(ambient_, rank()); }
  ModMatrix endo_power(const ModMatrix& a, std::uint64_t k) const;
  /// σ - 1
  ModMatrix sigma_minus_one() const;
  /// ω_n(σ) = 1 + σ + ... + σ^{p^n - 1}, built as a product over levels.
  ModMatrix omega_endomorphism(int n) const;

  /// Rows p^{e_i} * basis_i for the coordinates with e_i < e_1.
  ModMatrix relation_matrix() const;

  friend bool operator==(const FiniteHModule&, const FiniteHModule&) = default;

 private:
  friend FiniteHModule make_module(std::uint64_t, std::vector<int>, const ModMatrix&, ModuleOptions);
  FiniteHModule(std::uint64_t p, std::vector<int> exponents, RingParams ambient, ModMatrix sigma)
      : p_(p), exponents_(std::move(exponents)), ambient_(ambient), sigma_(std::move(sigma)) {}

  std::uint64_t p_;
  std::vector<int> exponents_;
  RingParams ambient_;
  ModMatrix sigma_;
  int order_exponent_ = 0;
};

/// Validating factory. Throws WellDefinednessViolation, NotAutomorphism or
/// OrderNotPPower. The matrix may live over any ring with the same p whose
/// precision is at least e_1; it is re-read over Z/p^{e_1}.
FiniteHModule make_module(std::uint64_t p, std::vector<int> exponents, const ModMatrix& sigma,
                          ModuleOptions opts = {});
FiniteHModule make_module(std::uint64_t p, std::vector<int> exponents,
                          const std::vector<std::vector<std::int64_t>>& sigma, ModuleOptions opts = {});

/// σ_ij ≡ 0 mod p^{max(0, e_i - e_j)} for all i, j.
bool is_well_defined(const std::vector<int>& exponents, std::uint64_t p, const ModMatrix& m);
/// Bijective on X; equivalently invertible modulo p.
bool is_automorphism(const FiniteHModule& m, const ModMatrix& endo);

/// A subgroup of a FiniteHModule, stored as a Smith-reduced generating set
/// (at most rank() generators).
class Submodule {
 public:
  const FiniteHModule& parent() const { return parent_; }
  const std::vector<Element>& generators() const { return gens_; }
  long long log_order() const { return log_order_; }
  bool is_zero() const { return log_order_ == 0; }
  bool contains(const Element& x) const;
  /// Every image of a generator under endo is again inside.
  bool is_stable_under(const ModMatrix& endo) const;

 private:
  friend Submodule span_group(const FiniteHModule&, const std::vector<Element>&);
  Submodule(FiniteHModule parent, std::vector<Element> gens, long long log_order)
      : parent_(std::move(parent)), gens_(std::move(gens)), log_order_(log_order) {}

  FiniteHModule parent_;
  std::vector<Element> gens_;
  long long log_order_;
};

/// Subgroup generated by gens (no σ saturation).
Submodule span_group(const FiniteHModule& m, const std::vector<Element>& gens);
/// Smallest subgroup containing gens and stable under every endomorphism.
Submodule span_under(const FiniteHModule& m, const std::vector<Element>& gens,
                     const std::vector<ModMatrix>& endos);
/// H-submodule generated by gens.
Submodule span(const FiniteHModule& m, const std::vector<Element>& gens);

Submodule zero_submodule(const FiniteHModule& m);
Submodule full_submodule(const FiniteHModule& m);
/// p^k X
Submodule p_power_submodule(const FiniteHModule& m, int k);
/// E(S) for an endomorphism E (H-stable when E commutes with σ and S is).
Submodule image_submodule(const ModMatrix& endo, const Submodule& s);

/// Abelian invariants of X / S.
AbelianType quotient_type(const FiniteHModule& m, const Submodule& s);
Submodule sum_submodules(const Submodule& a, const Submodule& b);
/// span{ f(σ - 1) g : g ∈ S }
Submodule scale_submodule(const LambdaElement& f, const Submodule& s);
bool is_subset(const Submodule& a, const Submodule& b);
bool same_submodule(const Submodule& a, const Submodule& b);

/// f(σ - 1) applied to x. Requires f's precision >= e_1.
Element lambda_act(const FiniteHModule& m, const LambdaElement& f, const Element& x);

/// X / S presented on its own Smith basis, with the projection X -> X/S and
/// the endomorphisms it was asked to carry across (σ is always carried).
struct QuotientPresentation {
  FiniteHModule module;
  /// Column-form matrix over m.ambient(): x ↦ projection * x, then reduce.
  ModMatrix projection;
  std::vector<ModMatrix> induced;

  Element project(const Element& x) const;
};

/// S must be stable under σ and every extra endomorphism.
QuotientPresentation quotient_module(const FiniteHModule& m, const Submodule& s,
                                     const std::vector<ModMatrix>& extra_endos = {});

}  // namespace ptower
