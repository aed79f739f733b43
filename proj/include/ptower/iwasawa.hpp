#pragma once

// Polynomials in T = h - 1 over Z/p^N, standing in for elements of the group
// ring Z_p[H] at finite precision.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "ptower/abelian_type.hpp"
#include "ptower/padic.hpp"

namespace ptower {

class LambdaElement {
 public:
  explicit LambdaElement(RingParams params) : params_(params) {}
  /// Coefficients low-to-high; reduced mod p^N and trimmed.
  LambdaElement(RingParams params, const std::vector<std::int64_t>& coeffs);
  static LambdaElement from_residues(RingParams params, std::vector<std::uint64_t> coeffs);
  static LambdaElement constant(RingParams params, std::int64_t c);
  /// T^k
  static LambdaElement monomial(RingParams params, std::size_t k);

  const RingParams& params() const { return params_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero element.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<std::uint64_t>& residues() const { return coeffs_; }
  std::uint64_t residue(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }
  ModularInt coeff(std::size_t i) const { return ModularInt::from_residue(params_, residue(i)); }

  /// Drop every T^i with i > degree.
  LambdaElement truncated(std::size_t degree) const;
  /// Same integer coefficients read at a different precision, using the
  /// symmetric representative so small negative coefficients survive lifting.
  LambdaElement lifted(int precision) const;
  LambdaElement pow(unsigned k) const;

  friend LambdaElement operator+(const LambdaElement& f, const LambdaElement& g);
  friend LambdaElement operator-(const LambdaElement& f, const LambdaElement& g);
  friend LambdaElement operator*(const LambdaElement& f, const LambdaElement& g);
  LambdaElement operator-() const;
  friend LambdaElement operator*(std::uint64_t c, const LambdaElement& f);
  friend bool operator==(const LambdaElement&, const LambdaElement&) = default;

 private:
  void trim();
  RingParams params_;
  std::vector<std::uint64_t> coeffs_;
};

std::ostream& operator<<(std::ostream& os, const LambdaElement& f);

enum class PolyOp { add, mul };
LambdaElement poly_arith(const LambdaElement& f, const LambdaElement& g, PolyOp op);

/// Monic with every lower coefficient divisible by p.
class DistinguishedPoly {
 public:
  /// Throws PreconditionViolation when f is not distinguished.
  explicit DistinguishedPoly(LambdaElement f);
  static bool is_distinguished(const LambdaElement& f);

  const LambdaElement& poly() const { return poly_; }
  int degree() const { return poly_.degree(); }
  const RingParams& params() const { return poly_.params(); }

  friend bool operator==(const DistinguishedPoly&, const DistinguishedPoly&) = default;

 private:
  LambdaElement poly_;
};

/// (h^{p^n} - 1)/(h - 1) = sum_{k=1}^{p^n} binom(p^n, k) T^{k-1}.
DistinguishedPoly omega(RingParams params, int n);

/// ω_m / ω_{m-1} = Φ_{p^m}(1 + T), for m >= 1.
DistinguishedPoly cyclotomic_factor(RingParams params, int m);

struct DivMod {
  LambdaElement quotient;
  LambdaElement remainder;
};
/// f = q * P + r with deg r < deg P.
DivMod divmod_distinguished(const LambdaElement& f, const DistinguishedPoly& P);
/// Division by any monic polynomial (P need not be distinguished).
DivMod divmod_monic(const LambdaElement& f, const LambdaElement& monic);

struct MuLambda {
  int mu;
  int lambda;
  friend bool operator==(const MuLambda&, const MuLambda&) = default;
};
/// mu = least coefficient valuation, lambda = first index attaining it.
/// Throws PrecisionExhausted for f = 0.
MuLambda mu_lambda(const LambdaElement& f);

struct WeierstrassData {
  int mu;
  int lambda;
  DistinguishedPoly distinguished;
  /// Unit power series, truncated to the requested T-degree.
  LambdaElement unit;
};

/// f = p^mu * unit * distinguished modulo (p^N, T^{trunc+1}).
WeierstrassData weierstrass_prepare(const LambdaElement& f, std::size_t trunc);

/// Companion matrix of a monic polynomial (multiplication by T on
/// Z/p^N[T]/(P) in the basis 1, T, ..., T^{deg-1}).
ModMatrix companion_matrix(const LambdaElement& monic);

/// ω_n evaluated at h = I + M, via the product ω_{k+1} = ω_k * (1 + h^{p^k} + ... ).
ModMatrix omega_at(const ModMatrix& M, int n);

/// Horner evaluation of an arbitrary polynomial f(T) at T = M.
ModMatrix evaluate_at(const LambdaElement& f, const ModMatrix& M);

struct CompanionOptions {
  /// 0 selects max_precision_for(p).
  int max_precision = 0;
};

/// Isomorphism type of Λ/(P, ω_n) ≅ Z_p^λ / ω_n(M_P) Z_p^λ, escalating the
/// working precision while any invariant factor is capped. Throws
/// InfiniteQuotient when P shares a factor with ω_n, PrecisionExhausted when
/// the cap is reached otherwise.
AbelianType companion_quotient(const DistinguishedPoly& P, int n, const CompanionOptions& opts = {});

/// log_p |Λ/(P, ω_n)|.
int companion_order(const DistinguishedPoly& P, int n, const CompanionOptions& opts = {});

}  // namespace ptower
