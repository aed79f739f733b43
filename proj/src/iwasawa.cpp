#include "ptower/iwasawa.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "ptower/errors.hpp"

namespace ptower {

namespace {
// ω_n has p^n coefficients; refuse anything that would not fit in memory.
constexpr std::uint64_t kMaxOmegaDegree = std::uint64_t{1} << 24;
}  // namespace

LambdaElement::LambdaElement(RingParams params, const std::vector<std::int64_t>& coeffs)
    : params_(params) {
  coeffs_.reserve(coeffs.size());
  for (std::int64_t c : coeffs) coeffs_.push_back(params_.reduce(c));
  trim();
}

LambdaElement LambdaElement::from_residues(RingParams params, std::vector<std::uint64_t> coeffs) {
  LambdaElement f(params);
  for (auto& c : coeffs) c %= params.modulus();
  f.coeffs_ = std::move(coeffs);
  f.trim();
  return f;
}

LambdaElement LambdaElement::constant(RingParams params, std::int64_t c) {
  return LambdaElement(params, std::vector<std::int64_t>{c});
}

LambdaElement LambdaElement::monomial(RingParams params, std::size_t k) {
  std::vector<std::uint64_t> c(k + 1, 0);
  c[k] = 1 % params.modulus();
  return from_residues(params, std::move(c));
}

void LambdaElement::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

LambdaElement LambdaElement::truncated(std::size_t degree) const {
  std::vector<std::uint64_t> c(coeffs_.begin(), coeffs_.begin() + std::min(coeffs_.size(), degree + 1));
  return from_residues(params_, std::move(c));
}

LambdaElement LambdaElement::lifted(int precision) const {
  RingParams target = params_.with_precision(precision);
  std::vector<std::uint64_t> c;
  c.reserve(coeffs_.size());
  for (std::uint64_t x : coeffs_) c.push_back(target.reduce(params_.symmetric(x)));
  return from_residues(target, std::move(c));
}

LambdaElement LambdaElement::pow(unsigned k) const {
  LambdaElement result = constant(params_, 1);
  LambdaElement base = *this;
  while (k) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return result;
}

LambdaElement operator+(const LambdaElement& f, const LambdaElement& g) {
  require_same(f.params_, g.params_);
  std::vector<std::uint64_t> c(std::max(f.coeffs_.size(), g.coeffs_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.params_.add(f.residue(i), g.residue(i));
  return LambdaElement::from_residues(f.params_, std::move(c));
}

LambdaElement LambdaElement::operator-() const {
  std::vector<std::uint64_t> c = coeffs_;
  for (auto& x : c) x = params_.neg(x);
  return from_residues(params_, std::move(c));
}

LambdaElement operator-(const LambdaElement& f, const LambdaElement& g) { return f + (-g); }

LambdaElement operator*(const LambdaElement& f, const LambdaElement& g) {
  require_same(f.params_, g.params_);
  if (f.is_zero() || g.is_zero()) return LambdaElement(f.params_);
  const auto& P = f.params_;
  std::vector<std::uint64_t> c(f.coeffs_.size() + g.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < f.coeffs_.size(); ++i) {
    if (f.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < g.coeffs_.size(); ++j)
      c[i + j] = P.add(c[i + j], P.mul(f.coeffs_[i], g.coeffs_[j]));
  }
  return LambdaElement::from_residues(P, std::move(c));
}

LambdaElement operator*(std::uint64_t c, const LambdaElement& f) {
  std::vector<std::uint64_t> out = f.coeffs_;
  for (auto& x : out) x = f.params_.mul(c % f.params_.modulus(), x);
  return LambdaElement::from_residues(f.params_, std::move(out));
}

std::ostream& operator<<(std::ostream& os, const LambdaElement& f) {
  if (f.is_zero()) return os << "0";
  bool first = true;
  for (int i = f.degree(); i >= 0; --i) {
    std::uint64_t c = f.residue(static_cast<std::size_t>(i));
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0 || c != 1) os << c;
    if (i >= 1) os << 'T';
    if (i >= 2) os << '^' << i;
  }
  return os;
}

LambdaElement poly_arith(const LambdaElement& f, const LambdaElement& g, PolyOp op) {
  return op == PolyOp::add ? f + g : f * g;
}

// ---------------------------------------------------------------------------

bool DistinguishedPoly::is_distinguished(const LambdaElement& f) {
  if (f.is_zero()) return false;
  const auto& P = f.params();
  if (f.residues().back() != 1 % P.modulus()) return false;
  for (int i = 0; i < f.degree(); ++i)
    if (P.valuation(f.residue(static_cast<std::size_t>(i))) < 1) return false;
  return true;
}

DistinguishedPoly::DistinguishedPoly(LambdaElement f) : poly_(std::move(f)) {
  if (!is_distinguished(poly_)) throw PreconditionViolation("polynomial is not distinguished");
}

DistinguishedPoly omega(RingParams params, int n) {
  if (n < 0) throw PreconditionViolation("omega: n must be >= 0");
  const std::uint64_t p = params.p();
  const std::uint64_t m = checked_pow(p, n);
  if (m > kMaxOmegaDegree) throw PreconditionViolation("omega: p^n too large to expand");
  const int N = params.precision();

  // binom(m, k) = binom(m, k-1) * (m-k+1) / k, tracked as p^v * unit.
  std::vector<std::uint64_t> coeffs(m, 0);
  std::uint64_t unit = 1 % params.modulus();
  long long v = 0;
  auto split = [p](std::uint64_t x) {
    int e = 0;
    while (x % p == 0) {
      x /= p;
      ++e;
    }
    return std::pair{e, x};
  };
  for (std::uint64_t k = 1; k <= m; ++k) {
    auto [a, w] = split(m - k + 1);
    auto [b, z] = split(k);
    v += a - b;
    unit = params.mul(params.mul(unit, w % params.modulus()), params.inverse(z % params.modulus()));
    coeffs[k - 1] = v >= N ? 0 : params.mul(unit, params.power_of_p(static_cast<int>(v)));
  }
  return DistinguishedPoly(LambdaElement::from_residues(params, std::move(coeffs)));
}

DistinguishedPoly cyclotomic_factor(RingParams params, int m) {
  if (m < 1) throw PreconditionViolation("cyclotomic_factor: m must be >= 1");
  DivMod qr = divmod_distinguished(omega(params, m).poly(), omega(params, m - 1));
  return DistinguishedPoly(qr.quotient);
}

DivMod divmod_monic(const LambdaElement& f, const LambdaElement& monic) {
  require_same(f.params(), monic.params());
  const auto& P = f.params();
  if (monic.is_zero() || monic.residues().back() != 1 % P.modulus())
    throw PreconditionViolation("divmod: divisor is not monic");
  const int d = monic.degree();
  if (f.degree() < d) return {LambdaElement(P), f};
  std::vector<std::uint64_t> r = f.residues();
  std::vector<std::uint64_t> q(static_cast<std::size_t>(f.degree() - d + 1), 0);
  for (int i = f.degree(); i >= d; --i) {
    std::uint64_t c = r[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    q[static_cast<std::size_t>(i - d)] = c;
    for (int j = 0; j <= d; ++j) {
      auto idx = static_cast<std::size_t>(i - d + j);
      r[idx] = P.sub(r[idx], P.mul(c, monic.residue(static_cast<std::size_t>(j))));
    }
  }
  r.resize(static_cast<std::size_t>(d));
  return {LambdaElement::from_residues(P, std::move(q)), LambdaElement::from_residues(P, std::move(r))};
}

DivMod divmod_distinguished(const LambdaElement& f, const DistinguishedPoly& P) {
  return divmod_monic(f, P.poly());
}

MuLambda mu_lambda(const LambdaElement& f) {
  if (f.is_zero()) throw PrecisionExhausted("mu_lambda: polynomial is zero at this precision");
  const auto& P = f.params();
  MuLambda out{P.precision(), 0};
  for (std::size_t i = 0; i < f.residues().size(); ++i) {
    int v = P.valuation(f.residue(i));
    if (v < out.mu) out = {v, static_cast<int>(i)};
  }
  return out;
}

WeierstrassData weierstrass_prepare(const LambdaElement& f, std::size_t trunc) {
  const MuLambda ml = mu_lambda(f);
  const RingParams& full = f.params();
  const std::uint64_t p = full.p();
  const std::uint64_t pmu = full.power_of_p(ml.mu);
  // g = f / p^mu is only known modulo p^{N - mu}.
  const RingParams work = full.with_precision(full.precision() - ml.mu);
  std::vector<std::uint64_t> gc;
  for (std::uint64_t c : f.residues()) gc.push_back(c / pmu);
  const LambdaElement g = LambdaElement::from_residues(work, gc);

  if (ml.lambda == 0) {
    return {ml.mu, 0, DistinguishedPoly(LambdaElement::constant(full, 1)),
            LambdaElement::from_residues(full, g.residues()).truncated(trunc)};
  }

  const auto lam = static_cast<std::size_t>(ml.lambda);
  const RingParams fp = full.with_precision(1);
  // t = (g / T^lambda)^{-1} mod (p, T^lambda)
  std::vector<std::uint64_t> ubar(lam, 0);
  for (std::size_t i = 0; i < lam; ++i) ubar[i] = g.residue(lam + i) % p;
  std::vector<std::uint64_t> t(lam, 0);
  const std::uint64_t u0inv = fp.inverse(ubar[0]);
  for (std::size_t i = 0; i < lam; ++i) {
    std::uint64_t acc = i == 0 ? 1 : 0;
    for (std::size_t j = 1; j <= i; ++j) acc = fp.sub(acc, fp.mul(ubar[j], t[i - j]));
    t[i] = fp.mul(acc, u0inv);
  }

  LambdaElement P = LambdaElement::monomial(work, lam);
  DivMod qr = divmod_monic(g, P);
  for (int iter = 0; !qr.remainder.is_zero(); ++iter) {
    if (iter > work.precision()) throw PrecisionExhausted("weierstrass_prepare: lifting did not converge");
    int j = mu_lambda(qr.remainder).mu;
    const std::uint64_t pj = work.power_of_p(j);
    std::vector<std::uint64_t> e(lam, 0);
    for (std::size_t i = 0; i < lam; ++i) e[i] = (qr.remainder.residue(i) / pj) % p;
    std::vector<std::uint64_t> b(lam, 0);
    for (std::size_t i = 0; i < lam; ++i)
      for (std::size_t k = 0; k <= i; ++k) b[i] = fp.add(b[i], fp.mul(t[k], e[i - k]));
    for (auto& x : b) x = work.mul(x, pj);
    P = P + LambdaElement::from_residues(work, b);
    qr = divmod_monic(g, P);
  }

  return {ml.mu, ml.lambda, DistinguishedPoly(LambdaElement::from_residues(full, P.residues())),
          LambdaElement::from_residues(full, qr.quotient.residues()).truncated(trunc)};
}

// ---------------------------------------------------------------------------

ModMatrix companion_matrix(const LambdaElement& monic) {
  const auto& P = monic.params();
  if (monic.is_zero() || monic.residues().back() != 1 % P.modulus())
    throw PreconditionViolation("companion_matrix: polynomial is not monic");
  const auto d = static_cast<std::size_t>(monic.degree());
  ModMatrix M(P, d, d);
  for (std::size_t i = 0; i + 1 < d; ++i) M(i + 1, i) = 1;
  for (std::size_t i = 0; i < d; ++i) M(i, d - 1) = P.neg(monic.residue(i));
  return M;
}

ModMatrix omega_at(const ModMatrix& M, int n) {
  if (n < 0) throw PreconditionViolation("omega_at: n must be >= 0");
  const auto& P = M.params();
  const ModMatrix I = ModMatrix::identity(P, M.rows());
  ModMatrix W = I;
  ModMatrix S = I + M;
  for (int k = 0; k < n; ++k) {
    ModMatrix sum = I;
    ModMatrix power = I;
    for (std::uint64_t j = 1; j < P.p(); ++j) {
      power = power * S;
      sum = sum + power;
    }
    W = W * sum;
    S = power * S;
  }
  return W;
}

ModMatrix evaluate_at(const LambdaElement& f, const ModMatrix& M) {
  require_same(f.params(), M.params());
  const auto& P = M.params();
  ModMatrix acc(P, M.rows(), M.cols());
  for (int i = f.degree(); i >= 0; --i) {
    acc = acc * M;
    std::uint64_t c = f.residue(static_cast<std::size_t>(i));
    for (std::size_t k = 0; k < M.rows(); ++k) acc(k, k) = P.add(acc(k, k), c);
  }
  return acc;
}

AbelianType companion_quotient(const DistinguishedPoly& P, int n, const CompanionOptions& opts) {
  if (P.degree() < 1) return AbelianType{};
  const std::uint64_t p = P.params().p();
  const int cap = opts.max_precision > 0 ? std::min(opts.max_precision, max_precision_for(p))
                                         : max_precision_for(p);
  int N = std::min(P.params().precision(), cap);
  for (;;) {
    LambdaElement poly = N == P.params().precision() ? P.poly() : P.poly().lifted(N);
    ModMatrix W = omega_at(companion_matrix(poly), n);
    std::vector<int> e = smith_form(W).exponents;
    if (std::none_of(e.begin(), e.end(), [N](int x) { return x >= N; })) return AbelianType(std::move(e));
    if (N >= cap) {
      // A common root with ω_n is a primitive p^m-th root of unity minus 1,
      // so P must be divisible by Φ_{p^m}(1+T) for some m <= n.
      const RingParams rp = poly.params();
      for (int m = 1; m <= n; ++m) {
        std::uint64_t phi = checked_pow(p, m - 1) * (p - 1);
        if (phi > static_cast<std::uint64_t>(P.degree())) break;
        if (divmod_distinguished(poly, cyclotomic_factor(rp, m)).remainder.is_zero())
          throw InfiniteQuotient("Λ/(P, ω_" + std::to_string(n) + ") is infinite: P is divisible by Φ_{p^" +
                                 std::to_string(m) + "}(1+T)");
      }
      throw PrecisionExhausted("companion_order: invariant factor reaches p^" + std::to_string(N) +
                               "; raise the precision cap");
    }
    N = std::min(2 * N, cap);
  }
}

int companion_order(const DistinguishedPoly& P, int n, const CompanionOptions& opts) {
  return static_cast<int>(companion_quotient(P, n, opts).order_exponent());
}

}  // namespace ptower
