#include "ptower/padic.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "ptower/errors.hpp"

namespace ptower {

namespace {
constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 62;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2)
    if (n % d == 0) return false;
  return true;
}

int max_precision_for(std::uint64_t p) {
  int n = 0;
  std::uint64_t q = 1;
  while (q <= kMaxModulus / p) {
    q *= p;
    ++n;
  }
  return n;
}

std::uint64_t checked_pow(std::uint64_t base, int exp) {
  if (exp < 0) throw PreconditionViolation("checked_pow: negative exponent");
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
      throw PreconditionViolation("checked_pow: " + std::to_string(base) + "^" +
                                  std::to_string(exp) + " overflows");
    r *= base;
  }
  return r;
}

RingParams::RingParams(std::uint64_t p, int precision) : p_(p), precision_(precision) {
  if (!is_prime(p)) throw PreconditionViolation("RingParams: " + std::to_string(p) + " is not prime");
  if (precision < 1) throw PreconditionViolation("RingParams: precision must be >= 1");
  if (precision > max_precision_for(p))
    throw PreconditionViolation("RingParams: p^N exceeds 2^62 (p=" + std::to_string(p) +
                                ", N=" + std::to_string(precision) + ")");
  modulus_ = checked_pow(p, precision);
}

std::uint64_t RingParams::reduce(std::int64_t v) const {
  auto m = static_cast<std::int64_t>(modulus_);
  std::int64_t r = v % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t RingParams::add(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t s = a + b;
  return s >= modulus_ ? s - modulus_ : s;
}

std::uint64_t RingParams::sub(std::uint64_t a, std::uint64_t b) const {
  return a >= b ? a - b : a + (modulus_ - b);
}

std::uint64_t RingParams::mul(std::uint64_t a, std::uint64_t b) const {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % modulus_);
}

int RingParams::valuation(std::uint64_t a) const {
  a %= modulus_;
  if (a == 0) return precision_;
  int k = 0;
  while (a % p_ == 0) {
    a /= p_;
    ++k;
  }
  return k;
}

std::uint64_t RingParams::inverse(std::uint64_t a) const {
  a %= modulus_;
  if (a % p_ == 0) throw NonUnit("inverse: " + std::to_string(a) + " is divisible by " + std::to_string(p_));
  // Extended Euclid on signed 128-bit to avoid overflow near 2^62.
  __int128 r0 = static_cast<__int128>(modulus_), r1 = a;
  __int128 t0 = 0, t1 = 1;
  while (r1 != 0) {
    __int128 q = r0 / r1;
    __int128 r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    __int128 t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  __int128 m = static_cast<__int128>(modulus_);
  t0 %= m;
  if (t0 < 0) t0 += m;
  return static_cast<std::uint64_t>(t0);
}

std::int64_t RingParams::symmetric(std::uint64_t a) const {
  a %= modulus_;
  if (a > modulus_ / 2) return -static_cast<std::int64_t>(modulus_ - a);
  return static_cast<std::int64_t>(a);
}

std::uint64_t RingParams::power_of_p(int k) const {
  if (k < 0 || k > precision_) throw PreconditionViolation("power_of_p: exponent out of range");
  return checked_pow(p_, k);
}

void require_same(const RingParams& a, const RingParams& b) {
  if (!(a == b))
    throw PreconditionViolation("ring parameter mismatch: (p=" + std::to_string(a.p()) + ", N=" +
                                std::to_string(a.precision()) + ") vs (p=" + std::to_string(b.p()) +
                                ", N=" + std::to_string(b.precision()) + ")");
}

ModularInt ModularInt::from_residue(RingParams params, std::uint64_t residue) {
  ModularInt x(params, 0);
  x.value_ = residue % params.modulus();
  return x;
}

ModularInt ModularInt::inverse() const { return from_residue(params_, params_.inverse(value_)); }

ModularInt operator+(const ModularInt& a, const ModularInt& b) {
  require_same(a.params_, b.params_);
  return ModularInt::from_residue(a.params_, a.params_.add(a.value_, b.value_));
}

ModularInt operator-(const ModularInt& a, const ModularInt& b) {
  require_same(a.params_, b.params_);
  return ModularInt::from_residue(a.params_, a.params_.sub(a.value_, b.value_));
}

ModularInt operator*(const ModularInt& a, const ModularInt& b) {
  require_same(a.params_, b.params_);
  return ModularInt::from_residue(a.params_, a.params_.mul(a.value_, b.value_));
}

std::ostream& operator<<(std::ostream& os, const ModularInt& x) { return os << x.value(); }

ModularInt ring_arith(const ModularInt& a, const ModularInt& b, RingOp op) {
  switch (op) {
    case RingOp::add: return a + b;
    case RingOp::sub: return a - b;
    case RingOp::mul: return a * b;
  }
  throw PreconditionViolation("ring_arith: unknown op");
}

// ---------------------------------------------------------------------------

ModMatrix::ModMatrix(RingParams params, std::size_t rows, std::size_t cols)
    : params_(params), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

ModMatrix::ModMatrix(RingParams params, const std::vector<std::vector<std::int64_t>>& rows)
    : ModMatrix(params, rows.size(), rows.empty() ? 0 : rows.front().size()) {
  for (std::size_t i = 0; i < rows_; ++i) {
    if (rows[i].size() != cols_) throw PreconditionViolation("ModMatrix: ragged rows");
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = params_.reduce(rows[i][j]);
  }
}

ModMatrix ModMatrix::identity(RingParams params, std::size_t n) {
  ModMatrix m(params, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = params.reduce(1);
  return m;
}

void ModMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(data_.begin() + a * cols_, data_.begin() + (a + 1) * cols_, data_.begin() + b * cols_);
}

void ModMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void ModMatrix::add_row_multiple(std::size_t dst, std::size_t src, std::uint64_t c) {
  if (c % params_.modulus() == 0) return;
  for (std::size_t j = 0; j < cols_; ++j)
    (*this)(dst, j) = params_.add((*this)(dst, j), params_.mul(c, (*this)(src, j)));
}

void ModMatrix::add_col_multiple(std::size_t dst, std::size_t src, std::uint64_t c) {
  if (c % params_.modulus() == 0) return;
  for (std::size_t i = 0; i < rows_; ++i)
    (*this)(i, dst) = params_.add((*this)(i, dst), params_.mul(c, (*this)(i, src)));
}

void ModMatrix::scale_row(std::size_t i, std::uint64_t c) {
  for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = params_.mul(c, (*this)(i, j));
}

bool ModMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](std::uint64_t v) { return v == 0; });
}

ModMatrix ModMatrix::transpose() const {
  ModMatrix t(params_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

ModMatrix operator*(const ModMatrix& a, const ModMatrix& b) {
  require_same(a.params_, b.params_);
  if (a.cols_ != b.rows_) throw PreconditionViolation("matrix product: dimension mismatch");
  const auto& P = a.params_;
  ModMatrix c(P, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      std::uint64_t aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) = P.add(c(i, j), P.mul(aik, b(k, j)));
    }
  return c;
}

ModMatrix operator+(const ModMatrix& a, const ModMatrix& b) {
  require_same(a.params_, b.params_);
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw PreconditionViolation("matrix sum: dimension mismatch");
  ModMatrix c = a;
  for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] = a.params_.add(a.data_[k], b.data_[k]);
  return c;
}

ModMatrix operator-(const ModMatrix& a, const ModMatrix& b) {
  require_same(a.params_, b.params_);
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw PreconditionViolation("matrix difference: dimension mismatch");
  ModMatrix c = a;
  for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] = a.params_.sub(a.data_[k], b.data_[k]);
  return c;
}

std::ostream& operator<<(std::ostream& os, const ModMatrix& m) {
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
    os << ']';
  }
  return os << ']';
}

std::vector<std::uint64_t> mat_vec(const ModMatrix& m, std::span<const std::uint64_t> v) {
  if (v.size() != m.cols()) throw PreconditionViolation("apply: dimension mismatch");
  const auto& P = m.params();
  std::vector<std::uint64_t> out(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] = P.add(out[i], P.mul(m(i, j), v[j]));
  return out;
}

// ---------------------------------------------------------------------------

ModMatrix SmithForm::diagonal() const {
  const auto& P = U.params();
  ModMatrix d(P, U.rows(), V.rows());
  for (std::size_t t = 0; t < exponents.size(); ++t)
    d(t, t) = exponents[t] >= P.precision() ? 0 : P.power_of_p(exponents[t]);
  return d;
}

SmithForm smith_form(const ModMatrix& input) {
  const RingParams& P = input.params();
  const int N = P.precision();
  const std::size_t R = input.rows(), C = input.cols();
  ModMatrix M = input;
  SmithForm out{{}, ModMatrix::identity(P, R), ModMatrix::identity(P, C), ModMatrix::identity(P, C)};
  const std::size_t steps = std::min(R, C);
  out.exponents.reserve(steps);

  for (std::size_t t = 0; t < steps; ++t) {
    int best = N;
    std::size_t bi = t, bj = t;
    for (std::size_t i = t; i < R && best > 0; ++i)
      for (std::size_t j = t; j < C; ++j) {
        int v = P.valuation(M(i, j));
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    if (best == N) {
      out.exponents.resize(steps, N);
      break;
    }
    M.swap_rows(t, bi);
    out.U.swap_rows(t, bi);
    M.swap_cols(t, bj);
    out.V.swap_cols(t, bj);
    out.V_inv.swap_rows(t, bj);

    // Normalise the pivot to exactly p^best.
    const std::uint64_t pk = P.power_of_p(best);
    const std::uint64_t unit = M(t, t) / pk;
    const std::uint64_t unit_inv = P.inverse(unit);
    M.scale_row(t, unit_inv);
    out.U.scale_row(t, unit_inv);

    for (std::size_t i = t + 1; i < R; ++i) {
      std::uint64_t x = M(i, t);
      if (x == 0) continue;
      std::uint64_t c = P.neg(x / pk);
      M.add_row_multiple(i, t, c);
      out.U.add_row_multiple(i, t, c);
    }
    for (std::size_t j = t + 1; j < C; ++j) {
      std::uint64_t x = M(t, j);
      if (x == 0) continue;
      std::uint64_t c = x / pk;
      // col_j -= c * col_t ; V_inv: row_t += c * row_j
      M.add_col_multiple(j, t, P.neg(c));
      out.V.add_col_multiple(j, t, P.neg(c));
      out.V_inv.add_row_multiple(t, j, c);
    }
    out.exponents.push_back(best);
  }
  return out;
}

std::vector<int> cokernel_exponents(const ModMatrix& m) {
  std::vector<int> e = smith_form(m).exponents;
  e.resize(m.cols(), m.params().precision());
  return e;
}

std::vector<std::vector<std::uint64_t>> kernel(const ModMatrix& m) {
  const RingParams& P = m.params();
  const int N = P.precision();
  SmithForm s = smith_form(m);
  std::vector<std::vector<std::uint64_t>> gens;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    int d = j < s.exponents.size() ? s.exponents[j] : N;
    if (d == 0) continue;
    std::uint64_t scale = d >= N ? 1 : P.power_of_p(N - d);
    std::vector<std::uint64_t> g(m.cols());
    for (std::size_t i = 0; i < m.cols(); ++i) g[i] = P.mul(s.V(i, j), scale);
    gens.push_back(std::move(g));
  }
  return gens;
}

ModMatrix inverse(const ModMatrix& m) {
  if (m.rows() != m.cols()) throw PreconditionViolation("inverse: matrix is not square");
  const RingParams& P = m.params();
  const std::size_t n = m.rows();
  ModMatrix a = m;
  ModMatrix inv = ModMatrix::identity(P, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a(piv, c) % P.p() == 0) ++piv;
    if (piv == n) throw NonUnit("inverse: matrix is singular modulo p");
    a.swap_rows(c, piv);
    inv.swap_rows(c, piv);
    std::uint64_t s = P.inverse(a(c, c));
    a.scale_row(c, s);
    inv.scale_row(c, s);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      std::uint64_t f = P.neg(a(i, c));
      a.add_row_multiple(i, c, f);
      inv.add_row_multiple(i, c, f);
    }
  }
  return inv;
}

}  // namespace ptower
