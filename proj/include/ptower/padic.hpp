#pragma once

// Arithmetic in Z/p^N with valuation tracking, and matrices over that ring.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace ptower {

/// Deterministic primality test (trial division; p is always small here).
bool is_prime(std::uint64_t n);

/// Largest N with p^N <= 2^62, the widest modulus the ring supports.
int max_precision_for(std::uint64_t p);

/// Integer power with overflow checking; throws PreconditionViolation.
std::uint64_t checked_pow(std::uint64_t base, int exp);

/// The ring Z/p^N. Precision is fixed at construction.
class RingParams {
 public:
  RingParams(std::uint64_t p, int precision);

  std::uint64_t p() const { return p_; }
  int precision() const { return precision_; }
  std::uint64_t modulus() const { return modulus_; }

  /// Same prime, different precision.
  RingParams with_precision(int precision) const { return {p_, precision}; }

  std::uint64_t reduce(std::int64_t v) const;
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : modulus_ - a; }
  /// Largest k <= N with p^k | a; N for a = 0.
  int valuation(std::uint64_t a) const;
  /// Throws NonUnit when p | a.
  std::uint64_t inverse(std::uint64_t a) const;
  /// Representative in (-p^N/2, p^N/2].
  std::int64_t symmetric(std::uint64_t a) const;
  /// p^k for 0 <= k <= N (p^N returned as the integer, not reduced).
  std::uint64_t power_of_p(int k) const;

  friend bool operator==(const RingParams&, const RingParams&) = default;

 private:
  std::uint64_t p_;
  int precision_;
  std::uint64_t modulus_;
};

/// Throws PreconditionViolation unless a == b.
void require_same(const RingParams& a, const RingParams& b);

class ModularInt {
 public:
  ModularInt(RingParams params, std::int64_t value)
      : params_(params), value_(params.reduce(value)) {}
  static ModularInt from_residue(RingParams params, std::uint64_t residue);

  const RingParams& params() const { return params_; }
  std::uint64_t value() const { return value_; }

  int valuation() const { return params_.valuation(value_); }
  bool is_unit() const { return valuation() == 0; }
  bool is_zero() const { return value_ == 0; }
  ModularInt inverse() const;

  friend ModularInt operator+(const ModularInt& a, const ModularInt& b);
  friend ModularInt operator-(const ModularInt& a, const ModularInt& b);
  friend ModularInt operator*(const ModularInt& a, const ModularInt& b);
  ModularInt operator-() const { return from_residue(params_, params_.neg(value_)); }
  friend bool operator==(const ModularInt&, const ModularInt&) = default;

 private:
  RingParams params_;
  std::uint64_t value_;
};

std::ostream& operator<<(std::ostream& os, const ModularInt& x);

enum class RingOp { add, sub, mul };
ModularInt ring_arith(const ModularInt& a, const ModularInt& b, RingOp op);

/// Dense row-major matrix over Z/p^N.
class ModMatrix {
 public:
  ModMatrix(RingParams params, std::size_t rows, std::size_t cols);
  ModMatrix(RingParams params, const std::vector<std::vector<std::int64_t>>& rows);
  static ModMatrix identity(RingParams params, std::size_t n);

  const RingParams& params() const { return params_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::uint64_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  ModularInt entry(std::size_t i, std::size_t j) const {
    return ModularInt::from_residue(params_, (*this)(i, j));
  }
  std::span<const std::uint64_t> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  /// row[dst] += c * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, std::uint64_t c);
  /// col[dst] += c * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, std::uint64_t c);
  void scale_row(std::size_t i, std::uint64_t c);

  bool is_zero() const;
  ModMatrix transpose() const;

  friend ModMatrix operator*(const ModMatrix& a, const ModMatrix& b);
  friend ModMatrix operator+(const ModMatrix& a, const ModMatrix& b);
  friend ModMatrix operator-(const ModMatrix& a, const ModMatrix& b);
  friend bool operator==(const ModMatrix&, const ModMatrix&) = default;

 private:
  RingParams params_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint64_t> data_;
};

std::ostream& operator<<(std::ostream& os, const ModMatrix& m);

/// Matrix-vector product M * v.
std::vector<std::uint64_t> mat_vec(const ModMatrix& m, std::span<const std::uint64_t> v);

/// U * M * V = diag(p^{e_1}, p^{e_2}, ...) with e_1 <= e_2 <= ... and
/// min(rows, cols) entries. An exponent equal to the precision N stands for
/// "indistinguishable from zero".
struct SmithForm {
  std::vector<int> exponents;
  ModMatrix U;
  ModMatrix V;
  ModMatrix V_inv;

  ModMatrix diagonal() const;
};

/// Pivots on the entry of minimal valuation, ties to the lowest (row, col).
SmithForm smith_form(const ModMatrix& m);

/// Invariants of (Z/p^N)^cols modulo the row span of m, as exponents in
/// [0, N], one per column. Exponent 0 means the coordinate is killed.
std::vector<int> cokernel_exponents(const ModMatrix& m);

/// Generators of {x : m * x = 0} (column vectors, length m.cols()).
std::vector<std::vector<std::uint64_t>> kernel(const ModMatrix& m);

/// Inverse of a square matrix; throws NonUnit when it is singular mod p.
ModMatrix inverse(const ModMatrix& m);

}  // namespace ptower
