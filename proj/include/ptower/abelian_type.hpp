#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ptower {

/// Isomorphism type of a finite abelian p-group: ⊕ Z/p^{f_i} with
/// f_1 >= f_2 >= ... >= 1. The trivial group is the empty list.
class AbelianType {
 public:
  AbelianType() = default;
  /// Any order, zeros dropped; stored descending.
  explicit AbelianType(std::vector<int> exponents);

  const std::vector<int>& exponents() const { return exponents_; }
  bool is_trivial() const { return exponents_.empty(); }
  /// log_p of the order.
  long long order_exponent() const;
  /// Largest exponent (0 for the trivial group).
  int exponent() const { return exponents_.empty() ? 0 : exponents_.front(); }

  /// Type of A / p^k A.
  AbelianType mod_pk(int k) const;

  /// "[2,1]"
  std::string to_list() const;
  /// "Z/9 ⊕ Z/3", "Z/37^2", "trivial"
  std::string to_pretty(std::uint64_t p) const;

  friend bool operator==(const AbelianType&, const AbelianType&) = default;
  friend auto operator<=>(const AbelianType&, const AbelianType&) = default;

 private:
  std::vector<int> exponents_;
};

std::ostream& operator<<(std::ostream& os, const AbelianType& t);

/// dim_{F_p} p^{i-1}A / p^i A, i.e. the number of f_j >= i.
int rank_pi(const AbelianType& t, int i);

}  // namespace ptower
