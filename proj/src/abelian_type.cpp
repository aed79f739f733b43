#include "ptower/abelian_type.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <ostream>

#include "ptower/errors.hpp"

namespace ptower {

AbelianType::AbelianType(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  if (std::any_of(exponents_.begin(), exponents_.end(), [](int e) { return e < 0; }))
    throw PreconditionViolation("AbelianType: negative exponent");
  std::erase(exponents_, 0);
  std::sort(exponents_.begin(), exponents_.end(), std::greater<>());
}

long long AbelianType::order_exponent() const {
  return std::accumulate(exponents_.begin(), exponents_.end(), 0LL);
}

AbelianType AbelianType::mod_pk(int k) const {
  if (k < 1) throw PreconditionViolation("mod_pk: k must be >= 1");
  std::vector<int> e = exponents_;
  for (int& f : e) f = std::min(f, k);
  return AbelianType(std::move(e));
}

std::string AbelianType::to_list() const {
  std::string s = "[";
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(exponents_[i]);
  }
  return s + "]";
}

std::string AbelianType::to_pretty(std::uint64_t p) const {
  if (exponents_.empty()) return "trivial";
  std::string s;
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (i) s += " ⊕ ";
    int f = exponents_[i];
    // Spell the modulus out while it is short, otherwise use p^f.
    std::uint64_t q = 1;
    bool small = true;
    for (int k = 0; k < f && small; ++k) {
      if (q > 1'000'000 / p) small = false;
      q *= p;
    }
    if (f == 1 || (small && p < 10))
      s += "Z/" + std::to_string(q);
    else
      s += "Z/" + std::to_string(p) + "^" + std::to_string(f);
  }
  return s;
}

std::ostream& operator<<(std::ostream& os, const AbelianType& t) { return os << t.to_list(); }

int rank_pi(const AbelianType& t, int i) {
  if (i < 1) throw PreconditionViolation("rank_pi: i must be >= 1");
  return static_cast<int>(std::count_if(t.exponents().begin(), t.exponents().end(), [i](int f) { return f >= i; }));
}

}  // namespace ptower
