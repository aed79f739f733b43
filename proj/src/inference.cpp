#include "ptower/inference.hpp"

#include <algorithm>

#include "ptower/errors.hpp"
#include "ptower/padic.hpp"

namespace ptower {

namespace {

std::string power_text(std::uint64_t p, int k) {
  if (k == 1) return std::to_string(p);
  return std::to_string(p) + "^" + std::to_string(k);
}

}  // namespace

Inference infer(const ObservedTower& obs, std::optional<int> k) {
  if (!obs.ramhyp_asserted)
    throw RamHypNotAsserted(
        "refusing to infer: the ramification hypothesis (inertia groups of shape H ⋊ Δ_v, one prime totally "
        "ramified) must be asserted with --ramhyp");
  if (!is_prime(obs.p)) throw PreconditionViolation("observed tower: p is not prime");
  if (k && *k < 1) throw PreconditionViolation("k must be >= 1");

  std::vector<ObservedLevel> levels = obs.levels;
  std::sort(levels.begin(), levels.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i].n != static_cast<int>(i))
      throw MissingLevels("observed levels must be distinct and contiguous from n=0");
  if (levels.size() < 2) throw MissingLevels("observations at n=0 and n=1 are required");
  for (auto& l : levels) {
    if (!l.type && !l.e) throw MissingLevels("level " + std::to_string(l.n) + " has neither a type nor e_n");
    if (l.type && l.e && l.type->order_exponent() != *l.e)
      throw PreconditionViolation("level " + std::to_string(l.n) + ": e_n disagrees with the type");
    if (l.type) l.e = l.type->order_exponent();
  }

  const ObservedLevel& a0 = levels[0];
  const ObservedLevel& a1 = levels[1];
  Inference out;
  out.k = k;
  if (!k) {
    // With equal orders the surjective norm A_1 -> A_0 is already an isomorphism.
    out.applicable = a0.type && a1.type ? *a0.type == *a1.type : *a0.e == *a1.e;
    if (out.applicable) {
      if (a0.type || a1.type) {
        out.predicted = a0.type ? *a0.type : *a1.type;
        out.summary = out.predicted.is_trivial() ? "A_n trivial for all n"
                                                 : "A_n ≅ " + out.predicted.to_pretty(obs.p) + " for all n ≥ 1";
      } else {
        out.summary = *a0.e == 0 ? "A_n trivial for all n"
                                 : "|A_n| = " + power_text(obs.p, static_cast<int>(*a0.e)) + " for all n ≥ 1";
      }
    }
  } else {
    if (!a0.type || !a1.type) throw MissingLevels("stabilization mod p^k needs the types at n=0 and n=1");
    out.applicable = a0.type->mod_pk(*k) == a1.type->mod_pk(*k);
    if (out.applicable) {
      out.predicted = a0.type->mod_pk(*k);
      const std::string q = power_text(obs.p, *k);
      out.summary = out.predicted.is_trivial() ? "A_n/" + q + "A_n trivial for all n"
                                               : "A_n/" + q + "A_n ≅ " + out.predicted.to_pretty(obs.p) +
                                                     " for all n ≥ 1";
    }
  }
  if (!out.applicable) {
    out.summary = "theorem not applicable";
    return out;
  }

  for (std::size_t i = 2; i < levels.size(); ++i) {
    const ObservedLevel& l = levels[i];
    bool ok = true;
    if (!k) {
      ok = *l.e == *a0.e && (!l.type || !(a0.type || a1.type) || *l.type == out.predicted);
    } else if (l.type) {
      ok = l.type->mod_pk(*k) == out.predicted;
    }
    if (!ok)
      throw TheoremViolation("observation at n=" + std::to_string(l.n) +
                             " contradicts the predicted stabilization; the asserted hypothesis or the data is wrong");
  }
  return out;
}

}  // namespace ptower
