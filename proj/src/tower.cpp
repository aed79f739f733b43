#include "ptower/tower.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "ptower/errors.hpp"

namespace ptower {

TowerInstance make_tower(FiniteHModule module, const std::vector<Element>& c_bar_gens, std::optional<int> d) {
  if (d && *d < 1) throw PreconditionViolation("tower length d must be positive");
  if (d && module.order_exponent() > *d)
    throw PreconditionViolation("sigma^{p^d} is not the identity for d = " + std::to_string(*d));
  Submodule c = span(module, c_bar_gens);
  const ModMatrix T = module.sigma_minus_one();
  for (std::size_t i = 0; i < module.rank(); ++i)
    if (!c.contains(module.act(T, module.basis(i))))
      throw PreconditionViolation("(sigma - 1)X is not contained in C̄ (basis vector " + std::to_string(i) + ")");
  return {std::move(module), std::move(c), d};
}

std::vector<long long> LayerReport::exponents() const {
  std::vector<long long> e;
  for (const auto& r : levels) e.push_back(r.e);
  return e;
}

namespace {

void check_level(const TowerInstance& inst, int n) {
  if (n < 0) throw PreconditionViolation("level must be >= 0");
  if (inst.d && n > *inst.d)
    throw LevelOutOfRange("level " + std::to_string(n) + " exceeds tower length " + std::to_string(*inst.d));
}

}  // namespace

Submodule omega_image(const TowerInstance& inst, int n) {
  check_level(inst, n);
  return image_submodule(inst.module.omega_endomorphism(n), inst.c_bar);
}

AbelianType layer(const TowerInstance& inst, int n) { return quotient_type(inst.module, omega_image(inst, n)); }

LayerReport layer_sequence(const TowerInstance& inst, int n_max) {
  check_level(inst, n_max);
  LayerReport report;
  std::optional<Submodule> prev;
  for (int n = 0; n <= n_max; ++n) {
    Submodule cur = omega_image(inst, n);
    if (prev && !is_subset(cur, *prev))
      throw TheoremViolation("omega_" + std::to_string(n) + " C̄ is not inside omega_" + std::to_string(n - 1) +
                             " C̄; the norm map would not be onto");
    AbelianType t = quotient_type(inst.module, cur);
    long long e = t.order_exponent();
    if (!report.stable_from && !report.levels.empty() && report.levels.back().type == t)
      report.stable_from = n - 1;
    report.levels.push_back({n, std::move(t), e});
    prev = std::move(cur);
  }
  return report;
}

namespace {

int effective_depth(const TowerInstance& inst, StabilizationDepth k) {
  if (k && *k < 1) throw PreconditionViolation("stabilization depth k must be >= 1");
  return k ? *k : std::max(inst.module.top_exponent(), 1);
}

bool witness(const TowerInstance& inst, int k) {
  return is_subset(inst.c_bar, p_power_submodule(inst.module, k));
}

void require_levels(const LayerReport& report) {
  if (report.levels.size() < 2) throw PreconditionViolation("stabilization needs levels 0 and 1");
}

StabilizationVerdict finish(StabilizationVerdict v, const char* what, int failing_level) {
  if (v.hypothesis_holds && !v.conclusion_verified)
    throw TheoremViolation(std::string(what) + ": hypothesis holds at levels 0, 1 but level " +
                           std::to_string(failing_level) + " differs");
  if (v.hypothesis_holds && !v.c_in_pkX)
    throw TheoremViolation(std::string(what) + ": hypothesis holds but C̄ is not inside p^k X̄");
  return v;
}

}  // namespace

StabilizationVerdict check_stabilization(const LayerReport& report, const TowerInstance& inst,
                                         StabilizationDepth k) {
  require_levels(report);
  const int depth = effective_depth(inst, k);
  auto reduce = [&](const AbelianType& t) { return k ? t.mod_pk(depth) : t; };
  const AbelianType base = reduce(report.levels[0].type);
  StabilizationVerdict v;
  v.hypothesis_holds = reduce(report.levels[1].type) == base;
  v.c_in_pkX = witness(inst, depth);
  int failing = -1;
  if (v.hypothesis_holds) {
    v.conclusion_verified = true;
    for (const auto& r : report.levels)
      if (reduce(r.type) != base) {
        v.conclusion_verified = false;
        failing = r.n;
        break;
      }
  }
  return finish(v, "stabilization theorem", failing);
}

StabilizationVerdict check_stabilization(const TowerInstance& inst, StabilizationDepth k, int n_max) {
  if (n_max < 1) throw PreconditionViolation("n_max must be >= 1");
  return check_stabilization(layer_sequence(inst, n_max), inst, k);
}

StabilizationVerdict rank_stabilization(const LayerReport& report, const TowerInstance& inst,
                                        StabilizationDepth k) {
  require_levels(report);
  const int depth = effective_depth(inst, k);
  auto same_ranks = [&](const AbelianType& a, const AbelianType& b) {
    for (int i = 1; i <= depth; ++i)
      if (rank_pi(a, i) != rank_pi(b, i)) return false;
    return true;
  };
  const AbelianType& base = report.levels[0].type;
  StabilizationVerdict v;
  v.hypothesis_holds = same_ranks(report.levels[1].type, base);
  v.c_in_pkX = witness(inst, depth);
  int failing = -1;
  if (v.hypothesis_holds) {
    v.conclusion_verified = true;
    for (const auto& r : report.levels)
      if (!same_ranks(r.type, base)) {
        v.conclusion_verified = false;
        failing = r.n;
        break;
      }
  }
  return finish(v, "rank corollary", failing);
}

StabilizationVerdict rank_stabilization(const TowerInstance& inst, StabilizationDepth k, int n_max) {
  if (n_max < 1) throw PreconditionViolation("n_max must be >= 1");
  return rank_stabilization(layer_sequence(inst, n_max), inst, k);
}

// ---------------------------------------------------------------------------

GrowthFit fit_growth(const std::vector<long long>& e, std::uint64_t p) {
  using i128 = __int128;
  if (e.size() < 4) throw PreconditionViolation("fit_growth needs at least four values");
  if (!is_prime(p)) throw PreconditionViolation("fit_growth: p is not prime");
  const int L = static_cast<int>(e.size());
  std::vector<i128> pw(L, 1);
  constexpr i128 limit = static_cast<i128>(1) << 100;
  for (int n = 1; n < L; ++n) pw[n] = pw[n - 1] < limit ? pw[n - 1] * static_cast<i128>(p) : limit;

  const i128 pm1 = static_cast<i128>(p) - 1;
  for (int n0 = 0; n0 + 3 <= L; ++n0) {
    if (pw[n0 + 1] >= limit) break;
    const i128 d0 = e[n0 + 1] - e[n0];
    const i128 d1 = e[n0 + 2] - e[n0 + 1];
    const i128 denom = pm1 * pm1 * pw[n0];
    if ((d1 - d0) % denom != 0) continue;
    const i128 mu = (d1 - d0) / denom;
    const i128 lambda = d0 - mu * pm1 * pw[n0];
    if (mu < 0 || lambda < 0) continue;
    const i128 nu = e[n0] - mu * pw[n0] - lambda * n0;
    bool ok = true;
    for (int n = n0; n < L && ok; ++n) ok = pw[n] < limit && mu * pw[n] + lambda * n + nu == e[n];
    if (ok)
      return {static_cast<long long>(mu), static_cast<long long>(lambda), static_cast<long long>(nu), n0};
  }
  throw NoStableFit("no suffix of length >= 3 fits e_n = mu p^n + lambda n + nu; extend the sequence");
}

ElementarySummand ElementarySummand::p_power(int mu) {
  if (mu < 1) throw PreconditionViolation("p-power summand needs mu >= 1");
  return {mu, std::nullopt, 1};
}

ElementarySummand ElementarySummand::distinguished(DistinguishedPoly P, int power) {
  if (power < 1) throw PreconditionViolation("distinguished summand needs power >= 1");
  if (P.degree() < 1) throw PreconditionViolation("distinguished summand needs deg P >= 1");
  return {0, std::move(P), power};
}

ElementaryGrowth elementary_growth(const ElementaryModule& m, int n_max, const CompanionOptions& opts) {
  if (m.summands.empty()) throw PreconditionViolation("elementary module has no summands");
  if (n_max < 0) throw PreconditionViolation("n_max must be >= 0");
  ElementaryGrowth out{{}, std::nullopt, 0, 0};
  std::vector<std::optional<DistinguishedPoly>> powers;
  for (const auto& s : m.summands) {
    if (s.poly) {
      if (s.poly->params().p() != m.p) throw PreconditionViolation("summand polynomial has the wrong prime");
      powers.emplace_back(DistinguishedPoly(s.poly->poly().pow(static_cast<unsigned>(s.power))));
      out.expected_lambda += static_cast<long long>(s.power) * s.poly->degree();
    } else {
      powers.emplace_back(std::nullopt);
      out.expected_mu += s.mu;
    }
  }
  constexpr std::uint64_t kMaxFactors = 1u << 20;
  for (int n = 0; n <= n_max; ++n) {
    std::vector<int> exps;
    for (std::size_t i = 0; i < m.summands.size(); ++i) {
      if (powers[i]) {
        AbelianType t = companion_quotient(*powers[i], n, opts);
        exps.insert(exps.end(), t.exponents().begin(), t.exponents().end());
      } else {
        // Λ/(p^μ, ω_n) ≅ (Z/p^μ)^{p^n - 1}
        std::uint64_t count = checked_pow(m.p, n) - 1;
        if (count > kMaxFactors) throw BudgetExceeded("Λ/(p^mu, omega_n) has too many cyclic factors to list");
        exps.insert(exps.end(), count, m.summands[i].mu);
      }
    }
    AbelianType t(std::move(exps));
    long long e = t.order_exponent();
    if (!out.report.stable_from && !out.report.levels.empty() && out.report.levels.back().type == t)
      out.report.stable_from = n - 1;
    out.report.levels.push_back({n, std::move(t), e});
  }
  if (out.report.levels.size() >= 4) {
    try {
      out.fit = fit_growth(out.report.exponents(), m.p);
    } catch (const NoStableFit&) {
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

TowerInstance random_instance(std::uint64_t p, const TowerBounds& bounds, std::uint64_t seed) {
  if (!is_prime(p)) throw PreconditionViolation("random_instance: p is not prime");
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  int total = uniform(0, std::max(0, bounds.max_log_order));
  std::vector<int> exps;
  while (total > 0 && static_cast<int>(exps.size()) < bounds.max_rank) {
    bool last = static_cast<int>(exps.size()) + 1 == bounds.max_rank;
    int part = last ? total : uniform(1, total);
    exps.push_back(part);
    total -= part;
  }
  std::sort(exps.begin(), exps.end(), std::greater<>());
  const std::size_t r = exps.size();
  RingParams amb(p, r ? exps.front() : 1);
  auto rand_res = [&] { return std::uniform_int_distribution<std::uint64_t>(0, amb.modulus() - 1)(rng); };

  // σ = 1 + U + p R, U strictly upper triangular; unipotent modulo p so the
  // order is a power of p, with every entry scaled to respect p^{e_i - e_j}.
  ModMatrix sigma = ModMatrix::identity(amb, r);
  const bool use_unipotent = uniform(0, 1) == 1;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      const int gap = std::max(0, exps[i] - exps[j]);
      std::uint64_t v = 0;
      if (j > i && use_unipotent && uniform(0, 2) == 0) v = amb.mul(rand_res(), checked_pow(p, gap) % amb.modulus());
      if (uniform(0, 1) == 1) {
        int shift = gap + 1;
        if (shift < amb.precision()) v = amb.add(v, amb.mul(rand_res(), amb.power_of_p(shift)));
      }
      sigma(i, j) = amb.add(sigma(i, j), v);
    }
  FiniteHModule m = make_module(p, exps, sigma);

  std::optional<int> d;
  if (!bounds.allow_unbounded || uniform(0, 1) == 0) d = std::max(1, m.order_exponent() + uniform(0, 2));

  std::vector<Element> gens;
  const ModMatrix T = m.sigma_minus_one();
  for (std::size_t i = 0; i < r; ++i) gens.push_back(m.act(T, m.basis(i)));
  const int extra = r ? uniform(0, std::max(0, bounds.extra_generators)) : 0;
  for (int k = 0; k < extra; ++k) {
    Element x = m.zero();
    for (std::size_t i = 0; i < r; ++i) x[i] = rand_res() % m.component_modulus(i);
    const int shift = uniform(0, m.top_exponent());
    gens.push_back(m.scale(checked_pow(p, shift), x));
  }
  return make_tower(std::move(m), gens, d);
}

}  // namespace ptower
