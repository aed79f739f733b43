#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "ptower/errors.hpp"
#include "ptower/module.hpp"

using namespace ptower;

namespace {

// Enumerate every element of X = ⊕ Z/p^{e_i}.
std::vector<Element> all_elements(const FiniteHModule& m) {
  std::vector<Element> out{m.zero()};
  for (std::size_t i = 0; i < m.rank(); ++i) {
    std::vector<Element> next;
    for (const auto& x : out)
      for (std::uint64_t v = 0; v < m.component_modulus(i); ++v) {
        Element y = x;
        y[i] = v;
        next.push_back(y);
      }
    out = std::move(next);
  }
  return out;
}

// Closure of gens under addition and sigma, by breadth-first search.
std::set<Element> brute_span(const FiniteHModule& m, const std::vector<Element>& gens, bool use_sigma) {
  std::set<Element> seen{m.zero()};
  std::vector<Element> frontier{m.zero()};
  std::vector<Element> moves;
  for (const auto& g : gens) moves.push_back(m.reduce_residues(g));
  while (!frontier.empty()) {
    std::vector<Element> next;
    for (const auto& x : frontier) {
      std::vector<Element> cand;
      for (const auto& g : moves) cand.push_back(m.add(x, g));
      if (use_sigma) cand.push_back(m.act(m.sigma(), x));
      for (auto& y : cand)
        if (seen.insert(y).second) next.push_back(y);
    }
    frontier = std::move(next);
  }
  return seen;
}

// |p^{i-1}A / p^i A| computed by enumerating A = X/S as cosets.
int brute_rank(const FiniteHModule& m, const std::set<Element>& S, int i) {
  auto coset_count = [&](int k) {
    std::set<std::set<Element>> cosets;
    std::uint64_t pk = checked_pow(m.p(), k);
    std::set<Element> image;
    for (const auto& x : all_elements(m)) image.insert(m.scale(pk, x));
    // |p^k A| = |p^k X + S| / |S|
    std::vector<Element> gens(image.begin(), image.end());
    gens.insert(gens.end(), S.begin(), S.end());
    return brute_span(m, gens, false).size() / S.size();
  };
  std::size_t a = coset_count(i - 1), b = coset_count(i);
  int r = 0;
  for (std::size_t q = a / b; q > 1; q /= m.p()) ++r;
  return r;
}

FiniteHModule random_module(std::uint64_t p, std::mt19937_64& rng, int max_log) {
  std::vector<int> e;
  int budget = max_log;
  while (budget > 0 && (e.empty() || rng() % 3)) {
    int x = 1 + static_cast<int>(rng() % budget);
    e.push_back(x);
    budget -= x;
  }
  std::sort(e.begin(), e.end(), std::greater<>());
  RingParams amb(p, e.empty() ? 1 : e.front());
  ModMatrix s = ModMatrix::identity(amb, e.size());
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < e.size(); ++j) {
      std::uint64_t scale = p * checked_pow(p, std::max(0, e[i] - e[j]));
      s(i, j) = amb.add(s(i, j), amb.mul(scale % amb.modulus(), rng() % amb.modulus()));
    }
  return make_module(p, e, s);
}

}  // namespace

TEST(MakeModule, SpecExamples) {
  FiniteHModule m = make_module(3, {2}, {{4}});
  EXPECT_EQ(m.order_exponent(), 1);
  EXPECT_EQ(make_module(5, {3, 1, 1}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}).order_exponent(), 0);
  EXPECT_THROW(make_module(3, {2, 1}, {{1, 1}, {0, 1}}), WellDefinednessViolation);
}

TEST(MakeModule, Validation) {
  EXPECT_THROW(make_module(3, {1}, {{3}}), NotAutomorphism);
  EXPECT_THROW(make_module(3, {1, 2}, {{1, 0}, {0, 1}}), PreconditionViolation);
  // Order 2 element on Z/3 is not of p-power order.
  EXPECT_THROW(make_module(3, {1}, {{2}}), OrderNotPPower);
  EXPECT_EQ(make_module(3, {1, 1}, {{1, 1}, {0, 1}}).order_exponent(), 1);
  // Unipotent on (Z/2)^3 with a full Jordan block has order 4.
  EXPECT_EQ(make_module(2, {1, 1, 1}, {{1, 1, 0}, {0, 1, 1}, {0, 0, 1}}).order_exponent(), 2);
  FiniteHModule trivial = make_module(7, {}, std::vector<std::vector<std::int64_t>>{});
  EXPECT_EQ(trivial.rank(), 0u);
  EXPECT_TRUE(trivial.type().is_trivial());
}

TEST(LambdaAct, SpecExamples) {
  FiniteHModule m = make_module(3, {2}, {{4}});
  RingParams R(3, 4);
  Element x{5};
  EXPECT_EQ(lambda_act(m, LambdaElement::constant(R, 1), x), x);
  EXPECT_EQ(lambda_act(m, LambdaElement::monomial(R, 1), x), (Element{15 % 9}));
  FiniteHModule id = make_module(3, {2, 1}, {{1, 0}, {0, 1}});
  EXPECT_EQ(lambda_act(id, omega(R, 1).poly(), Element{2, 1}), (Element{6, 0}));
  EXPECT_EQ(lambda_act(m, omega(R, 1).poly(), Element{1}), (Element{3}));
}

TEST(LambdaAct, RingActionLaws) {
  std::mt19937_64 rng(31);
  for (std::uint64_t p : {2u, 3u}) {
    RingParams R(p, 6);
    for (int t = 0; t < 60; ++t) {
      FiniteHModule m = random_module(p, rng, 5);
      if (m.rank() == 0) continue;
      auto rp = [&] {
        std::vector<std::uint64_t> c(1 + rng() % 4);
        for (auto& v : c) v = rng() % R.modulus();
        return LambdaElement::from_residues(R, c);
      };
      LambdaElement f = rp(), g = rp();
      Element x = m.zero();
      for (std::size_t i = 0; i < m.rank(); ++i) x[i] = rng() % m.component_modulus(i);
      EXPECT_EQ(lambda_act(m, f * g, x), lambda_act(m, f, lambda_act(m, g, x)));
      EXPECT_EQ(lambda_act(m, f + g, x), m.add(lambda_act(m, f, x), lambda_act(m, g, x)));
    }
  }
}

TEST(OmegaEndomorphism, AgreesWithPolynomialEvaluation) {
  std::mt19937_64 rng(32);
  RingParams R(3, 8);
  for (int t = 0; t < 40; ++t) {
    FiniteHModule m = random_module(3, rng, 5);
    for (int n = 0; n <= 3; ++n) {
      for (std::size_t i = 0; i < m.rank(); ++i) {
        Element b = m.basis(i);
        EXPECT_EQ(m.act(m.omega_endomorphism(n), b), lambda_act(m, omega(R, n).poly(), b));
      }
    }
  }
}

TEST(Span, SpecExamples) {
  FiniteHModule m = make_module(3, {2, 1}, {{1, 0}, {0, 1}});
  EXPECT_TRUE(span(m, {}).is_zero());
  EXPECT_EQ(span(m, {m.basis(0), m.basis(1)}).log_order(), m.log_order());
  Submodule s = span(m, {{3, 0}, {0, 1}});
  EXPECT_EQ(s.log_order(), 2);
  EXPECT_EQ(quotient_type(m, s), AbelianType({1}));
  EXPECT_EQ(quotient_type(m, zero_submodule(m)), AbelianType({2, 1}));
  EXPECT_TRUE(quotient_type(m, full_submodule(m)).is_trivial());
}

TEST(Span, MatchesBruteForceClosure) {
  std::mt19937_64 rng(33);
  for (std::uint64_t p : {2u, 3u}) {
    for (int t = 0; t < 80; ++t) {
      FiniteHModule m = random_module(p, rng, p == 2 ? 6 : 4);
      std::vector<Element> gens(rng() % 3);
      for (auto& g : gens) {
        g = m.zero();
        for (std::size_t i = 0; i < m.rank(); ++i) g[i] = rng() % m.component_modulus(i);
      }
      Submodule s = span(m, gens);
      std::set<Element> brute = brute_span(m, gens, true);
      long long logb = 0;
      for (std::size_t q = brute.size(); q > 1; q /= p) ++logb;
      EXPECT_EQ(s.log_order(), logb);
      EXPECT_EQ(quotient_type(m, s).order_exponent() + s.log_order(), m.log_order());
      EXPECT_TRUE(s.is_stable_under(m.sigma()));
      for (const auto& x : all_elements(m)) EXPECT_EQ(s.contains(x), brute.count(x) == 1);
      for (int i = 1; i <= 3; ++i)
        EXPECT_EQ(rank_pi(quotient_type(m, s), i), brute_rank(m, brute, i)) << "i=" << i;
    }
  }
}

TEST(Submodules, SumAndScale) {
  FiniteHModule m = make_module(3, {2}, {{4}});
  Submodule C = full_submodule(m);
  RingParams R(3, 4);
  EXPECT_TRUE(same_submodule(sum_submodules(C, zero_submodule(m)), C));
  EXPECT_TRUE(same_submodule(scale_submodule(LambdaElement::constant(R, 1), C), C));
  Submodule w = scale_submodule(omega(R, 1).poly(), C);
  EXPECT_TRUE(same_submodule(w, p_power_submodule(m, 1)));
  EXPECT_EQ(lambda_act(m, omega(R, 1).poly(), Element{1}), (Element{21 % 9}));
}

TEST(QuotientModule, PresentationIsConsistent) {
  std::mt19937_64 rng(34);
  for (std::uint64_t p : {2u, 3u}) {
    for (int t = 0; t < 60; ++t) {
      FiniteHModule m = random_module(p, rng, 5);
      std::vector<Element> gens(rng() % 3);
      for (auto& g : gens) {
        g = m.zero();
        for (std::size_t i = 0; i < m.rank(); ++i) g[i] = rng() % m.component_modulus(i);
      }
      Submodule s = span(m, gens);
      QuotientPresentation q = quotient_module(m, s);
      EXPECT_EQ(q.module.type(), quotient_type(m, s));
      for (const auto& x : all_elements(m)) {
        // kernel of the projection is exactly S, and σ commutes with it
        EXPECT_EQ(q.module.is_zero(q.project(x)), s.contains(x));
        EXPECT_EQ(q.project(m.act(m.sigma(), x)), q.module.act(q.module.sigma(), q.project(x)));
      }
    }
  }
}

TEST(AbelianTypeTest, RankAndFormatting) {
  AbelianType t({1, 2});
  EXPECT_EQ(t.exponents(), (std::vector<int>{2, 1}));
  EXPECT_EQ(rank_pi(t, 1), 2);
  EXPECT_EQ(rank_pi(t, 2), 1);
  EXPECT_EQ(rank_pi(AbelianType{}, 3), 0);
  EXPECT_EQ(t.to_list(), "[2,1]");
  EXPECT_EQ(AbelianType{}.to_list(), "[]");
  EXPECT_EQ(t.to_pretty(3), "Z/9 ⊕ Z/3");
  EXPECT_EQ(AbelianType({1}).to_pretty(37), "Z/37");
  EXPECT_EQ(AbelianType{}.to_pretty(37), "trivial");
  EXPECT_EQ(t.mod_pk(1), AbelianType({1, 1}));
  EXPECT_EQ(AbelianType({0, 3, 0}), AbelianType({3}));
}
