#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "ptower/descent.hpp"
#include "ptower/errors.hpp"

using namespace ptower;

namespace {

using Key = std::pair<Element, int>;

// Plain breadth-first saturation under right multiplication by generators.
std::set<Key> naive_closure(const DescentGroup& grp, const std::vector<DescentGroup::Elem>& gens) {
  DescentGroup::Elem e{grp.X().zero(), grp.G().identity()};
  std::set<Key> seen{{e.x, e.g}};
  std::vector<DescentGroup::Elem> frontier{e};
  while (!frontier.empty()) {
    std::vector<DescentGroup::Elem> next;
    for (const auto& a : frontier)
      for (const auto& g : gens) {
        auto c = grp.mul(a, g);
        if (seen.insert({c.x, c.g}).second) next.push_back(c);
      }
    frontier = std::move(next);
  }
  return seen;
}

std::vector<DescentGroup::Elem> section_gens(const DescentGroup& grp, const InertiaSection& s) {
  std::vector<DescentGroup::Elem> g{{s.a, grp.G().h()}};
  for (std::size_t k = 0; k < s.delta_subgroup.size(); ++k)
    g.push_back({s.b[k], grp.G().element(0, s.delta_subgroup[k])});
  return g;
}

// Y_n recomputed from scratch: all of 𝒢_n's commutators with X and all
// elements of each I_{w_i} lying over G_n, closed naively.
std::set<Element> naive_y(const DescentInstance& inst, int n) {
  const DescentGroup& grp = inst.group;
  const FiniteHModule& X = grp.X();
  std::vector<DescentGroup::Elem> gens;
  for (int g : grp.G().level_elements(n))
    for (std::size_t j = 0; j < X.rank(); ++j) gens.push_back({X.sub(grp.act(g, X.basis(j)), X.basis(j)), grp.G().identity()});
  for (const auto& s : inst.sections)
    for (const auto& [x, g] : naive_closure(grp, section_gens(grp, s)))
      if (grp.G().in_level(g, n)) gens.push_back({x, g});
  std::set<Element> y;
  for (const auto& [x, g] : naive_closure(grp, gens))
    if (g == grp.G().identity()) y.insert(x);
  return y;
}

std::vector<int> all_of_delta(const DeltaGroup& d) {
  std::vector<int> v(d.order());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

InertiaSection totally_ramified(const DescentGroup& grp) {
  auto all = all_of_delta(grp.G().delta());
  return {all, grp.X().zero(), std::vector<Element>(all.size(), grp.X().zero())};
}

// X = Z/3 with trivial h-action, d = 1, Δ trivial, r = 2, a_2 = 1.
DescentInstance hand_instance() {
  FiniteGroupG G(3, 1, DeltaGroup::preset("trivial"), {1});
  FiniteHModule X = make_module(3, {1}, {{1}});
  DescentGroup grp = build_group(G, X, {X.identity()});
  InertiaSection s1 = totally_ramified(grp);
  InertiaSection s2{{0}, {1}, {{0}}};
  return make_descent_instance(std::move(grp), {s1, s2});
}

// p = 3, Δ = Z/2 inverting h, X = Y ⊕ Y with Y = (Z/3)^2 and s unipotent,
// σ = diag(s, s^{-1}), τ swapping the copies, r = 1.
DescentInstance twisted_instance() {
  FiniteGroupG G(3, 1, DeltaGroup::preset("Z2"), {1, 2});
  FiniteHModule X = make_module(3, {1, 1, 1, 1}, {{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 2}, {0, 0, 0, 1}});
  ModMatrix swap(X.ambient(), {{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}});
  DescentGroup grp = build_group(G, X, {X.identity(), swap});
  return make_descent_instance(std::move(grp), {totally_ramified(grp)});
}

std::vector<DescentInstance> random_batch(int count, bool direct_product, std::uint64_t seed0, int max_log = 5) {
  std::vector<DescentInstance> out;
  const std::vector<std::string> deltas{"trivial", "Z2"};
  for (int i = 0; i < count; ++i) {
    const std::uint64_t p = i % 2 ? 3 : 2;
    const int d = 1 + (i / 2) % 2;
    DescentBounds b;
    b.max_log_order = max_log;
    b.budget = std::uint64_t{1} << 14;
    b.direct_product = direct_product;
    out.push_back(random_descent_instance(p, d, DeltaGroup::preset(deltas[(i / 4) % 2]), b, seed0 + i));
  }
  return out;
}

}  // namespace

TEST(DeltaGroup, PresetsAndValidation) {
  for (const auto& name : DeltaGroup::preset_names()) EXPECT_EQ(DeltaGroup::preset(name).name(), name);
  EXPECT_EQ(DeltaGroup::preset("S3").order(), 6);
  EXPECT_EQ(DeltaGroup::preset("S3").subgroups().size(), 6u);
  EXPECT_EQ(DeltaGroup::preset("Z2").subgroups().size(), 2u);
  EXPECT_THROW(DeltaGroup::preset("Q8"), PreconditionViolation);

  // x*y = x - y mod 3: has a right identity only, and is not associative
  EXPECT_THROW(DeltaGroup::from_table("bad", {{0, 2, 1}, {1, 0, 2}, {2, 1, 0}}), InvalidGroupTable);
  // associativity alone: a commutative loop of order 5 that is not a group
  EXPECT_THROW(DeltaGroup::from_table("loop", {{0, 1, 2, 3, 4},
                                               {1, 0, 3, 4, 2},
                                               {2, 4, 0, 1, 3},
                                               {3, 2, 4, 0, 1},
                                               {4, 3, 1, 2, 0}}),
               InvalidGroupTable);
  EXPECT_THROW(DeltaGroup::from_table("ragged", {{0, 1}, {1}}), InvalidGroupTable);
  EXPECT_THROW(DeltaGroup::from_table("range", {{0, 1}, {1, 2}}), InvalidGroupTable);
  std::vector<std::vector<int>> z13(13, std::vector<int>(13));
  for (int a = 0; a < 13; ++a)
    for (int b = 0; b < 13; ++b) z13[a][b] = (a + b) % 13;
  EXPECT_THROW(DeltaGroup::from_table("Z13", z13), InvalidGroupTable);
  // identity need not be index 0
  DeltaGroup z2 = DeltaGroup::from_table("swapped", {{1, 0}, {0, 1}});
  EXPECT_EQ(z2.identity(), 1);
}

TEST(DeltaGroup, UnitHomomorphisms) {
  // (Z/3)^x = {1, 2}: Z2 -> two maps, Z3 -> only the trivial one
  EXPECT_EQ(unit_homomorphisms(DeltaGroup::preset("Z2"), 3, 1).size(), 2u);
  EXPECT_EQ(unit_homomorphisms(DeltaGroup::preset("Z3"), 3, 1).size(), 1u);
  // (Z/7)^x is cyclic of order 6: Z3 has three maps
  EXPECT_EQ(unit_homomorphisms(DeltaGroup::preset("Z3"), 7, 1).size(), 3u);
  // S3 -> abelian factors through the sign: trivial and sign for odd p
  EXPECT_EQ(unit_homomorphisms(DeltaGroup::preset("S3"), 3, 2).size(), 2u);
  // (Z/4)^x = {1, 3}
  EXPECT_EQ(unit_homomorphisms(DeltaGroup::preset("Z2"), 2, 2).size(), 2u);
  for (const auto& u : unit_homomorphisms(DeltaGroup::preset("S3"), 5, 1))
    EXPECT_NO_THROW(FiniteGroupG(5, 1, DeltaGroup::preset("S3"), u));
}

TEST(BuildGroup, TrivialDeltaIsDirectProduct) {
  FiniteGroupG G(3, 1, DeltaGroup::preset("trivial"), {1});
  FiniteHModule X = make_module(3, {1}, {{1}});
  DescentGroup grp = build_group(G, X, {X.identity()});
  EXPECT_EQ(grp.order(), 9u);
  std::vector<DescentGroup::Elem> all;
  for (std::uint64_t x = 0; x < 3; ++x)
    for (int g = 0; g < 3; ++g) all.push_back({{x}, g});
  for (const auto& a : all) {
    EXPECT_EQ(grp.pow(a, 3), (DescentGroup::Elem{{0}, G.identity()}));
    for (const auto& b : all) EXPECT_EQ(grp.mul(a, b), grp.mul(b, a));
  }
}

TEST(BuildGroup, InvertingZ2GivesS3) {
  FiniteGroupG G(3, 1, DeltaGroup::preset("Z2"), {1, 2});
  const DeltaGroup s3 = DeltaGroup::preset("S3");
  ASSERT_EQ(G.order(), 6);
  // exhaustive search for a bijection that is a homomorphism
  std::vector<int> phi(6);
  std::iota(phi.begin(), phi.end(), 0);
  bool found = false;
  do {
    bool hom = true;
    for (int a = 0; a < 6 && hom; ++a)
      for (int b = 0; b < 6 && hom; ++b) hom = phi[G.mul(a, b)] == s3.mul(phi[a], phi[b]);
    found = hom;
  } while (!found && std::next_permutation(phi.begin(), phi.end()));
  EXPECT_TRUE(found);
  for (int a = 0; a < 6; ++a) {
    EXPECT_EQ(G.mul(a, G.inv(a)), G.identity());
    EXPECT_EQ(G.mul(G.inv(a), a), G.identity());
  }
}

TEST(BuildGroup, RejectsBadActions) {
  EXPECT_THROW(FiniteGroupG(3, 1, DeltaGroup::preset("Z3"), {1, 2, 2}), ActionNotHomomorphism);
  EXPECT_THROW(FiniteGroupG(3, 1, DeltaGroup::preset("Z2"), {1, 3}), ActionNotHomomorphism);

  FiniteGroupG inv(3, 1, DeltaGroup::preset("Z2"), {1, 2});
  FiniteGroupG direct(3, 1, DeltaGroup::preset("Z2"), {1, 1});
  FiniteHModule X = make_module(3, {1, 1}, {{1, 1}, {0, 1}});
  const ModMatrix I = X.identity();
  // τ = I commutes with σ, so it does not invert it
  EXPECT_THROW(build_group(inv, X, {I, I}), ActionNotHomomorphism);
  EXPECT_NO_THROW(build_group(direct, X, {I, I}));
  // τ of order 3 is not a Z/2 action
  ModMatrix t(X.ambient(), {{1, 1}, {0, 1}});
  EXPECT_THROW(build_group(direct, X, {I, t}), ActionNotHomomorphism);
  EXPECT_THROW(build_group(direct, X, {I}), ActionNotHomomorphism);
  // σ of order 9 on Z/9 with d = 1
  FiniteHModule Y = make_module(3, {2}, {{4}});
  FiniteGroupG G1(3, 1, DeltaGroup::preset("trivial"), {1});
  EXPECT_NO_THROW(build_group(G1, Y, {Y.identity()}));
  FiniteHModule Z = make_module(3, {3}, {{4}});
  EXPECT_THROW(build_group(G1, Z, {Z.identity()}), ActionNotHomomorphism);
  // not well defined on Z/9 ⊕ Z/3
  FiniteHModule W = make_module(3, {2, 1}, {{1, 0}, {0, 1}});
  EXPECT_THROW(build_group(G1, W, {ModMatrix(W.ambient(), {{1, 1}, {0, 1}})}), WellDefinednessViolation);
  EXPECT_THROW(build_group(G1, Y, {Y.identity()}, 26), BudgetExceeded);
  EXPECT_NO_THROW(build_group(G1, Y, {Y.identity()}, 27));
}

TEST(DescentInstance, Validation) {
  FiniteGroupG G(3, 1, DeltaGroup::preset("Z2"), {1, 1});
  FiniteHModule X = make_module(3, {2}, {{1}});
  ModMatrix neg(X.ambient(), {{8}});
  DescentGroup grp = build_group(G, X, {X.identity(), neg});
  InertiaSection s1 = totally_ramified(grp);
  EXPECT_NO_THROW(make_descent_instance(grp, {s1}));
  EXPECT_THROW(make_descent_instance(grp, {}), PreconditionViolation);
  // Δ_1 must be Δ
  EXPECT_THROW(make_descent_instance(grp, {{{0}, {0}, {{0}}}}), PreconditionViolation);
  EXPECT_THROW(make_descent_instance(grp, {{{0, 1}, {3}, {{0}, {0}}}}), PreconditionViolation);
  // ω_1 = 3 on X, so a = 1 gives (a, h) of order 9
  EXPECT_THROW(make_descent_instance(grp, {s1, {{0}, {1}, {{0}}}}), PreconditionViolation);
  EXPECT_NO_THROW(make_descent_instance(grp, {s1, {{0}, {3}, {{0}}}}));
  // (b, τ)^2 = (b - b, 1) = 0 for any b since τ = -1
  EXPECT_NO_THROW(make_descent_instance(grp, {s1, {{0, 1}, {0}, {{0}, {5}}}}));
  // conjugating (a, h) by (b, τ) gives (b - a, h), which must equal (a + b, h)
  EXPECT_THROW(make_descent_instance(grp, {s1, {{0, 1}, {3}, {{0}, {5}}}}), PreconditionViolation);
  EXPECT_THROW(make_descent_instance(grp, {s1, {{0, 1}, {3}, {{0}}}}), PreconditionViolation);
  EXPECT_THROW(make_descent_instance(grp, {s1, {{1}, {0}, {{0}}}}), PreconditionViolation);
}

TEST(BruteForce, HandExample) {
  DescentInstance inst = hand_instance();
  EXPECT_EQ(bruteforce_class_quotient(inst, 0), AbelianType{});
  EXPECT_EQ(bruteforce_class_quotient(inst, 1), AbelianType({1}));
  EXPECT_EQ(bruteforce_layer(inst, 0).y.size(), 3u);
  EXPECT_EQ(bruteforce_layer(inst, 1).y, std::vector<Element>{{0}});
  EXPECT_THROW(bruteforce_layer(inst, 2), LevelOutOfRange);
  BruteForceOptions tight;
  tight.budget = 8;
  EXPECT_THROW(bruteforce_layer(inst, 0, tight), BudgetExceeded);
}

TEST(ClosedForm, Examples) {
  DescentInstance inst = hand_instance();
  EXPECT_EQ(descent_c(inst).log_order(), 1);
  EXPECT_TRUE(descent_d(inst).is_zero());
  EXPECT_EQ(closed_form_quotient(inst, 0), AbelianType{});
  EXPECT_EQ(closed_form_quotient(inst, 1), AbelianType({1}));

  TowerInstance t = compile_to_tower(inst);
  EXPECT_EQ(t.module.exponents(), std::vector<int>{1});
  EXPECT_EQ(t.c_bar.log_order(), 1);
  EXPECT_EQ(t.d, 1);
  EXPECT_EQ(layer(t, 0), AbelianType{});
  EXPECT_EQ(layer(t, 1), AbelianType({1}));

  OracleReport r = compare_oracle(inst, 0, 1);
  ASSERT_EQ(r.levels.size(), 2u);
  EXPECT_TRUE(r.all_equal());
  EXPECT_TRUE(r.levels[0].same_subgroup);
  EXPECT_TRUE(r.levels[1].same_subgroup);
  EXPECT_FALSE(r.witness);

  // D = X: Δ = Z/2 acting by -1 on Z/3
  FiniteGroupG G(3, 1, DeltaGroup::preset("Z2"), {1, 1});
  FiniteHModule X = make_module(3, {1}, {{1}});
  DescentGroup grp = build_group(G, X, {X.identity(), ModMatrix(X.ambient(), {{2}})});
  DescentInstance full = make_descent_instance(grp, {totally_ramified(grp)});
  for (int n = 0; n <= 1; ++n) {
    EXPECT_EQ(closed_form_quotient(full, n), AbelianType{});
    EXPECT_EQ(bruteforce_class_quotient(full, n), AbelianType{});
  }
  EXPECT_EQ(compile_to_tower(full).module.rank(), 0u);

  // r = 1, trivial actions: X at every level
  FiniteGroupG G2(2, 2, DeltaGroup::preset("trivial"), {1});
  FiniteHModule X2 = make_module(2, {2, 1}, {{1, 0}, {0, 1}});
  DescentGroup grp2 = build_group(G2, X2, {X2.identity()});
  DescentInstance plain = make_descent_instance(grp2, {totally_ramified(grp2)});
  for (int n = 0; n <= 2; ++n) {
    EXPECT_EQ(closed_form_quotient(plain, n), AbelianType({2, 1}));
    EXPECT_EQ(bruteforce_class_quotient(plain, n), AbelianType({2, 1}));
  }
}

TEST(BruteForce, MatchesNaiveClosure) {
  for (const auto& inst : random_batch(40, false, 100, 4)) {
    for (int n = 0; n <= inst.d(); ++n) {
      BruteForceLayer bf = bruteforce_layer(inst, n);
      std::set<Element> y = naive_y(inst, n);
      ASSERT_EQ(std::vector<Element>(y.begin(), y.end()), bf.y);
      // independent type: Smith form of the subgroup Y
      Submodule ys = span_group(inst.group.X(), bf.y);
      EXPECT_EQ(bf.type, quotient_type(inst.group.X(), ys));
    }
  }
}

// Y_n = ⟨I_{G_n}X, ω_n A, B⟩ as an abelian group, before any H-span is taken.
TEST(BruteForce, MatchesGroupSpanForm) {
  for (const auto& inst : random_batch(60, false, 700, 6)) {
    const DescentGroup& grp = inst.group;
    const FiniteHModule& X = grp.X();
    for (int n = 0; n <= inst.d(); ++n) {
      std::vector<Element> gens;
      for (int g : grp.G().level_elements(n))
        for (std::size_t j = 0; j < X.rank(); ++j) gens.push_back(X.sub(grp.act(g, X.basis(j)), X.basis(j)));
      const ModMatrix w = X.omega_endomorphism(n);
      for (std::size_t i = 1; i < inst.sections.size(); ++i) gens.push_back(X.act(w, inst.sections[i].a));
      for (const auto& s : inst.sections)
        for (const auto& b : s.b) gens.push_back(b);
      EXPECT_TRUE(same_submodule(span_group(X, gens), span_group(X, bruteforce_layer(inst, n).y)));
    }
  }
}

// Replacing w_i by a conjugate prime: conjugate I_{w_i} by a random element of 𝒢
// and read the section back off.
TEST(Sections, ConjugateChoiceInvariant) {
  std::mt19937_64 rng(31);
  for (const auto& inst : random_batch(60, false, 900, 6)) {
    const DescentGroup& grp = inst.group;
    const FiniteHModule& X = grp.X();
    const FiniteGroupG& G = grp.G();
    std::vector<InertiaSection> secs = inst.sections;
    for (std::size_t s = 1; s < secs.size(); ++s) {
      Element x = X.zero();
      for (std::size_t j = 0; j < X.rank(); ++j) x = X.add(x, X.scale(rng(), X.basis(j)));
      const DescentGroup::Elem c{x, static_cast<int>(rng() % G.order())};
      std::vector<DescentGroup::Elem> conj;
      for (const auto& e : section_elements(grp, secs[s])) conj.push_back(grp.mul(grp.mul(c, e), grp.inv(c)));
      InertiaSection t;
      for (const auto& e : conj)
        if (e.g == G.h()) t.a = e.x;
      for (int dl = 0; dl < G.delta().order(); ++dl)
        for (const auto& e : conj)
          if (e.g == G.element(0, dl)) {
            t.delta_subgroup.push_back(dl);
            t.b.push_back(e.x);
          }
      secs[s] = t;
    }
    DescentInstance alt = make_descent_instance(grp, secs);
    for (int n = 0; n <= inst.d(); ++n) {
      EXPECT_EQ(bruteforce_class_quotient(alt, n), bruteforce_class_quotient(inst, n));
      EXPECT_EQ(closed_form_quotient(alt, n), closed_form_quotient(inst, n));
    }
  }
}

TEST(Sections, OrderLawAndComplement) {
  for (const auto& inst : random_batch(60, false, 500)) {
    const DescentGroup& grp = inst.group;
    const FiniteHModule& X = grp.X();
    for (const auto& s : inst.sections) {
      for (int n = 0; n <= inst.d(); ++n) {
        const std::uint64_t q = checked_pow(inst.p(), n);
        DescentGroup::Elem lhs = grp.pow({s.a, grp.G().h()}, q);
        EXPECT_EQ(lhs.x, X.act(X.omega_endomorphism(n), s.a));
        EXPECT_EQ(lhs.g, grp.G().pow(grp.G().h(), q));
      }
      auto elems = section_elements(grp, s);
      EXPECT_EQ(elems.size(), grp.G().h_order() * s.delta_subgroup.size());
    }
    // 𝒢 = X · I_{w_1} with unique decomposition
    auto w1 = section_elements(grp, inst.sections.front());
    ASSERT_EQ(w1.size(), static_cast<std::size_t>(grp.G().order()));
    std::set<Key> products;
    for (std::uint64_t xi = 0; xi < grp.x_size(); ++xi)
      for (const auto& w : w1) {
        auto c = grp.mul({grp.decode(xi), grp.G().identity()}, w);
        products.insert({c.x, c.g});
      }
    EXPECT_EQ(products.size(), grp.order());
  }
}

TEST(Oracle, DirectProductInstancesAgree) {
  for (const auto& inst : random_batch(80, true, 900)) {
    OracleReport r = compare_oracle(inst, 0, inst.d());
    EXPECT_TRUE(r.all_equal());
    for (const auto& l : r.levels) EXPECT_TRUE(l.same_subgroup) << "n=" << l.n;
    EXPECT_FALSE(r.witness);
  }
}

TEST(Oracle, TrivialDeltaAgrees) {
  for (int i = 0; i < 40; ++i) {
    DescentBounds b;
    b.budget = std::uint64_t{1} << 14;
    DescentInstance inst = random_descent_instance(i % 2 ? 3 : 2, 1 + i % 3 / 2, DeltaGroup::preset("trivial"), b, 40 + i);
    EXPECT_TRUE(compare_oracle(inst, 0, inst.d()).all_equal());
  }
}

// The closed form takes H-spans, while Y_n is only G_n-stable. When Δ
// inverts h, level 1 already separates the two.
TEST(Oracle, TwistedActionRegression) {
  DescentInstance inst = twisted_instance();
  OracleReport r = compare_oracle(inst, 0, 1);
  ASSERT_EQ(r.levels.size(), 2u);
  EXPECT_TRUE(r.levels[0].equal);
  EXPECT_FALSE(r.levels[1].equal);
  EXPECT_EQ(r.levels[1].bruteforce, AbelianType({1, 1}));
  EXPECT_EQ(r.levels[1].closed_form, AbelianType({1}));
  EXPECT_EQ(r.levels[1].tower, r.levels[1].closed_form);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->n, 1);
  // the naive closure sees the same Y_1
  std::set<Element> y = naive_y(inst, 1);
  EXPECT_EQ(std::vector<Element>(y.begin(), y.end()), bruteforce_layer(inst, 1).y);
  Submodule cf = closed_form_submodule(inst, 1);
  EXPECT_EQ(cf.contains(r.witness->element), !r.witness->in_bruteforce);
}

TEST(Oracle, CompileToTowerCommutesWithLayers) {
  for (const auto& inst : random_batch(60, false, 1300)) {
    TowerInstance t = compile_to_tower(inst);
    for (int n = 0; n <= inst.d(); ++n) EXPECT_EQ(layer(t, n), closed_form_quotient(inst, n));
  }
}

TEST(Oracle, StabilityOfBothSides) {
  for (const auto& inst : random_batch(40, false, 1700)) {
    const DescentGroup& grp = inst.group;
    const FiniteHModule& X = grp.X();
    const bool direct = std::all_of(grp.G().u().begin(), grp.G().u().end(), [](std::uint64_t v) { return v == 1; });
    for (int n = 0; n <= inst.d(); ++n) {
      BruteForceLayer bf = bruteforce_layer(inst, n);
      std::set<Element> y(bf.y.begin(), bf.y.end());
      for (int g = 0; g < grp.G().order(); ++g) {
        bool stable = std::all_of(bf.y.begin(), bf.y.end(), [&](const Element& x) { return y.count(grp.act(g, x)) > 0; });
        if (grp.G().in_level(g, n) || direct) EXPECT_TRUE(stable) << "n=" << n << " g=" << g;
      }
      EXPECT_TRUE(closed_form_submodule(inst, n).is_stable_under(X.sigma()));
    }
  }
}

TEST(BruteForce, CommutatorAssertion) {
  BruteForceOptions opts;
  opts.verify_commutator = true;
  for (const auto& inst : random_batch(24, false, 2100, 4))
    for (int n = 0; n <= inst.d(); ++n) EXPECT_NO_THROW(bruteforce_layer(inst, n, opts));
  EXPECT_NO_THROW(bruteforce_layer(twisted_instance(), 1, opts));
}

TEST(Augmentation, Examples) {
  for (int d = 1; d <= 3; ++d) EXPECT_TRUE(augmentation_check(FiniteGroupG(2, d, DeltaGroup::preset("trivial"), {1}), 0, 4));
  FiniteGroupG s3(3, 1, DeltaGroup::preset("Z2"), {1, 2});
  EXPECT_TRUE(augmentation_check(s3, 0, 3));
  EXPECT_TRUE(augmentation_check(s3, 1, 3));
  EXPECT_TRUE(augmentation_check(FiniteGroupG(2, 2, DeltaGroup::preset("Z2"), {1, 3}), 1, 4));
  EXPECT_THROW(augmentation_check(s3, 2, 3), LevelOutOfRange);
  EXPECT_THROW(augmentation_check(s3, 0, 3, 5), BudgetExceeded);
  for (const auto& name : DeltaGroup::preset_names())
    for (std::uint64_t p : {2, 3, 5})
      for (const auto& u : unit_homomorphisms(DeltaGroup::preset(name), p, 2))
        for (int n = 0; n <= 2; ++n) EXPECT_TRUE(augmentation_check(FiniteGroupG(p, 2, DeltaGroup::preset(name), u), n, 4));
}

TEST(RandomDescent, DeterministicAndValid) {
  const std::vector<std::string> deltas{"trivial", "Z2"};
  for (int i = 0; i < 200; ++i) {
    DescentBounds b;
    const std::uint64_t p = i % 2 ? 3 : 2;
    const int d = 1 + i % 4 / 2;
    const DeltaGroup delta = DeltaGroup::preset(deltas[i % 8 / 4]);
    DescentInstance a = random_descent_instance(p, d, delta, b, 7000 + i);
    DescentInstance c = random_descent_instance(p, d, delta, b, 7000 + i);
    EXPECT_EQ(a.group.X(), c.group.X());
    EXPECT_EQ(a.group.tau(), c.group.tau());
    EXPECT_EQ(a.group.G().u(), c.group.G().u());
    ASSERT_EQ(a.sections.size(), c.sections.size());
    for (std::size_t k = 0; k < a.sections.size(); ++k) {
      EXPECT_EQ(a.sections[k].a, c.sections[k].a);
      EXPECT_EQ(a.sections[k].b, c.sections[k].b);
    }
    EXPECT_LE(a.group.order(), b.budget);
    // revalidation from scratch
    EXPECT_NO_THROW(make_descent_instance(a.group, a.sections));
  }
}

TEST(RandomDescent, TrivialModule) {
  DescentBounds b;
  b.max_log_order = 0;
  b.max_sections = 4;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    DescentInstance inst = random_descent_instance(3, 1, DeltaGroup::preset("Z2"), b, seed);
    EXPECT_EQ(inst.group.X().rank(), 0u);
    for (const auto& s : inst.sections) EXPECT_TRUE(s.a.empty());
    EXPECT_EQ(bruteforce_class_quotient(inst, 1), AbelianType{});
  }
}
