#include <gtest/gtest.h>

#include <fstream>

#include "ptower/errors.hpp"
#include "ptower/inference.hpp"
#include "ptower/instance_io.hpp"

using namespace ptower;

namespace {

std::string fixture(const std::string& name) { return std::string(PTOWER_FIXTURES) + "/" + name; }

std::string tower_text(const std::string& extra = "") {
  return R"({"kind": "tower", "p": 3, "exponents": [2], "sigma": [[4]], "c_bar": [[3]])" + extra + "}";
}

ObservedTower observed(std::uint64_t p, std::vector<std::optional<std::vector<int>>> types, bool ramhyp = true) {
  ObservedTower o{p, {}, ramhyp};
  for (std::size_t n = 0; n < types.size(); ++n) {
    ObservedLevel l;
    l.n = static_cast<int>(n);
    if (types[n]) l.type = AbelianType(*types[n]);
    o.levels.push_back(l);
  }
  return o;
}

}  // namespace

TEST(InstanceIO, Fixtures) {
  auto z9 = std::get<TowerInstance>(load_instance(fixture("z9_tower.json")));
  EXPECT_EQ(z9.module.exponents(), std::vector<int>{2});
  EXPECT_FALSE(z9.d);
  EXPECT_EQ(layer(z9, 1), AbelianType({2}));

  auto el = std::get<ElementaryModule>(load_instance(fixture("lambda_mod_T.json")));
  ASSERT_EQ(el.summands.size(), 1u);
  EXPECT_EQ(el.summands[0].poly->degree(), 1);

  auto hand = std::get<DescentInstance>(load_instance(fixture("descent_hand.json")));
  EXPECT_EQ(hand.sections.size(), 2u);
  EXPECT_EQ(closed_form_quotient(hand, 1), AbelianType({1}));

  auto obs = std::get<ObservedTower>(load_instance(fixture("mccallum_sharifi.json")));
  EXPECT_EQ(obs.p, 37u);
  EXPECT_TRUE(obs.ramhyp_asserted);
  EXPECT_THROW(load_instance(fixture("missing.json")), SchemaError);
}

TEST(InstanceIO, SchemaErrors) {
  EXPECT_NO_THROW(parse_instance(tower_text()));
  EXPECT_THROW(parse_instance(tower_text(R"(, "colour": 1)")), SchemaError);
  EXPECT_THROW(parse_instance("{not json"), SchemaError);
  EXPECT_THROW(parse_instance(R"({"p": 3})"), SchemaError);
  EXPECT_THROW(parse_instance(R"({"kind": "sheaf"})"), SchemaError);
  EXPECT_THROW(parse_instance(R"({"kind": "tower", "p": 4, "exponents": [1], "sigma": [[1]]})"), SchemaError);
  EXPECT_THROW(parse_instance(R"({"kind": "tower", "p": 3, "exponents": [1], "sigma": [[1, 0]]})"), SchemaError);
  EXPECT_THROW(parse_instance(R"({"kind": "tower", "p": 3, "exponents": [1], "sigma": [[1.5]]})"), SchemaError);
  EXPECT_THROW(parse_instance(R"({"kind": "tower", "p": 3, "exponents": [1], "sigma": [[1]], "c_bar": [[1, 1]]})"),
               SchemaError);
  // validation errors from the math layer pass through unchanged
  EXPECT_THROW(parse_instance(R"({"kind": "tower", "p": 3, "exponents": [1], "sigma": [[3]]})"), NotAutomorphism);
  EXPECT_THROW(parse_instance(R"({"kind": "tower", "p": 3, "exponents": [2], "sigma": [[4]], "c_bar": []})"),
               PreconditionViolation);
  EXPECT_THROW(parse_instance(R"({"kind": "elementary", "p": 3, "summands": [{"poly": [1, 1]}]})"), SchemaError);
  EXPECT_THROW(parse_instance(R"({"kind": "elementary", "p": 3, "summands": [{"mu": 1, "poly": [0, 1]}]})"),
               SchemaError);
  EXPECT_THROW(parse_instance(R"({"kind": "descent", "p": 3, "d": 1, "delta": {"table": [[0, 2, 1], [1, 0, 2], [2, 1, 0]]},
                                  "exponents": [], "sigma": [], "sections": []})"),
               InvalidGroupTable);
  EXPECT_THROW(parse_instance(R"({"kind": "descent", "p": 3, "d": 1, "delta": "trivial", "exponents": [1],
                                  "sigma": [[1]], "sections": [{"delta_subgroup": [0], "a": [0], "b": [[0]], "c": 1}]})"),
               SchemaError);
  EXPECT_THROW(parse_instance(R"({"kind": "observed", "p": 37, "levels": [{"n": 0, "type": [1], "tipe": 2}]})"),
               SchemaError);
}

TEST(InstanceIO, DescentBudget) {
  std::ifstream in(fixture("descent_twisted.json"));
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_NO_THROW(parse_instance(text));
  EXPECT_THROW(parse_instance(text, 100), BudgetExceeded);
}

TEST(InstanceIO, RoundTripTowers) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const std::uint64_t p = std::vector<std::uint64_t>{2, 3, 5}[seed % 3];
    TowerInstance t = random_instance(p, TowerBounds{}, seed);
    // the first parse normalizes the C̄ generators; after that the text is a fixed point
    InstanceFile back = parse_instance(to_json(t));
    const std::string text = to_json(back);
    ASSERT_EQ(to_json(parse_instance(text)), text);
    EXPECT_TRUE(same_submodule(std::get<TowerInstance>(back).c_bar, t.c_bar));
    const int n_max = t.d.value_or(5);
    EXPECT_EQ(layer_sequence(std::get<TowerInstance>(back), n_max).exponents(), layer_sequence(t, n_max).exponents());
  }
}

TEST(InstanceIO, RoundTripDescentAndOthers) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    DescentBounds b;
    b.budget = std::uint64_t{1} << 14;
    DescentInstance inst =
        random_descent_instance(seed % 2 ? 3 : 2, 1 + static_cast<int>(seed % 4 / 2), DeltaGroup::preset(seed % 8 < 4 ? "trivial" : "Z2"), b, seed);
    const std::string text = to_json(inst);
    InstanceFile back = parse_instance(text);
    ASSERT_EQ(to_json(back), text);
    const auto& d = std::get<DescentInstance>(back);
    for (int n = 0; n <= inst.d(); ++n) EXPECT_EQ(closed_form_quotient(d, n), closed_form_quotient(inst, n));
  }
  // custom delta tables survive with their name
  const std::string custom = R"({"kind": "descent", "p": 2, "d": 1, "delta": {"name": "C2", "table": [[1, 0], [0, 1]]},
      "exponents": [1], "sigma": [[1]], "sections": [{"delta_subgroup": [1, 0], "a": [0], "b": [[0], [0]]}]})";
  InstanceFile c = parse_instance(custom);
  EXPECT_EQ(to_json(parse_instance(to_json(c))), to_json(c));
  EXPECT_NE(to_json(c).find("\"C2\""), std::string::npos);

  for (const char* name : {"lambda_mod_T.json", "mccallum_sharifi.json", "z9_tower.json"}) {
    InstanceFile f = load_instance(fixture(name));
    EXPECT_EQ(to_json(parse_instance(to_json(f))), to_json(f)) << name;
  }
  InstanceFile el = parse_instance(R"({"kind": "elementary", "p": 3, "summands": [{"mu": 2}, {"poly": [-3, 1], "power": 2}]})");
  const auto e = std::get<ElementaryModule>(parse_instance(to_json(el)));
  EXPECT_EQ(e.summands[0].mu, 2);
  EXPECT_EQ(e.summands[1].power, 2);
  EXPECT_EQ(e.summands[1].poly->poly().coeff(0).value(), e.summands[1].poly->params().reduce(-3));
}

TEST(Inference, P37Lines) {
  Inference a = infer(observed(37, {std::vector<int>{1}, std::vector<int>{1}}));
  EXPECT_TRUE(a.applicable);
  EXPECT_EQ(a.summary, "A_n ≅ Z/37 for all n ≥ 1");
  Inference b = infer(observed(37, {std::vector<int>{}, std::vector<int>{}}));
  EXPECT_EQ(b.summary, "A_n trivial for all n");
  Inference c = infer(observed(37, {std::vector<int>{}, std::vector<int>{1}}));
  EXPECT_FALSE(c.applicable);
  EXPECT_EQ(c.summary, "theorem not applicable");
}

TEST(Inference, Variants) {
  // Z/9 and Z/27 agree mod 3 and mod 9 but not mod 27
  EXPECT_TRUE(infer(observed(3, {std::vector<int>{2}, std::vector<int>{3}}), 2).applicable);
  Inference m = infer(observed(3, {std::vector<int>{2}, std::vector<int>{3}}), 1);
  EXPECT_TRUE(m.applicable);
  EXPECT_EQ(m.predicted, AbelianType({1}));
  EXPECT_EQ(m.summary, "A_n/3A_n ≅ Z/3 for all n ≥ 1");
  EXPECT_FALSE(infer(observed(3, {std::vector<int>{2}, std::vector<int>{3}}), 3).applicable);
  EXPECT_FALSE(infer(observed(3, {std::vector<int>{2}, std::vector<int>{3}})).applicable);

  // orders alone decide the full case
  ObservedTower o{5, {{0, std::nullopt, 2}, {1, std::nullopt, 2}}, true};
  Inference e = infer(o);
  EXPECT_TRUE(e.applicable);
  EXPECT_EQ(e.summary, "|A_n| = 5^2 for all n ≥ 1");
  EXPECT_THROW(infer(o, 1), MissingLevels);

  // later observations must agree with the prediction
  auto ok = observed(3, {std::vector<int>{1}, std::vector<int>{1}, std::vector<int>{1}});
  EXPECT_NO_THROW(infer(ok));
  auto bad = observed(3, {std::vector<int>{1}, std::vector<int>{1}, std::vector<int>{2}});
  EXPECT_THROW(infer(bad), TheoremViolation);
  auto unrelated = observed(3, {std::vector<int>{}, std::vector<int>{1}, std::vector<int>{2}});
  EXPECT_NO_THROW(infer(unrelated));

  EXPECT_THROW(infer(observed(37, {std::vector<int>{1}, std::vector<int>{1}}, false)), RamHypNotAsserted);
  EXPECT_THROW(infer(observed(37, {std::vector<int>{1}})), MissingLevels);
  ObservedTower gap{37, {{0, AbelianType({1}), std::nullopt}, {2, AbelianType({1}), std::nullopt}}, true};
  EXPECT_THROW(infer(gap), MissingLevels);
  ObservedTower clash{37, {{0, AbelianType({1}), 2}, {1, AbelianType({1}), std::nullopt}}, true};
  EXPECT_THROW(infer(clash), PreconditionViolation);
}
