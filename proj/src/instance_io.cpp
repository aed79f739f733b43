#include "ptower/instance_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "ptower/errors.hpp"

namespace ptower {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

void check_keys(const json& j, const std::string& where, const std::set<std::string>& required,
                const std::set<std::string>& optional = {}) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!required.count(key) && !optional.count(key))
      throw SchemaError(where + ": unknown field '" + key + "'");
  for (const auto& key : required)
    if (!j.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
}

std::int64_t get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    throw SchemaError(where + ": integer out of range");
  return j.get<std::int64_t>();
}

std::uint64_t get_positive(const json& j, const std::string& where) {
  std::int64_t v = get_int(j, where);
  if (v < 1) throw SchemaError(where + ": expected a positive integer");
  return static_cast<std::uint64_t>(v);
}

std::vector<std::int64_t> get_int_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of integers");
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_int(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<std::int64_t>> get_matrix(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of rows");
  std::vector<std::vector<std::int64_t>> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_int_list(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> get_exponents(const json& j, const std::string& where) {
  std::vector<int> out;
  for (std::int64_t v : get_int_list(j, where)) {
    if (v < 0 || v > 64) throw SchemaError(where + ": exponent out of range");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

Element get_element(const FiniteHModule& m, const json& j, const std::string& where) {
  std::vector<std::int64_t> v = get_int_list(j, where);
  if (v.size() != m.rank())
    throw SchemaError(where + ": expected " + std::to_string(m.rank()) + " coordinates, got " + std::to_string(v.size()));
  return m.reduce(v);
}

void check_square(const std::vector<std::vector<std::int64_t>>& m, std::size_t r, const std::string& where) {
  if (m.size() != r) throw SchemaError(where + ": expected " + std::to_string(r) + " rows");
  for (const auto& row : m)
    if (row.size() != r) throw SchemaError(where + ": expected " + std::to_string(r) + " columns");
}

FiniteHModule read_module(const json& j, std::uint64_t p) {
  std::vector<int> exps = get_exponents(j.at("exponents"), "exponents");
  auto sigma = get_matrix(j.at("sigma"), "sigma");
  check_square(sigma, exps.size(), "sigma");
  return make_module(p, exps, sigma);
}

std::uint64_t read_prime(const json& j) {
  std::uint64_t p = get_positive(j.at("p"), "p");
  if (!is_prime(p)) throw SchemaError("p: " + std::to_string(p) + " is not prime");
  return p;
}

TowerInstance read_tower(const json& j) {
  check_keys(j, "tower", {"kind", "p", "exponents", "sigma"}, {"c_bar", "d"});
  const std::uint64_t p = read_prime(j);
  FiniteHModule m = read_module(j, p);
  std::vector<Element> gens;
  if (j.contains("c_bar")) {
    if (!j["c_bar"].is_array()) throw SchemaError("c_bar: expected an array of elements");
    for (std::size_t i = 0; i < j["c_bar"].size(); ++i)
      gens.push_back(get_element(m, j["c_bar"][i], "c_bar[" + std::to_string(i) + "]"));
  }
  std::optional<int> d;
  if (j.contains("d") && !j["d"].is_null()) d = static_cast<int>(get_int(j["d"], "d"));
  return make_tower(std::move(m), gens, d);
}

ElementaryModule read_elementary(const json& j) {
  check_keys(j, "elementary", {"kind", "p", "summands"});
  const std::uint64_t p = read_prime(j);
  if (!j["summands"].is_array()) throw SchemaError("summands: expected an array");
  ElementaryModule m{p, {}};
  const RingParams R(p, max_precision_for(p));
  for (std::size_t i = 0; i < j["summands"].size(); ++i) {
    const json& s = j["summands"][i];
    const std::string where = "summands[" + std::to_string(i) + "]";
    if (s.is_object() && s.contains("mu")) {
      check_keys(s, where, {"mu"});
      const std::int64_t mu = get_int(s["mu"], where + ".mu");
      if (mu < 1 || mu > 64) throw SchemaError(where + ".mu: expected 1..64");
      m.summands.push_back(ElementarySummand::p_power(static_cast<int>(mu)));
    } else {
      check_keys(s, where, {"poly"}, {"power"});
      LambdaElement f(R, get_int_list(s["poly"], where + ".poly"));
      if (!DistinguishedPoly::is_distinguished(f))
        throw SchemaError(where + ".poly: not a distinguished polynomial (monic, lower coefficients divisible by p)");
      std::int64_t power = s.contains("power") ? get_int(s["power"], where + ".power") : 1;
      if (power < 1 || power > 64) throw SchemaError(where + ".power: expected 1..64");
      m.summands.push_back(ElementarySummand::distinguished(DistinguishedPoly(f), static_cast<int>(power)));
    }
  }
  return m;
}

DeltaGroup read_delta(const json& j) {
  if (j.is_string()) return DeltaGroup::preset(j.get<std::string>());
  check_keys(j, "delta", {"table"}, {"name"});
  auto t = get_matrix(j["table"], "delta.table");
  std::vector<std::vector<int>> table;
  for (const auto& row : t) {
    std::vector<int> r;
    for (std::int64_t v : row) {
      if (v < 0 || v > kMaxDeltaOrder) throw InvalidGroupTable("group table entry out of range");
      r.push_back(static_cast<int>(v));
    }
    table.push_back(std::move(r));
  }
  std::string name = "custom";
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw SchemaError("delta.name: expected a string");
    name = j["name"].get<std::string>();
  }
  return DeltaGroup::from_table(name, std::move(table));
}

DescentInstance read_descent(const json& j, std::uint64_t budget) {
  check_keys(j, "descent", {"kind", "p", "d", "delta", "exponents", "sigma", "sections"}, {"u", "tau"});
  const std::uint64_t p = read_prime(j);
  const std::int64_t d = get_int(j["d"], "d");
  if (d < 1 || d > 16) throw SchemaError("d: expected 1..16");
  DeltaGroup delta = read_delta(j["delta"]);
  std::vector<std::uint64_t> u(delta.order(), 1);
  if (j.contains("u")) {
    u.clear();
    for (std::int64_t v : get_int_list(j["u"], "u")) {
      if (v < 1) throw SchemaError("u: entries must be positive");
      u.push_back(static_cast<std::uint64_t>(v));
    }
  }
  FiniteGroupG G(p, static_cast<int>(d), delta, u);
  FiniteHModule X = read_module(j, p);
  std::vector<ModMatrix> tau(delta.order(), X.identity());
  if (j.contains("tau")) {
    if (!j["tau"].is_array()) throw SchemaError("tau: expected one matrix per element of delta");
    tau.clear();
    for (std::size_t i = 0; i < j["tau"].size(); ++i) {
      const std::string where = "tau[" + std::to_string(i) + "]";
      auto m = get_matrix(j["tau"][i], where);
      check_square(m, X.rank(), where);
      tau.push_back(X.rank() ? ModMatrix(X.ambient(), m) : X.identity());
    }
  }
  DescentGroup grp = build_group(std::move(G), X, std::move(tau), budget);
  if (!j["sections"].is_array()) throw SchemaError("sections: expected an array");
  std::vector<InertiaSection> sections;
  for (std::size_t i = 0; i < j["sections"].size(); ++i) {
    const json& s = j["sections"][i];
    const std::string where = "sections[" + std::to_string(i) + "]";
    check_keys(s, where, {"delta_subgroup", "a", "b"});
    InertiaSection sec;
    for (std::int64_t v : get_int_list(s["delta_subgroup"], where + ".delta_subgroup")) {
      if (v < 0 || v >= delta.order()) throw SchemaError(where + ".delta_subgroup: element out of range");
      sec.delta_subgroup.push_back(static_cast<int>(v));
    }
    sec.a = get_element(grp.X(), s["a"], where + ".a");
    if (!s["b"].is_array()) throw SchemaError(where + ".b: expected an array of elements");
    if (s["b"].size() != sec.delta_subgroup.size())
      throw SchemaError(where + ".b: need one element per entry of delta_subgroup");
    // b is aligned with delta_subgroup as written; keep the pairing through the sort.
    std::vector<std::pair<int, Element>> pairs;
    for (std::size_t k = 0; k < s["b"].size(); ++k)
      pairs.emplace_back(sec.delta_subgroup[k],
                         get_element(grp.X(), s["b"][k], where + ".b[" + std::to_string(k) + "]"));
    std::sort(pairs.begin(), pairs.end());
    sec.delta_subgroup.clear();
    for (auto& [dl, b] : pairs) {
      sec.delta_subgroup.push_back(dl);
      sec.b.push_back(std::move(b));
    }
    sections.push_back(std::move(sec));
  }
  return make_descent_instance(std::move(grp), std::move(sections));
}

ObservedTower read_observed(const json& j) {
  check_keys(j, "observed", {"kind", "p", "levels"}, {"ramhyp_asserted"});
  ObservedTower o;
  o.p = read_prime(j);
  if (j.contains("ramhyp_asserted")) {
    if (!j["ramhyp_asserted"].is_boolean()) throw SchemaError("ramhyp_asserted: expected a boolean");
    o.ramhyp_asserted = j["ramhyp_asserted"].get<bool>();
  }
  if (!j["levels"].is_array()) throw SchemaError("levels: expected an array");
  for (std::size_t i = 0; i < j["levels"].size(); ++i) {
    const json& l = j["levels"][i];
    const std::string where = "levels[" + std::to_string(i) + "]";
    check_keys(l, where, {"n"}, {"type", "e"});
    ObservedLevel lvl;
    lvl.n = static_cast<int>(get_int(l["n"], where + ".n"));
    if (l.contains("type")) lvl.type = AbelianType(get_exponents(l["type"], where + ".type"));
    if (l.contains("e")) lvl.e = get_int(l["e"], where + ".e");
    o.levels.push_back(std::move(lvl));
  }
  return o;
}

ojson int_list(const std::vector<std::uint64_t>& v) {
  ojson a = ojson::array();
  for (auto x : v) a.push_back(x);
  return a;
}

ojson matrix_json(const ModMatrix& m) {
  ojson a = ojson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    a.push_back(int_list(std::vector<std::uint64_t>(row.begin(), row.end())));
  }
  return a;
}

void write_module(ojson& j, const FiniteHModule& m) {
  j["exponents"] = m.exponents();
  j["sigma"] = matrix_json(m.sigma());
}

}  // namespace

InstanceFile parse_instance(std::string_view text, std::uint64_t budget) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw SchemaError("instance must be an object with a string field 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "tower") return read_tower(j);
  if (kind == "elementary") return read_elementary(j);
  if (kind == "descent") return read_descent(j, budget);
  if (kind == "observed") return read_observed(j);
  throw SchemaError("unknown kind '" + kind + "' (expected tower, elementary, descent or observed)");
}

InstanceFile load_instance(const std::string& path, std::uint64_t budget) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str(), budget);
}

std::string kind_name(const InstanceFile& inst) {
  static const char* names[] = {"tower", "elementary", "descent", "observed"};
  return names[inst.index()];
}

std::string to_json(const InstanceFile& inst) {
  ojson j;
  j["kind"] = kind_name(inst);
  if (const auto* t = std::get_if<TowerInstance>(&inst)) {
    j["p"] = t->module.p();
    write_module(j, t->module);
    ojson gens = ojson::array();
    for (const auto& g : t->c_bar.generators()) gens.push_back(int_list(g));
    j["c_bar"] = gens;
    j["d"] = t->d ? ojson(*t->d) : ojson(nullptr);
  } else if (const auto* e = std::get_if<ElementaryModule>(&inst)) {
    j["p"] = e->p;
    ojson s = ojson::array();
    for (const auto& sm : e->summands) {
      ojson o;
      if (!sm.poly) {
        o["mu"] = sm.mu;
      } else {
        ojson c = ojson::array();
        const LambdaElement& f = sm.poly->poly();
        for (std::size_t i = 0; i <= static_cast<std::size_t>(f.degree()); ++i)
          c.push_back(f.params().symmetric(f.residue(i)));
        o["poly"] = c;
        o["power"] = sm.power;
      }
      s.push_back(o);
    }
    j["summands"] = s;
  } else if (const auto* dsc = std::get_if<DescentInstance>(&inst)) {
    const DescentGroup& grp = dsc->group;
    const DeltaGroup& delta = grp.G().delta();
    j["p"] = grp.G().p();
    j["d"] = grp.G().d();
    bool is_preset = false;
    for (const auto& name : DeltaGroup::preset_names())
      if (name == delta.name() && DeltaGroup::preset(name).table() == delta.table()) is_preset = true;
    if (is_preset) {
      j["delta"] = delta.name();
    } else {
      ojson dj;
      dj["name"] = delta.name();
      dj["table"] = delta.table();
      j["delta"] = dj;
    }
    j["u"] = int_list(grp.G().u());
    write_module(j, grp.X());
    ojson tau = ojson::array();
    for (const auto& t : grp.tau()) tau.push_back(matrix_json(t));
    j["tau"] = tau;
    ojson secs = ojson::array();
    for (const auto& s : dsc->sections) {
      ojson o;
      o["delta_subgroup"] = s.delta_subgroup;
      o["a"] = int_list(s.a);
      ojson b = ojson::array();
      for (const auto& x : s.b) b.push_back(int_list(x));
      o["b"] = b;
      secs.push_back(o);
    }
    j["sections"] = secs;
  } else {
    const auto& o = std::get<ObservedTower>(inst);
    j["p"] = o.p;
    j["ramhyp_asserted"] = o.ramhyp_asserted;
    ojson levels = ojson::array();
    for (const auto& l : o.levels) {
      ojson lj;
      lj["n"] = l.n;
      if (l.type) lj["type"] = l.type->exponents();
      if (l.e) lj["e"] = *l.e;
      levels.push_back(lj);
    }
    j["levels"] = levels;
  }
  return j.dump(2) + "\n";
}

}  // namespace ptower
