#include "ptower/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ptower/descent.hpp"
#include "ptower/errors.hpp"
#include "ptower/inference.hpp"
#include "ptower/instance_io.hpp"
#include "ptower/tower.hpp"

namespace ptower {

namespace {

using ojson = nlohmann::ordered_json;

int env_precision_cap() {
  const char* v = std::getenv("TOWER_MAX_PRECISION");
  if (!v || !*v) return 0;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (*end || n < 1) throw SchemaError("TOWER_MAX_PRECISION must be a positive integer");
  return static_cast<int>(n);
}

std::string power_text(std::uint64_t p, int k) {
  std::uint64_t q = 1;
  for (int i = 0; i < k; ++i) {
    if (q > (std::uint64_t{1} << 40) / p) return std::to_string(p) + "^" + std::to_string(k);
    q *= p;
  }
  return std::to_string(q);
}

std::optional<GrowthFit> try_fit(const std::vector<long long>& e, std::uint64_t p) {
  try {
    return fit_growth(e, p);
  } catch (const PreconditionViolation&) {
  } catch (const NoStableFit&) {
  }
  return std::nullopt;
}

StabilizationDepth parse_k(const std::string& s) {
  if (s == "full") return std::nullopt;
  try {
    std::size_t used = 0;
    int k = std::stoi(s, &used);
    if (used == s.size() && k >= 1) return k;
  } catch (const std::exception&) {
  }
  throw SchemaError("--k must be a positive integer or 'full', got '" + s + "'");
}

std::string k_text(StabilizationDepth k) { return k ? std::to_string(*k) : "full"; }

TowerInstance as_tower(const InstanceFile& f, const std::string& cmd) {
  if (const auto* t = std::get_if<TowerInstance>(&f)) return *t;
  if (const auto* d = std::get_if<DescentInstance>(&f)) return compile_to_tower(*d);
  throw SchemaError(cmd + " needs a tower or descent instance, got '" + kind_name(f) + "'");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

// ---------------------------------------------------------------------------

struct OmegaArgs {
  std::uint64_t p = 0;
  int precision = 0;
  int n = 0;
};

int cmd_omega(const OmegaArgs& a, std::ostream& out) {
  if (!is_prime(a.p)) throw SchemaError("--p must be prime");
  int cap = max_precision_for(a.p);
  if (int env = env_precision_cap()) cap = std::min(cap, env);
  const int N = a.precision > 0 ? a.precision : cap;
  if (N > max_precision_for(a.p))
    throw SchemaError("--precision " + std::to_string(N) + " exceeds the 63-bit limit " +
                      std::to_string(max_precision_for(a.p)) + " for p=" + std::to_string(a.p));
  if (a.n < 0) throw SchemaError("--n must be >= 0");
  DistinguishedPoly w = omega(RingParams(a.p, N), a.n);
  const auto& c = w.poly().residues();
  for (std::size_t i = 0; i < c.size(); ++i) out << (i ? " " : "") << c[i];
  out << "\n";
  MuLambda ml = mu_lambda(w.poly());
  out << "(mu, lambda) = (" << ml.mu << ", " << ml.lambda << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct LayersArgs {
  std::string file;
  int n_max = -1;
  std::string format = "text";
  std::uint64_t budget = kDefaultBudget;
};

void print_report(const LayerReport& rep, std::uint64_t p, const std::optional<GrowthFit>& fit, const LayersArgs& a,
                  const std::vector<std::string>& extra, std::ostream& out) {
  if (a.format == "csv") {
    out << "n,type,e_n\n";
    for (const auto& l : rep.levels) out << l.n << "," << csv_field(l.type.to_list()) << "," << l.e << "\n";
    return;
  }
  if (a.format == "json") {
    ojson j;
    ojson levels = ojson::array();
    for (const auto& l : rep.levels) {
      ojson lj;
      lj["n"] = l.n;
      lj["type"] = l.type.exponents();
      lj["e"] = l.e;
      levels.push_back(lj);
    }
    j["p"] = p;
    j["levels"] = levels;
    j["stable_from"] = rep.stable_from ? ojson(*rep.stable_from) : ojson(nullptr);
    if (fit) {
      ojson f;
      f["mu"] = fit->mu;
      f["lambda"] = fit->lambda;
      f["nu"] = fit->nu;
      f["n0"] = fit->n0;
      j["fit"] = f;
    } else {
      j["fit"] = nullptr;
    }
    out << j.dump(2) << "\n";
    return;
  }
  std::size_t w = 4;
  for (const auto& l : rep.levels) w = std::max(w, l.type.to_list().size());
  out << std::left << std::setw(4) << "n" << std::setw(static_cast<int>(w) + 2) << "type"
      << "e_n\n";
  for (const auto& l : rep.levels)
    out << std::setw(4) << l.n << std::setw(static_cast<int>(w) + 2) << l.type.to_list() << l.e << "\n";
  out << std::right;
  if (rep.stable_from)
    out << "stable from n=" << *rep.stable_from << "\n";
  else
    out << "not stable for n <= " << rep.levels.back().n << "\n";
  if (fit)
    out << "fit: (mu, lambda, nu) = (" << fit->mu << ", " << fit->lambda << ", " << fit->nu << ") from n=" << fit->n0
        << "\n";
  else
    out << "fit: none (fewer than four levels or no exact suffix)\n";
  for (const auto& line : extra) out << line << "\n";
}

int cmd_layers(const LayersArgs& a, std::ostream& out) {
  InstanceFile f = load_instance(a.file, a.budget);
  if (const auto* e = std::get_if<ElementaryModule>(&f)) {
    CompanionOptions opts;
    opts.max_precision = env_precision_cap();
    const int n_max = a.n_max >= 0 ? a.n_max : 6;
    ElementaryGrowth g = elementary_growth(*e, n_max, opts);
    print_report(g.report, e->p, g.fit, a,
                 {"expected: (mu, lambda) = (" + std::to_string(g.expected_mu) + ", " +
                  std::to_string(g.expected_lambda) + ")"},
                 out);
    return kExitOk;
  }
  TowerInstance t = as_tower(f, "layers");
  const int n_max = a.n_max >= 0 ? a.n_max : t.d.value_or(8);
  if (t.d && n_max > *t.d)
    throw LevelOutOfRange("--n-max " + std::to_string(n_max) + " exceeds the tower length d=" + std::to_string(*t.d));
  LayerReport rep = layer_sequence(t, n_max);
  print_report(rep, t.module.p(), try_fit(rep.exponents(), t.module.p()), a, {}, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct FukudaArgs {
  std::string file;
  std::vector<std::string> k;
  int n_max = -1;
  int random = 0;
  std::uint64_t seed = 0;
  std::uint64_t p = 0;
};

// Both formulations on one instance; false when they disagree.
bool fukuda_consistent(const LayerReport& rep, const TowerInstance& inst, StabilizationDepth k,
                       StabilizationVerdict& verdict) {
  verdict = check_stabilization(rep, inst, k);
  return rank_stabilization(rep, inst, k) == verdict;
}

int cmd_fukuda(const FukudaArgs& a, std::ostream& out) {
  std::vector<StabilizationDepth> ks;
  for (const auto& s : a.k) ks.push_back(parse_k(s));

  if (a.random > 0) {
    if (!a.file.empty()) throw SchemaError("give either FILE or --random, not both");
    if (ks.empty()) ks = {1, 2, std::nullopt};
    const std::vector<std::uint64_t> primes = a.p ? std::vector<std::uint64_t>{a.p} : std::vector<std::uint64_t>{2, 3, 5};
    int consistent = 0;
    std::vector<std::string> failures;
    std::vector<int> held(ks.size(), 0);
    for (int i = 0; i < a.random; ++i) {
      const std::uint64_t p = primes[i % primes.size()];
      const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(i);
      TowerInstance inst = random_instance(p, TowerBounds{}, seed);
      bool ok = true;
      try {
        LayerReport rep = layer_sequence(inst, inst.d.value_or(8));
        for (std::size_t j = 0; j < ks.size(); ++j) {
          StabilizationVerdict v;
          if (!fukuda_consistent(rep, inst, ks[j], v)) {
            ok = false;
            failures.push_back("seed " + std::to_string(seed) + " (p=" + std::to_string(p) + ", k=" + k_text(ks[j]) +
                               "): element and rank formulations disagree");
          }
          held[j] += v.hypothesis_holds;
        }
      } catch (const TheoremViolation& e) {
        ok = false;
        failures.push_back("seed " + std::to_string(seed) + " (p=" + std::to_string(p) + "): " + e.what());
      }
      consistent += ok;
    }
    out << consistent << "/" << a.random << " consistent\n";
    for (std::size_t j = 0; j < ks.size(); ++j)
      out << "k=" << k_text(ks[j]) << ": hypothesis held on " << held[j] << "\n";
    for (const auto& f : failures) out << f << "\n";
    return consistent == a.random ? kExitOk : kExitMath;
  }

  if (a.file.empty()) throw SchemaError("fukuda needs FILE or --random COUNT");
  if (ks.empty()) ks = {1};
  TowerInstance inst = as_tower(load_instance(a.file), "fukuda");
  const int n_max = a.n_max >= 0 ? a.n_max : inst.d.value_or(8);
  if (inst.d && n_max > *inst.d)
    throw LevelOutOfRange("--n-max " + std::to_string(n_max) + " exceeds the tower length d=" + std::to_string(*inst.d));
  LayerReport rep = layer_sequence(inst, n_max);
  const std::uint64_t p = inst.module.p();
  for (StabilizationDepth k : ks) {
    StabilizationVerdict v;
    if (!fukuda_consistent(rep, inst, k, v))
      throw TheoremViolation("element and rank formulations disagree for k=" + k_text(k));
    if (ks.size() > 1) out << "k=" << k_text(k) << ": ";
    if (!v.hypothesis_holds) {
      out << "hypothesis fails (no claim)\n";
      continue;
    }
    const int kk = k ? *k : std::max(1, inst.module.top_exponent());
    out << "hypothesis holds; ";
    if (!k)
      out << "stabilized; C̄ = 0 verified\n";
    else
      out << "stabilized mod " << (kk == 1 ? "p" : "p^" + std::to_string(kk)) << "; C̄ ⊆ " << power_text(p, kk)
          << "X̄ verified\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct InferArgs {
  std::string file;
  std::uint64_t p = 0;
  std::vector<std::string> levels;
  bool ramhyp = false;
  std::string k;
  int n = -1;
};

ObservedLevel parse_level(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw SchemaError("--level expects N=TYPE or N=e:E, got '" + s + "'");
  ObservedLevel l;
  try {
    l.n = std::stoi(s.substr(0, eq));
  } catch (const std::exception&) {
    throw SchemaError("--level: bad level number in '" + s + "'");
  }
  std::string rest = s.substr(eq + 1);
  try {
    if (rest.rfind("e:", 0) == 0) {
      l.e = std::stoll(rest.substr(2));
      return l;
    }
    if (!rest.empty() && rest.front() == '[' && rest.back() == ']') rest = rest.substr(1, rest.size() - 2);
    std::vector<int> exps;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) exps.push_back(std::stoi(tok));
    l.type = AbelianType(exps);
  } catch (const std::exception&) {
    throw SchemaError("--level: bad type in '" + s + "'");
  }
  return l;
}

int cmd_infer(const InferArgs& a, std::ostream& out) {
  ObservedTower obs;
  if (!a.file.empty()) {
    InstanceFile f = load_instance(a.file);
    const auto* o = std::get_if<ObservedTower>(&f);
    if (!o) throw SchemaError("infer needs an observed instance, got '" + kind_name(f) + "'");
    obs = *o;
    if (a.p) obs.p = a.p;
  } else {
    obs.p = a.p;
  }
  for (const auto& s : a.levels) obs.levels.push_back(parse_level(s));
  obs.ramhyp_asserted = obs.ramhyp_asserted || a.ramhyp;
  StabilizationDepth k;
  if (!a.k.empty()) k = parse_k(a.k);
  Inference inf = infer(obs, k);
  out << inf.summary << "\n";
  const bool typed = std::any_of(obs.levels.begin(), obs.levels.end(),
                                 [](const ObservedLevel& l) { return l.n <= 1 && l.type; });
  if (inf.applicable && typed)
    for (int n = 1; n <= a.n; ++n) out << "n=" << n << ": " << inf.predicted.to_pretty(obs.p) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct OracleArgs {
  std::string file;
  int n_min = 0;
  int n_max = -1;
  int random = 0;
  std::uint64_t seed = 0;
  std::uint64_t p = 0;
  int d = 0;
  std::string delta;
  std::uint64_t budget = std::uint64_t{1} << 18;
  bool direct_product = false;
  bool verify_commutator = false;
};

std::string level_line(const OracleReport& r, std::uint64_t p) {
  std::string s;
  for (const auto& l : r.levels) {
    if (!s.empty()) s += "; ";
    s += "n=" + std::to_string(l.n) + ": ";
    if (l.equal)
      s += "equal (" + l.closed_form.to_pretty(p) + ")";
    else
      s += "MISMATCH (brute force " + l.bruteforce.to_pretty(p) + ", closed form " + l.closed_form.to_pretty(p) +
           ", tower " + l.tower.to_pretty(p) + ")";
  }
  return s;
}

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
  BruteForceOptions opts;
  opts.budget = a.budget;
  opts.verify_commutator = a.verify_commutator;
  if (a.random > 0) {
    if (!a.file.empty()) throw SchemaError("give either FILE or --random, not both");
    int equal = 0;
    std::vector<std::string> lines;
    for (int i = 0; i < a.random; ++i) {
      const std::uint64_t p = a.p ? a.p : (i % 2 ? 3 : 2);
      const int d = a.d ? a.d : 1 + (i / 2) % 2;
      const std::string dname = !a.delta.empty() ? a.delta : ((i / 4) % 2 ? "Z2" : "trivial");
      DescentBounds b;
      b.max_log_order = 10;
      b.budget = a.budget;
      b.direct_product = a.direct_product;
      const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(i);
      DescentInstance inst = random_descent_instance(p, d, DeltaGroup::preset(dname), b, seed);
      OracleReport r = compare_oracle(inst, 0, inst.d(), opts);
      if (r.all_equal()) {
        ++equal;
        continue;
      }
      std::string u;
      for (auto v : inst.group.G().u()) u += (u.empty() ? "" : ",") + std::to_string(v);
      lines.push_back("seed " + std::to_string(seed) + " (p=" + std::to_string(p) + ", d=" + std::to_string(d) +
                      ", delta=" + dname + ", u=[" + u + "]): " + level_line(r, p));
    }
    out << equal << "/" << a.random << " equal\n";
    for (const auto& l : lines) out << l << "\n";
    return equal == a.random ? kExitOk : kExitMath;
  }
  if (a.file.empty()) throw SchemaError("oracle needs FILE or --random COUNT");
  InstanceFile f = load_instance(a.file, a.budget);
  const auto* inst = std::get_if<DescentInstance>(&f);
  if (!inst) throw SchemaError("oracle needs a descent instance, got '" + kind_name(f) + "'");
  const int n_max = a.n_max >= 0 ? a.n_max : inst->d();
  OracleReport r = compare_oracle(*inst, a.n_min, n_max, opts);
  out << level_line(r, inst->p()) << "\n";
  if (r.witness) {
    out << "witness: n=" << r.witness->n << " x=" << format_element(r.witness->element) << " lies only in the "
        << (r.witness->in_bruteforce ? "brute-force subgroup Y_n" : "closed-form subgroup ω_n C + D") << "\n";
  }
  return r.all_equal() ? kExitOk : kExitMath;
}

// ---------------------------------------------------------------------------

struct AugArgs {
  std::string delta = "trivial";
  std::uint64_t p = 3;
  int d = 1;
  int n = 0;
  int precision = 4;
  std::vector<std::uint64_t> u;
};

int cmd_lemma_aug(const AugArgs& a, std::ostream& out) {
  if (!is_prime(a.p)) throw SchemaError("--p must be prime");
  DeltaGroup delta = DeltaGroup::preset(a.delta);
  std::vector<std::vector<std::uint64_t>> homs;
  if (!a.u.empty())
    homs.push_back(a.u);
  else
    homs = unit_homomorphisms(delta, a.p, a.d);
  std::vector<std::string> failed;
  for (const auto& u : homs) {
    FiniteGroupG G(a.p, a.d, delta, u);
    if (!augmentation_check(G, a.n, a.precision)) {
      std::string s;
      for (auto v : u) s += (s.empty() ? "" : ",") + std::to_string(v);
      failed.push_back("[" + s + "]");
    }
  }
  if (failed.empty()) {
    out << "verified\n";
    return kExitOk;
  }
  out << "failed";
  for (const auto& f : failed) out << " u=" << f;
  out << "\n";
  return kExitMath;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string kind = "tower";
  std::uint64_t p = 3;
  int d = 1;
  std::string delta = "trivial";
  std::uint64_t seed = 0;
  bool direct_product = false;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  if (!is_prime(a.p)) throw SchemaError("--p must be prime");
  if (a.kind == "tower") {
    out << to_json(random_instance(a.p, TowerBounds{}, a.seed));
  } else if (a.kind == "descent") {
    DescentBounds b;
    b.direct_product = a.direct_product;
    out << to_json(random_descent_instance(a.p, a.d, DeltaGroup::preset(a.delta), b, a.seed));
  } else {
    throw SchemaError("--kind must be tower or descent");
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Layers, stabilization and descent checks for potential cyclic p-towers", "ptower"};
  app.require_subcommand(1);

  OmegaArgs oa;
  auto* omega_cmd = app.add_subcommand("omega", "Print omega_n = ((1+T)^{p^n} - 1)/T mod p^N, low to high");
  omega_cmd->add_option("--p", oa.p, "prime")->required();
  omega_cmd->add_option("--precision", oa.precision, "N (default: largest 63-bit precision)");
  omega_cmd->add_option("--n", oa.n, "level")->required();

  LayersArgs la;
  auto* layers_cmd = app.add_subcommand("layers", "Layer types A_n for a tower, elementary or descent file");
  layers_cmd->add_option("file", la.file, "instance file")->required();
  layers_cmd->add_option("--n-max", la.n_max, "last level (default d, or 8 / 6)");
  layers_cmd->add_option("--format", la.format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
  layers_cmd->add_option("--budget", la.budget, "element cap for descent groups");

  FukudaArgs fa;
  auto* fukuda_cmd = app.add_subcommand("fukuda", "Check stabilization A_1/p^k = A_0/p^k => A_n/p^k = A_0/p^k");
  fukuda_cmd->add_option("file", fa.file, "tower or descent file");
  fukuda_cmd->add_option("--k", fa.k, "depth: integer or 'full' (repeatable)");
  fukuda_cmd->add_option("--n-max", fa.n_max, "last level");
  fukuda_cmd->add_option("--random", fa.random, "run COUNT seeded random instances");
  fukuda_cmd->add_option("--seed", fa.seed, "first seed");
  fukuda_cmd->add_option("--p", fa.p, "prime for random instances (default: cycle 2, 3, 5)");

  InferArgs ia;
  auto* infer_cmd = app.add_subcommand("infer", "Predict A_n from observed A_0, A_1 assuming the ramification hypothesis");
  infer_cmd->add_option("file", ia.file, "observed-tower file");
  infer_cmd->add_option("--p", ia.p, "prime");
  infer_cmd->add_option("--level", ia.levels, "N=TYPE (e.g. 0=1, 1=2,1, 2=) or N=e:E (repeatable)");
  infer_cmd->add_flag("--ramhyp", ia.ramhyp, "assert the ramification hypothesis");
  infer_cmd->add_option("--k", ia.k, "stabilization mod p^k instead of full");
  infer_cmd->add_option("--n", ia.n, "print the prediction up to this level");

  OracleArgs ora;
  auto* oracle_cmd = app.add_subcommand("oracle", "Compare brute-force descent quotients with the closed form");
  oracle_cmd->add_option("file", ora.file, "descent file");
  oracle_cmd->add_option("--n-min", ora.n_min, "first level");
  oracle_cmd->add_option("--n-max", ora.n_max, "last level (default d)");
  oracle_cmd->add_option("--random", ora.random, "run COUNT seeded random instances");
  oracle_cmd->add_option("--seed", ora.seed, "first seed");
  oracle_cmd->add_option("--p", ora.p, "prime (default: alternate 2, 3)");
  oracle_cmd->add_option("--d", ora.d, "tower length (default: alternate 1, 2)");
  oracle_cmd->add_option("--delta", ora.delta, "Delta preset (default: alternate trivial, Z2)");
  oracle_cmd->add_option("--budget", ora.budget, "cap on |X| * |G|");
  oracle_cmd->add_flag("--direct-product", ora.direct_product, "random instances with Delta acting trivially on H");
  oracle_cmd->add_flag("--verify-commutator", ora.verify_commutator, "also check the commutator subgroup");

  AugArgs aa;
  auto* aug_cmd = app.add_subcommand("lemma-aug", "Check I_{G_n} = <h^{p^n} - 1, I_Delta> in (Z/p^N)[G_n]");
  aug_cmd->add_option("--delta", aa.delta, "Delta preset")->check(CLI::IsMember(DeltaGroup::preset_names()));
  aug_cmd->add_option("--p", aa.p, "prime");
  aug_cmd->add_option("--d", aa.d, "H = Z/p^d");
  aug_cmd->add_option("--n", aa.n, "level");
  aug_cmd->add_option("--precision", aa.precision, "N");
  aug_cmd->add_option("--u", aa.u, "action of Delta on H (default: every homomorphism)");

  GenerateArgs ga;
  auto* gen_cmd = app.add_subcommand("generate", "Emit a seeded random instance file");
  gen_cmd->add_option("--kind", ga.kind, "tower or descent")->check(CLI::IsMember({"tower", "descent"}));
  gen_cmd->add_option("--p", ga.p, "prime");
  gen_cmd->add_option("--d", ga.d, "descent tower length");
  gen_cmd->add_option("--delta", ga.delta, "Delta preset")->check(CLI::IsMember(DeltaGroup::preset_names()));
  gen_cmd->add_option("--seed", ga.seed, "seed");
  gen_cmd->add_flag("--direct-product", ga.direct_product, "Delta acts trivially on H");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*omega_cmd) return cmd_omega(oa, out);
    if (*layers_cmd) return cmd_layers(la, out);
    if (*fukuda_cmd) return cmd_fukuda(fa, out);
    if (*infer_cmd) return cmd_infer(ia, out);
    if (*oracle_cmd) return cmd_oracle(ora, out);
    if (*aug_cmd) return cmd_lemma_aug(aa, out);
    if (*gen_cmd) return cmd_generate(ga, out);
  } catch (const TheoremViolation& e) {
    err << "theorem violation: " << e.what() << "\n";
    return kExitMath;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "; shrink the instance or raise --budget\n";
    return kExitBudget;
  } catch (const PrecisionExhausted& e) {
    err << "precision exhausted: " << e.what() << "\n";
    return kExitBudget;
  } catch (const GenerationFailed& e) {
    err << "generation failed: " << e.what() << "\n";
    return kExitBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ptower
