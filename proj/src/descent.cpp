#include "ptower/descent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "ptower/errors.hpp"

namespace ptower {

// ---------------------------------------------------------------------------
// Δ

DeltaGroup DeltaGroup::from_table(std::string name, std::vector<std::vector<int>> table) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw InvalidGroupTable("group table is empty");
  if (n > kMaxDeltaOrder)
    throw InvalidGroupTable("group order " + std::to_string(n) + " exceeds " + std::to_string(kMaxDeltaOrder));
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw InvalidGroupTable("group table is not square");
    for (int v : row)
      if (v < 0 || v >= n) throw InvalidGroupTable("group table entry out of range");
  }
  int e = -1;
  for (int a = 0; a < n && e < 0; ++a) {
    bool ok = true;
    for (int b = 0; b < n && ok; ++b) ok = table[a][b] == b && table[b][a] == b;
    if (ok) e = a;
  }
  if (e < 0) throw InvalidGroupTable("group table has no identity");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw InvalidGroupTable("group table is not associative at (" + std::to_string(a) + "," + std::to_string(b) +
                                  "," + std::to_string(c) + ")");
  std::vector<int> inv(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table[a][b] == e && table[b][a] == e) inv[a] = b;
  if (std::find(inv.begin(), inv.end(), -1) != inv.end()) throw InvalidGroupTable("group table lacks inverses");
  DeltaGroup g;
  g.name_ = std::move(name);
  g.table_ = std::move(table);
  g.inverse_ = std::move(inv);
  g.identity_ = e;
  return g;
}

namespace {

std::vector<std::vector<int>> cyclic_table(int n) {
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return t;
}

std::vector<std::vector<int>> s3_table() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  auto index = [&](const std::array<int, 3>& q) {
    return static_cast<int>(std::find(perms.begin(), perms.end(), q) - perms.begin());
  };
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      t[a][b] = index(c);
    }
  return t;
}

}  // namespace

DeltaGroup DeltaGroup::preset(std::string_view name) {
  if (name == "trivial") return from_table("trivial", cyclic_table(1));
  if (name == "Z2") return from_table("Z2", cyclic_table(2));
  if (name == "Z3") return from_table("Z3", cyclic_table(3));
  if (name == "S3") return from_table("S3", s3_table());
  throw PreconditionViolation("unknown delta preset '" + std::string(name) + "' (expected trivial, Z2, Z3 or S3)");
}

std::vector<std::string> DeltaGroup::preset_names() { return {"trivial", "Z2", "Z3", "S3"}; }

bool DeltaGroup::is_subgroup(const std::vector<int>& elems) const {
  if (elems.empty()) return false;
  std::vector<char> in(order(), 0);
  for (int a : elems) {
    if (a < 0 || a >= order() || in[a]) return false;
    in[a] = 1;
  }
  for (int a : elems)
    for (int b : elems)
      if (!in[mul(a, b)]) return false;
  return true;
}

std::vector<std::vector<int>> DeltaGroup::subgroups() const {
  std::vector<std::vector<int>> out;
  const int n = order();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (!(mask >> identity_ & 1u)) continue;
    std::vector<int> s;
    for (int a = 0; a < n; ++a)
      if (mask >> a & 1u) s.push_back(a);
    if (is_subgroup(s)) out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::vector<std::uint64_t>> unit_homomorphisms(const DeltaGroup& delta, std::uint64_t p, int d) {
  const std::uint64_t q = checked_pow(p, d);
  std::vector<std::uint64_t> units;
  for (std::uint64_t v = 1; v < q; ++v)
    if (v % p) units.push_back(v);
  const int n = delta.order();
  std::vector<std::vector<std::uint64_t>> out;
  std::vector<std::uint64_t> u(n, 0);
  auto mulq = [q](std::uint64_t a, std::uint64_t b) { return a * b % q; };
  // Depth-first assignment with every fully assigned product checked.
  auto consistent = [&](int k) {
    for (int a = 0; a <= k; ++a)
      for (int b = 0; b <= k; ++b) {
        int c = delta.mul(a, b);
        if (c <= k && mulq(u[a], u[b]) != u[c] % q) return false;
      }
    return true;
  };
  auto rec = [&](auto&& self, int k) -> void {
    if (k == n) {
      out.push_back(u);
      return;
    }
    for (std::uint64_t v : units) {
      u[k] = v;
      if (consistent(k)) self(self, k + 1);
    }
  };
  if (q == 1) return out;
  rec(rec, 0);
  return out;
}

// ---------------------------------------------------------------------------
// G = H ⋊ Δ

FiniteGroupG::FiniteGroupG(std::uint64_t p, int d, DeltaGroup delta, std::vector<std::uint64_t> u)
    : p_(p), d_(d), q_(0), delta_(std::move(delta)), u_(std::move(u)) {
  if (!is_prime(p)) throw PreconditionViolation("G: p is not prime");
  if (d < 1) throw PreconditionViolation("G: d must be >= 1");
  q_ = checked_pow(p, d);
  if (static_cast<int>(u_.size()) != delta_.order())
    throw ActionNotHomomorphism("action of Delta on H needs one exponent per element of Delta");
  for (auto& v : u_) {
    v %= q_;
    if (v % p == 0) throw ActionNotHomomorphism("Delta must act on H by automorphisms (exponent prime to p)");
  }
  for (int a = 0; a < delta_.order(); ++a)
    for (int b = 0; b < delta_.order(); ++b)
      if (u_[a] * u_[b] % q_ != u_[delta_.mul(a, b)])
        throw ActionNotHomomorphism("exponent map Delta -> (Z/p^d)^x is not a homomorphism");
}

int FiniteGroupG::mul(int a, int b) const {
  const std::uint64_t i = h_exponent(a), j = h_exponent(b);
  const int da = delta_part(a), db = delta_part(b);
  return element((i + u_[da] * j) % q_, delta_.mul(da, db));
}

int FiniteGroupG::inv(int a) const {
  const std::uint64_t i = h_exponent(a);
  const int di = delta_.inv(delta_part(a));
  // (h^i δ)^{-1} = δ^{-1} h^{-i} = h^{-u_{δ^{-1}} i} δ^{-1}
  return element((q_ - u_[di] * i % q_) % q_, di);
}

int FiniteGroupG::pow(int a, std::uint64_t k) const {
  int r = identity();
  while (k) {
    if (k & 1u) r = mul(r, a);
    a = mul(a, a);
    k >>= 1u;
  }
  return r;
}

bool FiniteGroupG::in_level(int g, int n) const {
  if (n < 0 || n > d_) throw LevelOutOfRange("level " + std::to_string(n) + " outside [0, d]");
  return h_exponent(g) % checked_pow(p_, n) == 0;
}

std::vector<int> FiniteGroupG::level_elements(int n) const {
  std::vector<int> out;
  for (int g = 0; g < order(); ++g)
    if (in_level(g, n)) out.push_back(g);
  return out;
}

// ---------------------------------------------------------------------------
// 𝒢 = X ⋊ G

std::uint64_t DescentGroup::order() const { return x_size_ * static_cast<std::uint64_t>(g_.order()); }

DescentGroup::Elem DescentGroup::mul(const Elem& a, const Elem& b) const {
  return {x_.add(a.x, act(a.g, b.x)), g_.mul(a.g, b.g)};
}

DescentGroup::Elem DescentGroup::inv(const Elem& a) const {
  const int gi = g_.inv(a.g);
  return {x_.sub(x_.zero(), act(gi, a.x)), gi};
}

DescentGroup::Elem DescentGroup::pow(const Elem& a, std::uint64_t k) const {
  Elem r{x_.zero(), g_.identity()};
  Elem base = a;
  while (k) {
    if (k & 1u) r = mul(r, base);
    base = mul(base, base);
    k >>= 1u;
  }
  return r;
}

std::uint64_t DescentGroup::encode(const Element& x) const {
  std::uint64_t idx = 0, scale = 1;
  for (std::size_t i = 0; i < x_.rank(); ++i) {
    idx += (x[i] % x_.component_modulus(i)) * scale;
    scale *= x_.component_modulus(i);
  }
  return idx;
}

Element DescentGroup::decode(std::uint64_t index) const {
  Element x(x_.rank());
  for (std::size_t i = 0; i < x_.rank(); ++i) {
    x[i] = index % x_.component_modulus(i);
    index /= x_.component_modulus(i);
  }
  return x;
}

DescentGroup build_group(FiniteGroupG G, FiniteHModule X, std::vector<ModMatrix> tau, std::uint64_t budget) {
  if (X.p() != G.p()) throw PreconditionViolation("X and G use different primes");
  const int nd = G.delta().order();
  if (static_cast<int>(tau.size()) != nd)
    throw ActionNotHomomorphism("need one action matrix per element of Delta");
  // log_p |𝒢| against the budget, without overflowing.
  const long double log_budget = std::log(static_cast<long double>(budget));
  const long double log_size =
      X.log_order() * std::log(static_cast<long double>(X.p())) + std::log(static_cast<long double>(G.order()));
  if (log_size > log_budget + 1e-9L)
    throw BudgetExceeded("|X|*|G| exceeds the enumeration budget of " + std::to_string(budget) + " elements");

  for (auto& t : tau) {
    if (t.rows() != X.rank() || t.cols() != X.rank()) throw PreconditionViolation("action matrix has the wrong size");
    ModMatrix over(X.ambient(), t.rows(), t.cols());
    if (t.params().p() != X.p() || t.params().precision() < X.ambient().precision())
      throw PreconditionViolation("action matrix ring does not match X");
    for (std::size_t i = 0; i < t.rows(); ++i)
      for (std::size_t j = 0; j < t.cols(); ++j) over(i, j) = t(i, j) % X.ambient().modulus();
    if (!is_well_defined(X.exponents(), X.p(), over))
      throw WellDefinednessViolation("an element of Delta does not act by a well-defined endomorphism of X");
    t = X.reduce_endomorphism(std::move(over));
  }
  const ModMatrix I = X.reduce_endomorphism(X.identity());
  if (!(X.endo_power(X.sigma(), G.h_order()) == I))
    throw ActionNotHomomorphism("sigma^{p^d} is not the identity on X");
  if (!(tau[G.delta().identity()] == I)) throw ActionNotHomomorphism("the identity of Delta does not act trivially");
  for (int a = 0; a < nd; ++a) {
    for (int b = 0; b < nd; ++b)
      if (!(X.compose(tau[a], tau[b]) == tau[G.delta().mul(a, b)]))
        throw ActionNotHomomorphism("Delta action is not a homomorphism at (" + std::to_string(a) + "," +
                                    std::to_string(b) + ")");
    if (!(X.compose(tau[a], X.sigma()) == X.compose(X.endo_power(X.sigma(), G.u(a)), tau[a])))
      throw ActionNotHomomorphism("tau_delta sigma tau_delta^{-1} != sigma^{u_delta} for delta = " +
                                  std::to_string(a));
  }

  DescentGroup out(std::move(G), std::move(X), std::move(tau));
  for (std::size_t i = 0; i < out.x_.rank(); ++i) out.x_size_ *= out.x_.component_modulus(i);
  std::vector<ModMatrix> sigma_pows{I};
  for (std::uint64_t i = 1; i < out.g_.h_order(); ++i) sigma_pows.push_back(out.x_.compose(sigma_pows.back(), out.x_.sigma()));
  for (int g = 0; g < out.g_.order(); ++g)
    out.action_.push_back(out.x_.compose(sigma_pows[out.g_.h_exponent(g)], out.tau_[out.g_.delta_part(g)]));
  return out;
}

// ---------------------------------------------------------------------------
// Subgroup closure on integer codes (x_index * |G| + g).

namespace {

class CodedGroup {
 public:
  CodedGroup(const DescentGroup& grp, std::uint64_t budget) : grp_(grp), ng_(static_cast<std::uint64_t>(grp.G().order())) {
    if (grp.order() > budget)
      throw BudgetExceeded("|𝒢| = " + std::to_string(grp.order()) + " exceeds the enumeration budget of " +
                           std::to_string(budget));
    const FiniteHModule& X = grp.X();
    for (std::size_t i = 0; i < X.rank(); ++i) radix_.push_back(X.component_modulus(i));
    act_.assign(ng_ * grp.x_size(), 0);
    for (std::uint64_t xi = 0; xi < grp.x_size(); ++xi) {
      Element x = grp.decode(xi);
      for (std::uint64_t g = 0; g < ng_; ++g)
        act_[g * grp.x_size() + xi] = static_cast<std::uint32_t>(grp.encode(grp.act(static_cast<int>(g), x)));
    }
    gmul_.assign(ng_ * ng_, 0);
    for (std::uint64_t a = 0; a < ng_; ++a)
      for (std::uint64_t b = 0; b < ng_; ++b)
        gmul_[a * ng_ + b] = static_cast<std::uint32_t>(grp.G().mul(static_cast<int>(a), static_cast<int>(b)));
  }

  std::uint64_t size() const { return grp_.order(); }
  std::uint64_t code(const DescentGroup::Elem& e) const { return grp_.encode(e.x) * ng_ + static_cast<std::uint64_t>(e.g); }
  DescentGroup::Elem elem(std::uint64_t c) const { return {grp_.decode(c / ng_), static_cast<int>(c % ng_)}; }
  std::uint64_t identity() const { return static_cast<std::uint64_t>(grp_.G().identity()); }
  int g_of(std::uint64_t c) const { return static_cast<int>(c % ng_); }
  std::uint64_t x_of(std::uint64_t c) const { return c / ng_; }

  std::uint64_t add_x(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t out = 0, scale = 1;
    for (std::uint64_t q : radix_) {
      out += ((a % q + b % q) % q) * scale;
      a /= q;
      b /= q;
      scale *= q;
    }
    return out;
  }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t ga = a % ng_, gb = b % ng_;
    const std::uint64_t x = add_x(a / ng_, act_[ga * grp_.x_size() + b / ng_]);
    return x * ng_ + gmul_[ga * ng_ + gb];
  }

 private:
  const DescentGroup& grp_;
  std::uint64_t ng_;
  std::vector<std::uint64_t> radix_;
  std::vector<std::uint32_t> act_;
  std::vector<std::uint32_t> gmul_;
};

// Dimino's algorithm: the subgroup is kept as a union of right cosets of the
// previous subgroup, so each new generator costs one pass over the result.
template <class Mul>
class Closure {
 public:
  Closure(std::uint64_t universe, std::uint64_t identity, Mul mul) : in_(universe, 0), mul_(std::move(mul)) {
    in_[identity] = 1;
    elems_.push_back(identity);
  }

  bool contains(std::uint64_t c) const { return in_[c] != 0; }
  const std::vector<std::uint64_t>& elements() const { return elems_; }
  const std::vector<std::uint64_t>& generators() const { return gens_; }

  void add(std::uint64_t g) {
    if (in_[g]) return;
    gens_.push_back(g);
    const std::vector<std::uint64_t> old = elems_;
    std::vector<std::uint64_t> reps{g};
    add_coset(old, g);
    for (std::size_t k = 0; k < reps.size(); ++k)
      for (std::uint64_t s : gens_) {
        std::uint64_t e = mul_(reps[k], s);
        if (!in_[e]) {
          reps.push_back(e);
          add_coset(old, e);
        }
      }
  }

 private:
  void add_coset(const std::vector<std::uint64_t>& old, std::uint64_t r) {
    for (std::uint64_t h : old) {
      std::uint64_t e = mul_(h, r);
      if (!in_[e]) {
        in_[e] = 1;
        elems_.push_back(e);
      }
    }
  }

  std::vector<char> in_;
  std::vector<std::uint64_t> elems_;
  std::vector<std::uint64_t> gens_;
  Mul mul_;
};

template <class Mul>
Closure<Mul> make_closure(std::uint64_t universe, std::uint64_t identity, Mul mul) {
  return Closure<Mul>(universe, identity, std::move(mul));
}

// Type of X/Y from the orders |p^i X + Y|, independent of any normal form.
AbelianType type_by_counting(const DescentGroup& grp, const std::vector<std::uint64_t>& y_codes) {
  const FiniteHModule& X = grp.X();
  if (X.rank() == 0) return AbelianType{};
  std::vector<std::uint64_t> radix;
  for (std::size_t i = 0; i < X.rank(); ++i) radix.push_back(X.component_modulus(i));
  auto add = [radix](std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0, scale = 1;
    for (std::uint64_t q : radix) {
      out += ((a % q + b % q) % q) * scale;
      a /= q;
      b /= q;
      scale *= q;
    }
    return out;
  };
  const int e1 = X.top_exponent();
  std::vector<long double> log_sizes;  // log_p |p^i X + Y|
  for (int i = 0; i <= e1; ++i) {
    auto cl = make_closure(grp.x_size(), 0, add);
    for (std::uint64_t y : y_codes) cl.add(y);
    for (std::size_t j = 0; j < X.rank(); ++j) {
      Element v = X.scale(checked_pow(X.p(), i), X.basis(j));
      cl.add(grp.encode(v));
    }
    std::uint64_t s = cl.elements().size();
    int l = 0;
    while (s > 1) {
      s /= X.p();
      ++l;
    }
    log_sizes.push_back(l);
  }
  // rank_{p^i} A = log|p^{i-1}A| - log|p^i A|
  std::vector<int> ranks(e1 + 2, 0);
  for (int i = 1; i <= e1; ++i) ranks[i] = static_cast<int>(log_sizes[i - 1] - log_sizes[i]);
  std::vector<int> exps;
  for (int i = 1; i <= e1; ++i)
    for (int c = 0; c < ranks[i] - ranks[i + 1]; ++c) exps.push_back(i);
  return AbelianType(std::move(exps));
}

}  // namespace

std::vector<DescentGroup::Elem> section_elements(const DescentGroup& group, const InertiaSection& s,
                                                 std::uint64_t budget) {
  CodedGroup cg(group, budget);
  auto cl = make_closure(cg.size(), cg.identity(), [&cg](std::uint64_t a, std::uint64_t b) { return cg.mul(a, b); });
  cl.add(cg.code({group.X().reduce_residues(s.a), group.G().h()}));
  for (std::size_t k = 0; k < s.delta_subgroup.size(); ++k)
    cl.add(cg.code({group.X().reduce_residues(s.b.at(k)), group.G().element(0, s.delta_subgroup[k])}));
  std::vector<DescentGroup::Elem> out;
  for (std::uint64_t c : cl.elements()) out.push_back(cg.elem(c));
  return out;
}

DescentInstance make_descent_instance(DescentGroup group, std::vector<InertiaSection> sections) {
  const FiniteGroupG& G = group.G();
  const FiniteHModule& X = group.X();
  if (sections.empty()) throw PreconditionViolation("at least the totally ramified section is required");
  const ModMatrix wd = X.omega_endomorphism(G.d());
  for (std::size_t i = 0; i < sections.size(); ++i) {
    auto& s = sections[i];
    const std::string tag = "section " + std::to_string(i + 1) + ": ";
    std::sort(s.delta_subgroup.begin(), s.delta_subgroup.end());
    if (!G.delta().is_subgroup(s.delta_subgroup)) throw PreconditionViolation(tag + "Delta_i is not a subgroup");
    if (s.a.size() != X.rank()) throw PreconditionViolation(tag + "a has the wrong length");
    if (s.b.size() != s.delta_subgroup.size())
      throw PreconditionViolation(tag + "need one b per element of Delta_i");
    s.a = X.reduce_residues(s.a);
    for (auto& b : s.b) {
      if (b.size() != X.rank()) throw PreconditionViolation(tag + "b has the wrong length");
      b = X.reduce_residues(b);
    }
    if (i == 0) {
      if (static_cast<int>(s.delta_subgroup.size()) != G.delta().order())
        throw PreconditionViolation("section 1 must be totally ramified (Delta_1 = Delta)");
      if (!X.is_zero(s.a)) throw PreconditionViolation("section 1 must have a_1 = 0");
      for (const auto& b : s.b)
        if (!X.is_zero(b)) throw PreconditionViolation("section 1 must have b_{delta,1} = 0");
    }
    if (!X.is_zero(X.act(wd, s.a))) throw PreconditionViolation(tag + "omega_d a_i != 0, so (a_i, h) has order > p^d");
    auto elems = section_elements(group, s);
    const std::uint64_t expect = G.h_order() * s.delta_subgroup.size();
    if (elems.size() != expect)
      throw PreconditionViolation(tag + "generated subgroup has order " + std::to_string(elems.size()) +
                                  ", expected p^d |Delta_i| = " + std::to_string(expect));
    for (const auto& e : elems)
      if (e.g == G.identity() && !X.is_zero(e.x))
        throw PreconditionViolation(tag + "inertia subgroup meets X nontrivially");
  }
  return {std::move(group), std::move(sections)};
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

void check_descent_level(const DescentInstance& inst, int n) {
  if (n < 0 || n > inst.d())
    throw LevelOutOfRange("level " + std::to_string(n) + " outside [0, " + std::to_string(inst.d()) + "]");
}

}  // namespace

BruteForceLayer bruteforce_layer(const DescentInstance& inst, int n, const BruteForceOptions& opts) {
  check_descent_level(inst, n);
  const DescentGroup& grp = inst.group;
  const FiniteGroupG& G = grp.G();
  const FiniteHModule& X = grp.X();
  CodedGroup cg(grp, opts.budget);
  auto mul = [&cg](std::uint64_t a, std::uint64_t b) { return cg.mul(a, b); };
  const std::vector<int> Gn = G.level_elements(n);

  auto cl = make_closure(cg.size(), cg.identity(), mul);
  // I_{G_n} X: conjugation commutators (0,g)(x,1)(0,g)^{-1}(x,1)^{-1}.
  std::vector<std::uint64_t> commutators;
  for (int g : Gn)
    for (std::size_t j = 0; j < X.rank(); ++j) {
      DescentGroup::Elem t{X.zero(), g}, x{X.basis(j), G.identity()};
      DescentGroup::Elem c = grp.mul(grp.mul(grp.mul(t, x), grp.inv(t)), grp.inv(x));
      commutators.push_back(cg.code(c));
    }
  for (std::uint64_t c : commutators) cl.add(c);
  // I_{w_i}(L/F_n) = I_{w_i} ∩ 𝒢_n
  for (const auto& s : inst.sections)
    for (const auto& e : section_elements(grp, s, opts.budget))
      if (G.in_level(e.g, n)) cl.add(cg.code(e));

  BruteForceLayer out;
  std::vector<std::uint64_t> y_codes;
  for (std::uint64_t c : cl.elements())
    if (cg.g_of(c) == G.identity()) y_codes.push_back(cg.x_of(c));
  std::sort(y_codes.begin(), y_codes.end());
  for (std::uint64_t y : y_codes) out.y.push_back(grp.decode(y));
  std::sort(out.y.begin(), out.y.end());
  out.type = type_by_counting(grp, y_codes);

  if (opts.verify_commutator) {
    // [𝒢_n, 𝒢_n] as the normal closure of commutators of generators.
    std::vector<std::uint64_t> gens;
    for (std::size_t j = 0; j < X.rank(); ++j) gens.push_back(cg.code({X.basis(j), G.identity()}));
    for (int g : Gn) gens.push_back(cg.code({X.zero(), g}));
    auto inv = [&](std::uint64_t c) { return cg.code(grp.inv(cg.elem(c))); };
    auto comm = [&](std::uint64_t a, std::uint64_t b) { return mul(mul(mul(a, b), inv(a)), inv(b)); };
    auto lhs = make_closure(cg.size(), cg.identity(), mul);
    for (std::uint64_t a : gens)
      for (std::uint64_t b : gens) lhs.add(comm(a, b));
    for (bool grew = true; grew;) {
      const std::size_t before = lhs.elements().size();
      const std::vector<std::uint64_t> kg = lhs.generators();
      for (std::uint64_t s : gens)
        for (std::uint64_t k : kg) lhs.add(mul(mul(s, k), inv(s)));
      grew = lhs.elements().size() != before;
    }
    // I_{G_n}X ⋊ [I_w, I_w] with I_w = I_{w_1} ∩ 𝒢_n = {(0, g) : g ∈ G_n}.
    auto rhs = make_closure(cg.size(), cg.identity(), mul);
    for (std::uint64_t c : commutators) rhs.add(c);
    const std::size_t igx = rhs.elements().size();
    auto gcomm = make_closure(cg.size(), cg.identity(), mul);
    for (int a : Gn)
      for (int b : Gn) gcomm.add(comm(cg.code({X.zero(), a}), cg.code({X.zero(), b})));
    for (std::uint64_t c : gcomm.elements()) rhs.add(c);
    bool ok = rhs.elements().size() == lhs.elements().size() &&
              rhs.elements().size() == igx * gcomm.elements().size();
    for (std::uint64_t c : rhs.elements()) ok = ok && lhs.contains(c);
    if (!ok)
      throw TheoremViolation("commutator subgroup of 𝒢_" + std::to_string(n) + " is not I_G X ⋊ [I_w, I_w]");
  }
  return out;
}

AbelianType bruteforce_class_quotient(const DescentInstance& inst, int n, const BruteForceOptions& opts) {
  return bruteforce_layer(inst, n, opts).type;
}

Submodule descent_c(const DescentInstance& inst) {
  const FiniteHModule& X = inst.group.X();
  std::vector<Element> gens;
  const ModMatrix T = X.sigma_minus_one();
  for (std::size_t j = 0; j < X.rank(); ++j) gens.push_back(X.act(T, X.basis(j)));
  for (std::size_t i = 1; i < inst.sections.size(); ++i) gens.push_back(inst.sections[i].a);
  return span(X, gens);
}

Submodule descent_d(const DescentInstance& inst) {
  const FiniteHModule& X = inst.group.X();
  std::vector<Element> gens;
  for (const auto& t : inst.group.tau()) {
    const ModMatrix m = X.reduce_endomorphism(t - X.identity());
    for (std::size_t j = 0; j < X.rank(); ++j) gens.push_back(X.act(m, X.basis(j)));
  }
  for (const auto& s : inst.sections)
    for (const auto& b : s.b) gens.push_back(b);
  return span(X, gens);
}

Submodule closed_form_submodule(const DescentInstance& inst, int n) {
  check_descent_level(inst, n);
  const FiniteHModule& X = inst.group.X();
  return sum_submodules(image_submodule(X.omega_endomorphism(n), descent_c(inst)), descent_d(inst));
}

AbelianType closed_form_quotient(const DescentInstance& inst, int n) {
  return quotient_type(inst.group.X(), closed_form_submodule(inst, n));
}

TowerInstance compile_to_tower(const DescentInstance& inst) {
  const FiniteHModule& X = inst.group.X();
  QuotientPresentation q = quotient_module(X, descent_d(inst));
  const Submodule c = descent_c(inst);
  std::vector<Element> cbar;
  for (const auto& g : c.generators()) cbar.push_back(q.project(g));
  return make_tower(q.module, cbar, inst.d());
}

bool OracleReport::all_equal() const {
  return std::all_of(levels.begin(), levels.end(), [](const OracleLevel& l) { return l.equal; });
}

OracleReport compare_oracle(const DescentInstance& inst, int n_min, int n_max, const BruteForceOptions& opts) {
  check_descent_level(inst, n_min);
  check_descent_level(inst, n_max);
  const DescentGroup& grp = inst.group;
  const FiniteHModule& X = grp.X();
  const TowerInstance tower = compile_to_tower(inst);
  OracleReport report;
  for (int n = n_min; n <= n_max; ++n) {
    BruteForceLayer bf = bruteforce_layer(inst, n, opts);
    Submodule cf = closed_form_submodule(inst, n);
    QuotientPresentation proj = quotient_module(X, cf);
    OracleLevel lvl{n, bf.type, quotient_type(X, cf), layer(tower, n), false, false};
    lvl.equal = lvl.bruteforce == lvl.closed_form && lvl.tower == lvl.closed_form;
    lvl.same_subgroup = static_cast<long long>(bf.y.size()) == [&] {
      long long s = 1;
      for (long long k = 0; k < cf.log_order(); ++k) s *= static_cast<long long>(X.p());
      return s;
    }() && std::all_of(bf.y.begin(), bf.y.end(), [&](const Element& y) { return proj.module.is_zero(proj.project(y)); });
    if (!report.witness && lvl.bruteforce != lvl.closed_form) {
      for (std::uint64_t idx = 0; idx < grp.x_size(); ++idx) {
        Element x = grp.decode(idx);
        const bool in_bf = std::binary_search(bf.y.begin(), bf.y.end(), x);
        const bool in_cf = proj.module.is_zero(proj.project(x));
        if (in_bf != in_cf) {
          report.witness = OracleWitness{n, x, in_bf};
          break;
        }
      }
    }
    report.levels.push_back(std::move(lvl));
  }
  return report;
}

// ---------------------------------------------------------------------------

bool augmentation_check(const FiniteGroupG& G, int n, int precision, std::uint64_t budget) {
  if (n < 0 || n > G.d()) throw LevelOutOfRange("level outside [0, d]");
  const std::vector<int> elems = G.level_elements(n);
  if (elems.size() > budget) throw BudgetExceeded("|G_n| exceeds the enumeration budget");
  const RingParams R(G.p(), precision);
  std::map<int, std::size_t> col;
  for (std::size_t i = 0; i < elems.size(); ++i) col[elems[i]] = i;

  const std::uint64_t step = checked_pow(G.p(), n);
  const std::uint64_t reps = G.h_order() / step;
  const int hpn = G.pow(G.h(), step);
  std::vector<std::vector<std::uint64_t>> rows;
  auto diff = [&](int a, int b) {
    std::vector<std::uint64_t> v(elems.size(), 0);
    v[col.at(a)] = R.add(v[col.at(a)], 1);
    v[col.at(b)] = R.sub(v[col.at(b)], 1);
    return v;
  };
  for (std::uint64_t j = 0; j < reps; ++j) {
    const int hj = G.pow(hpn, j);
    rows.push_back(diff(G.mul(hj, hpn), hj));
    for (int delta = 0; delta < G.delta().order(); ++delta)
      rows.push_back(diff(G.mul(hj, G.element(0, delta)), hj));
  }
  auto to_matrix = [&](const std::vector<std::vector<std::uint64_t>>& rs) {
    ModMatrix m(R, rs.size(), elems.size());
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (std::size_t j = 0; j < elems.size(); ++j) m(i, j) = rs[i][j];
    return m;
  };
  const std::vector<int> base = cokernel_exponents(to_matrix(rows));
  for (int g : elems) {
    auto with = rows;
    with.push_back(diff(g, G.identity()));
    if (cokernel_exponents(to_matrix(with)) != base) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Random instances

namespace {

std::vector<int> random_partition(int total, int max_parts, std::mt19937_64& rng) {
  std::vector<int> parts;
  while (total > 0 && static_cast<int>(parts.size()) < max_parts) {
    const bool last = static_cast<int>(parts.size()) + 1 == max_parts;
    const int part = last ? total : std::uniform_int_distribution<int>(1, total)(rng);
    parts.push_back(part);
    total -= part;
  }
  std::sort(parts.begin(), parts.end(), std::greater<>());
  return parts;
}

// Unipotent-mod-p automorphism with σ^{p^d} = 1, over Z/p^{e_1}.
ModMatrix random_block(std::uint64_t p, int d, const std::vector<int>& exps, std::mt19937_64& rng) {
  const std::size_t r = exps.size();
  const RingParams amb(p, r ? exps.front() : 1);
  const ModMatrix I = ModMatrix::identity(amb, r);
  for (int attempt = 0; attempt < 32; ++attempt) {
    ModMatrix s = I;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        const int gap = std::max(0, exps[i] - exps[j]);
        std::uint64_t v = 0;
        if (j > i && rng() % 3 == 0) v = amb.mul(rng() % amb.modulus(), checked_pow(p, gap) % amb.modulus());
        if (rng() % 2 && gap + 1 < amb.precision()) v = amb.add(v, amb.mul(rng() % amb.modulus(), amb.power_of_p(gap + 1)));
        s(i, j) = amb.add(s(i, j), v);
      }
    try {
      FiniteHModule m = make_module(p, exps, s);
      if (m.order_exponent() <= d) return m.sigma();
    } catch (const Error&) {
    }
  }
  return I;
}

std::vector<std::vector<int>> sign_characters(const DeltaGroup& delta) {
  std::vector<std::vector<int>> out;
  const int n = delta.order();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> chi(n);
    for (int a = 0; a < n; ++a) chi[a] = (mask >> a & 1u) ? -1 : 1;
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b) ok = chi[a] * chi[b] == chi[delta.mul(a, b)];
    if (ok) out.push_back(std::move(chi));
  }
  return out;
}

struct ModuleWithDelta {
  FiniteHModule X;
  std::vector<ModMatrix> tau;
};

ModuleWithDelta random_module_with_delta(const FiniteGroupG& G, int max_log, std::mt19937_64& rng) {
  const std::uint64_t p = G.p();
  const DeltaGroup& delta = G.delta();
  const int nd = delta.order();
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, std::max(lo, hi))(rng); };

  const int ly = uniform(0, max_log / nd);
  const int lz = rng() % 2 ? uniform(0, max_log - nd * ly) : 0;
  const std::vector<int> ey = random_partition(ly, 3, rng);
  const std::vector<int> ez = random_partition(lz, 2, rng);
  const ModMatrix s = random_block(p, G.d(), ey, rng);
  const auto chars = sign_characters(delta);
  const std::vector<int> chi = chars[rng() % chars.size()];

  // Coordinates: copy δ of Y for each δ, then Z.
  std::vector<int> exps;
  for (int c = 0; c < nd; ++c) exps.insert(exps.end(), ey.begin(), ey.end());
  exps.insert(exps.end(), ez.begin(), ez.end());
  const std::size_t r = exps.size(), ry = ey.size();
  const int top = r ? *std::max_element(exps.begin(), exps.end()) : 1;
  const RingParams amb(p, std::max(top, 1));
  auto lift = [&](const ModMatrix& m) {
    ModMatrix out(amb, m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
  };
  const ModMatrix sl = lift(s);

  // σ acts on copy δ by s^{u_δ^{-1}} so that τ_ε σ τ_ε^{-1} = σ^{u_ε}.
  ModMatrix sigma = ModMatrix::identity(amb, r);
  for (int c = 0; c < nd; ++c) {
    const std::uint64_t k = RingParams(p, G.d()).inverse(G.u(c));
    ModMatrix sk = ModMatrix::identity(amb, ry);
    for (std::uint64_t t = 0; t < k; ++t) sk = sk * sl;
    for (std::size_t i = 0; i < ry; ++i)
      for (std::size_t j = 0; j < ry; ++j) sigma(c * ry + i, c * ry + j) = sk(i, j);
  }
  std::vector<ModMatrix> tau;
  for (int e = 0; e < nd; ++e) {
    ModMatrix t(amb, r, r);
    for (int c = 0; c < nd; ++c)
      for (std::size_t i = 0; i < ry; ++i) t(static_cast<std::size_t>(delta.mul(e, c)) * ry + i, c * ry + i) = 1;
    for (std::size_t i = nd * ry; i < r; ++i) t(i, i) = amb.reduce(chi[e]);
    tau.push_back(std::move(t));
  }

  // Sort coordinates by descending exponent.
  std::vector<std::size_t> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return exps[a] > exps[b]; });
  auto permute = [&](const ModMatrix& m) {
    ModMatrix out(amb, r, r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) out(i, j) = m(perm[i], perm[j]);
    return out;
  };
  std::vector<int> sorted;
  for (std::size_t i : perm) sorted.push_back(exps[i]);
  FiniteHModule X = make_module(p, sorted, permute(sigma));
  std::vector<ModMatrix> taus;
  for (const auto& t : tau) taus.push_back(X.reduce_endomorphism(permute(t)));

  if (X.rank() && rng() % 2) {
    Element v = X.zero();
    for (std::size_t i = 0; i < X.rank(); ++i) v[i] = rng() % X.component_modulus(i);
    std::vector<ModMatrix> endos{X.sigma()};
    endos.insert(endos.end(), taus.begin(), taus.end());
    Submodule S = span_under(X, {v}, endos);
    QuotientPresentation q = quotient_module(X, S, taus);
    return {q.module, q.induced};
  }
  return {X, taus};
}

// Uniform solution (a, b_δ) of the cocycle equations of H ⋊ Δ_i.
std::optional<InertiaSection> random_section(const DescentGroup& grp, const std::vector<int>& sub, std::mt19937_64& rng) {
  const FiniteHModule& X = grp.X();
  const FiniteGroupG& G = grp.G();
  const std::size_t r = X.rank(), k = sub.size();
  if (r == 0) return InertiaSection{sub, {}, std::vector<Element>(k)};
  const RingParams& amb = X.ambient();
  const int e1 = X.top_exponent();
  const std::size_t cols = r * (1 + k);
  std::vector<std::vector<ModMatrix>> eqs;  // each equation: one block per unknown
  auto blank = [&] { return std::vector<ModMatrix>(1 + k, ModMatrix(amb, r, r)); };
  const ModMatrix I = X.identity();
  auto pos = [&](int delta) {
    return 1 + static_cast<std::size_t>(std::find(sub.begin(), sub.end(), delta) - sub.begin());
  };
  {
    auto e = blank();
    e[0] = X.omega_endomorphism(G.d());
    eqs.push_back(std::move(e));
  }
  for (int delta : sub) {
    // b_δ + τ_δ a = (1 + σ + ... + σ^{u-1}) a + σ^u b_δ
    const std::uint64_t u = G.u(delta);
    ModMatrix geo(amb, r, r), pw = I;
    for (std::uint64_t j = 0; j < u; ++j) {
      geo = geo + pw;
      pw = X.compose(pw, X.sigma());
    }
    auto e = blank();
    e[0] = grp.tau()[delta] - geo;
    e[pos(delta)] = I - pw;
    eqs.push_back(std::move(e));
  }
  for (int a : sub)
    for (int b : sub) {
      auto e = blank();
      e[pos(G.delta().mul(a, b))] = e[pos(G.delta().mul(a, b))] + I;
      e[pos(a)] = e[pos(a)] - I;
      e[pos(b)] = e[pos(b)] - grp.tau()[a];
      eqs.push_back(std::move(e));
    }
  ModMatrix M(amb, eqs.size() * r, cols);
  for (std::size_t q = 0; q < eqs.size(); ++q)
    for (std::size_t blk = 0; blk <= k; ++blk)
      for (std::size_t i = 0; i < r; ++i) {
        // component i only matters mod p^{e_i}
        const std::uint64_t scale = amb.power_of_p(e1 - X.exponents()[i]);
        for (std::size_t j = 0; j < r; ++j) M(q * r + i, blk * r + j) = amb.mul(eqs[q][blk](i, j), scale);
      }
  std::vector<std::uint64_t> z(cols, 0);
  for (const auto& g : kernel(M)) {
    const std::uint64_t c = rng() % amb.modulus();
    for (std::size_t t = 0; t < cols; ++t) z[t] = amb.add(z[t], amb.mul(c, g[t]));
  }
  InertiaSection s{sub, Element(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(r)), {}};
  s.a = X.reduce_residues(s.a);
  for (std::size_t blk = 1; blk <= k; ++blk)
    s.b.push_back(X.reduce_residues(Element(z.begin() + static_cast<std::ptrdiff_t>(blk * r),
                                            z.begin() + static_cast<std::ptrdiff_t>((blk + 1) * r))));
  // Post-hoc check: the generated subgroup is a complement of X over H ⋊ Δ_i.
  auto elems = section_elements(grp, s);
  if (elems.size() != G.h_order() * k) return std::nullopt;
  for (const auto& e : elems)
    if (e.g == G.identity() && !X.is_zero(e.x)) return std::nullopt;
  return s;
}

}  // namespace

DescentInstance random_descent_instance(std::uint64_t p, int d, const DeltaGroup& delta, const DescentBounds& bounds,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto homs = unit_homomorphisms(delta, p, d);
  std::vector<std::uint64_t> u(delta.order(), 1);
  if (!bounds.direct_product) u = homs[rng() % homs.size()];
  FiniteGroupG G(p, d, delta, u);

  // Largest log_p |X| the budget allows.
  int max_log = 0;
  {
    long double room = static_cast<long double>(bounds.budget) / G.order();
    while (max_log < bounds.max_log_order && room >= static_cast<long double>(p)) {
      room /= static_cast<long double>(p);
      ++max_log;
    }
  }

  for (int attempt = 0; attempt < bounds.max_retries; ++attempt) {
    ModuleWithDelta mx = random_module_with_delta(G, max_log, rng);
    DescentGroup grp = build_group(G, mx.X, mx.tau, bounds.budget);
    const FiniteHModule& X = grp.X();
    std::vector<int> all(delta.order());
    std::iota(all.begin(), all.end(), 0);
    std::vector<InertiaSection> sections{{all, X.zero(), std::vector<Element>(all.size(), X.zero())}};
    const int r = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::max(1, bounds.max_sections)));
    const auto subs = delta.subgroups();
    bool ok = true;
    for (int i = 1; i < r && ok; ++i) {
      auto s = random_section(grp, subs[rng() % subs.size()], rng);
      if (!s) ok = false;
      else sections.push_back(std::move(*s));
    }
    if (!ok) continue;
    return make_descent_instance(std::move(grp), std::move(sections));
  }
  throw GenerationFailed("random_descent_instance: no valid instance after " + std::to_string(bounds.max_retries) +
                         " attempts");
}

}  // namespace ptower
