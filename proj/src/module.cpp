#include "ptower/module.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

#include "ptower/errors.hpp"

namespace ptower {

std::string format_element(const Element& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(x[i]);
  }
  return s + ")";
}

namespace {

RingParams ambient_for(std::uint64_t p, const std::vector<int>& exponents) {
  return RingParams(p, exponents.empty() ? 1 : std::max(exponents.front(), 1));
}

ModMatrix reread(const ModMatrix& m, const RingParams& target) {
  if (m.params().p() != target.p()) throw PreconditionViolation("matrix prime does not match module prime");
  if (m.params().precision() < target.precision())
    throw PreconditionViolation("matrix precision is below the module exponent");
  ModMatrix out(target, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j) % target.modulus();
  return out;
}

int ceil_log(std::uint64_t p, std::size_t r) {
  int k = 0;
  std::uint64_t q = 1;
  while (q < r) {
    q *= p;
    ++k;
  }
  return k;
}

}  // namespace

long long FiniteHModule::log_order() const {
  return std::accumulate(exponents_.begin(), exponents_.end(), 0LL);
}

std::uint64_t FiniteHModule::component_modulus(std::size_t i) const {
  return checked_pow(p_, exponents_.at(i));
}

Element FiniteHModule::basis(std::size_t i) const {
  Element e = zero();
  e.at(i) = 1 % component_modulus(i);
  return e;
}

Element FiniteHModule::reduce(const std::vector<std::int64_t>& x) const {
  if (x.size() != rank()) throw PreconditionViolation("element has wrong length for this module");
  Element out(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    auto q = static_cast<std::int64_t>(component_modulus(i));
    std::int64_t r = x[i] % q;
    out[i] = static_cast<std::uint64_t>(r < 0 ? r + q : r);
  }
  return out;
}

Element FiniteHModule::reduce_residues(Element x) const {
  if (x.size() != rank()) throw PreconditionViolation("element has wrong length for this module");
  for (std::size_t i = 0; i < rank(); ++i) x[i] %= component_modulus(i);
  return x;
}

Element FiniteHModule::add(const Element& a, const Element& b) const {
  Element out(rank());
  for (std::size_t i = 0; i < rank(); ++i) out[i] = (a[i] + b[i]) % component_modulus(i);
  return out;
}

Element FiniteHModule::sub(const Element& a, const Element& b) const {
  Element out(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    std::uint64_t q = component_modulus(i);
    out[i] = (a[i] + q - b[i] % q) % q;
  }
  return out;
}

Element FiniteHModule::scale(std::uint64_t c, const Element& x) const {
  Element out(rank());
  for (std::size_t i = 0; i < rank(); ++i)
    out[i] = static_cast<std::uint64_t>(static_cast<unsigned __int128>(c) * x[i] % component_modulus(i));
  return out;
}

bool FiniteHModule::is_zero(const Element& x) const {
  for (std::size_t i = 0; i < rank(); ++i)
    if (x[i] % component_modulus(i) != 0) return false;
  return true;
}

ModMatrix FiniteHModule::reduce_endomorphism(ModMatrix m) const {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::uint64_t q = component_modulus(i);
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) %= q;
  }
  return m;
}

Element FiniteHModule::act(const ModMatrix& endo, const Element& x) const {
  return reduce_residues(mat_vec(endo, x));
}

ModMatrix FiniteHModule::compose(const ModMatrix& a, const ModMatrix& b) const {
  return reduce_endomorphism(a * b);
}

ModMatrix FiniteHModule::endo_power(const ModMatrix& a, std::uint64_t k) const {
  ModMatrix result = identity();
  ModMatrix base = a;
  while (k) {
    if (k & 1u) result = compose(result, base);
    k >>= 1u;
    if (k) base = compose(base, base);
  }
  return reduce_endomorphism(result);
}

ModMatrix FiniteHModule::sigma_minus_one() const { return reduce_endomorphism(sigma_ - identity()); }

ModMatrix FiniteHModule::omega_endomorphism(int n) const {
  if (n < 0) throw PreconditionViolation("omega_endomorphism: n must be >= 0");
  ModMatrix W = reduce_endomorphism(identity());
  ModMatrix S = sigma_;
  const ModMatrix I = reduce_endomorphism(identity());
  for (int k = 0; k < n; ++k) {
    if (W.is_zero()) break;
    if (S == I) {
      // Every further level multiplies by p.
      const int rest = n - k;
      if (rest >= top_exponent()) return reduce_endomorphism(ModMatrix(ambient_, rank(), rank()));
      ModMatrix out = W;
      for (std::size_t i = 0; i < rank(); ++i) out.scale_row(i, checked_pow(p_, rest));
      return reduce_endomorphism(out);
    }
    ModMatrix sum = I;
    ModMatrix power = I;
    for (std::uint64_t j = 1; j < p_; ++j) {
      power = compose(power, S);
      sum = reduce_endomorphism(sum + power);
    }
    W = compose(W, sum);
    S = compose(power, S);
  }
  return W;
}

ModMatrix FiniteHModule::relation_matrix() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < rank(); ++i)
    if (exponents_[i] < ambient_.precision()) idx.push_back(i);
  ModMatrix R(ambient_, idx.size(), rank());
  for (std::size_t k = 0; k < idx.size(); ++k) R(k, idx[k]) = component_modulus(idx[k]);
  return R;
}

bool is_well_defined(const std::vector<int>& exponents, std::uint64_t p, const ModMatrix& m) {
  const std::size_t r = exponents.size();
  if (m.rows() != r || m.cols() != r) return false;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      int need = std::max(0, exponents[i] - exponents[j]);
      std::uint64_t v = m(i, j) % checked_pow(p, exponents[i]);
      if (need > 0 && v % checked_pow(p, need) != 0) return false;
    }
  return true;
}

bool is_automorphism(const FiniteHModule& m, const ModMatrix& endo) {
  if (m.rank() == 0) return true;
  // X/pX ≅ F_p^r with basis the images of the generators; a surjective
  // endomorphism of a finite group is bijective.
  RingParams fp(m.p(), 1);
  std::vector<int> e = smith_form(reread(endo, fp)).exponents;
  return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
}

FiniteHModule make_module(std::uint64_t p, std::vector<int> exponents, const ModMatrix& sigma_in,
                          ModuleOptions opts) {
  if (!is_prime(p)) throw PreconditionViolation("make_module: p is not prime");
  if (!std::is_sorted(exponents.begin(), exponents.end(), std::greater<>()))
    throw PreconditionViolation("make_module: exponents must be sorted descending");
  if (std::any_of(exponents.begin(), exponents.end(), [](int e) { return e < 1; }))
    throw PreconditionViolation("make_module: exponents must be >= 1");
  const std::size_t r = exponents.size();
  if (sigma_in.rows() != r || sigma_in.cols() != r)
    throw PreconditionViolation("make_module: sigma must be " + std::to_string(r) + "x" + std::to_string(r));
  RingParams amb = ambient_for(p, exponents);
  ModMatrix sigma = reread(sigma_in, amb);

  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      int need = std::max(0, exponents[i] - exponents[j]);
      std::uint64_t v = sigma(i, j) % checked_pow(p, exponents[i]);
      if (need > 0 && v % checked_pow(p, need) != 0)
        throw WellDefinednessViolation("sigma[" + std::to_string(i) + "][" + std::to_string(j) +
                                       "] must be divisible by " + std::to_string(p) + "^" +
                                       std::to_string(need));
    }

  FiniteHModule m(p, std::move(exponents), amb, ModMatrix(amb, r, r));
  m.sigma_ = m.reduce_endomorphism(sigma);
  if (!is_automorphism(m, m.sigma_)) throw NotAutomorphism("sigma is not invertible modulo p");

  const int k_max = opts.k_max >= 0 ? opts.k_max : m.top_exponent() + ceil_log(p, r) + 2;
  const ModMatrix I = m.reduce_endomorphism(m.identity());
  ModMatrix S = m.sigma_;
  for (int k = 0;; ++k) {
    if (S == I) {
      m.order_exponent_ = k;
      break;
    }
    if (k >= k_max)
      throw OrderNotPPower("sigma^{p^" + std::to_string(k_max) + "} is not the identity");
    S = m.endo_power(S, p);
  }
  return m;
}

FiniteHModule make_module(std::uint64_t p, std::vector<int> exponents,
                          const std::vector<std::vector<std::int64_t>>& sigma, ModuleOptions opts) {
  RingParams amb = ambient_for(p, exponents);
  ModMatrix m(amb, exponents.size(), exponents.size());
  if (sigma.size() != exponents.size())
    throw PreconditionViolation("make_module: sigma must have one row per generator");
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i].size() != exponents.size()) throw PreconditionViolation("make_module: sigma must be square");
    for (std::size_t j = 0; j < sigma[i].size(); ++j) m(i, j) = amb.reduce(sigma[i][j]);
  }
  return make_module(p, std::move(exponents), m, opts);
}

// ---------------------------------------------------------------------------

Submodule span_group(const FiniteHModule& m, const std::vector<Element>& gens) {
  const RingParams& amb = m.ambient();
  const std::size_t r = m.rank();
  if (r == 0) return Submodule(m, {}, 0);
  ModMatrix R = m.relation_matrix();
  ModMatrix M(amb, gens.size() + R.rows(), r);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    if (gens[k].size() != r) throw PreconditionViolation("span: generator has wrong length");
    for (std::size_t j = 0; j < r; ++j) M(k, j) = gens[k][j] % amb.modulus();
  }
  for (std::size_t k = 0; k < R.rows(); ++k)
    for (std::size_t j = 0; j < r; ++j) M(gens.size() + k, j) = R(k, j);

  SmithForm s = smith_form(M);
  // Row space of M = row space of D * V^{-1}.
  std::vector<Element> reduced;
  long long quotient_log = 0;
  for (std::size_t t = 0; t < r; ++t) {
    int d = t < s.exponents.size() ? s.exponents[t] : amb.precision();
    quotient_log += d;
    if (d >= amb.precision()) continue;
    const std::uint64_t pd = amb.power_of_p(d);
    Element g(r);
    for (std::size_t j = 0; j < r; ++j) g[j] = amb.mul(pd, s.V_inv(t, j));
    g = m.reduce_residues(std::move(g));
    if (!m.is_zero(g)) reduced.push_back(std::move(g));
  }
  return Submodule(m, std::move(reduced), m.log_order() - quotient_log);
}

Submodule span_under(const FiniteHModule& m, const std::vector<Element>& gens,
                     const std::vector<ModMatrix>& endos) {
  Submodule s = span_group(m, gens);
  for (;;) {
    std::vector<Element> all = s.generators();
    for (const auto& e : endos)
      for (const auto& g : s.generators()) all.push_back(m.act(e, g));
    Submodule next = span_group(m, all);
    if (next.log_order() == s.log_order()) return s;
    s = std::move(next);
  }
}

Submodule span(const FiniteHModule& m, const std::vector<Element>& gens) {
  return span_under(m, gens, {m.sigma()});
}

Submodule zero_submodule(const FiniteHModule& m) { return span_group(m, {}); }

Submodule full_submodule(const FiniteHModule& m) {
  std::vector<Element> b;
  for (std::size_t i = 0; i < m.rank(); ++i) b.push_back(m.basis(i));
  return span_group(m, b);
}

Submodule p_power_submodule(const FiniteHModule& m, int k) {
  if (k < 0) throw PreconditionViolation("p_power_submodule: k must be >= 0");
  std::vector<Element> b;
  for (std::size_t i = 0; i < m.rank(); ++i) {
    if (k >= m.exponents()[i]) continue;
    Element e = m.zero();
    e[i] = checked_pow(m.p(), k);
    b.push_back(std::move(e));
  }
  return span_group(m, b);
}

Submodule image_submodule(const ModMatrix& endo, const Submodule& s) {
  std::vector<Element> imgs;
  for (const auto& g : s.generators()) imgs.push_back(s.parent().act(endo, g));
  return span_group(s.parent(), imgs);
}

bool Submodule::contains(const Element& x) const {
  std::vector<Element> g = gens_;
  g.push_back(parent_.reduce_residues(x));
  return span_group(parent_, g).log_order() == log_order_;
}

bool Submodule::is_stable_under(const ModMatrix& endo) const {
  return std::all_of(gens_.begin(), gens_.end(), [&](const Element& g) { return contains(parent_.act(endo, g)); });
}

AbelianType quotient_type(const FiniteHModule& m, const Submodule& s) {
  if (!(s.parent() == m)) throw PreconditionViolation("quotient_type: submodule belongs to another module");
  if (m.rank() == 0) return AbelianType{};
  ModMatrix R = m.relation_matrix();
  const auto& gens = s.generators();
  ModMatrix M(m.ambient(), gens.size() + R.rows(), m.rank());
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t j = 0; j < m.rank(); ++j) M(k, j) = gens[k][j];
  for (std::size_t k = 0; k < R.rows(); ++k)
    for (std::size_t j = 0; j < m.rank(); ++j) M(gens.size() + k, j) = R(k, j);
  return AbelianType(cokernel_exponents(M));
}

Submodule sum_submodules(const Submodule& a, const Submodule& b) {
  if (!(a.parent() == b.parent())) throw PreconditionViolation("sum_submodules: different parents");
  std::vector<Element> g = a.generators();
  g.insert(g.end(), b.generators().begin(), b.generators().end());
  return span_group(a.parent(), g);
}

Element lambda_act(const FiniteHModule& m, const LambdaElement& f, const Element& x) {
  if (f.params().p() != m.p()) throw PreconditionViolation("lambda_act: prime mismatch");
  if (f.params().precision() < m.top_exponent())
    throw PreconditionViolation("lambda_act: coefficient precision below the module exponent");
  const ModMatrix T = m.sigma_minus_one();
  Element y = m.zero();
  const Element xr = m.reduce_residues(x);
  for (int i = f.degree(); i >= 0; --i) {
    y = m.act(T, y);
    y = m.add(y, m.scale(f.residue(static_cast<std::size_t>(i)), xr));
  }
  return y;
}

Submodule scale_submodule(const LambdaElement& f, const Submodule& s) {
  std::vector<Element> imgs;
  for (const auto& g : s.generators()) imgs.push_back(lambda_act(s.parent(), f, g));
  return span(s.parent(), imgs);
}

bool is_subset(const Submodule& a, const Submodule& b) {
  return std::all_of(a.generators().begin(), a.generators().end(), [&](const Element& g) { return b.contains(g); });
}

bool same_submodule(const Submodule& a, const Submodule& b) {
  return a.log_order() == b.log_order() && is_subset(a, b);
}

// ---------------------------------------------------------------------------

Element QuotientPresentation::project(const Element& x) const {
  Element y = mat_vec(projection, x);
  return module.reduce_residues(std::move(y));
}

QuotientPresentation quotient_module(const FiniteHModule& m, const Submodule& s,
                                     const std::vector<ModMatrix>& extra_endos) {
  if (!(s.parent() == m)) throw PreconditionViolation("quotient_module: submodule belongs to another module");
  if (!s.is_stable_under(m.sigma())) throw PreconditionViolation("quotient_module: submodule is not sigma-stable");
  for (const auto& e : extra_endos)
    if (!s.is_stable_under(e)) throw PreconditionViolation("quotient_module: submodule is not stable");

  const RingParams& amb = m.ambient();
  const std::size_t r = m.rank();
  ModMatrix R = m.relation_matrix();
  const auto& gens = s.generators();
  ModMatrix M(amb, gens.size() + R.rows(), r);
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t j = 0; j < r; ++j) M(k, j) = gens[k][j];
  for (std::size_t k = 0; k < R.rows(); ++k)
    for (std::size_t j = 0; j < r; ++j) M(gens.size() + k, j) = R(k, j);
  SmithForm sf = r == 0 ? SmithForm{{}, ModMatrix(amb, 0, 0), ModMatrix(amb, 0, 0), ModMatrix(amb, 0, 0)}
                        : smith_form(M);

  // Surviving coordinates, largest exponent first.
  std::vector<std::pair<int, std::size_t>> kept;
  for (std::size_t t = 0; t < r; ++t) {
    int d = t < sf.exponents.size() ? sf.exponents[t] : amb.precision();
    if (d > 0) kept.emplace_back(d, t);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<int> new_exp;
  for (const auto& [d, t] : kept) new_exp.push_back(d);

  // w = x^T V, so the projection in column form is V^T restricted to kept.
  ModMatrix proj(amb, kept.size(), r);
  for (std::size_t a = 0; a < kept.size(); ++a)
    for (std::size_t i = 0; i < r; ++i) proj(a, i) = sf.V(i, kept[a].second);
  // New basis vector a lifts to row kept[a] of V^{-1}.
  ModMatrix lift(amb, r, kept.size());
  for (std::size_t a = 0; a < kept.size(); ++a)
    for (std::size_t i = 0; i < r; ++i) lift(i, a) = sf.V_inv(kept[a].second, i);

  auto induce = [&](const ModMatrix& e) { return proj * e * lift; };
  FiniteHModule qm = make_module(m.p(), new_exp, induce(m.sigma()));
  std::vector<ModMatrix> induced;
  for (const auto& e : extra_endos) {
    ModMatrix ie = induce(e);
    ModMatrix over(qm.ambient(), ie.rows(), ie.cols());
    for (std::size_t i = 0; i < ie.rows(); ++i)
      for (std::size_t j = 0; j < ie.cols(); ++j) over(i, j) = ie(i, j) % qm.ambient().modulus();
    induced.push_back(qm.reduce_endomorphism(std::move(over)));
  }
  return {std::move(qm), std::move(proj), std::move(induced)};
}

}  // namespace ptower
