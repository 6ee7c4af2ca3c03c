#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "delq/graded_ring.hpp"
#include "delq/rational.hpp"

namespace delq {

// Integer linear combination of line-bundle monomials (tensor powers of a set
// of generators). Multiplicities of zero are pruned. Immutable value type.
class VirtualBundle {
 public:
  using Expo = std::vector<int>;
  using TermMap = std::map<Expo, long long>;

  explicit VirtualBundle(std::vector<std::string> generators)
      : generators_(std::move(generators)) {}

  // The structure sheaf: trivial monomial with multiplicity one.
  static VirtualBundle structure_sheaf(std::vector<std::string> generators) {
    VirtualBundle v(std::move(generators));
    v.terms_[Expo(v.generators_.size(), 0)] = 1;
    return v;
  }

  // The line bundle given by one generator.
  static VirtualBundle line(std::vector<std::string> generators, std::size_t index) {
    VirtualBundle v(std::move(generators));
    if (index >= v.generators_.size())
      throw std::invalid_argument("VirtualBundle: generator index out of range");
    Expo e(v.generators_.size(), 0);
    e[index] = 1;
    v.terms_[std::move(e)] = 1;
    return v;
  }

  static VirtualBundle line_minus_structure(std::vector<std::string> generators,
                                            std::size_t index) {
    return line(generators, index) - structure_sheaf(generators);
  }

  const std::vector<std::string>& generators() const { return generators_; }
  const TermMap& terms() const { return terms_; }

  long long rank() const {
    long long r = 0;
    for (const auto& [e, m] : terms_) r += m;
    return r;
  }

  friend VirtualBundle operator+(const VirtualBundle& a, const VirtualBundle& b) {
    auto [ra, rb] = aligned(a, b);
    for (const auto& [e, m] : rb.terms_) ra.accumulate(e, m);
    return ra;
  }
  friend VirtualBundle operator-(const VirtualBundle& a, const VirtualBundle& b) {
    auto [ra, rb] = aligned(a, b);
    for (const auto& [e, m] : rb.terms_) ra.accumulate(e, -m);
    return ra;
  }

  friend bool operator==(const VirtualBundle& a, const VirtualBundle& b) {
    auto [ra, rb] = aligned(a, b);
    return ra.terms_ == rb.terms_;
  }

  // Bilinear extension of the tensor product: monomial exponents add,
  // multiplicities multiply. Generator sets are merged.
  friend VirtualBundle tensor(const VirtualBundle& a, const VirtualBundle& b) {
    auto [ra, rb] = aligned(a, b);
    VirtualBundle r(ra.generators_);
    for (const auto& [ea, ma] : ra.terms_)
      for (const auto& [eb, mb] : rb.terms_) {
        Expo e = ea;
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        r.accumulate(e, ma * mb);
      }
    return r;
  }

  VirtualBundle tensor_power(int k) const {
    if (k < 0) throw std::domain_error("tensor_power: negative power");
    VirtualBundle r = structure_sheaf(generators_);
    for (int i = 0; i < k; ++i) r = tensor(r, *this);
    return r;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, m] : terms_) {
      if (!out.empty()) out += " + ";
      out += std::to_string(m);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        out += "*" + generators_[i];
        if (e[i] != 1) out += "^" + std::to_string(e[i]);
      }
    }
    return out;
  }

 private:
  void accumulate(const Expo& e, long long m) {
    if (m == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, m);
    if (!inserted) {
      it->second += m;
      if (it->second == 0) terms_.erase(it);
    }
  }

  // Rewrites both operands over the union of their generator sets.
  static std::pair<VirtualBundle, VirtualBundle> aligned(const VirtualBundle& a,
                                                         const VirtualBundle& b) {
    if (a.generators_ == b.generators_) return {a, b};
    std::vector<std::string> gens = a.generators_;
    for (const auto& g : b.generators_)
      if (std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
    return {a.remapped(gens), b.remapped(gens)};
  }

  VirtualBundle remapped(const std::vector<std::string>& gens) const {
    VirtualBundle r(gens);
    std::vector<std::size_t> where(generators_.size());
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      auto it = std::find(gens.begin(), gens.end(), generators_[i]);
      where[i] = static_cast<std::size_t>(it - gens.begin());
    }
    for (const auto& [e, m] : terms_) {
      Expo ne(gens.size(), 0);
      for (std::size_t i = 0; i < e.size(); ++i) ne[where[i]] = e[i];
      r.terms_[std::move(ne)] = m;
    }
    return r;
  }

  std::vector<std::string> generators_;
  TermMap terms_;
};

// (L - O)^{(n+1)} tensor L^m over the single generator "L", expanded as the
// signed binomial sum of tensor powers of L.
inline VirtualBundle virtual_power_expand(int n, int m) {
  if (n < 0 || m < 0) throw std::domain_error("virtual_power_expand: n, m must be >= 0");
  VirtualBundle::TermMap terms;
  VirtualBundle v({"L"});
  VirtualBundle l = VirtualBundle::line({"L"}, 0);
  VirtualBundle lm1 = VirtualBundle::line_minus_structure({"L"}, 0);
  VirtualBundle r = lm1.tensor_power(n + 1);
  for (int i = 0; i < m; ++i) r = tensor(r, l);
  return r;
}

// Chern character into a truncated graded ring: every generator is assigned a
// ring variable (its first Chern symbol), a monomial L_0^{e0}... maps to
// exp(sum e_i x_{assign(i)}), extended additively over multiplicities.
inline GradedClass chern_character(const VirtualBundle& v, std::vector<std::string> variables,
                                   int cutoff,
                                   const std::map<std::string, std::size_t>& assignment) {
  std::vector<std::size_t> var_of(v.generators().size());
  for (std::size_t i = 0; i < v.generators().size(); ++i) {
    auto it = assignment.find(v.generators()[i]);
    if (it == assignment.end())
      throw std::invalid_argument("chern_character: unassigned generator " + v.generators()[i]);
    if (it->second >= variables.size())
      throw std::invalid_argument("chern_character: assignment target out of range");
    var_of[i] = it->second;
  }
  GradedClass acc(variables, cutoff);
  for (const auto& [e, m] : v.terms()) {
    GradedClass lin(variables, cutoff);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0)
        lin = add(lin, scale(GradedClass::generator(variables, cutoff, var_of[i]),
                             Rational(e[i])));
    acc = add(acc, scale(exp_class(lin), Rational(m)));
  }
  return acc;
}

// Convenience: ch of a single-generator bundle in Q[x]/(deg > cutoff).
inline GradedClass chern_character_single(const VirtualBundle& v, int cutoff) {
  if (v.generators().size() != 1)
    throw std::invalid_argument("chern_character_single: expected one generator");
  return chern_character(v, {"x"}, cutoff, {{v.generators()[0], 0}});
}

struct RrIntegrand {
  GradedClass product;     // ch(xi) * Td-factor in Q[x,t]/(deg > n+2)
  Rational top_coefficient;  // coefficient of x^{n+1}
};

// The Riemann-Roch integrand in the single-variable model: all bundle
// monomials are powers of one L (symbol x), the relative-tangent Todd factor
// is an abstract unit series in an auxiliary symbol t. Its degree-0 part is
// all the collapse argument uses, so any unit series gives the same top
// coefficient; the default factor is the genuine Todd series.
inline RrIntegrand rr_integrand_with_factor(int n, int m,
                                            const std::vector<Rational>& unit_series) {
  if (n < 1 || m < 0) throw std::domain_error("rr_integrand: need n >= 1, m >= 0");
  if (unit_series.empty() || unit_series[0] != 1)
    throw std::invalid_argument("rr_integrand: factor must have constant term 1");
  const int cutoff = n + 2;
  const std::vector<std::string> vars = {"x", "t"};
  GradedClass ch = chern_character(virtual_power_expand(n, m), vars, cutoff, {{"L", 0}});
  GradedClass factor = series_in_generator(vars, cutoff, 1, unit_series);
  GradedClass prod = mul(ch, factor);
  GradedClass::Expo top = {n + 1, 0};
  Rational c = prod.coefficient(top);
  return {std::move(prod), std::move(c)};
}

inline RrIntegrand rr_integrand(int n, int m) {
  return rr_integrand_with_factor(n, m, todd_coefficients(n + 2));
}

inline Rational rr_integrand_coefficient(int n, int m) {
  return rr_integrand(n, m).top_coefficient;
}

struct AnomalyReport {
  bool vanishes = true;
  // (exponent, coefficient) of terms of degree <= n that should vanish
  std::vector<std::pair<std::vector<int>, Rational>> offending_terms;
};

// Checks that ch(v) has no component in degrees 0..max_degree. For
// xi = (L-O)^{(n+1)} L^m this certifies that the Bott-Chern anomaly integrand
// has no degree-2n part, hence the anomaly integral vanishes.
inline AnomalyReport anomaly_check_for(const VirtualBundle& v, int max_degree) {
  const int cutoff = max_degree + 2;
  GradedClass ch = chern_character_single(v, cutoff);
  AnomalyReport rep;
  for (const auto& [e, c] : ch.terms()) {
    if (GradedClass::total_degree(e) <= max_degree) {
      rep.vanishes = false;
      rep.offending_terms.emplace_back(e, c);
    }
  }
  return rep;
}

inline AnomalyReport anomaly_vanishing_check(int n, int m) {
  if (n < 1 || m < 0) throw std::domain_error("anomaly_vanishing_check: need n >= 1, m >= 0");
  return anomaly_check_for(virtual_power_expand(n, m), n);
}

struct MultilinearReport {
  GradedClass lowest;        // degree-(n+1) part of ch of the product bundle
  bool equals_monomial = false;  // lowest == x_0 x_1 ... x_n
  bool lower_parts_vanish = false;
};

// ch of tensor_{i=0..n} (L_i - O) in distinct symbols: its degree-(n+1) part
// is exactly the product of the symbols and everything below vanishes.
inline MultilinearReport multilinear_lowest_term(int n) {
  if (n < 0) throw std::domain_error("multilinear_lowest_term: need n >= 0");
  std::vector<std::string> gens, vars;
  std::map<std::string, std::size_t> assign;
  for (int i = 0; i <= n; ++i) {
    gens.push_back("L" + std::to_string(i));
    vars.push_back("x" + std::to_string(i));
    assign[gens.back()] = static_cast<std::size_t>(i);
  }
  VirtualBundle v = VirtualBundle::line_minus_structure(gens, 0);
  for (int i = 1; i <= n; ++i)
    v = tensor(v, VirtualBundle::line_minus_structure(gens, static_cast<std::size_t>(i)));
  const int cutoff = n + 2;
  GradedClass ch = chern_character(v, vars, cutoff, assign);

  MultilinearReport rep{degree_part(ch, n + 1)};
  GradedClass mono = GradedClass::constant(vars, cutoff, 1);
  for (int i = 0; i <= n; ++i)
    mono = mul(mono, GradedClass::generator(vars, cutoff, static_cast<std::size_t>(i)));
  rep.equals_monomial = (rep.lowest == mono);
  rep.lower_parts_vanish = true;
  for (int d = 0; d <= n; ++d)
    if (!degree_part(ch, d).is_zero()) rep.lower_parts_vanish = false;
  return rep;
}

}  // namespace delq
