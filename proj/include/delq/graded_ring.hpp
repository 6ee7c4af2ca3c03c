#pragma once

#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "delq/rational.hpp"

namespace delq {

// Element of the truncated graded-commutative ring Q[x_0,...,x_k]/(deg > cutoff).
// Each generator stands for a first Chern form of a line bundle, so all housed
// classes are even-degree and plain commutative polynomial arithmetic applies;
// the generators are nilpotent under truncation.
//
// Canonical form: no stored exponent vector exceeds the cutoff in total degree,
// and no stored coefficient is zero. Equality is equality of canonical term maps.
// Values are immutable after construction apart from move; operations are pure.
class GradedClass {
 public:
  using Expo = std::vector<int>;
  using TermMap = std::map<Expo, Rational>;

  GradedClass(std::vector<std::string> variables, int cutoff)
      : variables_(std::move(variables)), cutoff_(cutoff) {
    if (cutoff_ < 0) throw std::domain_error("GradedClass: cutoff must be >= 0");
  }

  static GradedClass constant(std::vector<std::string> variables, int cutoff, Rational c) {
    GradedClass g(std::move(variables), cutoff);
    if (c != 0) g.terms_[Expo(g.variables_.size(), 0)] = std::move(c);
    return g;
  }

  static GradedClass generator(std::vector<std::string> variables, int cutoff, std::size_t index) {
    GradedClass g(std::move(variables), cutoff);
    if (index >= g.variables_.size())
      throw std::invalid_argument("GradedClass: generator index out of range");
    if (cutoff >= 1) {
      Expo e(g.variables_.size(), 0);
      e[index] = 1;
      g.terms_[std::move(e)] = 1;
    }
    return g;
  }

  const std::vector<std::string>& variables() const { return variables_; }
  int cutoff() const { return cutoff_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  static int total_degree(const Expo& e) { return std::accumulate(e.begin(), e.end(), 0); }

  Rational coefficient(const Expo& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  friend bool operator==(const GradedClass& a, const GradedClass& b) {
    return a.variables_ == b.variables_ && a.cutoff_ == b.cutoff_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const GradedClass& a, const GradedClass& b) { return !(a == b); }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += "(" + delq::to_string(c) + ")";
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        out += "*" + variables_[i];
        if (e[i] > 1) out += "^" + std::to_string(e[i]);
      }
    }
    return out;
  }

  friend GradedClass add(const GradedClass& a, const GradedClass& b) {
    require_compatible(a, b);
    GradedClass r(a.variables_, a.cutoff_);
    r.terms_ = a.terms_;
    for (const auto& [e, c] : b.terms_) r.accumulate(e, c);
    return r;
  }

  friend GradedClass mul(const GradedClass& a, const GradedClass& b) {
    require_compatible(a, b);
    GradedClass r(a.variables_, a.cutoff_);
    for (const auto& [ea, ca] : a.terms_) {
      const int da = total_degree(ea);
      for (const auto& [eb, cb] : b.terms_) {
        if (da + total_degree(eb) > a.cutoff_) continue;
        Expo e = ea;
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        r.accumulate(e, ca * cb);
      }
    }
    return r;
  }

  friend GradedClass operator+(const GradedClass& a, const GradedClass& b) { return add(a, b); }
  friend GradedClass operator*(const GradedClass& a, const GradedClass& b) { return mul(a, b); }
  friend GradedClass operator-(const GradedClass& a, const GradedClass& b) {
    return add(a, scale(b, Rational(-1)));
  }

  friend GradedClass scale(const GradedClass& a, const Rational& c) {
    GradedClass r(a.variables_, a.cutoff_);
    if (c == 0) return r;
    for (const auto& [e, q] : a.terms_) r.terms_[e] = q * c;
    return r;
  }

  // exp(a) = sum a^k/k!, finite because a is nilpotent; requires zero constant term.
  friend GradedClass exp_class(const GradedClass& a) {
    Expo zero(a.variables_.size(), 0);
    if (a.coefficient(zero) != 0)
      throw std::domain_error("exp_class: argument has a nonzero constant term");
    GradedClass r = constant(a.variables_, a.cutoff_, 1);
    GradedClass power = r;
    for (int k = 1; k <= a.cutoff_; ++k) {
      power = mul(power, a);
      if (power.is_zero()) break;
      r = add(r, scale(power, Rational(1, factorial(k))));
    }
    return r;
  }

  friend GradedClass degree_part(const GradedClass& a, int d) {
    if (d < 0 || d > a.cutoff_) throw std::domain_error("degree_part: degree out of range");
    GradedClass r(a.variables_, a.cutoff_);
    for (const auto& [e, c] : a.terms_)
      if (total_degree(e) == d) r.terms_[e] = c;
    return r;
  }

  friend GradedClass truncate_to(const GradedClass& a, int d) {
    if (d < 0 || d > a.cutoff_) throw std::domain_error("truncate_to: degree out of range");
    GradedClass r(a.variables_, a.cutoff_);
    for (const auto& [e, c] : a.terms_)
      if (total_degree(e) <= d) r.terms_[e] = c;
    return r;
  }

 private:
  static void require_compatible(const GradedClass& a, const GradedClass& b) {
    if (a.variables_ != b.variables_ || a.cutoff_ != b.cutoff_)
      throw std::invalid_argument("GradedClass: mismatched variable set or cutoff");
  }

  void accumulate(const Expo& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::vector<std::string> variables_;
  int cutoff_;
  TermMap terms_;
};

// Coefficients t_k of the Todd series x/(1 - e^{-x}) = sum t_k x^k, obtained by
// exact inversion of (1 - e^{-x})/x = sum (-1)^k x^k/(k+1)!.
inline std::vector<Rational> todd_coefficients(int cutoff) {
  if (cutoff < 0) throw std::domain_error("todd_coefficients: cutoff must be >= 0");
  std::vector<Rational> s(cutoff + 1);
  for (int k = 0; k <= cutoff; ++k) {
    s[k] = Rational(BigInt((k % 2 == 0) ? 1 : -1), factorial(k + 1));
  }
  std::vector<Rational> t(cutoff + 1);
  t[0] = 1;  // s[0] == 1
  for (int n = 1; n <= cutoff; ++n) {
    Rational acc = 0;
    for (int j = 1; j <= n; ++j) acc += s[j] * t[n - j];
    t[n] = -acc;
  }
  return t;
}

// A power series with the given coefficients, substituted into one generator of
// a (possibly multivariate) ring.
inline GradedClass series_in_generator(std::vector<std::string> variables, int cutoff,
                                       std::size_t index, const std::vector<Rational>& coeffs) {
  GradedClass r(variables, cutoff);
  GradedClass acc = GradedClass::constant(variables, cutoff, 0);
  for (std::size_t k = 0; k < coeffs.size() && static_cast<int>(k) <= cutoff; ++k) {
    if (coeffs[k] == 0) continue;
    GradedClass mono = GradedClass::constant(variables, cutoff, coeffs[k]);
    for (std::size_t j = 0; j < k; ++j)
      mono = mul(mono, GradedClass::generator(variables, cutoff, index));
    acc = add(acc, mono);
  }
  return acc;
}

inline GradedClass todd_series(const std::string& symbol, int cutoff) {
  return series_in_generator({symbol}, cutoff, 0, todd_coefficients(cutoff));
}

}  // namespace delq
