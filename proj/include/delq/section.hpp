#pragma once

#include <complex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "delq/rational.hpp"

namespace delq {

// Point of P^1 over the scalar field K (K = complex<double> for numerics,
// K = GaussianRational for exact Weil-reciprocity arithmetic).
template <class K>
struct P1Point {
  bool at_infinity = false;
  K z{};

  static P1Point infinity() { return {true, K{}}; }
  static P1Point finite(K v) { return {false, std::move(v)}; }

  friend bool operator==(const P1Point& a, const P1Point& b) {
    if (a.at_infinity != b.at_infinity) return false;
    return a.at_infinity || a.z == b.z;
  }
};

template <class K>
struct DivisorOnP1 {
  std::vector<std::pair<P1Point<K>, int>> points;  // nonzero multiplicities

  int degree() const {
    int d = 0;
    for (const auto& [p, m] : points) d += m;
    return d;
  }

  bool contains(const P1Point<K>& q) const {
    for (const auto& [p, m] : points)
      if (p == q) return true;
    return false;
  }
};

template <class K>
inline bool supports_disjoint(const DivisorOnP1<K>& a, const DivisorOnP1<K>& b) {
  for (const auto& [p, m] : a.points)
    if (b.contains(p)) return false;
  return true;
}

// Rational section of O(d) on P^1 in factored form: in the z chart the
// section is the rational function  lead * prod (z - r_i)^{e_i}.  Its divisor
// is the finite factor list plus (d - sum e_i) at infinity. For d = 0 this is
// an ordinary rational function with deg(zeros) = deg(poles).
template <class K>
class RationalSection {
 public:
  RationalSection(K lead, std::vector<std::pair<K, int>> factors, int bundle_degree)
      : lead_(std::move(lead)), factors_(std::move(factors)), degree_(bundle_degree) {
    if (is_zero_scalar(lead_))
      throw std::invalid_argument("RationalSection: zero leading coefficient");
    for (auto& [r, e] : factors_)
      if (e == 0) throw std::invalid_argument("RationalSection: zero factor exponent");
  }

  static RationalSection constant(K c, int bundle_degree = 0) {
    return RationalSection(std::move(c), {}, bundle_degree);
  }

  int bundle_degree() const { return degree_; }
  const K& lead() const { return lead_; }
  const std::vector<std::pair<K, int>>& factors() const { return factors_; }

  int finite_degree() const {
    int s = 0;
    for (const auto& [r, e] : factors_) s += e;
    return s;
  }
  int infinity_multiplicity() const { return degree_ - finite_degree(); }

  DivisorOnP1<K> divisor() const {
    DivisorOnP1<K> d;
    for (const auto& [r, e] : factors_) d.points.push_back({P1Point<K>::finite(r), e});
    if (int m = infinity_multiplicity(); m != 0)
      d.points.push_back({P1Point<K>::infinity(), m});
    return d;
  }

  // Value of the chart function at a point; nullopt at a pole. At infinity the
  // value is that of the w-chart representative f(1/w) w^d at w = 0.
  std::optional<K> value_at(const P1Point<K>& p) const {
    if (p.at_infinity) {
      const int m = infinity_multiplicity();
      if (m > 0) return K{};      // zero of order m
      if (m < 0) return std::nullopt;  // pole
      K v = lead_;  // prod (1 - r_i w)^{e_i} at w = 0 is 1
      return v;
    }
    K v = lead_;
    for (const auto& [r, e] : factors_) {
      K diff = p.z - r;
      if (is_zero_scalar(diff)) {
        if (e > 0) return K{};
        return std::nullopt;
      }
      v = v * pow_scalar(diff, e);
    }
    return v;
  }

  bool vanishes_at(const P1Point<K>& p) const {
    auto v = value_at(p);
    return v.has_value() && is_zero_scalar(*v);
  }
  bool has_pole_at(const P1Point<K>& p) const { return !value_at(p).has_value(); }

  // Multiply by a degree-0 rational function (merges factor lists).
  friend RationalSection operator*(const RationalSection& a, const RationalSection& b) {
    std::vector<std::pair<K, int>> f = a.factors_;
    for (const auto& [r, e] : b.factors_) {
      bool merged = false;
      for (auto& [r0, e0] : f)
        if (r0 == r) {
          e0 += e;
          merged = true;
          break;
        }
      if (!merged) f.push_back({r, e});
    }
    std::erase_if(f, [](const auto& fe) { return fe.second == 0; });
    return RationalSection(a.lead_ * b.lead_, std::move(f), a.degree_ + b.degree_);
  }

  RationalSection inverse() const {
    std::vector<std::pair<K, int>> f = factors_;
    for (auto& [r, e] : f) e = -e;
    return RationalSection(K(1) / lead_wrapped(), std::move(f), -degree_);
  }

  std::string str() const {
    std::ostringstream os;
    os << scalar_str(lead_);
    for (const auto& [r, e] : factors_) {
      os << " (z - " << scalar_str(r) << ")";
      if (e != 1) os << "^" << e;
    }
    return os.str();
  }

 private:
  static bool is_zero_scalar(const std::complex<double>& v) { return v == 0.0; }
  static bool is_zero_scalar(const GaussianRational& v) { return v.is_zero(); }
  static std::complex<double> pow_scalar(std::complex<double> b, int e) {
    std::complex<double> r = 1.0;
    std::complex<double> base = e < 0 ? 1.0 / b : b;
    for (int k = std::abs(e); k > 0; --k) r *= base;
    return r;
  }
  static GaussianRational pow_scalar(const GaussianRational& b, int e) { return b.pow(e); }
  K lead_wrapped() const { return lead_; }
  static std::string scalar_str(const std::complex<double>& v) {
    std::ostringstream os;
    os << v.real();
    if (v.imag() != 0) os << (v.imag() > 0 ? "+" : "") << v.imag() << "i";
    return os.str();
  }
  static std::string scalar_str(const GaussianRational& v) { return v.str(); }

  K lead_;
  std::vector<std::pair<K, int>> factors_;
  int degree_;
};

using NumericSection = RationalSection<std::complex<double>>;
using ExactSection = RationalSection<GaussianRational>;
using NumericPoint = P1Point<std::complex<double>>;
using ExactPoint = P1Point<GaussianRational>;

}  // namespace delq
