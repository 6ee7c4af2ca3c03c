#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "delq/rational.hpp"
#include "delq/section.hpp"

namespace delq {

// --- scalar helpers -------------------------------------------------------

inline GaussianRational pow_of(const GaussianRational& v, int m) { return v.pow(m); }
inline std::complex<double> pow_of(std::complex<double> v, int m) {
  std::complex<double> r = 1.0, base = m < 0 ? 1.0 / v : v;
  for (int k = std::abs(m); k > 0; --k) r *= base;
  return r;
}
inline bool is_zero(const GaussianRational& v) { return v.is_zero(); }
inline bool is_zero(std::complex<double> v) { return v == 0.0; }
inline double abs_of(const GaussianRational& v) { return std::abs(v.to_complex()); }
inline double abs_of(std::complex<double> v) { return std::abs(v); }

// Norm of a degree-0 rational function along a divisor:
// zeta[D] = prod_p zeta(p)^{m_p}. Requires zeta to have neither zero nor pole
// on supp(D).
template <class K>
K norm_along_divisor(const RationalSection<K>& zeta, const DivisorOnP1<K>& D) {
  if (zeta.bundle_degree() != 0)
    throw std::invalid_argument("norm_along_divisor: zeta must be a rational function");
  K out(1);
  for (const auto& [p, m] : D.points) {
    auto v = zeta.value_at(p);
    if (!v.has_value())
      throw std::invalid_argument("norm_along_divisor: zeta has a pole on the divisor support");
    if (zeta.vanishes_at(p))
      throw std::invalid_argument("norm_along_divisor: zeta vanishes on the divisor support");
    out = out * pow_of(*v, m);
  }
  return out;
}

template <class K>
struct ReciprocityResult {
  K f_on_div_g;
  K g_on_div_f;
  bool exact_equal;
  double residual;  // |f[div g] - g[div f]| in double precision
};

// Weil reciprocity for rational functions with disjoint divisors:
// f[div g] == g[div f]. Exact in GaussianRational arithmetic.
template <class K>
ReciprocityResult<K> weil_reciprocity_check(const RationalSection<K>& f,
                                            const RationalSection<K>& g) {
  if (f.bundle_degree() != 0 || g.bundle_degree() != 0)
    throw std::invalid_argument("weil_reciprocity_check: inputs must be rational functions");
  if (!supports_disjoint(f.divisor(), g.divisor()))
    throw std::invalid_argument("weil_reciprocity_check: divisors share support");
  K a = norm_along_divisor(f, g.divisor());
  K b = norm_along_divisor(g, f.divisor());
  K d = a - b;
  return {a, b, is_zero(d), abs_of(d)};
}

// Lift an exact section to complex<double> coefficients (float mode).
inline NumericSection to_numeric(const ExactSection& s) {
  std::vector<std::pair<std::complex<double>, int>> factors;
  factors.reserve(s.factors().size());
  for (const auto& [r, e] : s.factors()) factors.push_back({r.to_complex(), e});
  return NumericSection(s.lead().to_complex(), std::move(factors), s.bundle_degree());
}

// ---------------------------------------------------------------------------
// Seeded random rational-function pairs with disjoint rational divisors.
// Raw engine output is reduced with explicit modular arithmetic so the stream
// of generated pairs is identical across standard library implementations.
// ---------------------------------------------------------------------------

class RationalFunctionSampler {
 public:
  explicit RationalFunctionSampler(std::uint64_t seed) : eng_(seed) {}

  // A pair (f, g) of degree-0 sections whose divisors are disjoint; each has
  // between one and four zeros and as many poles, all Gaussian-rational.
  std::pair<ExactSection, ExactSection> pair() {
    std::vector<GaussianRational> used;
    bool infinity_used = false;
    ExactSection f = random_function(used, infinity_used);
    ExactSection g = random_function(used, infinity_used);
    return {std::move(f), std::move(g)};
  }

 private:
  std::uint64_t draw(std::uint64_t k) { return eng_() % k; }

  GaussianRational random_point(const std::vector<GaussianRational>& used) {
    for (;;) {
      const long long nr = static_cast<long long>(draw(13)) - 6;
      const long long ni = static_cast<long long>(draw(13)) - 6;
      const long long den = 1 + static_cast<long long>(draw(3));
      GaussianRational p(Rational(nr, den), Rational(ni, den));
      bool fresh = true;
      for (const auto& u : used)
        if (u == p) fresh = false;
      if (fresh) return p;
    }
  }

  ExactSection random_function(std::vector<GaussianRational>& used, bool& infinity_used) {
    const int zeros = 1 + static_cast<int>(draw(4));
    std::vector<std::pair<GaussianRational, int>> factors;
    for (int i = 0; i < zeros; ++i) {
      GaussianRational p = random_point(used);
      used.push_back(p);
      factors.push_back({p, 1});
    }
    // Balance with poles; occasionally put the balancing pole at infinity
    // instead (at most one of f, g may touch infinity).
    const bool use_infinity = !infinity_used && draw(4) == 0;
    if (use_infinity) infinity_used = true;
    const int poles = use_infinity ? zeros - 1 : zeros;
    for (int i = 0; i < poles; ++i) {
      GaussianRational p = random_point(used);
      used.push_back(p);
      factors.push_back({p, -1});
    }
    GaussianRational lead(1 + static_cast<int>(draw(3)));
    return ExactSection(std::move(lead), std::move(factors), 0);
  }

  std::mt19937_64 eng_;
};

}  // namespace delq
