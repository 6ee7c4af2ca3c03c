#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "delq/conventions.hpp"
#include "delq/fiber_grid.hpp"
#include "delq/metric.hpp"
#include "delq/section.hpp"
#include "delq/weil.hpp"

namespace delq {

// --- Gauss-Legendre nodes (used by the singular polar quadrature) ----------

struct GaussRule {
  std::vector<double> x;  // nodes on [-1,1]
  std::vector<double> w;
};

inline const GaussRule& gauss_legendre(int n) {
  static thread_local std::map<int, GaussRule> cache;  // node-stable references
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(convention::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

// --- chordal geometry on P^1 ------------------------------------------------

inline double chordal_distance(const NumericPoint& a, const NumericPoint& b) {
  if (a.at_infinity && b.at_infinity) return 0.0;
  if (a.at_infinity) return 1.0 / std::sqrt(1.0 + std::norm(b.z));
  if (b.at_infinity) return 1.0 / std::sqrt(1.0 + std::norm(a.z));
  return std::abs(a.z - b.z) /
         std::sqrt((1.0 + std::norm(a.z)) * (1.0 + std::norm(b.z)));
}

inline double min_chordal_separation(const DivisorOnP1<std::complex<double>>& A,
                                     const DivisorOnP1<std::complex<double>>& B) {
  double best = 2.0;
  for (const auto& [p, mp] : A.points)
    for (const auto& [q, mq] : B.points) best = std::min(best, chordal_distance(p, q));
  return best;
}

// --- pointwise log norms ----------------------------------------------------

// log|f| of the chart representative of the section at a chart point.
inline double section_log_abs(const NumericSection& s, int chart, Complex zeta) {
  double v = std::log(std::abs(s.lead()));
  if (chart == 0) {
    for (const auto& [r, e] : s.factors()) v += e * std::log(std::abs(zeta - r));
  } else {
    for (const auto& [r, e] : s.factors()) v += e * std::log(std::abs(1.0 - r * zeta));
    if (int m = s.infinity_multiplicity(); m != 0) v += m * std::log(std::abs(zeta));
  }
  return v;
}

// log ||sigma(p)||_h, the true-norm point value. Throws if p lies on the
// divisor of sigma (where the log norm is infinite).
inline double log_point_norm(const NumericSection& sec, const MetricModel& h,
                             const NumericPoint& p, Complex s) {
  if (sec.bundle_degree() != h.degree())
    throw std::invalid_argument("log_point_norm: section/metric degree mismatch");
  if (p.at_infinity) {
    if (sec.infinity_multiplicity() != 0)
      throw std::invalid_argument("log_point_norm: point lies on the divisor");
    return section_log_abs(sec, 1, 0.0) + h.log_weight(1, 0.0, s);
  }
  if (sec.vanishes_at(p) || sec.has_pole_at(p))
    throw std::invalid_argument("log_point_norm: point lies on the divisor");
  if (std::abs(p.z) <= 1.0)
    return section_log_abs(sec, 0, p.z) + h.log_weight(0, p.z, s);
  const Complex w = 1.0 / p.z;
  return section_log_abs(sec, 1, w) + h.log_weight(1, w, s);
}

// --- singular quadrature: I_p = integral of the FS log kernel against c1 ----

// l_p(z) = log( |z-p| / sqrt((1+|z|^2)(1+|p|^2)) ) is the log norm of the
// O(1) section vanishing at p in the Fubini-Study metric; subtracting
// multiples of it from log||sigma|| leaves a globally smooth function.
// The added-back integral I_p = int l_p c1(L1,h1) has one log singularity at
// p and is computed in rotated spherical polar coordinates: the Moebius map
// T(zeta) = (zeta + c)/(1 - conj(c) zeta) is an FS isometry taking 0 to p, so
// the kernel becomes exactly log sin(chi/2).
//
// chi in (0, pi/2] is handled with the substitution chi = (pi/2) e^{-v}
// (integrand analytic in v, Gauss-Legendre converges spectrally despite the
// log); chi in [pi/2, pi] and the periodic theta direction are regular.
struct PolarRule {
  int n_inner = 160;   // GL nodes in v for chi in (0, pi/2]
  int n_outer = 96;    // GL nodes for chi in [pi/2, pi]
  int n_theta = 256;   // equispaced theta nodes
  double v_max = 34.0; // chi down to (pi/2) e^{-v_max}
};

inline double polar_log_kernel_integral(const NumericPoint& p, const MetricModel& h,
                                        Complex s, const PolarRule& rule = {}) {
  // Chart and Moebius center: work in the chart where the point is small.
  int chart;
  Complex c;
  if (p.at_infinity) {
    chart = 1;
    c = 0.0;
  } else if (std::abs(p.z) <= 1.0) {
    chart = 0;
    c = p.z;
  } else {
    chart = 1;
    c = 1.0 / p.z;
  }
  const int other = 1 - chart;
  const double cc = 1.0 + std::norm(c);

  // c1 density of h at the image point, expressed against the area element of
  // `chart`, divided into bounded factors to stay finite near T -> infinity.
  auto density_times_jac = [&](Complex zeta) -> double {
    const Complex den = 1.0 - std::conj(c) * zeta;
    const Complex xi = (zeta + c) / den;
    const double absT1 = cc / std::norm(den);  // |T'(zeta)|
    if (std::abs(xi) <= 1.0) {
      return h.phi_zzbar(chart, xi, s) * absT1 * absT1;
    }
    const double u = absT1 / std::norm(xi);  // |T'| / |T|^2 stays O(1)
    return h.phi_zzbar(other, 1.0 / xi, s) * u * u;
  };

  const GaussRule& gl_in = gauss_legendre(rule.n_inner);
  const GaussRule& gl_out = gauss_legendre(rule.n_outer);
  const double dtheta = 2.0 * convention::pi / rule.n_theta;

  double total = 0.0;
  auto chi_slice = [&](double chi, double chi_weight) {
    const double r = std::tan(0.5 * chi);
    const double kernel = std::log(std::sin(0.5 * chi));
    const double sec_half = 1.0 / std::cos(0.5 * chi);
    const double measure = r * 0.5 * sec_half * sec_half;  // dA_zeta / (dr -> dchi)
    double ring = 0.0;
    for (int k = 0; k < rule.n_theta; ++k) {
      const double th = k * dtheta;
      ring += density_times_jac(Complex(r * std::cos(th), r * std::sin(th)));
    }
    total += chi_weight * kernel * measure * ring * dtheta;
  };

  // inner: chi = (pi/2) e^{-v}, dchi = -chi dv
  for (int i = 0; i < rule.n_inner; ++i) {
    const double v = 0.5 * rule.v_max * (gl_in.x[i] + 1.0);
    const double wv = 0.5 * rule.v_max * gl_in.w[i];
    const double chi = 0.5 * convention::pi * std::exp(-v);
    chi_slice(chi, wv * chi);
  }
  // outer: chi in [pi/2, pi]
  for (int i = 0; i < rule.n_outer; ++i) {
    const double chi = 0.75 * convention::pi + 0.25 * convention::pi * gl_out.x[i];
    const double wchi = 0.25 * convention::pi * gl_out.w[i];
    chi_slice(chi, wchi);
  }

  return total * convention::kC1Density;
}

// --- the Deligne pairing log norm -------------------------------------------

// log ||<sigma0, sigma1>|| for a pair of sections with disjoint divisors and
// metrics h0, h1 on their bundles:
//
//   sum_{p in div sigma0} m_p log||sigma1(p)||_{h1}
//     + int_fiber log||sigma0||_{h0} c1(L1,h1).
//
// The fiber integral is split into a globally smooth remainder (closed form
// for factored sections) integrated on the two-chart grid, plus the FS log
// kernels handled by polar quadrature. Swapping the recursion order is exact
// up to Weil reciprocity and serves as a cross-check.
inline double deligne_log_norm(const NumericSection& sigma0, const NumericSection& sigma1,
                               MetricPtr h0, MetricPtr h1, const FiberGrid& grid, Complex s,
                               bool swap_order = false, const PolarRule& rule = {}) {
  if (swap_order) return deligne_log_norm(sigma1, sigma0, h1, h0, grid, s, false, rule);
  if (grid.kind() == FiberKind::sphere) {
    if (sigma0.bundle_degree() != h0->degree() || sigma1.bundle_degree() != h1->degree())
      throw std::invalid_argument("deligne_log_norm: section/metric degree mismatch");
  }
  const auto div0 = sigma0.divisor();
  const auto div1 = sigma1.divisor();
  if (min_chordal_separation(div0, div1) < 1e-8)
    throw std::invalid_argument("deligne_log_norm: divisors are not disjoint");

  // Point-norm part.
  double point_sum = 0.0;
  for (const auto& [p, m] : div0.points) point_sum += m * log_point_norm(sigma1, *h1, p, s);

  if (grid.kind() == FiberKind::torus) {
    // Flat degree-0 setting: c1(L1,h1) = 0 only when the metric is flat; the
    // general torus integrand has no singular subtraction implemented because
    // sections here are sphere-chart rational data.
    double smooth = grid.integrate([&](int c, Complex zeta) {
      return h1->phi_zzbar(c, zeta, s);
    });
    if (std::abs(smooth) > 1e-12)
      throw std::invalid_argument("deligne_log_norm: torus fibers support flat metrics only");
    return point_sum;
  }

  // Smooth remainder: log||sigma0|| - sum m_p l_p collapses to
  //   log|lead| + lw0 + (d0/2) log(1+|zeta|^2) + (1/2) sum m_p log(1+|p|^2).
  double k0 = std::log(std::abs(sigma0.lead()));
  for (const auto& [r, e] : sigma0.factors()) k0 += 0.5 * e * std::log1p(std::norm(r));
  const double half_d0 = 0.5 * sigma0.bundle_degree();

  const double smooth = grid.integrate([&](int c, Complex zeta) {
    const double lam_tilde = k0 + h0->log_weight(c, zeta, s) + half_d0 * std::log1p(std::norm(zeta));
    return lam_tilde * h1->phi_zzbar(c, zeta, s) * convention::kC1Density;
  });

  // Singular kernels added back.
  double singular = 0.0;
  for (const auto& [p, m] : div0.points)
    singular += m * polar_log_kernel_integral(p, *h1, s, rule);

  return point_sum + smooth + singular;
}

// Locally generated symbol of the pairing with its cached log norm.
struct PairingSymbol {
  NumericSection sigma0;
  NumericSection sigma1;
  MetricPtr h0;
  MetricPtr h1;
  double log_norm;

  static PairingSymbol make(NumericSection s0, NumericSection s1, MetricPtr m0, MetricPtr m1,
                            const FiberGrid& grid, Complex s) {
    double ln = deligne_log_norm(s0, s1, m0, m1, grid, s);
    return {std::move(s0), std::move(s1), std::move(m0), std::move(m1), ln};
  }
};

// --- mu_hat ------------------------------------------------------------------

// The metric-change functional: for curve fibers (n = 1),
// mu_hat(mu) = kMuHatSign * int_fiber mu c1(L1,h1); changing h0 to h0 e^{-mu}
// changes the pairing log norm by exactly -mu_hat(mu). See conventions.hpp
// for why this sign and scale are the coherent choice.
inline double mu_hat(const SphereScalar& mu, const std::vector<MetricPtr>& metrics,
                     const FiberGrid& grid, Complex s) {
  if (metrics.size() != 1)
    throw std::invalid_argument("mu_hat: one metric expected for curve fibers");
  const MetricModel& h1 = *metrics[0];
  return convention::kMuHatSign * grid.integrate([&](int c, Complex zeta) {
    return mu.value(c, zeta) * h1.phi_zzbar(c, zeta, s) * convention::kC1Density;
  });
}

// --- transition rule ----------------------------------------------------------

// Multiplying sigma0 by a rational function zeta multiplies the symbol by
// Norm_{div sigma1}(zeta); the residual of the log form of that rule.
inline double transition_consistency_residual(const NumericSection& sigma0,
                                              const NumericSection& zeta,
                                              const NumericSection& sigma1, MetricPtr h0,
                                              MetricPtr h1, const FiberGrid& grid, Complex s) {
  if (zeta.bundle_degree() != 0)
    throw std::invalid_argument("transition: zeta must be a rational function");
  const NumericSection moved = sigma0 * zeta;
  const double lhs = deligne_log_norm(moved, sigma1, h0, h1, grid, s);
  const double rhs = deligne_log_norm(sigma0, sigma1, h0, h1, grid, s);
  const std::complex<double> nrm = norm_along_divisor(zeta, sigma1.divisor());
  return std::abs(lhs - rhs - std::log(std::abs(nrm)));
}

}  // namespace delq
