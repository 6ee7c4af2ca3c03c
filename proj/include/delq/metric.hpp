#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "delq/conventions.hpp"
#include "delq/fiber_grid.hpp"

namespace delq {

// ---------------------------------------------------------------------------
// Smooth real scalars on the fiber with closed-form chart derivatives. Used
// for conformal factors, the mu of the metric-change law, and bump data in
// metric presets.
// ---------------------------------------------------------------------------

class SphereScalar {
 public:
  virtual ~SphereScalar() = default;
  virtual double value(int chart, Complex zeta) const = 0;
  virtual Complex d_z(int chart, Complex zeta) const = 0;
  virtual double d_zzbar(int chart, Complex zeta) const = 0;
};

class ConstantScalar final : public SphereScalar {
 public:
  explicit ConstantScalar(double c) : c_(c) {}
  double value(int, Complex) const override { return c_; }
  Complex d_z(int, Complex) const override { return 0.0; }
  double d_zzbar(int, Complex) const override { return 0.0; }

 private:
  double c_;
};

// Rational bump A tau^4 / (tau^2 + |z - z0|^2)^2: smooth on the whole sphere
// (the w-chart expression is polynomial-rational with no singularity at w=0)
// with closed-form first and mixed-second derivatives in both charts.
class RationalBump final : public SphereScalar {
 public:
  RationalBump(double amplitude, Complex center, double tau)
      : A_(amplitude), z0_(center), tau2_(tau * tau) {
    if (tau <= 0.0) throw ConfigError("RationalBump: tau must be positive");
  }

  double value(int chart, Complex zeta) const override {
    if (chart == 0) {
      const double q = tau2_ + std::norm(zeta - z0_);
      return A_ * tau2_ * tau2_ / (q * q);
    }
    const double qw = qw_of(zeta);
    const double n = std::norm(zeta);
    return A_ * tau2_ * tau2_ * n * n / (qw * qw);
  }

  Complex d_z(int chart, Complex zeta) const override {
    if (chart == 0) {
      const double q = tau2_ + std::norm(zeta - z0_);
      return -2.0 * A_ * tau2_ * tau2_ * std::conj(zeta - z0_) / (q * q * q);
    }
    // d/dw of value(z=1/w), written without dividing by w.
    const double qw = qw_of(zeta);
    const Complex one_m = 1.0 - z0_ * zeta;
    return 2.0 * A_ * tau2_ * tau2_ * std::conj(one_m) * zeta * std::conj(zeta) *
           std::conj(zeta) / (qw * qw * qw);
  }

  double d_zzbar(int chart, Complex zeta) const override {
    if (chart == 0) {
      const double r2 = std::norm(zeta - z0_);
      const double q = tau2_ + r2;
      return -2.0 * A_ * tau2_ * tau2_ * (tau2_ - 2.0 * r2) / (q * q * q * q);
    }
    const double qw = qw_of(zeta);
    const double n = std::norm(zeta);
    const double m2 = std::norm(1.0 - z0_ * zeta);
    return -2.0 * A_ * tau2_ * tau2_ * (tau2_ * n - 2.0 * m2) * n / (qw * qw * qw * qw);
  }

 private:
  double qw_of(Complex w) const { return tau2_ * std::norm(w) + std::norm(1.0 - z0_ * w); }
  double A_;
  Complex z0_;
  double tau2_;
};

// ---------------------------------------------------------------------------
// Hermitian metric models on line bundles over the fiber, possibly depending
// on a base parameter s. The stored quantity is the true-norm log weight of
// the chart trivializing section; derivative hooks are for the potential
// phi = -2 * log_weight (see conventions.hpp). Models are immutable.
// ---------------------------------------------------------------------------

class MetricModel {
 public:
  virtual ~MetricModel() = default;

  int degree() const { return degree_; }
  FiberKind fiber() const { return kind_; }

  virtual double log_weight(int chart, Complex zeta, Complex s) const = 0;

  virtual bool analytic_hooks() const { return false; }

  double phi(int chart, Complex zeta, Complex s) const {
    return convention::kPotentialFromLogWeight * log_weight(chart, zeta, s);
  }

  // phi_{zeta zetabar}; default is a 4th-order finite-difference fallback for
  // table metrics without closed-form derivatives.
  virtual double phi_zzbar(int chart, Complex zeta, Complex s) const {
    const double h = fd_fiber_step_;
    auto f = [&](double dx, double dy) { return phi(chart, zeta + Complex(dx, dy), s); };
    const double lap =
        (-f(2 * h, 0) + 16 * f(h, 0) - 30 * f(0, 0) + 16 * f(-h, 0) - f(-2 * h, 0)) /
            (12 * h * h) +
        (-f(0, 2 * h) + 16 * f(0, h) - 30 * f(0, 0) + 16 * f(0, -h) - f(0, -2 * h)) /
            (12 * h * h);
    return 0.25 * lap;
  }

  virtual Complex phi_zsbar(int chart, Complex zeta, Complex s) const {
    const double hz = fd_fiber_step_, hs = fd_base_step_;
    auto dsb = [&](Complex z) {
      // d/dsbar = (d_u + i d_v)/2 on phi(z, s)
      const double du = (phi(chart, z, s + hs) - phi(chart, z, s - hs)) / (2 * hs);
      const double dv =
          (phi(chart, z, s + Complex(0, hs)) - phi(chart, z, s - Complex(0, hs))) / (2 * hs);
      return 0.5 * Complex(du, dv);
    };
    auto d4 = [&](Complex step) {
      return (-dsb(zeta + 2.0 * step) + 8.0 * dsb(zeta + step) - 8.0 * dsb(zeta - step) +
              dsb(zeta - 2.0 * step)) /
             (12.0 * hz);
    };
    const Complex dx = d4(Complex(hz, 0));
    const Complex dy = d4(Complex(0, hz));
    return 0.5 * (dx - Complex(0, 1) * dy);
  }

  virtual double phi_ssbar(int chart, Complex zeta, Complex s) const {
    const double h = fd_base_step_;
    auto f = [&](Complex ds) { return phi(chart, zeta, s + ds); };
    const double lap = (f(h) + f(-h) - 2 * f(0)) / (h * h) +
                       (f(Complex(0, h)) + f(Complex(0, -h)) - 2 * f(0)) / (h * h);
    return 0.25 * lap;
  }

 protected:
  MetricModel(int degree, FiberKind kind) : degree_(degree), kind_(kind) {}
  int degree_;
  FiberKind kind_;
  double fd_fiber_step_ = 1e-2;
  double fd_base_step_ = 1e-3;
};

using MetricPtr = std::shared_ptr<const MetricModel>;

// O(d) with the d-th power of the Fubini-Study metric; base independent.
class FsPowerMetric final : public MetricModel {
 public:
  explicit FsPowerMetric(int degree) : MetricModel(degree, FiberKind::sphere) {}
  double log_weight(int, Complex zeta, Complex) const override {
    return -0.5 * degree_ * std::log1p(std::norm(zeta));
  }
  bool analytic_hooks() const override { return true; }
  double phi_zzbar(int, Complex zeta, Complex) const override {
    const double q = 1.0 + std::norm(zeta);
    return degree_ / (q * q);
  }
  Complex phi_zsbar(int, Complex, Complex) const override { return 0.0; }
  double phi_ssbar(int, Complex, Complex) const override { return 0.0; }
};

// The one-parameter family FS^d * exp(-|s|^2 beta(z)) on O(d): the quadratic
// weight potential is d log(1+|z|^2) + |s|^2 beta(z) with beta a smooth bump.
// For s != 0 the curvature has genuine mixed and base components.
class BumpFamilyMetric final : public MetricModel {
 public:
  BumpFamilyMetric(int degree, RationalBump bump)
      : MetricModel(degree, FiberKind::sphere), bump_(std::move(bump)) {}

  double log_weight(int chart, Complex zeta, Complex s) const override {
    return -0.5 * degree_ * std::log1p(std::norm(zeta)) -
           0.5 * std::norm(s) * bump_.value(chart, zeta);
  }
  bool analytic_hooks() const override { return true; }
  double phi_zzbar(int chart, Complex zeta, Complex s) const override {
    const double q = 1.0 + std::norm(zeta);
    return degree_ / (q * q) + std::norm(s) * bump_.d_zzbar(chart, zeta);
  }
  Complex phi_zsbar(int chart, Complex zeta, Complex s) const override {
    return s * bump_.d_z(chart, zeta);
  }
  double phi_ssbar(int chart, Complex zeta, Complex) const override {
    return bump_.value(chart, zeta);
  }
  const RationalBump& bump() const { return bump_; }

 private:
  RationalBump bump_;
};

// Metric given by a coefficient table: FS^d rescaled by a finite sum of
// rational bumps, each either fixed or coupled to the base through |s|^2.
// The one-entry s-coupled table is the bump family above.
class BumpTableMetric final : public MetricModel {
 public:
  struct Entry {
    RationalBump bump;
    bool s_coupled;
  };

  BumpTableMetric(int degree, std::vector<Entry> entries)
      : MetricModel(degree, FiberKind::sphere), entries_(std::move(entries)) {}

  double log_weight(int chart, Complex zeta, Complex s) const override {
    double lw = -0.5 * degree_ * std::log1p(std::norm(zeta));
    for (const auto& e : entries_)
      lw -= 0.5 * (e.s_coupled ? std::norm(s) : 1.0) * e.bump.value(chart, zeta);
    return lw;
  }
  bool analytic_hooks() const override { return true; }
  double phi_zzbar(int chart, Complex zeta, Complex s) const override {
    const double q = 1.0 + std::norm(zeta);
    double a = degree_ / (q * q);
    for (const auto& e : entries_)
      a += (e.s_coupled ? std::norm(s) : 1.0) * e.bump.d_zzbar(chart, zeta);
    return a;
  }
  Complex phi_zsbar(int chart, Complex zeta, Complex s) const override {
    Complex b = 0.0;
    for (const auto& e : entries_)
      if (e.s_coupled) b += s * e.bump.d_z(chart, zeta);
    return b;
  }
  double phi_ssbar(int chart, Complex zeta, Complex) const override {
    double v = 0.0;
    for (const auto& e : entries_)
      if (e.s_coupled) v += e.bump.value(chart, zeta);
    return v;
  }

 private:
  std::vector<Entry> entries_;
};

// Degree-0 bundle on the flat torus with the constant-norm metric.
class FlatTorusMetric final : public MetricModel {
 public:
  FlatTorusMetric() : MetricModel(0, FiberKind::torus) {}
  double log_weight(int, Complex, Complex) const override { return 0.0; }
  bool analytic_hooks() const override { return true; }
  double phi_zzbar(int, Complex, Complex) const override { return 0.0; }
  Complex phi_zsbar(int, Complex, Complex) const override { return 0.0; }
  double phi_ssbar(int, Complex, Complex) const override { return 0.0; }
};

// h -> h exp(-mu): shifts the stored norm-scale log weight by -coeff*mu for a
// fiber-only mu. The potential gains +2*coeff*mu, so only the fiber component
// of the curvature changes.
class ConformalShiftMetric final : public MetricModel {
 public:
  ConformalShiftMetric(MetricPtr base, std::shared_ptr<const SphereScalar> mu,
                       double coeff = 1.0)
      : MetricModel(base->degree(), base->fiber()),
        base_(std::move(base)),
        mu_(std::move(mu)),
        coeff_(coeff) {}

  double log_weight(int chart, Complex zeta, Complex s) const override {
    return base_->log_weight(chart, zeta, s) - coeff_ * mu_->value(chart, zeta);
  }
  bool analytic_hooks() const override { return base_->analytic_hooks(); }
  double phi_zzbar(int chart, Complex zeta, Complex s) const override {
    return base_->phi_zzbar(chart, zeta, s) + 2.0 * coeff_ * mu_->d_zzbar(chart, zeta);
  }
  Complex phi_zsbar(int chart, Complex zeta, Complex s) const override {
    return base_->phi_zsbar(chart, zeta, s);
  }
  double phi_ssbar(int chart, Complex zeta, Complex s) const override {
    return base_->phi_ssbar(chart, zeta, s);
  }

 private:
  MetricPtr base_;
  std::shared_ptr<const SphereScalar> mu_;
  double coeff_;
};

// ---------------------------------------------------------------------------
// Relative Kaehler data: a hermitian metric g on the relative tangent bundle,
// entering only through Td(X/S) = 1 + c1(T,omega)/2 (+ higher fiber-pure parts
// which vanish identically on one-dimensional fibers).
// ---------------------------------------------------------------------------

class KahlerModel {
 public:
  virtual ~KahlerModel() = default;
  virtual FiberKind fiber() const = 0;
  // density of c1(T_{X/S}, omega) against the chart area element, times pi:
  // i.e. (-log g)_{z zbar}
  virtual double ct_potential_hessian(int chart, Complex zeta) const = 0;
};

class RoundSphereKahler final : public KahlerModel {
 public:
  FiberKind fiber() const override { return FiberKind::sphere; }
  double ct_potential_hessian(int, Complex zeta) const override {
    const double q = 1.0 + std::norm(zeta);
    return 2.0 / (q * q);
  }
};

// Round metric rescaled by (1 + eps*bump): still a positive fiber metric for
// |eps| * max(bump) < 1.
class PerturbedSphereKahler final : public KahlerModel {
 public:
  PerturbedSphereKahler(double eps, RationalBump bump, double bump_max)
      : eps_(eps), bump_(std::move(bump)) {
    if (std::abs(eps_) * bump_max >= 1.0)
      throw std::domain_error("PerturbedSphereKahler: nonpositive fiber metric");
  }
  FiberKind fiber() const override { return FiberKind::sphere; }
  double ct_potential_hessian(int chart, Complex zeta) const override {
    const double q = 1.0 + std::norm(zeta);
    const double u = 1.0 + eps_ * bump_.value(chart, zeta);
    const Complex uz = eps_ * bump_.d_z(chart, zeta);
    const double uzz = eps_ * bump_.d_zzbar(chart, zeta);
    // (-log g)_{z zbar} with -log g = 2 log(1+|z|^2) - log(1+eps*bump)
    return 2.0 / (q * q) - (uzz * u - std::norm(uz)) / (u * u);
  }

 private:
  double eps_;
  RationalBump bump_;
};

class FlatTorusKahler final : public KahlerModel {
 public:
  FiberKind fiber() const override { return FiberKind::torus; }
  double ct_potential_hessian(int, Complex) const override { return 0.0; }
};

// ---------------------------------------------------------------------------
// Sampled data and the c1 / Todd form builders.
// ---------------------------------------------------------------------------

// Hermitian metric sampled as log-weights on the chart grids, one field per
// base sample point. Keeps a handle to the generating model so that
// arbitrary-point evaluation (singular quadrature, admissibility checks)
// remains available.
struct SampledMetric {
  MetricPtr model;
  FiberGrid grid;
  std::vector<Complex> base_points;
  std::vector<FiberField> log_weight;
  int degree = 0;
};

inline SampledMetric sample_metric(MetricPtr model, const FiberGrid& grid,
                                   std::vector<Complex> base_points) {
  if (model->fiber() != grid.kind())
    throw ConfigError("sample_metric: fiber kind mismatch between metric and grid");
  SampledMetric sm{std::move(model), grid, std::move(base_points), {}, 0};
  sm.degree = sm.model->degree();
  sm.log_weight.reserve(sm.base_points.size());
  for (Complex s : sm.base_points)
    sm.log_weight.push_back(sample_field(
        grid, [&](int c, Complex zeta) { return sm.model->log_weight(c, zeta, s); }));
  return sm;
}

// Transition rule for O(d) between the two sphere charts in norm scale:
// lw_w(w) = lw_z(1/w) - d log|w|. Returns the sup residual of the stored
// w-chart samples against the transported z-chart model values on the overlap.
inline double chart_compatibility_residual(const SampledMetric& sm, std::size_t base_index = 0) {
  if (sm.grid.kind() != FiberKind::sphere) return 0.0;
  const FiberGrid& g = sm.grid;
  double worst = 0.0;
  for (int i = FiberGrid::margin; i < FiberGrid::margin + g.resolution(); ++i)
    for (int j = FiberGrid::margin; j < FiberGrid::margin + g.resolution(); ++j) {
      const Complex w = g.chart_point(i, j);
      const double t = std::abs(w);
      if (t <= 1.0 / g.chart_radius() || t >= g.chart_radius() || t == 0.0) continue;
      const double stored = sm.log_weight[base_index].chart[1][g.index(i, j)];
      const double transported =
          sm.model->log_weight(0, 1.0 / w, sm.base_points[base_index]) -
          sm.degree * std::log(t);
      worst = std::max(worst, std::abs(stored - transported));
    }
  return worst;
}

// The fiber component of c1 as a density against the chart area element:
// phi_{z zbar} / pi, from analytic hooks (or the model's FD fallback).
inline FiberField c1_fiber_density(const MetricModel& m, const FiberGrid& g, Complex s) {
  return sample_field(
      g, [&](int c, Complex zeta) { return m.phi_zzbar(c, zeta, s) * convention::kC1Density; });
}

// Same quantity computed by grid finite differences from stored log-weight
// samples (5-point, 4th order per direction); exercises the sampled route.
inline FiberField c1_fiber_density_from_samples(const FiberGrid& g, const FiberField& lw) {
  FiberField out(g);
  const Complex tau = g.tau();
  const double h = g.spacing();
  for (int c = 0; c < g.chart_count(); ++c) {
    for (int i = FiberGrid::margin; i < FiberGrid::margin + g.resolution(); ++i) {
      for (int j = FiberGrid::margin; j < FiberGrid::margin + g.resolution(); ++j) {
        auto f = [&](int di, int dj) { return lw.chart[c][g.index(i + di, j + dj)]; };
        const double fxx =
            (-f(2, 0) + 16 * f(1, 0) - 30 * f(0, 0) + 16 * f(-1, 0) - f(-2, 0)) / (12 * h * h);
        const double fyy =
            (-f(0, 2) + 16 * f(0, 1) - 30 * f(0, 0) + 16 * f(0, -1) - f(0, -2)) / (12 * h * h);
        double phi_zzbar;
        if (g.kind() == FiberKind::sphere) {
          phi_zzbar = convention::kPotentialFromLogWeight * 0.25 * (fxx + fyy);
        } else {
          // chart coords (u,v) with z = u + tau v: d_z = p d_u + q d_v
          const Complex p = Complex(0, 1) * std::conj(tau) / (2.0 * tau.imag());
          const Complex q = Complex(0, -1) / (2.0 * tau.imag());
          const double fuv = (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) / (4 * h * h);
          phi_zzbar = convention::kPotentialFromLogWeight *
                      (std::norm(p) * fxx + std::norm(q) * fyy +
                       2.0 * (p * std::conj(q)).real() * fuv);
        }
        out.chart[c][g.index(i, j)] = phi_zzbar * convention::kC1Density;
      }
    }
  }
  return out;
}

// Integral over the fiber of the c1 density; equals the bundle degree for any
// admissible metric.
inline double fiber_c1_integral(const MetricModel& m, const FiberGrid& g, Complex s) {
  return g.integrate(
      [&](int c, Complex zeta) { return m.phi_zzbar(c, zeta, s) * convention::kC1Density; });
}

// All components of c1 on the total space at one base point, as densities in
// the frame (i/2pi) {dz dzbar, dz dsbar, ds dzbar, ds dsbar}: a and e real,
// the (z,sbar) component b complex (its conjugate is the (s,zbar) one).
struct Form11Field {
  FiberField a;  // phi_{z zbar}
  FiberField e;  // phi_{s sbar}
  std::vector<std::vector<Complex>> b;  // phi_{z sbar}
};

inline Form11Field c1_form(const MetricModel& m, const FiberGrid& g, Complex s) {
  Form11Field out{FiberField(g), FiberField(g), {}};
  out.b.assign(g.chart_count(), std::vector<Complex>(g.nodes_per_chart(), 0.0));
  for (int c = 0; c < g.chart_count(); ++c)
    for (int i = 0; i < g.side(); ++i)
      for (int j = 0; j < g.side(); ++j) {
        const Complex zeta = g.chart_point(i, j);
        const int k = g.index(i, j);
        out.a.chart[c][k] = m.phi_zzbar(c, zeta, s);
        out.e.chart[c][k] = m.phi_ssbar(c, zeta, s);
        out.b[c][k] = m.phi_zsbar(c, zeta, s);
      }
  return out;
}

// Td(X/S) up to form degree two: 1 + c1(T_{X/S}, omega)/2. The degree-0 part
// is identically one; degree2_half_ct is the density of c1(T)/2 in the same
// units as Form11Field::a.
struct ToddForms {
  FiberField degree0;
  FiberField degree2_half_ct;
};

inline ToddForms relative_todd(const KahlerModel& k, const FiberGrid& g) {
  if (k.fiber() != g.kind()) throw ConfigError("relative_todd: fiber kind mismatch");
  ToddForms out{FiberField(g), FiberField(g)};
  for (int c = 0; c < g.chart_count(); ++c)
    for (int i = 0; i < g.side(); ++i)
      for (int j = 0; j < g.side(); ++j) {
        const int idx = g.index(i, j);
        out.degree0.chart[c][idx] = 1.0;
        out.degree2_half_ct.chart[c][idx] =
            0.5 * k.ct_potential_hessian(c, g.chart_point(i, j));
      }
  return out;
}

}  // namespace delq
