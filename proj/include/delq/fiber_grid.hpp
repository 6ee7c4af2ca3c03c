#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace delq {

using Complex = std::complex<double>;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class FiberKind { sphere, torus };

// Smooth step on [0,1] built from exp(-1/x); rises 0 -> 1 and satisfies
// step01(t) + step01(1-t) == 1 up to rounding, which is what makes the
// two-chart partition of unity exact on the overlap.
inline double smooth_step01(double t) {
  auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double a = f(t), b = f(1.0 - t);
  return a / (a + b);
}

// Discretized fiber: either the Riemann sphere as two affine charts z and
// w = 1/z, each an NxN midpoint grid over the square [-R,R]^2 (plus margin
// cells for finite-difference stencils) with a smooth radial partition of
// unity, or a flat torus C/(Z + tau Z) on a periodic fundamental-domain grid.
//
// Grids are immutable; all evaluation/integration entry points are const and
// safe to share across threads.
class FiberGrid {
 public:
  static constexpr int margin = 3;

  static FiberGrid sphere(int N, double R = 1.5) {
    if (N < 8) throw ConfigError("FiberGrid: N too coarse for finite-difference stencils (need N >= 8)");
    if (N % 2 != 0) throw ConfigError("FiberGrid: N must be even");
    if (R <= 1.0) throw ConfigError("FiberGrid: chart radius must exceed 1");
    FiberGrid g;
    g.kind_ = FiberKind::sphere;
    g.N_ = N;
    g.R_ = R;
    g.h_ = 2.0 * R / N;
    return g;
  }

  static FiberGrid torus(Complex tau, int N) {
    if (N < 8) throw ConfigError("FiberGrid: N too coarse for finite-difference stencils (need N >= 8)");
    if (tau.imag() <= 0.0) throw ConfigError("FiberGrid: torus parameter needs Im(tau) > 0");
    FiberGrid g;
    g.kind_ = FiberKind::torus;
    g.N_ = N;
    g.tau_ = tau;
    g.h_ = 1.0 / N;
    return g;
  }

  FiberKind kind() const { return kind_; }
  int resolution() const { return N_; }
  double chart_radius() const { return R_; }
  Complex tau() const { return tau_; }
  double spacing() const { return h_; }
  int chart_count() const { return kind_ == FiberKind::sphere ? 2 : 1; }
  int side() const { return N_ + 2 * margin; }
  int nodes_per_chart() const { return side() * side(); }
  int index(int i, int j) const { return i * side() + j; }
  bool interior(int i, int j) const {
    return i >= margin && i < margin + N_ && j >= margin && j < margin + N_;
  }

  // Chart coordinate of node (i,j): z or w for the sphere, u+iv in the unit
  // square for the torus.
  Complex chart_point(int i, int j) const {
    if (kind_ == FiberKind::sphere) {
      return {-R_ + (i - margin + 0.5) * h_, -R_ + (j - margin + 0.5) * h_};
    }
    return {(i - margin + 0.5) * h_, (j - margin + 0.5) * h_};
  }

  // Partition-of-unity weight of the z-chart at |z| = t; the w-chart weight at
  // the same sphere point is partition_weight(1/t) and the two sum to one.
  double partition_weight(double t) const {
    if (kind_ == FiberKind::torus) return 1.0;
    const double lo = 1.0 / R_;
    if (t <= lo) return 1.0;
    if (t >= R_) return 0.0;
    const double u = std::log(t) / std::log(R_);  // in (-1, 1)
    return 1.0 - smooth_step01(0.5 * (u + 1.0));
  }

  // Area measure of one grid cell with respect to the fiber's area element.
  double cell_area() const {
    return kind_ == FiberKind::sphere ? h_ * h_ : tau_.imag() * h_ * h_;
  }

  // Integral over the fiber of a density given per chart area element.
  // Evaluated at interior nodes only; partition-of-unity weighted.
  double integrate(const std::function<double(int, Complex)>& density) const {
    double sum = 0.0, comp = 0.0;
    const double cell = cell_area();
    for (int c = 0; c < chart_count(); ++c) {
      for (int i = margin; i < margin + N_; ++i) {
        for (int j = margin; j < margin + N_; ++j) {
          const Complex zeta = chart_point(i, j);
          const double w = partition_weight(std::abs(zeta));
          if (w == 0.0) continue;
          const double f = density(c, zeta);
          if (!std::isfinite(f))
            throw NumericalError("fiber quadrature: non-finite sample at chart " +
                                 std::to_string(c) + " node (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
          const double v = w * f * cell;
          // Kahan compensation keeps half-million-node sums reproducible.
          const double y = v - comp;
          const double t = sum + y;
          comp = (t - sum) - y;
          sum = t;
        }
      }
    }
    return sum;
  }

  // Integrate sampled values (one vector per chart, all nodes incl. margin).
  double integrate_samples(const std::vector<std::vector<double>>& field) const {
    double sum = 0.0, comp = 0.0;
    const double cell = cell_area();
    for (int c = 0; c < chart_count(); ++c) {
      for (int i = margin; i < margin + N_; ++i) {
        for (int j = margin; j < margin + N_; ++j) {
          const Complex zeta = chart_point(i, j);
          const double w = partition_weight(std::abs(zeta));
          if (w == 0.0) continue;
          const double f = field[c][index(i, j)];
          if (!std::isfinite(f))
            throw NumericalError("fiber quadrature: non-finite sample at chart " +
                                 std::to_string(c) + " node (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
          const double v = w * f * cell;
          const double y = v - comp;
          const double t = sum + y;
          comp = (t - sum) - y;
          sum = t;
        }
      }
    }
    return sum;
  }

 private:
  FiberGrid() = default;
  FiberKind kind_ = FiberKind::sphere;
  int N_ = 0;
  double R_ = 1.5;
  double h_ = 0.0;
  Complex tau_{0.0, 1.0};
};

// Real scalar samples at every node of every chart (margin included).
struct FiberField {
  std::vector<std::vector<double>> chart;

  explicit FiberField(const FiberGrid& g)
      : chart(g.chart_count(), std::vector<double>(g.nodes_per_chart(), 0.0)) {}
  FiberField() = default;

  double& at(const FiberGrid& g, int c, int i, int j) { return chart[c][g.index(i, j)]; }
  double at(const FiberGrid& g, int c, int i, int j) const { return chart[c][g.index(i, j)]; }
};

inline FiberField sample_field(const FiberGrid& g,
                               const std::function<double(int, Complex)>& f) {
  FiberField out(g);
  for (int c = 0; c < g.chart_count(); ++c)
    for (int i = 0; i < g.side(); ++i)
      for (int j = 0; j < g.side(); ++j) out.chart[c][g.index(i, j)] = f(c, g.chart_point(i, j));
  return out;
}

inline double fiber_integrate(const FiberGrid& g, const FiberField& f) {
  return g.integrate_samples(f.chart);
}

}  // namespace delq
