#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "delq/curvature.hpp"
#include "delq/family_config.hpp"

using namespace delq;

namespace {

// Independent discretization of the same fiber integrals: composite Simpson
// over the polar angle, trapezoid over the azimuth (see test_pairing.cpp).
double sphere_integral_oracle(const std::function<double(int, Complex)>& density,
                              int n_chi = 2401, int n_theta = 160) {
  const double dchi = convention::pi / (n_chi - 1);
  const double dth = 2.0 * convention::pi / n_theta;
  double acc = 0.0;
  for (int i = 0; i < n_chi; ++i) {
    const double chi = i * dchi;
    double ring = 0.0;
    if (i > 0 && i + 1 < n_chi) {
      const double t = std::tan(0.5 * chi);
      const double jac = t * (1.0 + t * t) / 2.0;
      for (int k = 0; k < n_theta; ++k) {
        const double th = k * dth;
        const Complex z(t * std::cos(th), t * std::sin(th));
        const double f = t <= 1.0 ? density(0, z) : density(1, 1.0 / z) / (t * t * t * t);
        ring += f;
      }
      ring *= jac * dth;
    }
    const double w = (i == 0 || i + 1 == n_chi) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * ring;
  }
  return acc * dchi / 3.0;
}

FamilyConfig bump_config(int N) {
  FamilyConfig cfg;
  cfg.N = N;
  cfg.metric_preset = "fs_bump";
  return cfg;
}

}  // namespace

TEST_CASE("product family: all three curvature routes vanish") {
  auto grid = FiberGrid::sphere(128);
  auto fs = std::make_shared<FsPowerMetric>(1);
  RoundSphereKahler kahler;
  NumericSection s0(1.0, {{Complex(0, 0), 1}}, 1);
  NumericSection s1(1.0, {{Complex(1, 0), 1}}, 1);
  for (Complex s : {Complex(0, 0), Complex(0.2, -0.3)}) {
    CHECK(deligne_curvature_direct(*fs, grid, s) == 0.0);
    CHECK(rr_curvature(*fs, kahler, grid, 3, s) == 0.0);
    CHECK(std::abs(deligne_curvature_from_metric(s0, s1, fs, grid, s, 0.02)) <= 1e-4);
  }
}

TEST_CASE("bump family: direct route against the independent discretization") {
  const FamilyConfig cfg = bump_config(128);
  auto grid = cfg.make_grid();
  auto metric = cfg.make_metric();
  for (Complex s : {Complex(0.0, 0.0), Complex(0.13, -0.07), Complex(-0.3, 0.25)}) {
    const double del = deligne_curvature_direct(*metric, grid, s);
    const double oracle = sphere_integral_oracle([&](int c, Complex z) {
      const double a = metric->phi_zzbar(c, z, s);
      const double e = metric->phi_ssbar(c, z, s);
      const Complex b = metric->phi_zsbar(c, z, s);
      return 2.0 * convention::kC1Density * (a * e - std::norm(b));
    });
    CHECK(std::abs(del - oracle) <= 1e-8);
  }
}

TEST_CASE("bump family: riemann-roch route agrees and is insensitive to m and Kaehler form") {
  const FamilyConfig cfg = bump_config(128);
  auto grid = cfg.make_grid();
  auto metric = cfg.make_metric();
  RoundSphereKahler round;
  PerturbedSphereKahler pert(0.3, RationalBump(1.0, Complex(-0.4, 0.5), 0.9), 1.0);
  for (Complex s : cfg.base_points()) {
    const double del = deligne_curvature_direct(*metric, grid, s);
    const double rr0 = rr_curvature(*metric, round, grid, 0, s);
    CHECK(std::abs(del - rr0) <= 1e-8 * std::max(std::abs(del), 1e-30));
    for (int m : {1, 5, 9})
      CHECK(std::abs(rr_curvature(*metric, round, grid, m, s) - rr0) <= 1e-10);
    CHECK(std::abs(rr_curvature(*metric, pert, grid, 0, s) - rr0) <= 1e-8);
  }
}

TEST_CASE("bump family: finite-difference route") {
  const FamilyConfig cfg = bump_config(128);
  auto grid = cfg.make_grid();
  auto metric = cfg.make_metric();
  const NumericSection s0 = cfg.make_sigma0();
  const NumericSection s1 = cfg.make_sigma1();
  const Complex s(0.13, -0.07);
  const double del = deligne_curvature_direct(*metric, grid, s);

  SECTION("agreement at the finite-difference tolerance") {
    const double fd = deligne_curvature_from_metric(s0, s1, metric, grid, s, 0.02);
    CHECK(std::abs(del - fd) <= 1e-3);
  }
  SECTION("halving the spacing shrinks the error about fourfold") {
    const double e1 = std::abs(deligne_curvature_from_metric(s0, s1, metric, grid, s, 0.04) - del);
    const double e2 = std::abs(deligne_curvature_from_metric(s0, s1, metric, grid, s, 0.02) - del);
    REQUIRE(e2 > 0.0);
    const double ratio = e1 / e2;
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);
  }
}

TEST_CASE("fiber-only conformal change with the mu_hat bookkeeping") {
  const FamilyConfig cfg = bump_config(128);
  auto grid = cfg.make_grid();
  auto metric = cfg.make_metric();
  auto nu = std::make_shared<RationalBump>(0.5, Complex(-0.8, -0.3), 0.6);
  auto shifted = std::make_shared<ConformalShiftMetric>(metric, nu, 1.0);

  // mu_hat(nu; s) is exactly quadratic in |s| for this family, so its mixed
  // second base derivative is the difference quotient below, exactly.
  const Complex s1(0.25, 0.0);
  const double q = (mu_hat(*nu, {metric}, grid, s1) - mu_hat(*nu, {metric}, grid, 0.0)) /
                   std::norm(s1);
  for (Complex s : {Complex(0.0, 0.0), Complex(0.2, -0.1), Complex(-0.35, 0.3)}) {
    const double before = deligne_curvature_direct(*metric, grid, s);
    const double after = deligne_curvature_direct(*shifted, grid, s);
    CHECK(std::abs(after - before - 4.0 * q) <= 2e-8);
  }
}

TEST_CASE("base-change compatibility: shared points give identical values") {
  const FamilyConfig full = bump_config(128);
  FamilyConfig sub = full;
  sub.base_radius = full.base_radius / 2.0;
  sub.base_samples_per_axis = 1;  // just the shared center point
  auto grid = full.make_grid();
  auto metric = full.make_metric();
  RoundSphereKahler kahler;
  const Complex shared = sub.base_points()[0];
  REQUIRE(shared == full.base_points()[4]);  // center of the 3x3 grid
  const double a1 = deligne_curvature_direct(*metric, grid, shared);
  const double a2 = deligne_curvature_direct(*metric, sub.make_grid(), shared);
  CHECK(a1 == a2);  // bitwise
  const double r1 = rr_curvature(*metric, kahler, grid, 0, shared);
  const double r2 = rr_curvature(*metric, kahler, sub.make_grid(), 0, shared);
  CHECK(r1 == r2);
}

TEST_CASE("error paths") {
  const FamilyConfig cfg = bump_config(64);
  auto grid = cfg.make_grid();
  auto metric = cfg.make_metric();
  RoundSphereKahler kahler;
  CHECK_THROWS_AS(rr_curvature(*metric, kahler, grid, -1, 0.0), std::domain_error);
  const NumericSection s0 = cfg.make_sigma0();
  CHECK_THROWS_AS(deligne_curvature_from_metric(s0, s0, metric, grid, 0.0, 0.02),
                  std::invalid_argument);
  CHECK_THROWS_AS(deligne_curvature_from_metric(s0, cfg.make_sigma1(), metric, grid, 0.0, 0.0),
                  std::domain_error);
}

TEST_CASE("family config round trip") {
  const FamilyConfig cfg = FamilyConfig::from_json_file(std::string(TEST_DATA_DIR) + "/bump_n128.json");
  CHECK(cfg.N == 128);
  CHECK(cfg.metric_preset == "fs_bump");
  CHECK(cfg.degree == 1);
  CHECK(cfg.base_points().size() == 9);
  CHECK(cfg.m_values == std::vector<int>{0, 5});
  CHECK_THROWS_AS(FamilyConfig::from_json_file(std::string(TEST_DATA_DIR) + "/broken.json"),
                  ConfigError);
  CHECK_THROWS_AS(FamilyConfig::from_json_file("/nonexistent/nowhere.json"), ConfigError);
}

TEST_CASE("coefficient-table metric from config") {
  const auto j = nlohmann::json::parse(R"({
    "fiber": { "kind": "sphere", "N": 64 },
    "bundle": { "degree": 2, "metric": { "preset": "bump_table", "bumps": [
      { "amp": 0.3, "center": [-0.5, 0.1], "tau": 0.6 },
      { "amp": 0.2, "center": [0.7, -0.4], "tau": 0.9, "s_coupled": true }
    ] } }
  })");
  const FamilyConfig cfg = FamilyConfig::from_json(j);
  auto metric = cfg.make_metric();
  CHECK(metric->degree() == 2);
  CHECK(metric->analytic_hooks());
  CHECK(metric->phi_ssbar(0, Complex(0.7, -0.4), 0.0) > 0.0);  // the coupled entry

  nlohmann::json empty = j;
  empty["bundle"]["metric"].erase("bumps");
  CHECK_THROWS_AS(FamilyConfig::from_json(empty).make_metric(), ConfigError);
}
