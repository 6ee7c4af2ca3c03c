#pragma once

#include <complex>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "delq/curvature.hpp"
#include "delq/fiber_grid.hpp"
#include "delq/metric.hpp"
#include "delq/section.hpp"

namespace delq {

// Declarative description of a one-parameter family of curves with a metrized
// line bundle: fiber kind and grid resolution, bundle degree and metric
// expression, relative Kaehler choice, base sampling, sections for the
// pairing, and the tolerances the comparison is judged against.
struct FamilyConfig {
  std::string name = "family";

  FiberKind fiber_kind = FiberKind::sphere;
  int N = 512;
  double R = 1.5;
  Complex tau{0.0, 1.0};

  int degree = 1;
  std::string metric_preset = "fs";  // "fs" | "fs_bump" | "bump_table" | "flat"
  double bump_amp = 0.4;
  Complex bump_center{0.3, 0.2};
  double bump_tau = 0.8;
  struct BumpEntry {
    double amp;
    Complex center;
    double tau;
    bool s_coupled;
  };
  std::vector<BumpEntry> bump_table;

  std::string kahler_preset = "round";  // "round" | "perturbed" | "flat"
  double kahler_eps = 0.3;
  Complex kahler_center{-0.4, 0.5};
  double kahler_tau = 0.9;

  double base_radius = 0.4;
  int base_samples_per_axis = 3;
  double fd_spacing = 0.02;

  Complex sigma0_lead{1.0, 0.0};
  std::vector<std::pair<Complex, int>> sigma0_factors{{Complex(0.0, 0.0), 1}};
  Complex sigma1_lead{1.0, 0.0};
  std::vector<std::pair<Complex, int>> sigma1_factors{{Complex(1.0, 0.0), 1}};

  std::vector<int> m_values{0, 5};

  double tol_fiber = 1e-8;
  double tol_del_rr_rel = 1e-8;
  double tol_del_fd = 1e-3;
  double tol_rr_m = 1e-10;
  double tol_kahler = 1e-8;

  FiberGrid make_grid() const {
    return fiber_kind == FiberKind::sphere ? FiberGrid::sphere(N, R) : FiberGrid::torus(tau, N);
  }

  MetricPtr make_metric() const {
    if (metric_preset == "fs") return std::make_shared<FsPowerMetric>(degree);
    if (metric_preset == "fs_bump")
      return std::make_shared<BumpFamilyMetric>(degree,
                                                RationalBump(bump_amp, bump_center, bump_tau));
    if (metric_preset == "bump_table") {
      std::vector<BumpTableMetric::Entry> entries;
      for (const auto& e : bump_table)
        entries.push_back({RationalBump(e.amp, e.center, e.tau), e.s_coupled});
      if (entries.empty()) throw ConfigError("bump_table metric needs at least one entry");
      return std::make_shared<BumpTableMetric>(degree, std::move(entries));
    }
    if (metric_preset == "flat") return std::make_shared<FlatTorusMetric>();
    throw ConfigError("unknown metric preset '" + metric_preset + "'");
  }

  std::shared_ptr<const KahlerModel> make_kahler() const { return make_kahler(kahler_preset); }

  std::shared_ptr<const KahlerModel> make_kahler(const std::string& preset) const {
    if (preset == "round") return std::make_shared<RoundSphereKahler>();
    if (preset == "perturbed")
      return std::make_shared<PerturbedSphereKahler>(
          kahler_eps, RationalBump(1.0, kahler_center, kahler_tau), 1.0);
    if (preset == "flat") return std::make_shared<FlatTorusKahler>();
    throw ConfigError("unknown kahler preset '" + preset + "'");
  }

  NumericSection make_sigma0() const {
    return NumericSection(sigma0_lead, sigma0_factors, degree);
  }
  NumericSection make_sigma1() const {
    return NumericSection(sigma1_lead, sigma1_factors, degree);
  }

  // Symmetric square grid of base sample points over [-r, r]^2.
  std::vector<Complex> base_points() const {
    std::vector<Complex> pts;
    const int k = base_samples_per_axis;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const double u = k == 1 ? 0.0 : -base_radius + 2.0 * base_radius * i / (k - 1);
        const double v = k == 1 ? 0.0 : -base_radius + 2.0 * base_radius * j / (k - 1);
        pts.emplace_back(u, v);
      }
    return pts;
  }

  static FamilyConfig from_json(const nlohmann::json& j);
  static FamilyConfig from_json_file(const std::string& path);
};

inline Complex complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError("expected number or [re, im] pair");
}

inline FamilyConfig FamilyConfig::from_json(const nlohmann::json& j) {
  FamilyConfig c;
  if (j.contains("name")) c.name = j.at("name").get<std::string>();
  if (j.contains("fiber")) {
    const auto& f = j.at("fiber");
    if (f.contains("kind")) {
      const std::string k = f.at("kind").get<std::string>();
      if (k == "sphere")
        c.fiber_kind = FiberKind::sphere;
      else if (k == "torus")
        c.fiber_kind = FiberKind::torus;
      else
        throw ConfigError("fiber.kind must be 'sphere' or 'torus'");
    }
    if (f.contains("N")) c.N = f.at("N").get<int>();
    if (f.contains("R")) c.R = f.at("R").get<double>();
    if (f.contains("tau")) c.tau = complex_from_json(f.at("tau"));
  }
  if (j.contains("bundle")) {
    const auto& b = j.at("bundle");
    if (b.contains("degree")) c.degree = b.at("degree").get<int>();
    if (b.contains("metric")) {
      const auto& m = b.at("metric");
      if (m.contains("preset")) c.metric_preset = m.at("preset").get<std::string>();
      if (m.contains("amp")) c.bump_amp = m.at("amp").get<double>();
      if (m.contains("center")) c.bump_center = complex_from_json(m.at("center"));
      if (m.contains("tau")) c.bump_tau = m.at("tau").get<double>();
      if (m.contains("bumps")) {
        for (const auto& e : m.at("bumps"))
          c.bump_table.push_back({e.at("amp").get<double>(), complex_from_json(e.at("center")),
                                  e.at("tau").get<double>(),
                                  e.value("s_coupled", false)});
      }
    }
  }
  if (j.contains("kahler")) {
    const auto& k = j.at("kahler");
    if (k.contains("preset")) c.kahler_preset = k.at("preset").get<std::string>();
    if (k.contains("eps")) c.kahler_eps = k.at("eps").get<double>();
    if (k.contains("center")) c.kahler_center = complex_from_json(k.at("center"));
    if (k.contains("tau")) c.kahler_tau = k.at("tau").get<double>();
  }
  if (j.contains("base")) {
    const auto& b = j.at("base");
    if (b.contains("radius")) c.base_radius = b.at("radius").get<double>();
    if (b.contains("samples_per_axis")) c.base_samples_per_axis = b.at("samples_per_axis").get<int>();
    if (b.contains("fd_spacing")) c.fd_spacing = b.at("fd_spacing").get<double>();
  }
  auto parse_section = [](const nlohmann::json& s, Complex& lead,
                          std::vector<std::pair<Complex, int>>& factors) {
    if (s.contains("lead")) lead = complex_from_json(s.at("lead"));
    if (s.contains("factors")) {
      factors.clear();
      for (const auto& f : s.at("factors"))
        factors.emplace_back(complex_from_json(f.at("root")), f.at("exponent").get<int>());
    }
  };
  if (j.contains("sections")) {
    const auto& s = j.at("sections");
    if (s.contains("sigma0")) parse_section(s.at("sigma0"), c.sigma0_lead, c.sigma0_factors);
    if (s.contains("sigma1")) parse_section(s.at("sigma1"), c.sigma1_lead, c.sigma1_factors);
  }
  if (j.contains("rr") && j.at("rr").contains("m_values"))
    c.m_values = j.at("rr").at("m_values").get<std::vector<int>>();
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (t.contains("fiber")) c.tol_fiber = t.at("fiber").get<double>();
    if (t.contains("del_rr_rel")) c.tol_del_rr_rel = t.at("del_rr_rel").get<double>();
    if (t.contains("del_fd")) c.tol_del_fd = t.at("del_fd").get<double>();
    if (t.contains("rr_m")) c.tol_rr_m = t.at("rr_m").get<double>();
    if (t.contains("kahler")) c.tol_kahler = t.at("kahler").get<double>();
  }
  if (c.base_samples_per_axis < 1) throw ConfigError("base.samples_per_axis must be >= 1");
  if (c.fd_spacing <= 0.0) throw ConfigError("base.fd_spacing must be > 0");
  return c;
}

inline FamilyConfig FamilyConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset -> line number for the error report
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw ConfigError("parse error in '" + path + "' at line " + std::to_string(line) + ": " +
                      e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid config '" + path + "': " + e.what());
  }
}

}  // namespace delq
