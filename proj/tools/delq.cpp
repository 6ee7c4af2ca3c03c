// delq: batch front-end for the symbolic sweeps, the curvature comparison on
// configured families, and the exact Weil reciprocity trials.
//
// Exit codes: 0 pass, 1 usage/config error, 2 assertion failure, 3 numerical
// failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "delq/family_config.hpp"
#include "delq/ktheory.hpp"
#include "delq/pairing.hpp"
#include "delq/report.hpp"
#include "delq/weil.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAssert = 2;
constexpr int kExitNumerical = 3;

struct Range {
  int lo = 0;
  int hi = 0;
};

Range parse_range(const std::string& text) {
  const auto pos = text.find("..");
  try {
    if (pos == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    Range r{std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 2))};
    if (r.hi < r.lo) throw std::invalid_argument("empty range");
    return r;
  } catch (const std::exception&) {
    throw CLI::ValidationError("range", "expected A..B with integers A <= B, got '" + text + "'");
  }
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

// --- symbolic ---------------------------------------------------------------

int run_symbolic(const Range& nr, const Range& mr, bool negative_control,
                 const std::string& out_dir, bool timestamp) {
  using namespace delq;
  if (nr.lo < 1) {
    std::cerr << "delq symbolic: n must be >= 1 (relative dimension of the sweep)\n";
    return kExitUsage;
  }
  bool all_pass = true;
  ordered_json rows = ordered_json::array();
  std::map<int, bool> multilinear_ok;
  for (int n = nr.lo; n <= nr.hi; ++n) {
    if (!multilinear_ok.count(n)) {
      auto rep = multilinear_lowest_term(n);
      multilinear_ok[n] = rep.equals_monomial && rep.lower_parts_vanish;
    }
    for (int m = mr.lo; m <= mr.hi; ++m) {
      const RrIntegrand rr = rr_integrand(n, m);
      bool rr_lower_vanish = true;
      for (const auto& [e, c] : rr.product.terms())
        if (GradedClass::total_degree(e) <= n) rr_lower_vanish = false;

      const GradedClass ch = chern_character_single(virtual_power_expand(n, m), n + 2);
      int lowest_degree = -1;
      Rational lowest_coeff = 0;
      for (const auto& [e, c] : ch.terms()) {
        const int d = GradedClass::total_degree(e);
        if (lowest_degree < 0 || d < lowest_degree) {
          lowest_degree = d;
          lowest_coeff = c;
        }
      }
      const AnomalyReport an = anomaly_vanishing_check(n, m);
      const bool pass = rr.top_coefficient == 1 && rr_lower_vanish && lowest_degree == n + 1 &&
                        lowest_coeff == 1 && an.vanishes && multilinear_ok[n];
      all_pass = all_pass && pass;
      rows.push_back({{"n", n},
                      {"m", m},
                      {"rr_coefficient", to_string(rr.top_coefficient)},
                      {"rr_lower_degrees_vanish", rr_lower_vanish},
                      {"ch_lowest_degree", lowest_degree},
                      {"ch_lowest_coefficient", to_string(lowest_coeff)},
                      {"anomaly_vanishes", an.vanishes},
                      {"multilinear_ok", multilinear_ok[n]},
                      {"pass", pass}});
    }
  }

  ordered_json controls = ordered_json::array();
  if (negative_control) {
    for (int n = nr.lo; n <= nr.hi; ++n) {
      for (int m : {mr.lo, mr.hi}) {
        // (L-O)^{n} L^m: the vanishing must break at degree n
        VirtualBundle weak =
            tensor(VirtualBundle::line_minus_structure({"L"}, 0).tensor_power(n),
                   VirtualBundle::line({"L"}, 0).tensor_power(m));
        const AnomalyReport a = anomaly_check_for(weak, n);
        // L^m alone: already fails in degree 0 (rank 1)
        const AnomalyReport b = anomaly_check_for(VirtualBundle::line({"L"}, 0).tensor_power(m), n);
        const bool ok = !a.vanishes && !b.vanishes;
        all_pass = all_pass && ok;
        controls.push_back({{"n", n},
                            {"m", m},
                            {"control", "(L-O)^n L^m"},
                            {"expected_fail", true},
                            {"observed_fail", !a.vanishes},
                            {"pass", !a.vanishes}});
        controls.push_back({{"n", n},
                            {"m", m},
                            {"control", "L^m"},
                            {"expected_fail", true},
                            {"observed_fail", !b.vanishes},
                            {"pass", !b.vanishes}});
      }
    }
  }

  ordered_json out;
  out["command"] = "symbolic";
  if (timestamp) out["generated_at"] = delq::iso_timestamp();
  out["n_range"] = {nr.lo, nr.hi};
  out["m_range"] = {mr.lo, mr.hi};
  out["rows"] = rows;
  if (negative_control) out["negative_controls"] = controls;
  out["pass"] = all_pass;
  write_json(std::filesystem::path(out_dir) / "symbolic.json", out);
  std::cout << (all_pass ? "symbolic: PASS" : "symbolic: FAIL") << " ("
            << rows.size() << " cases)\n";
  return all_pass ? kExitPass : kExitAssert;
}

// --- curvature ---------------------------------------------------------------

int run_curvature(const std::string& config_path, const std::string& out_dir, bool timestamp) {
  using namespace delq;
  const FamilyConfig cfg = FamilyConfig::from_json_file(config_path);
  const FiberGrid grid = cfg.make_grid();
  const MetricPtr metric = cfg.make_metric();
  const auto base = cfg.base_points();

  ordered_json checks = ordered_json::array();
  bool all_pass = true;
  auto record = [&](const std::string& what, double value, double tol, bool pass) {
    checks.push_back({{"check", what}, {"value", value}, {"tolerance", tol}, {"pass", pass}});
    all_pass = all_pass && pass;
  };

  // Admissibility of the discretization and the sampled metric.
  if (grid.kind() == FiberKind::sphere) {
    double worst_pou = 0.0;
    for (int k = 1; k < 64; ++k) {
      const double t = 1.0 / grid.chart_radius() +
                       k * (grid.chart_radius() - 1.0 / grid.chart_radius()) / 64.0;
      worst_pou = std::max(worst_pou,
                           std::abs(grid.partition_weight(t) + grid.partition_weight(1.0 / t) - 1.0));
    }
    record("partition_of_unity", worst_pou, 1e-12, worst_pou <= 1e-12);

    SampledMetric sm = sample_metric(metric, grid, {base.front()});
    const double chart_res = chart_compatibility_residual(sm);
    record("chart_compatibility", chart_res, 1e-8, chart_res <= 1e-8);
  }
  double worst_degree = 0.0;
  for (Complex s : base)
    worst_degree = std::max(worst_degree,
                            std::abs(fiber_c1_integral(*metric, grid, s) - cfg.degree));
  record("degree_quantization", worst_degree, cfg.tol_fiber, worst_degree <= cfg.tol_fiber);

  if (!all_pass) {
    ordered_json out;
    out["command"] = "curvature";
    if (timestamp) out["generated_at"] = iso_timestamp();
    out["config"] = cfg.name;
    out["checks"] = checks;
    out["pass"] = false;
    write_json(std::filesystem::path(out_dir) / "curvature_summary.json", out);
    std::cout << "curvature: FAIL (discretization checks; see curvature_summary.json)\n";
    return kExitAssert;
  }

  // The three curvature routes per base sample.
  const NumericSection s0 = cfg.make_sigma0();
  const NumericSection s1 = cfg.make_sigma1();
  const auto kahler = cfg.make_kahler();
  const int m0 = cfg.m_values.empty() ? 0 : cfg.m_values.front();

  std::vector<CurvatureRow> rows;
  double max_del_rr_rel = 0.0, max_del_fd = 0.0;
  for (Complex s : base) {
    CurvatureRow row;
    row.s = s;
    row.del = deligne_curvature_direct(*metric, grid, s);
    row.rr = rr_curvature(*metric, *kahler, grid, m0, s);
    row.fd = grid.kind() == FiberKind::sphere
                 ? deligne_curvature_from_metric(s0, s1, metric, grid, s, cfg.fd_spacing)
                 : 0.0;
    const double scale = std::max(std::abs(row.del), 1e-30);
    max_del_rr_rel = std::max(max_del_rr_rel, std::abs(row.del - row.rr) / scale);
    max_del_fd = std::max(max_del_fd, std::abs(row.del - row.fd));
    rows.push_back(row);
  }
  record("max_rel_del_vs_rr", max_del_rr_rel, cfg.tol_del_rr_rel,
         max_del_rr_rel <= cfg.tol_del_rr_rel);
  record("max_abs_del_vs_fd", max_del_fd, cfg.tol_del_fd, max_del_fd <= cfg.tol_del_fd);

  // Twist-independence and Kaehler-independence probes of the rr route.
  if (cfg.m_values.size() >= 2) {
    double worst = 0.0;
    for (Complex s : base) {
      const double r0 = rr_curvature(*metric, *kahler, grid, cfg.m_values[0], s);
      for (std::size_t i = 1; i < cfg.m_values.size(); ++i)
        worst = std::max(worst,
                         std::abs(rr_curvature(*metric, *kahler, grid, cfg.m_values[i], s) - r0));
    }
    record("rr_twist_independence", worst, cfg.tol_rr_m, worst <= cfg.tol_rr_m);
  }
  if (grid.kind() == FiberKind::sphere) {
    const auto other = cfg.make_kahler(cfg.kahler_preset == "round" ? "perturbed" : "round");
    double worst = 0.0;
    for (Complex s : base)
      worst = std::max(worst, std::abs(rr_curvature(*metric, *other, grid, m0, s) -
                                       rr_curvature(*metric, *kahler, grid, m0, s)));
    record("rr_kahler_independence", worst, cfg.tol_kahler, worst <= cfg.tol_kahler);
  }

  write_curvature_csv((std::filesystem::path(out_dir) / "curvature.csv").string(), rows);
  ordered_json out;
  out["command"] = "curvature";
  if (timestamp) out["generated_at"] = iso_timestamp();
  out["config"] = cfg.name;
  out["base_samples"] = rows.size();
  out["checks"] = checks;
  out["pass"] = all_pass;
  write_json(std::filesystem::path(out_dir) / "curvature_summary.json", out);
  std::cout << (all_pass ? "curvature: PASS" : "curvature: FAIL") << " (" << rows.size()
            << " base samples; max |del-rr|_rel = " << fmt17(max_del_rr_rel)
            << ", max |del-fd| = " << fmt17(max_del_fd) << ")\n";
  return all_pass ? kExitPass : kExitAssert;
}

// --- reciprocity --------------------------------------------------------------

int run_reciprocity(std::uint64_t seed, int trials, const std::string& out_dir, bool timestamp) {
  using namespace delq;
  RationalFunctionSampler sampler(seed);
  ordered_json rows = ordered_json::array();
  bool all_pass = true;
  double worst_float = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto [f, g] = sampler.pair();
    const auto exact = weil_reciprocity_check(f, g);
    const auto approx = weil_reciprocity_check(to_numeric(f), to_numeric(g));
    worst_float = std::max(worst_float, approx.residual);
    const bool pass = exact.exact_equal && approx.residual < 1e-10;
    all_pass = all_pass && pass;
    rows.push_back({{"trial", t},
                    {"f", f.str()},
                    {"g", g.str()},
                    {"exact_zero", exact.exact_equal},
                    {"float_residual", approx.residual},
                    {"pass", pass}});
  }
  ordered_json out;
  out["command"] = "reciprocity";
  if (timestamp) out["generated_at"] = iso_timestamp();
  out["seed"] = seed;
  out["trials"] = trials;
  out["max_float_residual"] = worst_float;
  out["rows"] = rows;
  out["pass"] = all_pass;
  write_json(std::filesystem::path(out_dir) / "reciprocity.json", out);
  std::cout << (all_pass ? "reciprocity: PASS" : "reciprocity: FAIL") << " (" << trials
            << " trials, max float residual " << fmt17(worst_float) << ")\n";
  return all_pass ? kExitPass : kExitAssert;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deligne pairing metrics and determinant-line curvature checks"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  bool no_timestamp = false;
  app.add_option("--out", out_dir, "output directory for reports");
  app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp field from reports");

  auto* sym = app.add_subcommand("symbolic", "exact characteristic-class sweeps");
  std::string n_range = "1..6", m_range = "0..10";
  bool negative_control = false;
  sym->add_option("--n-range", n_range, "relative dimensions A..B");
  sym->add_option("--m-range", m_range, "twists A..B");
  sym->add_flag("--negative-control", negative_control, "also run expected-fail controls");

  auto* curv = app.add_subcommand("curvature", "three-way curvature comparison on a family");
  std::string config_path;
  curv->add_option("--config", config_path, "family config (JSON)")->required();

  auto* rec = app.add_subcommand("reciprocity", "exact Weil reciprocity trials");
  std::uint64_t seed = 1;
  int trials = 100;
  rec->add_option("--seed", seed, "random seed");
  rec->add_option("--trials", trials, "number of random pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    std::filesystem::create_directories(out_dir);
    if (sym->parsed())
      return run_symbolic(parse_range(n_range), parse_range(m_range), negative_control, out_dir,
                          !no_timestamp);
    if (curv->parsed()) return run_curvature(config_path, out_dir, !no_timestamp);
    if (rec->parsed()) {
      if (trials < 1) {
        std::cerr << "delq reciprocity: --trials must be >= 1\n";
        return kExitUsage;
      }
      return run_reciprocity(seed, trials, out_dir, !no_timestamp);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "delq: " << e.what() << "\n";
    return kExitUsage;
  } catch (const delq::ConfigError& e) {
    std::cerr << "delq: " << e.what() << "\n";
    return kExitUsage;
  } catch (const delq::NumericalError& e) {
    std::cerr << "delq: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "delq: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "delq: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
