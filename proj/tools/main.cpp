// spdc-sim: photon-pair generation under pumps of tunable spatial coherence.
//
// Subcommands:
//   simulate  joint momentum/position distributions + rotated sections (CSV)
//   figure    slit-scan and raster reproductions (--which fig2|fig3|fig4)
//   report    x_-/q_+ measurement, uncertainty product and verdict (JSON)
//   sweep     coherence sweep of the uncertainty product (CSV)

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>

#include "spdc/analysis.hpp"
#include "spdc/csv.hpp"
#include "spdc/errors.hpp"
#include "spdc/moments.hpp"
#include "spdc/pipeline.hpp"
#include "spdc/rng.hpp"
#include "spdc/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

spdc::RunConfig resolve_config(const CommonOptions& opts) {
  spdc::RunConfig config = opts.config_path.empty()
                               ? spdc::RunConfig{}
                               : spdc::load_config(opts.config_path);
  if (opts.seed) config.pump.seed = *opts.seed;
  if (!opts.out_dir.empty()) config.output.dir = opts.out_dir;
  config.validate();
  return config;
}

fs::path ensure_out_dir(const spdc::RunConfig& config) {
  fs::path dir(config.output.dir);
  fs::create_directories(dir);
  return dir;
}

void log(const CommonOptions& opts, const std::string& line) {
  if (!opts.quiet) std::cout << line << "\n";
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const CommonOptions& opts) {
  const auto config = resolve_config(opts);
  const auto dir = ensure_out_dir(config);
  auto [momentum, position] = spdc::build_distributions(config);

  const auto grid = config.make_grid();
  log(opts, "grid: n=" + std::to_string(grid.size()) +
                " dx=" + std::to_string(grid.dx()) +
                " m, dq=" + std::to_string(grid.dq()) +
                " rad/m, extent=" + std::to_string(grid.extent()) + " m");
  log(opts, "pump: model=" + config.pump.model +
                " seed=" + std::to_string(config.pump.seed));
  const double mass_q = momentum.total_mass();
  const double mass_x = position.total_mass();
  log(opts, "mass: momentum=" + std::to_string(mass_q) +
                " position=" + std::to_string(mass_x) +
                " rel_diff=" + std::to_string((mass_q - mass_x) /
                                              std::max(mass_q, mass_x)));

  if (config.output.csv) {
    spdc::write_distribution_csv((dir / "momentum.csv").string(), momentum);
    spdc::write_distribution_csv((dir / "position.csv").string(), position);
    for (const auto* d : {"momentum", "position"}) {
      const auto& dist = std::string(d) == "momentum" ? momentum : position;
      const auto sections = spdc::sections_rotated(dist);
      spdc::SectionsCsv csv;
      csv.domain = d;
      csv.axis = sections.axis;
      csv.plus = sections.plus;
      csv.minus = sections.minus;
      spdc::write_sections_csv((dir / ("sections_" + std::string(d) + ".csv")).string(), csv);
    }
    log(opts, "wrote " + (dir / "momentum.csv").string() + " and siblings");
  }
  return 0;
}

// ------------------------------------------------------------------ report

json report_to_json(const spdc::RunConfig& config, const spdc::Measurement& m) {
  json j;
  j["var_x_minus_m2"] = m.var_x_minus;
  j["var_p_plus_hbar2_m-2"] = m.var_p_plus;
  j["product_hbar2"] = m.report.product;
  if (std::isfinite(m.report.product_error)) {
    j["product_error_hbar2"] = m.report.product_error;
    j["err_var_x_minus"] = m.err_var_x;
    j["err_var_p_plus"] = m.err_var_p;
  } else {
    j["product_error_hbar2"] = "unavailable (repeats < 2)";
  }
  j["bound_hbar2"] = m.report.bound;
  j["significance_k"] = m.report.significance_k;
  j["verdict"] = spdc::to_string(m.report.verdict);
  j["repeats"] = config.scan.repeats;
  json fits = json::array();
  for (std::size_t r = 0; r < m.fits_x_minus.size(); ++r) {
    fits.push_back({{"sigma_x_minus", m.fits_x_minus[r].sigma},
                    {"sigma_q_plus", m.fits_q_plus[r].sigma},
                    {"product", m.products[r]},
                    {"chisq_red_x", m.fits_x_minus[r].reduced_chisq},
                    {"chisq_red_q", m.fits_q_plus[r].reduced_chisq}});
  }
  j["per_repeat"] = fits;
  j["scan"] = {{"range_position", m.range_position},
               {"step_position", m.step_position},
               {"range_momentum", m.range_momentum},
               {"step_momentum", m.step_momentum},
               {"rate_constant_position", m.rate_constant_position},
               {"rate_constant_momentum", m.rate_constant_momentum}};
  return j;
}

int cmd_report(const CommonOptions& opts) {
  const auto config = resolve_config(opts);
  const auto dir = ensure_out_dir(config);
  const auto m = spdc::run_measurements(config);
  const json j = report_to_json(config, m);
  std::ofstream out(dir / "report.json");
  out << j.dump(2) << "\n";
  log(opts, "Dx-^2 = " + std::to_string(m.var_x_minus) + " m^2");
  log(opts, "Dp+^2 = " + std::to_string(m.var_p_plus) + " hbar^2/m^2");
  std::cout << "product = " << m.report.product << " hbar^2 ("
            << spdc::to_string(m.report.verdict) << ", bound 0.25)\n";
  if (!std::isfinite(m.report.product_error)) {
    log(opts, "error bars unavailable (repeats < 2)");
  }
  log(opts, "wrote " + (dir / "report.json").string());
  return 0;
}

// ------------------------------------------------------------------- sweep

int cmd_sweep(const CommonOptions& opts) {
  const auto config = resolve_config(opts);
  const auto dir = ensure_out_dir(config);
  const auto sweep = spdc::coherence_sweep(config, config.sweep.phi_0);
  spdc::write_sweep_csv((dir / "sweep.csv").string(), sweep);
  for (const auto& row : sweep.rows) {
    if (!row.ok) {
      std::cout << "w/l_c=" << row.w_over_lc << "  FAILED: " << row.error << "\n";
      continue;
    }
    std::cout << "w/l_c=" << row.w_over_lc << "  Dx-^2=" << row.var_x_minus
              << "  Dp+^2=" << row.var_p_plus << "  product=" << row.product
              << " hbar^2\n";
  }
  std::cout << "slope of Dp+^2 vs (w/l_c)^2: " << sweep.slope
            << " (prediction 1/(2 w^2) = "
            << 1.0 / (2.0 * config.pump.w * config.pump.w) << ")\n";
  if (sweep.crossing_found) {
    std::cout << "product crosses 0.25 hbar^2 at w/l_c = "
              << sweep.crossing_w_over_lc << " +- " << sweep.crossing_error
              << "\n";
  }
  log(opts, "wrote " + (dir / "sweep.csv").string());
  return 0;
}

// ------------------------------------------------------------------ figure

spdc::RunConfig incoherent_variant(const spdc::RunConfig& base) {
  spdc::RunConfig c = base;
  c.pump.model = "gaussian_schell";
  c.pump.l_c = c.pump.w / 20.0;
  c.grid.dx = std::min(c.grid.dx, c.pump.l_c / 4.5);
  // keep the extent large enough for the pump profile at the finer spacing
  const double needed = 8.5 * c.pump.w;
  while (static_cast<double>(c.grid.n) * c.grid.dx < needed) c.grid.n *= 2;
  c.optics.f3 = 50e-3;  // shorter lens for the broad momentum distribution
  c.validate();
  return c;
}

void render_scan_panel(const fs::path& csv_path, const fs::path& svg_path,
                       const std::string& title, const std::string& x_label) {
  const auto scan = spdc::read_scan_csv(csv_path.string());
  const auto mode = spdc::scan_mode_from_string(scan.mode);
  spdc::Series coinc, singles;
  coinc.label = "coincidences";
  coinc.color = "#a01a1a";
  singles.label = "singles (signal arm)";
  singles.color = "#999999";
  singles.secondary_axis = true;
  for (const auto& r : scan.records) {
    spdc::CoincidenceRecord rec = r;
    const double u = spdc::rotated_coordinate(rec, mode);
    coinc.x.push_back(u);
    coinc.y.push_back(static_cast<double>(r.coincidences));
    singles.x.push_back(u);
    singles.y.push_back(static_cast<double>(r.singles_s));
  }
  spdc::LinePlot plot;
  plot.title = title;
  plot.x_label = x_label;
  plot.y_label = "coincidences per dwell";
  plot.y2_label = "singles per dwell";
  plot.series = {singles, coinc};
  plot.render(svg_path.string());
}

int figure_scans(const CommonOptions& opts, const spdc::RunConfig& config) {
  const auto dir = ensure_out_dir(config);
  struct Panel {
    std::string name;
    spdc::RunConfig config;
  };
  const std::vector<Panel> variants = {
      {"coherent", config}, {"incoherent", incoherent_variant(config)}};
  for (const auto& v : variants) {
    const auto m = spdc::run_measurements(v.config);
    spdc::ScanCsv scan;
    scan.mode = to_string(spdc::ScanMode::AntiDiagonal);
    scan.seed = v.config.pump.seed;
    scan.records = m.scans_position.front();
    const auto csv_x = dir / ("fig2_" + v.name + "_xminus.csv");
    spdc::write_scan_csv(csv_x.string(), scan);

    scan.mode = to_string(spdc::ScanMode::Diagonal);
    scan.records = m.scans_momentum.front();
    const auto csv_q = dir / ("fig2_" + v.name + "_pplus.csv");
    spdc::write_scan_csv(csv_q.string(), scan);

    if (v.config.output.svg) {
      render_scan_panel(csv_x, dir / ("fig2_" + v.name + "_xminus.svg"),
                        v.name + " pump, near field", "x_- [m]");
      render_scan_panel(csv_q, dir / ("fig2_" + v.name + "_pplus.svg"),
                        v.name + " pump, far field", "q_+ [rad/m]");
    }
    log(opts, "wrote " + csv_x.string() + " / " + csv_q.string());
  }
  return 0;
}

int figure_rasters(const CommonOptions& opts, const spdc::RunConfig& config) {
  const auto dir = ensure_out_dir(config);
  struct Panel {
    std::string name;
    spdc::RunConfig config;
  };
  const std::vector<Panel> variants = {
      {"coherent", config}, {"incoherent", incoherent_variant(config)}};
  constexpr std::size_t kRasterPoints = 25;  // 25 x 25 grid
  constexpr double kMaskThreshold = 1e-3;

  for (const auto& v : variants) {
    auto [momentum, position] = spdc::build_distributions(v.config);
    const spdc::Imaging4f imaging = v.config.imaging_system();
    const spdc::FourierLens fourier = v.config.fourier_system();
    const double k_det = 2.0 * std::numbers::pi / v.config.crystal.lambda_s;

    struct Raster {
      std::string name;
      const spdc::JointDistribution* dist;
      spdc::OpticalSystem system;
      double d_range;
    };
    // 3.5 sigma of the per-arm marginal, mapped back to slit offsets.
    const auto marg_x = position.marginal_signal();
    const auto marg_q = momentum.marginal_signal();
    std::vector<double> xs(position.grid().size()), qs(momentum.grid().size());
    for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = position.coord(j);
    for (std::size_t j = 0; j < qs.size(); ++j) qs[j] = momentum.coord(j);
    const double sx = std::sqrt(spdc::variance_of(xs, marg_x));
    const double sq = std::sqrt(spdc::variance_of(qs, marg_q));
    const std::vector<Raster> rasters = {
        {"position", &position, spdc::OpticalSystem{imaging},
         3.5 * sx * imaging.magnification()},
        {"momentum", &momentum, spdc::OpticalSystem{fourier},
         3.5 * sq * fourier.f3 / k_det}};

    for (const auto& raster : rasters) {
      const double step =
          2.0 * raster.d_range / static_cast<double>(kRasterPoints - 1);
      // Mask cells expecting nearly no counts, as in unmeasured regions.
      const auto full = spdc::scan_schedule(spdc::ScanMode::Raster,
                                            raster.d_range, step);
      const double peak = spdc::peak_window_integral(
          *raster.dist, raster.system, v.config.scan.slit_width, full);
      auto mask = [&](double d_s, double d_i) {
        return spdc::expected_rate(*raster.dist, raster.system, d_s, d_i,
                                   v.config.scan.slit_width, 1.0) >=
               kMaskThreshold * peak;
      };
      const auto schedule = spdc::scan_schedule(spdc::ScanMode::Raster,
                                                raster.d_range, step, mask);
      spdc::SlitScanConfig sc;
      sc.slit_width = v.config.scan.slit_width;
      sc.dwell_time = v.config.scan.dwell;
      sc.mode = spdc::ScanMode::Raster;
      sc.positions = schedule;
      sc.rate_constant = 5.0 / peak;
      sc.singles_rate_constant = sc.rate_constant * 60.0;
      sc.seed = spdc::derive_seed(v.config.pump.seed, 3,
                                  raster.name == "position" ? 0 : 1);
      const auto records = spdc::simulate_scan(*raster.dist, raster.system, sc);

      spdc::ScanCsv scan;
      scan.mode = to_string(spdc::ScanMode::Raster);
      scan.seed = sc.seed;
      scan.records = records;
      const auto csv_path = dir / ("fig3_" + v.name + "_" + raster.name + ".csv");
      spdc::write_scan_csv(csv_path.string(), scan);

      if (v.config.output.svg) {
        // Rebuild the full raster grid; masked cells stay NaN.
        spdc::HeatMap map;
        map.title = v.name + " pump, joint " + raster.name + " distribution";
        map.x_label = "signal slit offset d_s [m]";
        map.y_label = "idler slit offset d_i [m]";
        for (std::size_t a = 0; a < kRasterPoints; ++a) {
          map.x.push_back(-raster.d_range + static_cast<double>(a) * step);
        }
        map.y = map.x;
        map.values.assign(kRasterPoints * kRasterPoints,
                          std::numeric_limits<double>::quiet_NaN());
        auto index_of = [&](double d) {
          return static_cast<std::size_t>(
              std::llround((d + raster.d_range) / step));
        };
        for (const auto& r : records) {
          map.values[index_of(r.d_i) * kRasterPoints + index_of(r.d_s)] =
              static_cast<double>(r.coincidences);
        }
        map.render((dir / ("fig3_" + v.name + "_" + raster.name + ".svg")).string());
      }
      log(opts, "wrote " + csv_path.string());
    }
  }
  return 0;
}

int figure_sweep(const CommonOptions& opts, const spdc::RunConfig& config) {
  const auto dir = ensure_out_dir(config);
  const auto sweep = spdc::coherence_sweep(config, config.sweep.phi_0);
  const auto csv_path = dir / "fig4_sweep.csv";
  spdc::write_sweep_csv(csv_path.string(), sweep);

  if (config.output.svg) {
    const auto rows = spdc::read_sweep_csv(csv_path.string());
    spdc::Series vx, vp, prod;
    vx.label = "Dx-^2 [m^2]";
    vx.color = "#1a7a2a";
    vx.secondary_axis = true;
    vp.label = "Dp+^2 [hbar^2/m^2]";
    vp.color = "#5b2a86";
    prod.label = "Dx-^2 Dp+^2 [hbar^2]";
    prod.color = "#a01a1a";
    for (const auto& row : rows) {
      vx.x.push_back(row.w_over_lc);
      vx.y.push_back(row.var_x_minus);
      vp.x.push_back(row.w_over_lc);
      vp.y.push_back(row.var_p_plus);
      prod.x.push_back(row.w_over_lc);
      prod.y.push_back(row.product);
      prod.yerr.push_back(row.err_product);
    }
    spdc::LinePlot variances;
    variances.title = "measured widths vs pump coherence";
    variances.x_label = "w / l_c";
    variances.y_label = "Dp+^2 [hbar^2/m^2]";
    variances.y2_label = "Dx-^2 [m^2]";
    variances.series = {vp, vx};
    variances.render((dir / "fig4_variances.svg").string());

    spdc::LinePlot product;
    product.title = "uncertainty product vs pump coherence";
    product.x_label = "w / l_c";
    product.y_label = "Dx-^2 Dp+^2 [hbar^2]";
    product.series = {prod};
    product.hlines = {0.25};
    product.render((dir / "fig4_product.svg").string());
  }
  if (sweep.crossing_found) {
    std::cout << "product crosses 0.25 hbar^2 at w/l_c = "
              << sweep.crossing_w_over_lc << " +- " << sweep.crossing_error
              << "\n";
  }
  log(opts, "wrote " + csv_path.string());
  return 0;
}

int cmd_figure(const CommonOptions& opts, const std::string& which) {
  const auto config = resolve_config(opts);
  if (which == "fig2") return figure_scans(opts, config);
  if (which == "fig3") return figure_rasters(opts, config);
  if (which == "fig4") return figure_sweep(opts, config);
  throw spdc::ConfigError("figure: --which must be fig2, fig3 or fig4");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPDC photon-pair simulator with tunable pump coherence"};
  app.require_subcommand(1);

  CommonOptions opts;
  app.add_option("--config", opts.config_path, "JSON run configuration");
  app.add_option("--out", opts.out_dir, "output directory (overrides config)");
  std::uint64_t seed_value = 0;
  auto* seed_opt =
      app.add_option("--seed", seed_value, "RNG seed (overrides config)");
  app.add_flag("--quiet", opts.quiet, "suppress progress logging");

  auto* simulate = app.add_subcommand("simulate", "write joint distributions");
  auto* figure = app.add_subcommand("figure", "reproduce a figure");
  std::string which = "fig2";
  figure->add_option("--which", which, "fig2|fig3|fig4");
  auto* report = app.add_subcommand("report", "uncertainty product report");
  auto* sweep = app.add_subcommand("sweep", "coherence sweep");
  for (auto* sub : {simulate, figure, report, sweep}) {
    sub->fallthrough();  // global flags may follow the subcommand
  }

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) opts.seed = seed_value;

  try {
    if (simulate->parsed()) return cmd_simulate(opts);
    if (figure->parsed()) return cmd_figure(opts, which);
    if (report->parsed()) return cmd_report(opts);
    if (sweep->parsed()) return cmd_sweep(opts);
  } catch (const spdc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
