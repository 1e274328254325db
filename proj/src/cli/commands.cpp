#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "kinex/comove.hpp"
#include "kinex/error.hpp"
#include "kinex/format.hpp"
#include "kinex/random.hpp"
#include "kinex/regress.hpp"
#include "manifest.hpp"

#ifndef KINEX_VERSION
#define KINEX_VERSION "0.0.0"
#endif

namespace kinex::cli {
namespace fs = std::filesystem;

namespace {

class OutputDir {
 public:
  explicit OutputDir(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create output directory " + dir + ": " + ec.message());
  }

  template <typename Fn>
  void write(const std::string& name, Fn&& fn) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    fn(out);
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
    written_.push_back(name);
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  fs::path dir_;
  std::vector<std::string> written_;
};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

RunManifest base_manifest(const std::string& command) {
  RunManifest m;
  m.command = command;
  m.tool_version = KINEX_VERSION;
  return m;
}

void add_panel_parameters(RunManifest& m, const PanelOptions& p) {
  m.parameters["indicator"] = std::string(indicator_name(p.indicator));
  m.parameters["min_overlap"] = std::to_string(p.min_overlap);
  const bool drop = p.drop_negative.value_or(CleaningPolicy::defaults_for(p.indicator).drop_negative);
  m.parameters["drop_negative"] = drop ? "true" : "false";
  m.parameters["countries"] = p.countries.empty() ? "all" : join(p.countries);
  m.parameters["from_year"] = p.from_year ? std::to_string(*p.from_year) : "first";
  m.parameters["to_year"] = p.to_year ? std::to_string(*p.to_year) : "last";
  m.inputs.push_back({p.path, sha256_file(p.path)});
}

CleaningPolicy policy_for(const PanelOptions& p) {
  CleaningPolicy policy = CleaningPolicy::defaults_for(p.indicator);
  if (p.drop_negative) policy.drop_negative = *p.drop_negative;
  policy.min_overlap = p.min_overlap;
  policy.validate();
  return policy;
}

void finish(OutputDir& out, RunManifest& manifest) {
  manifest.outputs = out.written();
  manifest.outputs.push_back("manifest.json");
  out.write("manifest.json", [&](std::ostream& os) { write_manifest(os, manifest); });
}

void write_sim_config(JsonWriter& w, const SimConfig& c) {
  w.key("config").begin_object();
  w.key("n_agents").value(static_cast<std::uint64_t>(c.n_agents));
  w.key("lambda").value(c.lambda);
  w.key("thermalization").value(static_cast<std::uint64_t>(c.thermalization));
  w.key("sweeps").value(static_cast<std::uint64_t>(c.sweeps));
  w.key("snapshot_interval").value(static_cast<std::uint64_t>(c.snapshot_interval));
  w.key("seed").value(c.seed);
  w.key("initial_wealth").value(c.initial_wealth);
  w.end_object();
  w.key("rng").begin_object();
  w.key("algorithm").value(Rng::kAlgorithm);
  w.key("seed").value(c.seed);
  w.end_object();
}

void add_sim_parameters(RunManifest& m, const SimConfig& c) {
  m.parameters["agents"] = std::to_string(c.n_agents);
  m.parameters["thermalization"] = std::to_string(c.thermalization);
  m.parameters["sweeps"] = std::to_string(c.sweeps);
  m.parameters["snapshot_interval"] = std::to_string(c.snapshot_interval);
  m.parameters["seed"] = std::to_string(c.seed);
  m.parameters["initial_wealth"] = format_double(c.initial_wealth);
}

}  // namespace

TimeSeriesPanel load_panel(const PanelOptions& options) {
  const CleaningPolicy policy = policy_for(options);
  TimeSeriesPanel panel = read_panel_csv(options.path, options.indicator);
  if (options.from_year || options.to_year) {
    panel = panel.window(options.from_year.value_or(panel.years().empty() ? 0 : panel.years().front()),
                         options.to_year.value_or(panel.years().empty() ? 0 : panel.years().back()));
  }
  if (!options.countries.empty()) {
    std::vector<CountryCode> codes;
    for (const auto& c : options.countries) codes.emplace_back(c);
    panel = panel.select(codes);
  }
  return clean_panel(panel, policy);
}

void run_correlate(const CorrelateOptions& options, unsigned threads) {
  const TimeSeriesPanel panel = load_panel(options.panel);
  const CorrelationResult result = correlation_matrix(panel, policy_for(options.panel), threads);
  const DistanceMatrix distances = distance_matrix(result.matrix);

  RunManifest manifest = base_manifest("correlate");
  add_panel_parameters(manifest, options.panel);
  manifest.diagnostics["countries_used"] = std::to_string(result.matrix.size());
  manifest.diagnostics["countries_dropped"] = std::to_string(result.dropped.size());

  OutputDir out(options.out_dir);
  out.write("correlation.json", [&](std::ostream& os) { write_json(os, result.matrix); });
  out.write("distance.json", [&](std::ostream& os) { write_json(os, distances); });
  out.write("dropped.json", [&](std::ostream& os) { write_dropped_json(os, result.dropped); });
  finish(out, manifest);
  for (const auto& d : result.dropped) {
    std::cerr << "warning: dropped " << d.code.str() << ": " << d.reason << '\n';
  }
}

void run_map(const MapOptions& options, unsigned threads) {
  const TimeSeriesPanel panel = load_panel(options.panel);
  const CorrelationResult result = correlation_matrix(panel, policy_for(options.panel), threads);
  const DistanceMatrix distances = distance_matrix(result.matrix);
  const Embedding embedding = classical_mds(distances, options.mds_dims);

  RunManifest manifest = base_manifest("map");
  add_panel_parameters(manifest, options.panel);
  manifest.parameters["mds_dims"] = std::to_string(options.mds_dims);
  manifest.parameters["mst"] = options.mst ? "true" : "false";
  manifest.diagnostics["countries_used"] = std::to_string(result.matrix.size());
  manifest.diagnostics["non_euclidean"] = embedding.non_euclidean ? "true" : "false";
  manifest.diagnostics["min_eigenvalue"] = format_double(embedding.min_eigenvalue);

  OutputDir out(options.out_dir);
  out.write("embedding.json", [&](std::ostream& os) { write_json(os, embedding); });
  if (options.mst) {
    const SpanningTree tree = mst(distances);
    manifest.diagnostics["mst_edges"] = std::to_string(tree.edges.size());
    out.write("tree.json", [&](std::ostream& os) { write_json(os, tree); });
  }
  out.write("dropped.json", [&](std::ostream& os) { write_dropped_json(os, result.dropped); });
  finish(out, manifest);
  if (embedding.non_euclidean) {
    std::cerr << "warning: distances are not Euclidean (min eigenvalue "
              << format_double(embedding.min_eigenvalue) << "); negative spectrum clamped for coordinates\n";
  }
}

void run_regress(const RegressOptions& options) {
  CleaningPolicy gds_policy = CleaningPolicy::defaults_for(IndicatorKind::GrossDomesticSavings);
  gds_policy.drop_negative = options.drop_negative_gds;
  gds_policy.min_overlap = options.min_overlap;
  gds_policy.validate();
  const TimeSeriesPanel gini = read_panel_csv(options.gini_path, IndicatorKind::GiniIndex);
  const TimeSeriesPanel gds =
      clean_panel(read_panel_csv(options.gds_path, IndicatorKind::GrossDomesticSavings), gds_policy);

  const CrossSection sample = cross_section(gini, gds, options.year);
  const RegressionResult fit = ols_fit(sample.x, sample.y);

  RunManifest manifest = base_manifest("regress");
  manifest.parameters["year"] = std::to_string(options.year);
  manifest.parameters["drop_negative_gds"] = options.drop_negative_gds ? "true" : "false";
  manifest.parameters["min_overlap"] = std::to_string(options.min_overlap);
  manifest.parameters["within"] = options.within.empty() ? "none" : join(options.within);
  manifest.inputs.push_back({options.gini_path, sha256_file(options.gini_path)});
  manifest.inputs.push_back({options.gds_path, sha256_file(options.gds_path)});
  manifest.diagnostics["n_obs"] = std::to_string(fit.n_obs);

  OutputDir out(options.out_dir);
  out.write("regression.json", [&](std::ostream& os) { write_json(os, fit); });
  out.write("scatter.csv", [&](std::ostream& os) { write_scatter_csv(os, sample, fit); });
  if (!options.within.empty()) {
    out.write("within.json", [&](std::ostream& os) {
      JsonWriter w(os);
      w.begin_object();
      w.key("correlations").begin_array();
      for (const auto& code : options.within) {
        const CountryCode country(code);
        const AlignedPair pair = align_across(gini, gds, country, gds_policy);
        w.begin_object();
        w.key("country").value(code);
        w.key("years").value(static_cast<std::uint64_t>(pair.years.size()));
        w.key("correlation").value(cross_indicator_correlation(pair.a, pair.b));
        w.end_object();
      }
      w.end_array();
      w.end_object();
    });
  }
  finish(out, manifest);
}

void run_simulate(const SimulateOptions& options) {
  SimConfig config = options.config;
  config.keep_samples = options.histogram_bins > 0;
  const SimResult result = simulate(config);
  const GammaLaw law(n_of_lambda(config.lambda), config.initial_wealth);
  const MeanWithError mc = batch_mean(result.snapshot_gini);

  RunManifest manifest = base_manifest("simulate");
  manifest.parameters["lambda"] = format_double(config.lambda);
  add_sim_parameters(manifest, config);
  manifest.parameters["histogram_bins"] = std::to_string(options.histogram_bins);
  manifest.diagnostics["initial_total"] = format_double(result.diagnostics.initial_total);
  manifest.diagnostics["final_total"] = format_double(result.diagnostics.final_total);
  manifest.diagnostics["relative_drift"] = format_double(result.diagnostics.relative_drift);
  manifest.diagnostics["exchanges"] = std::to_string(result.diagnostics.exchanges);
  manifest.diagnostics["min_wealth"] = format_double(result.diagnostics.min_wealth);

  OutputDir out(options.out_dir);
  out.write("metadata.json", [&](std::ostream& os) {
    JsonWriter w(os);
    w.begin_object();
    write_sim_config(w, config);
    w.key("diagnostics").begin_object();
    w.key("initial_total").value(result.diagnostics.initial_total);
    w.key("final_total").value(result.diagnostics.final_total);
    w.key("relative_drift").value(result.diagnostics.relative_drift);
    w.key("exchanges").value(result.diagnostics.exchanges);
    w.key("min_wealth").value(result.diagnostics.min_wealth);
    w.end_object();
    w.key("summary").begin_object();
    w.key("snapshots").value(static_cast<std::uint64_t>(result.snapshot_gini.size()));
    w.key("gini_monte_carlo").value(mc.mean);
    w.key("mc_std_error").value(mc.std_error);
    w.key("n").value(law.n);
    w.key("gini_analytic").value(gini_analytic(law.n));
    if (!result.samples.empty()) w.key("ks_distance").value(ks_distance(result.samples, law));
    w.end_object();
    w.end_object();
  });
  out.write("snapshots.csv", [&](std::ostream& os) { write_snapshots_csv(os, result); });
  if (options.histogram_bins > 0 && !result.samples.empty()) {
    const Histogram h = make_histogram(result.samples, options.histogram_bins, law);
    out.write("histogram.csv", [&](std::ostream& os) { write_histogram_csv(os, h); });
  }
  finish(out, manifest);
}

void run_gini_curve(const GiniCurveOptions& options, unsigned threads) {
  const GiniCurve curve = gini_curve(options.lambdas, options.config, threads);

  RunManifest manifest = base_manifest("gini-curve");
  std::vector<std::string> grid;
  for (double l : options.lambdas) grid.push_back(format_double(l));
  manifest.parameters["lambda_grid"] = join(grid);
  add_sim_parameters(manifest, options.config);

  OutputDir out(options.out_dir);
  out.write("gini_curve.csv", [&](std::ostream& os) { write_gini_curve_csv(os, curve); });
  finish(out, manifest);
}

std::vector<double> parse_lambda_grid(const std::string& grid) {
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::Usage, "invalid number '" + s + "' in lambda grid '" + grid + "'");
    }
  };
  std::vector<double> out;
  if (grid.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(grid);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw Error(ErrorCode::Usage, "lambda grid must be start:step:stop");
    const double start = number(parts[0]);
    const double step = number(parts[1]);
    const double stop = number(parts[2]);
    if (!(step > 0.0)) throw Error(ErrorCode::Usage, "lambda grid step must be positive");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) {
      // Snap to 12 decimals so 0:0.1:0.9 yields 0.3, not 0.30000000000000004.
      out.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
    }
  } else {
    std::stringstream ss(grid);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(number(part));
  }
  if (out.empty()) throw Error(ErrorCode::Usage, "empty lambda grid");
  return out;
}

unsigned threads_from_env() {
  const char* env = std::getenv("KINEX_THREADS");
  unsigned requested = 0;
  if (env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0) throw Error(ErrorCode::Usage, "KINEX_THREADS must be a non-negative integer");
    requested = static_cast<unsigned>(v);
  }
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

namespace {

void add_panel_flags(CLI::App* cmd, PanelOptions& p, std::string& indicator) {
  cmd->add_option("panel", p.path, "Wide CSV panel (country,<year>,...)")->required();
  cmd->add_option("--indicator", indicator, "gini or gds")
      ->check(CLI::IsMember({"gini", "gds"}))
      ->capture_default_str();
  cmd->add_option("--min-overlap", p.min_overlap, "Minimum common non-missing years per pair")
      ->capture_default_str();
  cmd->add_flag_function(
      "--drop-negative,!--keep-negative",
      [&p](std::int64_t count) { p.drop_negative = count > 0; },
      "Blank negative values (default: on for gds, off for gini)");
  cmd->add_option("--countries", p.countries, "Comma-separated country codes to keep")->delimiter(',');
  cmd->add_option("--from-year", p.from_year, "First year of the window");
  cmd->add_option("--to-year", p.to_year, "Last year of the window");
}

IndicatorKind indicator_from(const std::string& s) {
  return s == "gds" ? IndicatorKind::GrossDomesticSavings : IndicatorKind::GiniIndex;
}

void add_sim_flags(CLI::App* cmd, SimConfig& c) {
  cmd->add_option("--agents", c.n_agents, "Number of agents")->capture_default_str();
  cmd->add_option("--sweeps", c.sweeps, "Measurement sweeps (N exchanges each)")->capture_default_str();
  cmd->add_option("--thermalization", c.thermalization, "Warm-up sweeps")->capture_default_str();
  cmd->add_option("--snapshot-interval", c.snapshot_interval, "Sweeps between snapshots")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--initial-wealth", c.initial_wealth, "Initial wealth per agent")->capture_default_str();
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Kinetic exchange simulation and inequality/savings panel analytics"};
  app.set_version_flag("--version", std::string("kinex ") + KINEX_VERSION);
  app.require_subcommand(1);

  CorrelateOptions correlate;
  std::string correlate_indicator = "gini";
  auto* c_cmd = app.add_subcommand("correlate", "Correlation and distance matrices of a panel");
  add_panel_flags(c_cmd, correlate.panel, correlate_indicator);
  c_cmd->add_option("--out", correlate.out_dir, "Output directory")->capture_default_str();

  MapOptions map;
  std::string map_indicator = "gini";
  auto* m_cmd = app.add_subcommand("map", "MDS embedding and minimum spanning tree of a panel");
  add_panel_flags(m_cmd, map.panel, map_indicator);
  m_cmd->add_option("--mds-dims", map.mds_dims, "Embedding dimensions")->capture_default_str();
  m_cmd->add_flag("--mst,!--no-mst", map.mst, "Also write the minimum spanning tree");
  m_cmd->add_option("--out", map.out_dir, "Output directory")->capture_default_str();

  RegressOptions regress;
  auto* r_cmd = app.add_subcommand("regress", "Cross-country OLS of Gini on savings for one year");
  r_cmd->add_option("--gini", regress.gini_path, "Gini panel CSV")->required();
  r_cmd->add_option("--gds", regress.gds_path, "Gross domestic savings panel CSV")->required();
  r_cmd->add_option("--year", regress.year, "Cross-section year")->required();
  r_cmd->add_flag("!--keep-negative", regress.drop_negative_gds, "Keep negative savings values");
  r_cmd->add_option("--min-overlap", regress.min_overlap, "Minimum common years for --within")
      ->capture_default_str();
  r_cmd->add_option("--within", regress.within, "Countries for within-country Gini/savings correlation")
      ->delimiter(',');
  r_cmd->add_option("--out", regress.out_dir, "Output directory")->capture_default_str();

  SimulateOptions sim;
  auto* s_cmd = app.add_subcommand("simulate", "Run the saving-propensity exchange model");
  s_cmd->add_option("--lambda", sim.config.lambda, "Saving propensity in [0, 1)")->capture_default_str();
  add_sim_flags(s_cmd, sim.config);
  s_cmd->add_option("--histogram-bins", sim.histogram_bins, "Histogram bins (0 disables)")
      ->capture_default_str();
  s_cmd->add_option("--out", sim.out_dir, "Output directory")->capture_default_str();

  GiniCurveOptions curve;
  std::string grid = "0:0.1:0.9";
  auto* g_cmd = app.add_subcommand("gini-curve", "Analytic and Monte Carlo Gini over a lambda grid");
  g_cmd->add_option("--lambda-grid", grid, "start:step:stop or comma list")->capture_default_str();
  add_sim_flags(g_cmd, curve.config);
  g_cmd->add_option("--out", curve.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << error_tag(ErrorCode::Usage) << ": " << e.what() << '\n';
    return exit_status(ErrorCode::Usage);
  }

  try {
    if (*c_cmd) {
      correlate.panel.indicator = indicator_from(correlate_indicator);
      run_correlate(correlate, threads_from_env());
    } else if (*m_cmd) {
      map.panel.indicator = indicator_from(map_indicator);
      run_map(map, threads_from_env());
    } else if (*r_cmd) {
      run_regress(regress);
    } else if (*s_cmd) {
      run_simulate(sim);
    } else if (*g_cmd) {
      curve.lambdas = parse_lambda_grid(grid);
      run_gini_curve(curve, threads_from_env());
    }
  } catch (const Error& e) {
    std::cerr << error_tag(e.code()) << ": " << e.what() << '\n';
    return exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "E_INTERNAL: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace kinex::cli
