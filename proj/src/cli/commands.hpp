#pragma once

// Subcommands of the `kinex` tool. Each command reads its inputs, writes
// plot-ready JSON/CSV plus manifest.json into `out_dir`, and throws
// kinex::Error on failure.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kinex/kem.hpp"
#include "kinex/panel.hpp"

namespace kinex::cli {

struct PanelOptions {
  std::string path;
  IndicatorKind indicator = IndicatorKind::GiniIndex;
  std::optional<bool> drop_negative;  // unset: indicator default
  int min_overlap = 8;
  std::vector<std::string> countries;  // empty: all
  std::optional<int> from_year;
  std::optional<int> to_year;
};

struct CorrelateOptions {
  PanelOptions panel;
  std::string out_dir = ".";
};

struct MapOptions {
  PanelOptions panel;
  std::size_t mds_dims = 2;
  bool mst = true;
  std::string out_dir = ".";
};

struct RegressOptions {
  std::string gini_path;
  std::string gds_path;
  int year = 0;
  bool drop_negative_gds = true;
  int min_overlap = 8;
  std::vector<std::string> within;  // countries for within-country correlations
  std::string out_dir = ".";
};

struct SimulateOptions {
  SimConfig config;
  std::size_t histogram_bins = 50;
  std::string out_dir = ".";
};

struct GiniCurveOptions {
  std::vector<double> lambdas;
  SimConfig config;
  std::string out_dir = ".";
};

// Loads, windows, selects and cleans a panel as the options describe.
TimeSeriesPanel load_panel(const PanelOptions& options);

void run_correlate(const CorrelateOptions& options, unsigned threads);
void run_map(const MapOptions& options, unsigned threads);
void run_regress(const RegressOptions& options);
void run_simulate(const SimulateOptions& options);
void run_gini_curve(const GiniCurveOptions& options, unsigned threads);

// "a:step:b" (inclusive) or a comma list. Throws Error(Usage).
std::vector<double> parse_lambda_grid(const std::string& grid);

// KINEX_THREADS, 0 or unset meaning all hardware threads.
unsigned threads_from_env();

// Full command-line entry point; returns the process exit status.
int run(int argc, char** argv);

}  // namespace kinex::cli
