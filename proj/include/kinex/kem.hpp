#pragma once

// Closed-economy kinetic exchange model with a uniform saving propensity,
// its Gamma-law equilibrium and the corresponding Gini coefficients.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

namespace kinex {

struct SimConfig {
  std::size_t n_agents = 1000;
  double lambda = 0.0;  // saving propensity, [0, 1)
  std::size_t sweeps = 5000;  // measurement sweeps
  std::size_t thermalization = 1000;
  std::size_t snapshot_interval = 10;
  std::uint64_t seed = 1;
  double initial_wealth = 1.0;
  // Keep every snapshot's wealth vector in SimResult::samples.
  bool keep_samples = false;

  // Throws Error(Domain) naming the offending field.
  void validate() const;
};

class WealthState {
 public:
  WealthState(std::size_t n_agents, double initial_wealth);
  explicit WealthState(std::vector<double> wealths);

  std::span<const double> wealths() const noexcept { return wealths_; }
  std::span<double> wealths() noexcept { return wealths_; }
  std::size_t size() const noexcept { return wealths_.size(); }
  double operator[](std::size_t i) const { return wealths_[i]; }

  // The conserved total, fixed at construction.
  double total() const noexcept { return total_; }
  double current_sum() const;
  double relative_drift() const;

 private:
  std::vector<double> wealths_;
  double total_;
};

// Gamma equilibrium law phi_n(z) = a_n z^(n-1) exp(-n z / mean).
struct GammaLaw {
  double n;
  double mean;

  // Throws Error(Domain) unless n >= 1 and mean > 0.
  GammaLaw(double shape, double mean_wealth);
};

// n(lambda) = 1 + 3 lambda / (1 - lambda); Error(Domain) outside [0, 1).
double n_of_lambda(double lambda);

double gamma_pdf(double z, const GammaLaw& law);
double gamma_cdf(double z, const GammaLaw& law);

// Gini = (1/mean) * integral of Phi (1 - Phi) over [0, inf), by adaptive
// quadrature to an absolute tolerance of 1e-10 or better.
double gini_numeric(const GammaLaw& law);

// Closed form Gamma(n + 1/2) / (n Gamma(n) sqrt(pi)), evaluated in log space.
double gini_analytic(double n);

// Wealth update for one pair (i gets eps of the pooled share, j the rest).
// Throws Error(Domain) for i == j, eps outside [0, 1] or lambda outside [0, 1).
WealthState exchange_step(const WealthState& state, std::size_t i, std::size_t j, double eps,
                          double lambda);

// In-place variant used by the simulator; same preconditions, unchecked.
inline void apply_exchange(std::span<double> z, std::size_t i, std::size_t j, double eps,
                           double lambda) {
  const double pooled = (1.0 - lambda) * (z[i] + z[j]);
  const double zi = lambda * z[i] + eps * pooled;
  const double zj = lambda * z[j] + (1.0 - eps) * pooled;
  z[i] = zi;
  z[j] = zj;
}

struct SimDiagnostics {
  double initial_total = 0.0;
  double final_total = 0.0;
  double relative_drift = 0.0;
  std::uint64_t exchanges = 0;
  double min_wealth = 0.0;
};

struct SimResult {
  WealthState state;
  std::vector<std::size_t> snapshot_sweeps;
  std::vector<double> snapshot_gini;
  // Concatenated snapshot wealths, only when SimConfig::keep_samples.
  std::vector<double> samples;
  SimDiagnostics diagnostics;
};

using SnapshotObserver = std::function<void(std::size_t sweep, std::span<const double> wealths)>;

// Runs thermalization then measurement sweeps (N random-pair exchanges
// each), snapshotting every snapshot_interval measurement sweeps.
// Deterministic for a given config.
SimResult simulate(const SimConfig& config, const SnapshotObserver& observer = {});

// Sum_ij |z_i - z_j| / (2 N^2 mean) via the sorted-rank identity.
double sample_gini(std::span<const double> wealths);

// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and `law`.
double ks_distance(std::span<const double> samples, const GammaLaw& law);

struct GiniPoint {
  double lambda = 0.0;
  double n = 1.0;
  double gini_analytic = 0.0;
  double gini_monte_carlo = 0.0;
  double mc_std_error = 0.0;
  std::size_t snapshots = 0;
};

struct GiniCurve {
  std::vector<GiniPoint> points;
};

// Mean and standard error of autocorrelated snapshot values by batch means
// (10 batches), falling back to the naive estimate below 20 values.
struct MeanWithError {
  double mean = 0.0;
  double std_error = 0.0;
};
MeanWithError batch_mean(std::span<const double> values);

// One simulation per grid point, seeded with derive_seed(config.seed, index).
// `lambdas` must be strictly increasing within [0, 0.99].
GiniCurve gini_curve(std::span<const double> lambdas, const SimConfig& config,
                     unsigned threads = 1);

struct Histogram {
  std::vector<double> edges;  // bins + 1
  std::vector<std::uint64_t> counts;
  std::vector<double> empirical_density;
  std::vector<double> analytic_density;  // at bin midpoints
};

// Equal-width bins over [0, max(samples)].
Histogram make_histogram(std::span<const double> samples, std::size_t bins, const GammaLaw& law);

void write_snapshots_csv(std::ostream& out, const SimResult& result);
void write_histogram_csv(std::ostream& out, const Histogram& h);
void write_gini_curve_csv(std::ostream& out, const GiniCurve& curve);

}  // namespace kinex
