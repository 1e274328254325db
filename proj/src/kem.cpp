#include "kinex/kem.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <thread>

#include "kinex/error.hpp"
#include "kinex/format.hpp"
#include "kinex/kernels.hpp"
#include "kinex/numeric.hpp"
#include "kinex/random.hpp"

namespace kinex {

void SimConfig::validate() const {
  if (n_agents < 2) throw Error(ErrorCode::Domain, "n_agents must be at least 2");
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw Error(ErrorCode::Domain, "lambda must be in [0, 1), got " + format_double(lambda));
  }
  if (snapshot_interval < 1) throw Error(ErrorCode::Domain, "snapshot_interval must be at least 1");
  if (!(initial_wealth > 0.0) || !std::isfinite(initial_wealth)) {
    throw Error(ErrorCode::Domain, "initial_wealth must be positive");
  }
}

WealthState::WealthState(std::size_t n_agents, double initial_wealth)
    : wealths_(n_agents, initial_wealth), total_(0.0) {
  if (!(initial_wealth >= 0.0)) throw Error(ErrorCode::Domain, "wealth must be non-negative");
  total_ = current_sum();
}

WealthState::WealthState(std::vector<double> wealths) : wealths_(std::move(wealths)), total_(0.0) {
  for (double z : wealths_) {
    if (!(z >= 0.0)) throw Error(ErrorCode::Domain, "wealth must be non-negative");
  }
  total_ = current_sum();
}

double WealthState::current_sum() const { return kernels::sum(wealths_); }

double WealthState::relative_drift() const {
  if (total_ == 0.0) return 0.0;
  return std::abs(current_sum() - total_) / total_;
}

GammaLaw::GammaLaw(double shape, double mean_wealth) : n(shape), mean(mean_wealth) {
  if (!(shape >= 1.0) || !std::isfinite(shape)) {
    throw Error(ErrorCode::Domain, "Gamma shape n must be >= 1, got " + format_double(shape));
  }
  if (!(mean_wealth > 0.0) || !std::isfinite(mean_wealth)) {
    throw Error(ErrorCode::Domain, "Gamma mean must be positive");
  }
}

double n_of_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw Error(ErrorCode::Domain, "lambda must be in [0, 1), got " + format_double(lambda));
  }
  return 1.0 + 3.0 * lambda / (1.0 - lambda);
}

double gamma_pdf(double z, const GammaLaw& law) {
  if (!(z >= 0.0)) throw Error(ErrorCode::Domain, "gamma_pdf: z must be non-negative");
  const double rate = law.n / law.mean;
  if (z == 0.0) {
    if (law.n == 1.0) return rate;
    return 0.0;
  }
  const double log_density =
      law.n * std::log(rate) - std::lgamma(law.n) + (law.n - 1.0) * std::log(z) - rate * z;
  return std::exp(log_density);
}

double gamma_cdf(double z, const GammaLaw& law) {
  if (z <= 0.0) return 0.0;
  return numeric::regularized_gamma_p(law.n, law.n * z / law.mean);
}

double gini_numeric(const GammaLaw& law) {
  const double scale = law.n / law.mean;
  auto integrand = [&](double y) {
    const double x = scale * y;
    const double lower = numeric::regularized_gamma_p(law.n, x);
    const double upper = numeric::regularized_gamma_q(law.n, x);
    return lower * upper;
  };
  numeric::QuadratureOptions opts;
  opts.abs_tol = 1e-12 * law.mean;
  opts.rel_tol = 1e-12;
  // Split at the mean so each piece sees one side of the bulk.
  const auto head = numeric::integrate(integrand, 0.0, law.mean, opts);
  const auto tail = numeric::integrate_to_infinity(integrand, law.mean, opts);
  return (head.value + tail.value) / law.mean;
}

double gini_analytic(double n) {
  if (!(n >= 1.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::Domain, "gini_analytic: n must be >= 1, got " + format_double(n));
  }
  const double log_g = std::lgamma(n + 0.5) - std::log(n) - std::lgamma(n) -
                       0.5 * std::log(std::numbers::pi);
  return std::exp(log_g);
}

WealthState exchange_step(const WealthState& state, std::size_t i, std::size_t j, double eps,
                          double lambda) {
  if (i == j) throw Error(ErrorCode::Domain, "exchange_step: agents must differ");
  if (i >= state.size() || j >= state.size()) {
    throw Error(ErrorCode::Domain, "exchange_step: agent index out of range");
  }
  if (!(eps >= 0.0 && eps <= 1.0)) throw Error(ErrorCode::Domain, "exchange_step: eps must be in [0, 1]");
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw Error(ErrorCode::Domain, "exchange_step: lambda must be in [0, 1)");
  }
  std::vector<double> z(state.wealths().begin(), state.wealths().end());
  apply_exchange(z, i, j, eps, lambda);
  return WealthState(std::move(z));
}

SimResult simulate(const SimConfig& config, const SnapshotObserver& observer) {
  config.validate();
  const std::size_t n = config.n_agents;
  WealthState state(n, config.initial_wealth);
  Rng rng(config.seed);
  std::span<double> z = state.wealths();
  const double lambda = config.lambda;

  SimResult result{state, {}, {}, {}, {}};
  result.diagnostics.initial_total = state.total();

  auto sweep = [&] {
    for (std::size_t k = 0; k < n; ++k) {
      const auto i = static_cast<std::size_t>(rng.below(n));
      auto j = static_cast<std::size_t>(rng.below(n - 1));
      if (j >= i) ++j;
      const double eps = rng.uniform01();
      apply_exchange(z, i, j, eps, lambda);
      assert(z[i] >= 0.0 && z[j] >= 0.0);
    }
  };

  for (std::size_t s = 0; s < config.thermalization; ++s) sweep();
  for (std::size_t s = 1; s <= config.sweeps; ++s) {
    sweep();
    if (s % config.snapshot_interval != 0) continue;
    const std::size_t index = config.thermalization + s;
    result.snapshot_sweeps.push_back(index);
    result.snapshot_gini.push_back(sample_gini(z));
    if (config.keep_samples) result.samples.insert(result.samples.end(), z.begin(), z.end());
    if (observer) observer(index, z);
  }

  result.diagnostics.exchanges =
      static_cast<std::uint64_t>(n) * (config.thermalization + config.sweeps);
  result.diagnostics.final_total = state.current_sum();
  result.diagnostics.relative_drift = state.relative_drift();
  result.diagnostics.min_wealth = *std::min_element(z.begin(), z.end());
  result.state = std::move(state);
  return result;
}

double sample_gini(std::span<const double> wealths) {
  if (wealths.empty()) throw Error(ErrorCode::InsufficientData, "sample_gini: empty vector");
  std::vector<double> sorted(wealths.begin(), wealths.end());
  for (double v : sorted) {
    if (!(v >= 0.0)) throw Error(ErrorCode::Domain, "sample_gini: entries must be non-negative");
  }
  std::sort(sorted.begin(), sorted.end());
  const double total = kernels::sum(sorted);
  if (!(total > 0.0)) throw Error(ErrorCode::Degenerate, "sample_gini: mean is zero");
  const double weighted = kernels::rank_weighted_sum(sorted);
  return weighted / (static_cast<double>(sorted.size()) * total);
}

double ks_distance(std::span<const double> samples, const GammaLaw& law) {
  if (samples.empty()) throw Error(ErrorCode::InsufficientData, "ks_distance: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = gamma_cdf(sorted[i], law);
    d = std::max({d, f - static_cast<double>(i) / m, static_cast<double>(i + 1) / m - f});
  }
  return d;
}

MeanWithError batch_mean(std::span<const double> values) {
  MeanWithError out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  double total = 0.0;
  for (double v : values) total += v;
  out.mean = total / static_cast<double>(n);
  if (n < 2) return out;

  auto spread = [](const std::vector<double>& xs, double mean) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  };
  constexpr std::size_t kBatches = 10;
  if (n < 2 * kBatches) {
    out.std_error = spread(std::vector<double>(values.begin(), values.end()), out.mean);
    return out;
  }
  const std::size_t per = n / kBatches;
  std::vector<double> means;
  for (std::size_t b = 0; b < kBatches; ++b) {
    double s = 0.0;
    for (std::size_t k = b * per; k < (b + 1) * per; ++k) s += values[k];
    means.push_back(s / static_cast<double>(per));
  }
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= static_cast<double>(kBatches);
  out.std_error = spread(means, grand);
  return out;
}

GiniCurve gini_curve(std::span<const double> lambdas, const SimConfig& config, unsigned threads) {
  if (lambdas.empty()) throw Error(ErrorCode::Domain, "gini_curve: empty lambda grid");
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] >= 0.0 && lambdas[k] <= 0.99)) {
      throw Error(ErrorCode::Domain, "gini_curve: lambda " + format_double(lambdas[k]) +
                                         " outside [0, 0.99]");
    }
    if (k > 0 && !(lambdas[k] > lambdas[k - 1])) {
      throw Error(ErrorCode::Domain, "gini_curve: lambda grid must be strictly increasing");
    }
  }
  SimConfig base = config;
  base.keep_samples = false;
  base.lambda = lambdas.front();
  base.validate();

  GiniCurve curve;
  curve.points.resize(lambdas.size());
  auto run = [&](std::size_t k) {
    SimConfig c = base;
    c.lambda = lambdas[k];
    c.seed = derive_seed(config.seed, k);
    const SimResult r = simulate(c);
    const MeanWithError mc = batch_mean(r.snapshot_gini);
    GiniPoint& p = curve.points[k];
    p.lambda = c.lambda;
    p.n = n_of_lambda(c.lambda);
    p.gini_analytic = gini_analytic(p.n);
    p.gini_monte_carlo = mc.mean;
    p.mc_std_error = mc.std_error;
    p.snapshots = r.snapshot_gini.size();
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, lambdas.size()));
  if (workers == 1) {
    for (std::size_t k = 0; k < lambdas.size(); ++k) run(k);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < lambdas.size(); k += workers) run(k);
      });
    }
  }
  return curve;
}

Histogram make_histogram(std::span<const double> samples, std::size_t bins, const GammaLaw& law) {
  if (bins == 0) throw Error(ErrorCode::Domain, "make_histogram: need at least one bin");
  if (samples.empty()) throw Error(ErrorCode::InsufficientData, "make_histogram: no samples");
  const double top = *std::max_element(samples.begin(), samples.end());
  const double width = top > 0.0 ? top / static_cast<double>(bins) : 1.0;
  Histogram h;
  h.counts.assign(bins, 0);
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(width * static_cast<double>(b));
  for (double v : samples) {
    auto b = static_cast<std::size_t>(v / width);
    h.counts[std::min(b, bins - 1)] += 1;
  }
  const double total = static_cast<double>(samples.size());
  for (std::size_t b = 0; b < bins; ++b) {
    h.empirical_density.push_back(static_cast<double>(h.counts[b]) / (total * width));
    h.analytic_density.push_back(gamma_pdf(0.5 * (h.edges[b] + h.edges[b + 1]), law));
  }
  return h;
}

void write_snapshots_csv(std::ostream& out, const SimResult& result) {
  out << "sweep,gini\n";
  for (std::size_t k = 0; k < result.snapshot_gini.size(); ++k) {
    out << result.snapshot_sweeps[k] << ',' << format_double(result.snapshot_gini[k]) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "bin_lo,bin_hi,count,empirical_density,analytic_density\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ',' << h.counts[b]
        << ',' << format_double(h.empirical_density[b]) << ','
        << format_double(h.analytic_density[b]) << '\n';
  }
}

void write_gini_curve_csv(std::ostream& out, const GiniCurve& curve) {
  out << "lambda,n,gini_analytic,gini_monte_carlo,mc_std_error,snapshots\n";
  for (const auto& p : curve.points) {
    out << format_double(p.lambda) << ',' << format_double(p.n) << ','
        << format_double(p.gini_analytic) << ',' << format_double(p.gini_monte_carlo) << ','
        << format_double(p.mc_std_error) << ',' << p.snapshots << '\n';
  }
}

}  // namespace kinex
