#pragma once

// Simple OLS of one indicator on another, plus within-country correlation
// between two indicator panels.

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "kinex/panel.hpp"

namespace kinex {

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double se_slope = 0.0;
  double se_intercept = 0.0;
  // slope / se_slope; +-inf when the fit is exact and the slope is nonzero.
  double t_slope = 0.0;
  // Two-sided, Student-t with n - 2 degrees of freedom.
  double p_slope = 1.0;
  double r_squared = 0.0;
  std::size_t n_obs = 0;
};

// Closed-form simple regression of y on x. Throws Error(InsufficientData)
// for n < 3 and Error(Degenerate) when x has zero variance.
RegressionResult ols_fit(std::span<const double> x, std::span<const double> y);

// Countries present with data for `year` in both panels, in the order of
// the first panel.
struct CrossSection {
  int year = 0;
  std::vector<CountryCode> countries;
  std::vector<double> x;
  std::vector<double> y;
};

// Cross-country sample for one year: x from `regressor`, y from `response`.
// Throws Error(Domain) if the year is absent from either panel, listing the
// years that are available.
CrossSection cross_section(const TimeSeriesPanel& response, const TimeSeriesPanel& regressor,
                           int year);

// Pearson correlation of two already aligned series (e.g. a country's Gini
// and savings over their common years).
double cross_indicator_correlation(std::span<const double> gini, std::span<const double> gds);

// Aligns the country's two series over common non-missing years first.
double cross_indicator_correlation(const TimeSeriesPanel& gini, const TimeSeriesPanel& gds,
                                   const CountryCode& country, const CleaningPolicy& policy);

void write_json(std::ostream& out, const RegressionResult& r);

// Plot-ready rows: country,x,y,fitted
void write_scatter_csv(std::ostream& out, const CrossSection& sample, const RegressionResult& r);

}  // namespace kinex
