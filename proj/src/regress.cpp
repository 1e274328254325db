#include "kinex/regress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kinex/comove.hpp"
#include "kinex/error.hpp"
#include "kinex/format.hpp"
#include "kinex/kernels.hpp"
#include "kinex/numeric.hpp"

namespace kinex {

RegressionResult ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::Domain, "ols_fit: x and y lengths differ");
  }
  const std::size_t n = x.size();
  if (n < 3) {
    throw Error(ErrorCode::InsufficientData,
                "ols_fit: need at least 3 observations, got " + std::to_string(n));
  }
  const double nd = static_cast<double>(n);
  const double mx = kernels::sum(x) / nd;
  const double my = kernels::sum(y) / nd;
  const auto m = kernels::centered_moments(x, mx, y, my);
  if (!(m.sxx > 0.0)) throw Error(ErrorCode::Degenerate, "ols_fit: regressor has zero variance");

  RegressionResult r;
  r.n_obs = n;
  r.slope = m.sxy / m.sxx;
  r.intercept = my - r.slope * mx;

  const double sse = kernels::residual_sum_squares(x, y, r.slope, r.intercept);
  const double dof = nd - 2.0;
  const double s2 = sse / dof;
  r.se_slope = std::sqrt(s2 / m.sxx);
  r.se_intercept = std::sqrt(s2 * (1.0 / nd + mx * mx / m.sxx));
  // A constant response is fitted exactly; report r^2 = 1 rather than 0/0.
  r.r_squared = m.syy > 0.0 ? std::clamp(1.0 - sse / m.syy, 0.0, 1.0) : 1.0;

  if (r.se_slope > 0.0) {
    r.t_slope = r.slope / r.se_slope;
    r.p_slope = numeric::student_t_two_sided_p(r.t_slope, dof);
  } else if (r.slope != 0.0) {
    r.t_slope = std::copysign(std::numeric_limits<double>::infinity(), r.slope);
    r.p_slope = 0.0;
  } else {
    r.t_slope = 0.0;
    r.p_slope = 1.0;
  }
  return r;
}

CrossSection cross_section(const TimeSeriesPanel& response, const TimeSeriesPanel& regressor,
                           int year) {
  auto jy = response.year_index(year);
  auto jx = regressor.year_index(year);
  if (!jy || !jx) {
    const auto& years = !jy ? response.years() : regressor.years();
    std::string msg = "year " + std::to_string(year) + " absent from the " +
                      std::string(indicator_name(!jy ? response.indicator() : regressor.indicator())) +
                      " panel; available years:";
    for (int y : years) msg += " " + std::to_string(y);
    throw Error(ErrorCode::Domain, msg);
  }
  CrossSection out;
  out.year = year;
  for (std::size_t i = 0; i < response.num_countries(); ++i) {
    const auto& code = response.countries()[i];
    auto k = regressor.index_of(code);
    if (!k) continue;
    const auto& vy = response.at(i, *jy);
    const auto& vx = regressor.at(*k, *jx);
    if (vy && vx) {
      out.countries.push_back(code);
      out.x.push_back(*vx);
      out.y.push_back(*vy);
    }
  }
  return out;
}

double cross_indicator_correlation(std::span<const double> gini, std::span<const double> gds) {
  return pearson(gini, gds);
}

double cross_indicator_correlation(const TimeSeriesPanel& gini, const TimeSeriesPanel& gds,
                                   const CountryCode& country, const CleaningPolicy& policy) {
  const AlignedPair pair = align_across(gini, gds, country, policy);
  return cross_indicator_correlation(pair.a, pair.b);
}

void write_json(std::ostream& out, const RegressionResult& r) {
  JsonWriter w(out);
  w.begin_object();
  w.key("slope").value(r.slope);
  w.key("intercept").value(r.intercept);
  w.key("se_slope").value(r.se_slope);
  w.key("se_intercept").value(r.se_intercept);
  w.key("t_slope").value(r.t_slope);
  w.key("p_slope").value(r.p_slope);
  w.key("r_squared").value(r.r_squared);
  w.key("n_obs").value(static_cast<std::uint64_t>(r.n_obs));
  w.end_object();
}

void write_scatter_csv(std::ostream& out, const CrossSection& sample, const RegressionResult& r) {
  out << "country,x,y,fitted\n";
  for (std::size_t i = 0; i < sample.countries.size(); ++i) {
    out << sample.countries[i].str() << ',' << format_double(sample.x[i]) << ','
        << format_double(sample.y[i]) << ',' << format_double(r.intercept + r.slope * sample.x[i])
        << '\n';
  }
}

}  // namespace kinex
