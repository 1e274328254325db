#pragma once

// Country x year indicator panels: CSV ingest, cleaning, and pairwise alignment.

#include <compare>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kinex {

// Three uppercase ASCII letters, e.g. "SVN".
class CountryCode {
 public:
  // Throws Error(Domain) unless `code` is exactly three characters A-Z.
  explicit CountryCode(std::string_view code);

  static bool is_valid(std::string_view code) noexcept;

  const std::string& str() const noexcept { return code_; }

  friend auto operator<=>(const CountryCode&, const CountryCode&) = default;
  friend bool operator==(const CountryCode&, const CountryCode&) = default;

 private:
  std::string code_;
};

std::ostream& operator<<(std::ostream& os, const CountryCode& code);

enum class IndicatorKind {
  GiniIndex,             // index points, 0-100
  GrossDomesticSavings,  // % of GDP
};

std::string_view indicator_name(IndicatorKind kind) noexcept;

struct CleaningPolicy {
  bool drop_negative = false;
  // Minimum number of common non-missing years for any pairwise statistic.
  int min_overlap = 8;

  // drop_negative is on for savings and off for Gini.
  static CleaningPolicy defaults_for(IndicatorKind kind) noexcept;

  // Throws Error(Domain) if min_overlap < 3.
  void validate() const;
};

// Immutable countries x years grid of optional values.
class TimeSeriesPanel {
 public:
  // `values` is row-major, one row per country. Throws Error(Domain) on
  // duplicate countries, non-increasing years or a size mismatch.
  TimeSeriesPanel(IndicatorKind indicator, std::vector<CountryCode> countries,
                  std::vector<int> years, std::vector<std::optional<double>> values);

  IndicatorKind indicator() const noexcept { return indicator_; }
  const std::vector<CountryCode>& countries() const noexcept { return countries_; }
  const std::vector<int>& years() const noexcept { return years_; }
  std::size_t num_countries() const noexcept { return countries_.size(); }
  std::size_t num_years() const noexcept { return years_.size(); }

  const std::optional<double>& at(std::size_t country, std::size_t year) const {
    return values_[country * years_.size() + year];
  }
  std::span<const std::optional<double>> row(std::size_t country) const {
    return {values_.data() + country * years_.size(), years_.size()};
  }
  const std::vector<std::optional<double>>& values() const noexcept { return values_; }

  std::optional<std::size_t> index_of(const CountryCode& code) const noexcept;
  std::optional<std::size_t> year_index(int year) const noexcept;

  // Restrict to a set of countries (in the given order) and/or an inclusive
  // year window. Unknown countries raise Error(Domain).
  TimeSeriesPanel select(const std::vector<CountryCode>& countries) const;
  TimeSeriesPanel window(int first_year, int last_year) const;

  friend bool operator==(const TimeSeriesPanel&, const TimeSeriesPanel&) = default;

 private:
  IndicatorKind indicator_;
  std::vector<CountryCode> countries_;
  std::vector<int> years_;
  std::vector<std::optional<double>> values_;
};

// Wide CSV: header `country,<year>,...`, rows `CODE,v1,...`, empty = missing.
// Throws Error(Parse) naming the offending row and column.
TimeSeriesPanel parse_panel_csv(std::istream& in, IndicatorKind indicator);
TimeSeriesPanel parse_panel_csv(std::string_view text, IndicatorKind indicator);
TimeSeriesPanel read_panel_csv(const std::string& path, IndicatorKind indicator);

// Inverse of parse_panel_csv with shortest round-trip number formatting.
void write_panel_csv(std::ostream& out, const TimeSeriesPanel& panel);

TimeSeriesPanel clean_panel(const TimeSeriesPanel& panel, const CleaningPolicy& policy);

struct AlignedPair {
  std::vector<int> years;
  std::vector<double> a;
  std::vector<double> b;
};

// Pairwise-complete deletion: keep years where both countries have data.
// Throws Error(Domain) for an unknown country and Error(InsufficientData)
// when the overlap is shorter than policy.min_overlap.
AlignedPair align_pair(const TimeSeriesPanel& panel, const CountryCode& a, const CountryCode& b,
                       const CleaningPolicy& policy);

// Same, but across two panels for one country (e.g. its Gini and savings series).
AlignedPair align_across(const TimeSeriesPanel& first, const TimeSeriesPanel& second,
                         const CountryCode& country, const CleaningPolicy& policy);

}  // namespace kinex
