#include "kinex/panel.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "kinex/error.hpp"
#include "kinex/format.hpp"

namespace kinex {

CountryCode::CountryCode(std::string_view code) : code_(code) {
  if (!is_valid(code)) {
    throw Error(ErrorCode::Domain, "invalid country code '" + std::string(code) +
                                       "' (expected three letters A-Z)");
  }
}

bool CountryCode::is_valid(std::string_view code) noexcept {
  return code.size() == 3 &&
         std::all_of(code.begin(), code.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

std::ostream& operator<<(std::ostream& os, const CountryCode& code) { return os << code.str(); }

std::string_view indicator_name(IndicatorKind kind) noexcept {
  switch (kind) {
    case IndicatorKind::GiniIndex: return "gini";
    case IndicatorKind::GrossDomesticSavings: return "gds";
  }
  return "unknown";
}

CleaningPolicy CleaningPolicy::defaults_for(IndicatorKind kind) noexcept {
  CleaningPolicy p;
  p.drop_negative = kind == IndicatorKind::GrossDomesticSavings;
  return p;
}

void CleaningPolicy::validate() const {
  if (min_overlap < 3) {
    throw Error(ErrorCode::Domain,
                "min_overlap must be at least 3 (got " + std::to_string(min_overlap) + ")");
  }
}

TimeSeriesPanel::TimeSeriesPanel(IndicatorKind indicator, std::vector<CountryCode> countries,
                                 std::vector<int> years, std::vector<std::optional<double>> values)
    : indicator_(indicator),
      countries_(std::move(countries)),
      years_(std::move(years)),
      values_(std::move(values)) {
  std::set<CountryCode> seen;
  for (const auto& c : countries_) {
    if (!seen.insert(c).second) {
      throw Error(ErrorCode::Domain, "duplicate country code " + c.str());
    }
  }
  for (std::size_t i = 1; i < years_.size(); ++i) {
    if (years_[i] <= years_[i - 1]) {
      throw Error(ErrorCode::Domain, "years must be strictly increasing");
    }
  }
  if (values_.size() != countries_.size() * years_.size()) {
    throw Error(ErrorCode::Domain, "panel grid size does not match countries x years");
  }
}

std::optional<std::size_t> TimeSeriesPanel::index_of(const CountryCode& code) const noexcept {
  auto it = std::find(countries_.begin(), countries_.end(), code);
  if (it == countries_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - countries_.begin());
}

std::optional<std::size_t> TimeSeriesPanel::year_index(int year) const noexcept {
  auto it = std::lower_bound(years_.begin(), years_.end(), year);
  if (it == years_.end() || *it != year) return std::nullopt;
  return static_cast<std::size_t>(it - years_.begin());
}

TimeSeriesPanel TimeSeriesPanel::select(const std::vector<CountryCode>& countries) const {
  std::vector<std::optional<double>> values;
  values.reserve(countries.size() * years_.size());
  for (const auto& c : countries) {
    auto idx = index_of(c);
    if (!idx) throw Error(ErrorCode::Domain, "unknown country " + c.str());
    auto r = row(*idx);
    values.insert(values.end(), r.begin(), r.end());
  }
  return TimeSeriesPanel(indicator_, countries, years_, std::move(values));
}

TimeSeriesPanel TimeSeriesPanel::window(int first_year, int last_year) const {
  std::vector<std::size_t> keep;
  std::vector<int> years;
  for (std::size_t j = 0; j < years_.size(); ++j) {
    if (years_[j] >= first_year && years_[j] <= last_year) {
      keep.push_back(j);
      years.push_back(years_[j]);
    }
  }
  std::vector<std::optional<double>> values;
  values.reserve(countries_.size() * keep.size());
  for (std::size_t i = 0; i < countries_.size(); ++i) {
    for (std::size_t j : keep) values.push_back(at(i, j));
  }
  return TimeSeriesPanel(indicator_, countries_, std::move(years), std::move(values));
}

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Whitespace is insignificant both outside and inside surrounding quotes.
std::string_view trim(std::string_view s) {
  s = strip(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = strip(s.substr(1, s.size() - 2));
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

[[noreturn]] void parse_error(std::size_t line_no, const std::string& msg) {
  throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace

TimeSeriesPanel parse_panel_csv(std::istream& in, IndicatorKind indicator) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<int> years;
  std::vector<CountryCode> countries;
  std::vector<std::optional<double>> values;
  std::set<std::string> seen;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (line_no == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (is_blank(view)) continue;
    auto fields = split_fields(view);

    if (!have_header) {
      if (lower(fields[0]) != "country") {
        parse_error(line_no, "malformed header: first column must be 'country'");
      }
      if (fields.size() < 2) parse_error(line_no, "malformed header: no year columns");
      for (std::size_t k = 1; k < fields.size(); ++k) {
        int year = 0;
        auto f = fields[k];
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), year);
        if (ec != std::errc{} || ptr != f.data() + f.size()) {
          parse_error(line_no, "malformed header: column " + std::to_string(k + 1) + " '" +
                                   std::string(f) + "' is not a year");
        }
        if (!years.empty() && year <= years.back()) {
          parse_error(line_no, "malformed header: years must be strictly increasing at '" +
                                   std::string(f) + "'");
        }
        years.push_back(year);
      }
      have_header = true;
      continue;
    }

    const std::string code(fields[0]);
    if (!CountryCode::is_valid(code)) {
      parse_error(line_no, "row '" + code + "': invalid country code (expected three letters A-Z)");
    }
    if (fields.size() != years.size() + 1) {
      parse_error(line_no, "row " + code + ": ragged row with " + std::to_string(fields.size()) +
                               " fields, header has " + std::to_string(years.size() + 1));
    }
    if (!seen.insert(code).second) parse_error(line_no, "row " + code + ": duplicate country code");
    countries.emplace_back(code);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      auto f = fields[k];
      if (f.empty()) {
        values.emplace_back(std::nullopt);
        continue;
      }
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(v)) {
        parse_error(line_no, "row " + code + ", column " + std::to_string(years[k - 1]) +
                                 ": non-numeric value '" + std::string(f) + "'");
      }
      values.emplace_back(v);
    }
  }
  if (!have_header) throw Error(ErrorCode::Parse, "malformed header: input is empty");
  return TimeSeriesPanel(indicator, std::move(countries), std::move(years), std::move(values));
}

TimeSeriesPanel parse_panel_csv(std::string_view text, IndicatorKind indicator) {
  std::istringstream in{std::string(text)};
  return parse_panel_csv(in, indicator);
}

TimeSeriesPanel read_panel_csv(const std::string& path, IndicatorKind indicator) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  try {
    return parse_panel_csv(in, indicator);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw Error(ErrorCode::Parse, path + ": " + e.what());
    throw;
  }
}

void write_panel_csv(std::ostream& out, const TimeSeriesPanel& panel) {
  out << "country";
  for (int y : panel.years()) out << ',' << y;
  out << '\n';
  for (std::size_t i = 0; i < panel.num_countries(); ++i) {
    out << panel.countries()[i].str();
    for (const auto& v : panel.row(i)) {
      out << ',';
      if (v) out << format_double(*v);
    }
    out << '\n';
  }
}

TimeSeriesPanel clean_panel(const TimeSeriesPanel& panel, const CleaningPolicy& policy) {
  if (!policy.drop_negative) return panel;
  auto values = panel.values();
  for (auto& v : values) {
    if (v && *v < 0.0) v.reset();
  }
  return TimeSeriesPanel(panel.indicator(), panel.countries(), panel.years(), std::move(values));
}

namespace {

AlignedPair align_rows(std::span<const std::optional<double>> ra,
                       std::span<const std::optional<double>> rb, const std::vector<int>& years) {
  AlignedPair out;
  for (std::size_t j = 0; j < years.size(); ++j) {
    if (ra[j] && rb[j]) {
      out.years.push_back(years[j]);
      out.a.push_back(*ra[j]);
      out.b.push_back(*rb[j]);
    }
  }
  return out;
}

void require_overlap(const AlignedPair& p, const CleaningPolicy& policy, const std::string& what) {
  if (p.years.size() < static_cast<std::size_t>(policy.min_overlap)) {
    throw Error(ErrorCode::InsufficientData,
                what + ": " + std::to_string(p.years.size()) +
                    " common non-missing years, need at least " +
                    std::to_string(policy.min_overlap));
  }
}

}  // namespace

AlignedPair align_pair(const TimeSeriesPanel& panel, const CountryCode& a, const CountryCode& b,
                       const CleaningPolicy& policy) {
  auto ia = panel.index_of(a);
  auto ib = panel.index_of(b);
  if (!ia) throw Error(ErrorCode::Domain, "unknown country " + a.str());
  if (!ib) throw Error(ErrorCode::Domain, "unknown country " + b.str());
  AlignedPair out = align_rows(panel.row(*ia), panel.row(*ib), panel.years());
  require_overlap(out, policy, "pair " + a.str() + "/" + b.str());
  return out;
}

AlignedPair align_across(const TimeSeriesPanel& first, const TimeSeriesPanel& second,
                         const CountryCode& country, const CleaningPolicy& policy) {
  auto i1 = first.index_of(country);
  auto i2 = second.index_of(country);
  if (!i1 || !i2) throw Error(ErrorCode::Domain, "country " + country.str() + " missing from a panel");
  AlignedPair out;
  for (std::size_t j = 0; j < first.num_years(); ++j) {
    auto k = second.year_index(first.years()[j]);
    if (!k) continue;
    const auto& va = first.at(*i1, j);
    const auto& vb = second.at(*i2, *k);
    if (va && vb) {
      out.years.push_back(first.years()[j]);
      out.a.push_back(*va);
      out.b.push_back(*vb);
    }
  }
  require_overlap(out, policy, "country " + country.str() + " across indicators");
  return out;
}

}  // namespace kinex
