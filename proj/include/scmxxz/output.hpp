#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "scmxxz/ensemble.hpp"
#include "scmxxz/observables.hpp"

namespace scmxxz {

/// Decimal text with 17 significant digits; parses back to the same double.
std::string format_double(double x);

/// Per-point series table: time, mz_<i>_mean, mz_<i>_se for every site, then
/// ipr (q = 1 only), ier and width as <name>_mean / <name>_se pairs.
std::string series_csv(const EnsembleSeries& series);

std::string spectrum_csv(const Spectrum& spectrum, FrequencyAxis axis);

/// Numeric CSV with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column values by header name; throws InvalidArgument if absent.
  std::vector<double> column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

/// Writes `content` to `path`, throwing std::runtime_error on I/O failure.
void write_text(const std::filesystem::path& path, const std::string& content);

/// Everything about an ensemble run except the series themselves.
nlohmann::json series_metadata(const EnsembleSeries& series);

}  // namespace scmxxz
