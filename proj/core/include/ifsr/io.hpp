#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ifsr/detection.hpp"
#include "ifsr/embedding.hpp"
#include "ifsr/geometry.hpp"

namespace ifsr {

/// Shortest text with 17 significant digits, so values round-trip exactly.
std::string format_double(double v);

/// One value per line; a single non-numeric first line is taken as a
/// header. Blank lines are skipped. Errors name the offending line.
ScalarSeries parse_series_csv(const std::filesystem::path& path);
ScalarSeries parse_series(std::istream& in, const std::string& source = "<input>");

/// Rows `t,c1,...,cd` in any order; t must cover 0..T-1 exactly once.
PointCloud parse_cloud_csv(const std::filesystem::path& path);
PointCloud parse_cloud(std::istream& in, const std::string& source = "<input>");

/// Rows `t,value` with integer values (regimes or labels), same index rules
/// as parse_cloud.
std::vector<long long> parse_indexed_integers_csv(const std::filesystem::path& path);
std::vector<long long> parse_indexed_integers(std::istream& in,
                                              const std::string& source = "<input>");

void write_series_csv(const std::filesystem::path& path, const ScalarSeries& s);
void write_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud);
void write_histogram_csv(const std::filesystem::path& path, const Histogram& h);

void write_indexed_csv(const std::filesystem::path& path, const std::string& header,
                       std::span<const long long> values);
void write_indexed_csv(const std::filesystem::path& path, const std::string& header,
                       std::span<const double> values, std::size_t first = 0);

/// Ordered key=value pairs.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

void write_key_values(const std::filesystem::path& path, const KeyValues& kv);
/// Parses `key=value` lines; `#` starts a comment line. Duplicate keys keep
/// the last value.
std::map<std::string, std::string> parse_key_values(std::istream& in,
                                                    const std::string& source = "<input>");
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

KeyValues gap_report_entries(const GapReport& g);

}  // namespace ifsr
