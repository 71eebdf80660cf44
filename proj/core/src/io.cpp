#include "ifsr/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ifsr/errors.hpp"

namespace ifsr {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool parse_real(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_integer(std::string_view s, long long& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

[[noreturn]] void fail_line(const std::string& source, std::size_t line, const std::string& what) {
  throw InputError(source + ": line " + std::to_string(line) + ": " + what);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

/// Rows of `t,fields...` keyed by t, validated to be 0..T-1 exactly once.
template <typename Row, typename ParseRow>
std::vector<Row> read_indexed(std::istream& in, const std::string& source, ParseRow parse_row) {
  std::vector<std::pair<long long, Row>> rows;
  std::string line;
  std::size_t number = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++number;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split_fields(text);
    long long t = 0;
    if (!parse_integer(fields[0], t)) {
      if (first) {
        first = false;
        continue;  // header
      }
      fail_line(source, number, "row index '" + std::string(fields[0]) + "' is not an integer");
    }
    first = false;
    if (t < 0) fail_line(source, number, "negative row index");
    Row row;
    if (!parse_row(fields, row)) fail_line(source, number, "malformed row '" + std::string(text) + "'");
    rows.emplace_back(t, std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Row> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto t = static_cast<std::size_t>(rows[i].first);
    if (t < i) throw InputError(source + ": duplicate row index t=" + std::to_string(t));
    if (t > i) throw InputError(source + ": missing row index t=" + std::to_string(i));
    out.push_back(std::move(rows[i].second));
  }
  return out;
}

}  // namespace

ScalarSeries parse_series(std::istream& in, const std::string& source) {
  ScalarSeries s;
  std::string line;
  std::size_t number = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++number;
    const auto text = trim(line);
    if (text.empty()) continue;
    double v = 0.0;
    if (!parse_real(text, v)) {
      if (first) {
        first = false;
        continue;
      }
      fail_line(source, number, "'" + std::string(text) + "' is not a number");
    }
    first = false;
    if (!std::isfinite(v)) fail_line(source, number, "value is not finite");
    s.values.push_back(v);
  }
  if (s.values.size() < 2) throw InputError(source + ": series needs at least 2 values");
  return s;
}

ScalarSeries parse_series_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_series(in, path.string());
}

PointCloud parse_cloud(std::istream& in, const std::string& source) {
  std::size_t dim = 0;
  auto rows = read_indexed<std::vector<double>>(
      in, source, [&](const std::vector<std::string_view>& f, std::vector<double>& row) {
        if (f.size() < 2) return false;
        if (dim == 0) dim = f.size() - 1;
        if (f.size() - 1 != dim) return false;
        row.resize(dim);
        for (std::size_t c = 0; c < dim; ++c) {
          if (!parse_real(f[c + 1], row[c]) || !std::isfinite(row[c])) return false;
        }
        return true;
      });
  if (rows.empty()) throw InputError(source + ": no points");
  return PointCloud::from_rows(rows);
}

PointCloud parse_cloud_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_cloud(in, path.string());
}

std::vector<long long> parse_indexed_integers(std::istream& in, const std::string& source) {
  return read_indexed<long long>(in, source,
                                 [](const std::vector<std::string_view>& f, long long& v) {
                                   return f.size() == 2 && parse_integer(f[1], v);
                                 });
}

std::vector<long long> parse_indexed_integers_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_indexed_integers(in, path.string());
}

// ---------------------------------------------------------------------------

void write_series_csv(const std::filesystem::path& path, const ScalarSeries& s) {
  auto out = open_output(path);
  out << "value\n";
  for (double v : s.values) out << format_double(v) << '\n';
}

void write_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud) {
  auto out = open_output(path);
  out << 't';
  for (std::size_t c = 0; c < cloud.dim(); ++c) out << ",x" << c;
  out << '\n';
  for (Index t = 0; t < cloud.size(); ++t) {
    out << t;
    for (double v : cloud[t]) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_histogram_csv(const std::filesystem::path& path, const Histogram& h) {
  auto out = open_output(path);
  out << "bin_left,bin_right,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out << format_double(h.edges[i]) << ',' << format_double(h.edges[i + 1]) << ',' << h.counts[i]
        << '\n';
  }
}

void write_indexed_csv(const std::filesystem::path& path, const std::string& header,
                       std::span<const long long> values) {
  auto out = open_output(path);
  out << header << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << values[i] << '\n';
}

void write_indexed_csv(const std::filesystem::path& path, const std::string& header,
                       std::span<const double> values, std::size_t first) {
  auto out = open_output(path);
  out << header << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << first + i << ',' << format_double(values[i]) << '\n';
  }
}

void write_key_values(const std::filesystem::path& path, const KeyValues& kv) {
  auto out = open_output(path);
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& source) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) fail_line(source, number, "expected key=value");
    const auto key = trim(text.substr(0, eq));
    if (key.empty()) fail_line(source, number, "empty key");
    out[std::string(key)] = std::string(trim(text.substr(eq + 1)));
  }
  return out;
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_key_values(in, path.string());
}

KeyValues gap_report_entries(const GapReport& g) {
  KeyValues kv{{"bimodal", g.bimodal ? "true" : "false"}};
  if (g.bimodal) {
    kv.emplace_back("gap_low", format_double(g.gap_low));
    kv.emplace_back("gap_high", format_double(g.gap_high));
    kv.emplace_back("epsilon", format_double(g.epsilon));
  } else {
    kv.emplace_back("gap_low", "nan");
    kv.emplace_back("gap_high", "nan");
    kv.emplace_back("epsilon", "nan");
  }
  return kv;
}

}  // namespace ifsr
