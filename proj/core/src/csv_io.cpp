#include "fdtm/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "fdtm/error.hpp"

namespace fdtm::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

/// Reads data rows; every row must have the same arity (>= min_fields).
std::vector<std::vector<double>> read_rows(std::istream& in, const std::string& name, std::size_t min_fields) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<double> values;
    try {
      values = parse_row(t);
    } catch (const InvalidInput& e) {
      throw IoError(name + ": row " + std::to_string(row) + ": " + e.what());
    }
    if (values.size() < min_fields)
      throw IoError(name + ": row " + std::to_string(row) + ": expected at least " + std::to_string(min_fields) +
                    " fields, found " + std::to_string(values.size()));
    if (!rows.empty() && values.size() != rows.front().size())
      throw IoError(name + ": row " + std::to_string(row) + ": expected " + std::to_string(rows.front().size()) +
                    " fields, found " + std::to_string(values.size()));
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw IoError(name + ": no data rows");
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

std::vector<double> parse_row(std::string_view line) {
  std::vector<double> values;
  std::size_t field = 0;
  for (;;) {
    ++field;
    const auto comma = line.find(',');
    const auto token = trim(line.substr(0, comma));
    double v = 0.0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (token.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
      throw InvalidInput("field " + std::to_string(field) + " is not a finite number: '" + std::string(token) + "'");
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return values;
}

PointCloud read_point_cloud(std::istream& in, const std::string& name) {
  const auto rows = read_rows(in, name, 1);
  PointCloud cloud(rows.front().size());
  cloud.reserve(rows.size());
  for (const auto& r : rows) cloud.push_back(r);
  return cloud;
}

PointCloud read_point_cloud(const std::string& path) {
  auto in = open_input(path);
  return read_point_cloud(in, path);
}

WeightedMeasure read_measure(std::istream& in, const std::string& name) {
  const auto rows = read_rows(in, name, 2);
  PointCloud cloud(rows.front().size() - 1);
  std::vector<double> masses;
  for (const auto& r : rows) {
    cloud.push_back(std::span<const double>(r.data(), r.size() - 1));
    masses.push_back(r.back());
  }
  try {
    return WeightedMeasure(std::move(cloud), std::move(masses));
  } catch (const InvalidInput& e) {
    throw IoError(name + ": " + e.what());
  }
}

WeightedMeasure read_measure(const std::string& path) {
  auto in = open_input(path);
  return read_measure(in, path);
}

namespace {

void write_point(std::ostream& out, PointView p) {
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (a) out << ',';
    out << format_double(p[a]);
  }
}

}  // namespace

void write_point_cloud(std::ostream& out, const PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    write_point(out, cloud[i]);
    out << '\n';
  }
}

void write_measure(std::ostream& out, const WeightedMeasure& measure) {
  for (std::size_t i = 0; i < measure.size(); ++i) {
    write_point(out, measure.support()[i]);
    out << ',' << format_double(measure.masses()[i]) << '\n';
  }
}

void write_graph(std::ostream& out, const MetricGraph& graph) {
  for (const Edge& e : graph.edges()) out << e.i << ',' << e.j << ',' << format_double(e.weight) << '\n';
}

void write_geodesic(std::ostream& out, const GeodesicResult& geodesic) {
  out << "# distance=" << format_double(geodesic.distance) << '\n';
  write_point_cloud(out, geodesic.polyline);
}

void write_metadata(std::ostream& out, const Metadata& metadata) {
  for (const auto& [key, value] : metadata) out << "# " << key << '=' << value << '\n';
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.precision(17);
  return out;
}

}  // namespace fdtm::io
