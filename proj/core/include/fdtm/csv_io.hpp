#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fdtm/graph.hpp"
#include "fdtm/measures.hpp"
#include "fdtm/paths.hpp"

namespace fdtm::io {

/// Shortest round-trip-safe text for a double: 17 significant digits.
std::string format_double(double v);

/// Comma-separated numbers; throws InvalidInput naming the bad field.
std::vector<double> parse_row(std::string_view line);

/// One point per row, no header. Blank lines and lines starting with '#' are
/// skipped. Throws IoError with the 1-based row number on malformed input.
PointCloud read_point_cloud(const std::string& path);
PointCloud read_point_cloud(std::istream& in, const std::string& name);
/// Same layout with the mass as last column.
WeightedMeasure read_measure(const std::string& path);
WeightedMeasure read_measure(std::istream& in, const std::string& name);

void write_point_cloud(std::ostream& out, const PointCloud& cloud);
void write_measure(std::ostream& out, const WeightedMeasure& measure);
/// Rows `i,j,weight`.
void write_graph(std::ostream& out, const MetricGraph& graph);
/// `# distance=<value>` then the polyline points.
void write_geodesic(std::ostream& out, const GeodesicResult& geodesic);

using Metadata = std::vector<std::pair<std::string, std::string>>;
/// `# key=value` lines.
void write_metadata(std::ostream& out, const Metadata& metadata);

/// Opens `path` for writing or throws IoError mentioning the path.
std::ofstream open_output(const std::string& path);

}  // namespace fdtm::io
