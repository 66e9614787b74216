#include "fdtm/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "fdtm/dtm.hpp"
#include "fdtm/error.hpp"
#include "fdtm/parallel.hpp"
#include "fdtm/paths.hpp"
#include "fdtm/random.hpp"
#include "fdtm/version.hpp"

namespace fdtm {

namespace {

using io::format_double;

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanAndError summarize(const std::vector<double>& values) {
  MeanAndError out;
  const auto count = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / count;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std_error = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
  }
  return out;
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto count = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / count;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string s;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(sizes[i]);
  }
  return s;
}

std::string join_point(const Point& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ' ';
    s += format_double(p[i]);
  }
  return s;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void check_written(std::ostream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::CircleConvergence:
      return "circle";
    case ExperimentKind::RingOffset:
      return "ring";
    case ExperimentKind::GeodesicDump:
      return "geodesic";
  }
  return "?";
}

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::Complete:
      return "complete";
    case TopologyKind::KNearest:
      return "knn";
    case TopologyKind::Yao:
      return "yao";
  }
  return "?";
}

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::Subdivided:
      return "subdiv";
    case WeightKind::EndpointAverage:
      return "avg";
    case WeightKind::Fermat:
      return "fermat";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  params.validate();
  if (sample_sizes.empty()) throw InvalidInput("sample_sizes must not be empty");
  for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
    if (sample_sizes[i] < 4) throw InvalidInput("sample sizes must be at least 4");
    if (i > 0 && sample_sizes[i] <= sample_sizes[i - 1]) throw InvalidInput("sample_sizes must be increasing");
  }
  if (repetitions < 1) throw InvalidInput("repetitions must be >= 1");
  if (topology_parameter && *topology_parameter < 1) throw InvalidInput("k / cone count must be >= 1");
  if (topology == TopologyKind::Yao && topology_parameter && *topology_parameter < 2)
    throw InvalidInput("yao graph needs at least 2 cones");
  if (subdivisions && *subdivisions < 1) throw InvalidInput("subdivision count must be >= 1");
  if (!(fermat_alpha > 1.0) || !std::isfinite(fermat_alpha)) throw InvalidInput("fermat_alpha must be > 1");
  if (quadrature_points < 100) throw InvalidInput("quadrature_points must be >= 100");
  if (!(ring_inner_radius > 0.0) || !(ring_outer_radius > ring_inner_radius))
    throw InvalidInput("ring radii must satisfy 0 < inner < outer");
  if (grid_resolution < 1) throw InvalidInput("grid_resolution must be >= 1");
  if (query_x.size() != 2 || query_y.size() != 2) throw InvalidInput("query points must be 2-dimensional");
}

GraphTopology ExperimentConfig::topology_for(std::size_t n) const {
  const std::size_t parameter = topology_parameter.value_or(default_log_parameter(n));
  switch (topology.value_or(TopologyKind::Yao)) {
    case TopologyKind::Complete:
      return Complete{};
    case TopologyKind::KNearest:
      return KNearest{parameter};
    case TopologyKind::Yao:
      return Yao{parameter};
  }
  return Complete{};
}

WeightMode ExperimentConfig::weights_for(std::size_t n) const {
  switch (weights) {
    case WeightKind::Subdivided:
      return SubdividedDtm{subdivisions.value_or(default_log_parameter(n))};
    case WeightKind::EndpointAverage:
      return EndpointAverageDtm{};
    case WeightKind::Fermat:
      return SampleFermat{fermat_alpha};
  }
  return EndpointAverageDtm{};
}

io::Metadata ExperimentConfig::metadata() const {
  const std::string log_default = "max(6,ceil(log2 n))";
  io::Metadata md{
      {"experiment", to_string(experiment)},
      {"version", std::string(version_string())},
      {"seed", std::to_string(seed)},
      {"sample_sizes", join_sizes(sample_sizes)},
      {"repetitions", std::to_string(repetitions)},
      {"m", format_double(params.m)},
      {"p", format_double(params.p)},
      {"beta", format_double(params.beta)},
      {"graph", to_string(topology.value_or(TopologyKind::Yao))},
      {"topology_parameter", topology_parameter ? std::to_string(*topology_parameter) : log_default},
      {"weights", to_string(weights)},
      {"subdivisions", subdivisions ? std::to_string(*subdivisions) : log_default},
      {"fermat_alpha", format_double(fermat_alpha)},
  };
  switch (experiment) {
    case ExperimentKind::CircleConvergence:
      md.emplace_back("quadrature_points", std::to_string(quadrature_points));
      md.emplace_back("queries", "(1 0) (-1 0)");
      md.emplace_back("error_metric", "mean over repetitions of |empirical - analytic equal-chord FDTM|");
      break;
    case ExperimentKind::RingOffset: {
      md.emplace_back("ring_inner_radius", format_double(ring_inner_radius));
      md.emplace_back("ring_outer_radius", format_double(ring_outer_radius));
      const auto [a, b] = ring_query_points(*this);
      md.emplace_back("queries", "(" + join_point(a) + ") (" + join_point(b) + ")");
      md.emplace_back("offset_metric", "mean over repetitions of |l - l'| / l");
      break;
    }
    case ExperimentKind::GeodesicDump:
      md.emplace_back("grid_resolution", std::to_string(grid_resolution));
      md.emplace_back("queries", "(" + join_point(query_x) + ") (" + join_point(query_y) + ")");
      md.emplace_back("sweep", sweep ? "m in {0.2 0.1 0.05} x beta in {1 2}" : "off");
      break;
  }
  return md;
}

std::uint64_t derive_seed(std::uint64_t seed, std::size_t n, std::size_t rep) noexcept {
  return splitmix64(splitmix64(seed ^ 0x5851f42d4c957f2dULL) ^ (static_cast<std::uint64_t>(n) << 24) ^
                    static_cast<std::uint64_t>(rep));
}

CircleConvergenceResult run_circle_convergence(const ExperimentConfig& config) {
  config.validate();
  CircleConvergenceResult result;
  result.reference = oracles::circle_fdtm_analytic(std::numbers::pi, config.params, config.quadrature_points);

  const std::size_t sizes = config.sample_sizes.size();
  const std::size_t reps = config.repetitions;
  std::vector<double> distances(sizes * reps);
  const Point x{1.0, 0.0};
  const Point y{-1.0, 0.0};
  parallel_for(sizes * reps, config.threads, [&](std::size_t task) {
    const std::size_t n = config.sample_sizes[task / reps];
    const std::size_t rep = task % reps;
    const PointCloud cloud = sample_circle(n, derive_seed(config.seed, n, rep));
    const SpatialIndex index(cloud);
    const MetricGraph graph =
        build_graph(cloud, index, config.topology_for(n), config.weights_for(n), config.params, 1);
    distances[task] = fdtm_query(index, graph, x, y, config.params).distance;
  });

  std::vector<double> log_n;
  std::vector<double> log_err;
  for (std::size_t s = 0; s < sizes; ++s) {
    std::vector<double> errors(reps);
    std::vector<double> dists(distances.begin() + static_cast<std::ptrdiff_t>(s * reps),
                              distances.begin() + static_cast<std::ptrdiff_t>((s + 1) * reps));
    for (std::size_t r = 0; r < reps; ++r) errors[r] = std::abs(dists[r] - result.reference.value);
    const auto err = summarize(errors);
    CircleRow row;
    row.n = config.sample_sizes[s];
    row.mean_abs_error = err.mean;
    row.std_error = err.std_error;
    row.mean_distance = summarize(dists).mean;
    result.rows.push_back(row);
    log_n.push_back(std::log(static_cast<double>(row.n)));
    log_err.push_back(std::log(row.mean_abs_error));
  }
  result.slope = sizes > 1 ? least_squares_slope(log_n, log_err) : 0.0;
  return result;
}

void write_csv(std::ostream& out, const ExperimentConfig& config, const CircleConvergenceResult& result) {
  io::write_metadata(out, config.metadata());
  io::write_metadata(out, {{"reference", format_double(result.reference.value)},
                           {"reference_chords", std::to_string(result.reference.chords)},
                           {"reference_chord_cap_reached", result.reference.cap_reached ? "true" : "false"},
                           {"slope", format_double(result.slope)}});
  out << "n,mean_abs_error,std_error,mean_distance\n";
  for (const auto& row : result.rows)
    out << row.n << ',' << format_double(row.mean_abs_error) << ',' << format_double(row.std_error) << ','
        << format_double(row.mean_distance) << '\n';
}

std::pair<Point, Point> ring_query_points(const ExperimentConfig& config) {
  const double c = 0.5 * (config.ring_inner_radius + config.ring_outer_radius);
  return {Point{0.0, -c}, Point{0.0, c}};
}

RingOffsetResult run_ring_offset(const ExperimentConfig& config) {
  config.validate();
  const std::size_t sizes = config.sample_sizes.size();
  const std::size_t reps = config.repetitions;
  const auto [qa, qb] = ring_query_points(config);
  // Per task: FDTM without/with shortcut, Fermat without/with shortcut.
  std::vector<std::array<double, 4>> lengths(sizes * reps);
  parallel_for(sizes * reps, config.threads, [&](std::size_t task) {
    const std::size_t n = config.sample_sizes[task / reps];
    const std::size_t rep = task % reps;
    RingOptions options;
    options.n = n;
    options.inner_radius = config.ring_inner_radius;
    options.outer_radius = config.ring_outer_radius;
    options.seed = derive_seed(config.seed, n, rep);
    for (int with_shortcut = 0; with_shortcut < 2; ++with_shortcut) {
      options.shortcut = with_shortcut == 1;
      const PointCloud cloud = sample_ring(options);
      const SpatialIndex index(cloud);
      PointCloud vertices = cloud;
      vertices.push_back(qa);
      vertices.push_back(qb);
      const GraphTopology topology = config.topology_for(n);
      const MetricGraph fdtm_graph =
          build_graph(vertices, index, topology, config.weights_for(n), config.params, 1);
      const MetricGraph fermat_graph =
          build_graph(vertices, index, topology, SampleFermat{config.fermat_alpha}, config.params, 1);
      lengths[task][with_shortcut] = single_source(fdtm_graph, n).dist[n + 1];
      lengths[task][2 + with_shortcut] = single_source(fermat_graph, n).dist[n + 1];
    }
  });

  RingOffsetResult result;
  for (std::size_t s = 0; s < sizes; ++s) {
    std::vector<double> fdtm(reps);
    std::vector<double> fermat(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& l = lengths[s * reps + r];
      fdtm[r] = std::abs(l[0] - l[1]) / l[0];
      fermat[r] = std::abs(l[2] - l[3]) / l[2];
    }
    RingOptions options;
    options.n = config.sample_sizes[s];
    options.shortcut = true;
    RingRow row;
    row.n = options.n;
    row.shortcut_points = ring_shortcut_count(options);
    const auto f = summarize(fdtm);
    const auto g = summarize(fermat);
    row.fdtm_rel_offset = f.mean;
    row.fdtm_std_error = f.std_error;
    row.fermat_rel_offset = g.mean;
    row.fermat_std_error = g.std_error;
    result.rows.push_back(row);
  }
  return result;
}

void write_csv(std::ostream& out, const ExperimentConfig& config, const RingOffsetResult& result) {
  io::write_metadata(out, config.metadata());
  out << "n,fdtm_rel_offset,fermat_rel_offset,fdtm_std_error,fermat_std_error,shortcut_points\n";
  for (const auto& row : result.rows)
    out << row.n << ',' << format_double(row.fdtm_rel_offset) << ',' << format_double(row.fermat_rel_offset) << ','
        << format_double(row.fdtm_std_error) << ',' << format_double(row.fermat_std_error) << ','
        << row.shortcut_points << '\n';
}

DtmGrid dtm_grid(const SpatialIndex& index, const DtmParams& params, double x_min, double x_max, double y_min,
                 double y_max, std::size_t nx, std::size_t ny, unsigned threads) {
  if (index.dim() != 2) throw InvalidInput("DTM grids need a 2-dimensional measure");
  if (nx < 1 || ny < 1) throw InvalidInput("grid resolution must be >= 1");
  if (!(x_max > x_min) || !(y_max > y_min)) throw InvalidInput("empty grid bounding box");
  DtmGrid grid{nx, ny, x_min, x_max, y_min, y_max, {}};
  PointCloud centres(2);
  centres.reserve(nx * ny);
  const double hx = (x_max - x_min) / static_cast<double>(nx);
  const double hy = (y_max - y_min) / static_cast<double>(ny);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const double c[2] = {x_min + (static_cast<double>(i) + 0.5) * hx, y_min + (static_cast<double>(j) + 0.5) * hy};
      centres.push_back(c);
    }
  grid.values = dtm_batch(index, centres, params, threads);
  return grid;
}

void write_grid(std::ostream& out, const DtmGrid& grid) {
  io::write_metadata(out, {{"nx", std::to_string(grid.nx)},
                           {"ny", std::to_string(grid.ny)},
                           {"x_min", format_double(grid.x_min)},
                           {"x_max", format_double(grid.x_max)},
                           {"y_min", format_double(grid.y_min)},
                           {"y_max", format_double(grid.y_max)}});
  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      if (i) out << ',';
      out << format_double(grid.values[j * grid.nx + i]);
    }
    out << '\n';
  }
}

std::vector<GeodesicDumpItem> dump_geodesic(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n = config.sample_sizes.back();
  const PointCloud cloud = sample_circle(n, derive_seed(config.seed, n, 0));
  const SpatialIndex index(cloud);

  std::vector<DtmParams> sweep;
  if (config.sweep) {
    for (double m : {0.2, 0.1, 0.05})
      for (double beta : {1.0, 2.0}) sweep.push_back(DtmParams{m, config.params.p, beta});
  } else {
    sweep.push_back(config.params);
  }

  // Bounding box of the sample and the queries, padded by 10%.
  double lo[2] = {std::min(config.query_x[0], config.query_y[0]), std::min(config.query_x[1], config.query_y[1])};
  double hi[2] = {std::max(config.query_x[0], config.query_y[0]), std::max(config.query_x[1], config.query_y[1])};
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (int a = 0; a < 2; ++a) {
      lo[a] = std::min(lo[a], cloud[i][a]);
      hi[a] = std::max(hi[a], cloud[i][a]);
    }
  for (int a = 0; a < 2; ++a) {
    const double pad = 0.1 * std::max(hi[a] - lo[a], 1e-12);
    lo[a] -= pad;
    hi[a] += pad;
  }

  std::string stem = config.output_path.empty() ? std::string("geodesic") : config.output_path;
  if (stem.size() > 4 && stem.ends_with(".csv")) stem.resize(stem.size() - 4);

  std::vector<GeodesicDumpItem> items;
  for (const DtmParams& params : sweep) {
    GeodesicDumpItem item;
    item.params = params;
    const MetricGraph graph = build_graph(cloud, index, config.topology_for(n), config.weights_for(n), params,
                                          config.threads);
    item.geodesic = fdtm_query(index, graph, config.query_x, config.query_y, params);
    item.grid = dtm_grid(index, params, lo[0], hi[0], lo[1], hi[1], config.grid_resolution, config.grid_resolution,
                         config.threads);
    const std::string tag = "_m" + short_number(params.m) + "_beta" + short_number(params.beta);
    item.geodesic_path = stem + tag + "_geodesic.csv";
    item.grid_path = stem + tag + "_dtm_grid.csv";
    items.push_back(std::move(item));
  }
  return items;
}

void write_dump(const ExperimentConfig& config, const std::vector<GeodesicDumpItem>& items) {
  for (const auto& item : items) {
    io::Metadata md = config.metadata();
    md.emplace_back("item_m", format_double(item.params.m));
    md.emplace_back("item_beta", format_double(item.params.beta));
    {
      auto out = io::open_output(item.geodesic_path);
      io::write_metadata(out, md);
      io::write_geodesic(out, item.geodesic);
      check_written(out, item.geodesic_path);
    }
    {
      auto out = io::open_output(item.grid_path);
      io::write_metadata(out, md);
      write_grid(out, item.grid);
      check_written(out, item.grid_path);
    }
  }
}

double max_circle_deviation(const PointCloud& polyline) noexcept {
  double worst = 0.0;
  for (std::size_t i = 0; i < polyline.size(); ++i) worst = std::max(worst, std::abs(norm(polyline[i]) - 1.0));
  // Along a segment the norm peaks at an endpoint and bottoms out at the point
  // closest to the origin.
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    const auto a = polyline[i - 1];
    const auto b = polyline[i];
    double ab2 = 0.0;
    double dot = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      ab2 += (b[k] - a[k]) * (b[k] - a[k]);
      dot -= a[k] * (b[k] - a[k]);
    }
    const double t = ab2 > 0.0 ? std::clamp(dot / ab2, 0.0, 1.0) : 0.0;
    double closest2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double c = a[k] + t * (b[k] - a[k]);
      closest2 += c * c;
    }
    worst = std::max(worst, 1.0 - std::sqrt(closest2));
  }
  return worst;
}

std::vector<double> segment_lengths(const PointCloud& polyline) {
  std::vector<double> out;
  for (std::size_t i = 1; i < polyline.size(); ++i) out.push_back(distance(polyline[i - 1], polyline[i]));
  return out;
}

void run_experiment(const ExperimentConfig& config, std::ostream& fallback) {
  auto emit = [&](auto&& write) {
    if (config.output_path.empty()) {
      write(fallback);
      return;
    }
    auto out = io::open_output(config.output_path);
    write(out);
    check_written(out, config.output_path);
  };
  switch (config.experiment) {
    case ExperimentKind::CircleConvergence: {
      const auto result = run_circle_convergence(config);
      emit([&](std::ostream& out) { write_csv(out, config, result); });
      break;
    }
    case ExperimentKind::RingOffset: {
      const auto result = run_ring_offset(config);
      emit([&](std::ostream& out) { write_csv(out, config, result); });
      break;
    }
    case ExperimentKind::GeodesicDump: {
      const auto items = dump_geodesic(config);
      write_dump(config, items);
      for (const auto& item : items) fallback << item.geodesic_path << '\n' << item.grid_path << '\n';
      break;
    }
  }
}

}  // namespace fdtm
