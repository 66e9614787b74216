#include "fdtm_cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "fdtm/csv_io.hpp"
#include "fdtm/dtm.hpp"
#include "fdtm/error.hpp"
#include "fdtm/experiments.hpp"
#include "fdtm/graph.hpp"
#include "fdtm/paths.hpp"
#include "fdtm/validation.hpp"
#include "fdtm/version.hpp"

namespace fdtm::cli {

namespace {

using json = nlohmann::json;

/// Raw flag values; unset means "take it from the JSON config, else the default".
struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> input;
  std::optional<std::string> output;
  std::optional<std::string> queries;
  std::optional<std::string> geodesic;
  std::optional<std::string> x;
  std::optional<std::string> y;
  std::optional<double> m;
  std::optional<double> p;
  std::optional<double> beta;
  std::optional<std::string> graph;
  std::optional<std::size_t> k;
  std::optional<std::size_t> cones;
  std::optional<std::string> weights;
  std::optional<std::size_t> subdiv;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> name;
  std::optional<std::string> n;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> quadrature;
  std::optional<std::size_t> grid;
  bool weighted = false;
  bool inject_fault = false;
};

const std::set<std::string> kConfigKeys{"input", "output", "queries", "geodesic", "x",       "y",      "m",
                                        "p",     "beta",   "graph",   "k",        "cones",   "weights", "subdiv",
                                        "alpha", "seed",   "threads", "name",     "n",       "reps",   "quadrature",
                                        "grid",  "weighted"};

/// Flag > JSON config > default.
class Settings {
 public:
  explicit Settings(const Flags& flags) : flags_(flags) {
    if (!flags.config) return;
    std::ifstream in(*flags.config);
    if (!in) throw IoError("cannot open config '" + *flags.config + "'");
    try {
      config_ = json::parse(in);
    } catch (const json::exception& e) {
      throw IoError("config '" + *flags.config + "': " + e.what());
    }
    if (!config_.is_object()) throw IoError("config '" + *flags.config + "' must hold a JSON object");
    for (const auto& [key, _] : config_.items())
      if (!kConfigKeys.contains(key)) throw InvalidInput("config '" + *flags.config + "': unknown key '" + key + "'");
  }

  template <typename T>
  std::optional<T> find(const std::optional<T>& flag, const char* key) const {
    if (flag) return flag;
    if (!config_.contains(key)) return std::nullopt;
    try {
      return config_.at(key).get<T>();
    } catch (const json::exception&) {
      throw InvalidInput(std::string("config key '") + key + "' has the wrong type");
    }
  }

  template <typename T>
  T get(const std::optional<T>& flag, const char* key, T fallback) const {
    return find(flag, key).value_or(fallback);
  }

  /// Point given as "a,b,..." on the command line or as a string or number
  /// array in the config.
  std::optional<Point> point(const std::optional<std::string>& flag, const char* key) const {
    if (flag) return parse_point(*flag, key);
    if (!config_.contains(key)) return std::nullopt;
    const json& v = config_.at(key);
    if (v.is_string()) return parse_point(v.get<std::string>(), key);
    try {
      return v.get<Point>();
    } catch (const json::exception&) {
      throw InvalidInput(std::string("config key '") + key + "' must be a point");
    }
  }

  bool weighted() const { return flags_.weighted || (config_.contains("weighted") && config_.at("weighted").get<bool>()); }

  DtmParams params() const {
    DtmParams params;
    params.m = get(flags_.m, "m", params.m);
    params.p = get(flags_.p, "p", params.p);
    params.beta = get(flags_.beta, "beta", params.beta);
    params.validate();
    return params;
  }

  const Flags& flags() const { return flags_; }

 private:
  static Point parse_point(const std::string& text, const char* key) {
    try {
      return io::parse_row(text);
    } catch (const InvalidInput& e) {
      throw InvalidInput(std::string("--") + key + ": " + e.what());
    }
  }

  const Flags& flags_;
  json config_;
};

std::optional<TopologyKind> parse_topology(const std::optional<std::string>& s) {
  if (!s) return std::nullopt;
  if (*s == "complete") return TopologyKind::Complete;
  if (*s == "knn") return TopologyKind::KNearest;
  if (*s == "yao") return TopologyKind::Yao;
  throw InvalidInput("--graph must be one of complete, knn, yao (got '" + *s + "')");
}

WeightKind parse_weights(const std::optional<std::string>& s) {
  if (!s || *s == "subdiv") return WeightKind::Subdivided;
  if (*s == "avg") return WeightKind::EndpointAverage;
  if (*s == "fermat") return WeightKind::Fermat;
  throw InvalidInput("--weights must be one of subdiv, avg, fermat (got '" + *s + "')");
}

ExperimentKind parse_experiment(const std::string& s) {
  if (s == "circle") return ExperimentKind::CircleConvergence;
  if (s == "ring") return ExperimentKind::RingOffset;
  if (s == "geodesic") return ExperimentKind::GeodesicDump;
  throw InvalidInput("--name must be one of circle, ring, geodesic (got '" + s + "')");
}

/// "128..4096" (doubling) or a comma-separated list.
std::vector<std::size_t> parse_sizes(const std::string& s) {
  auto to_size = [&](const std::string& token) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(token, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != token.size() || token.empty() || token.front() == '-')
      throw InvalidInput("--n: '" + token + "' is not a sample size");
    return static_cast<std::size_t>(v);
  };
  std::vector<std::size_t> sizes;
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const std::size_t lo = to_size(s.substr(0, dots));
    const std::size_t hi = to_size(s.substr(dots + 2));
    if (lo == 0 || hi < lo) throw InvalidInput("--n: range '" + s + "' is empty");
    for (std::size_t v = lo; v <= hi; v *= 2) sizes.push_back(v);
  } else {
    std::stringstream ss(s);
    for (std::string token; std::getline(ss, token, ',');) sizes.push_back(to_size(token));
  }
  return sizes;
}

struct GraphChoice {
  GraphTopology topology;
  WeightMode weights;
};

/// Topology and weights for the single-cloud commands; default complete graph.
GraphChoice resolve_graph(const Settings& s, std::size_t n) {
  const auto kind = parse_topology(s.find(s.flags().graph, "graph")).value_or(TopologyKind::Complete);
  GraphChoice choice{Complete{}, SubdividedDtm{}};
  switch (kind) {
    case TopologyKind::Complete:
      break;
    case TopologyKind::KNearest:
      choice.topology = KNearest{s.get(s.flags().k, "k", default_log_parameter(n))};
      break;
    case TopologyKind::Yao:
      choice.topology = Yao{s.get(s.flags().cones, "cones", default_log_parameter(n))};
      break;
  }
  switch (parse_weights(s.find(s.flags().weights, "weights"))) {
    case WeightKind::Subdivided:
      choice.weights = SubdividedDtm{s.get(s.flags().subdiv, "subdiv", default_log_parameter(n))};
      break;
    case WeightKind::EndpointAverage:
      choice.weights = EndpointAverageDtm{};
      break;
    case WeightKind::Fermat:
      choice.weights = SampleFermat{s.get(s.flags().alpha, "alpha", 1.1)};
      break;
  }
  validate(choice.topology);
  validate(choice.weights);
  return choice;
}

WeightedMeasure load_measure(const Settings& s) {
  const auto input = s.find(s.flags().input, "input");
  if (!input) throw InvalidInput("--input is required");
  if (s.weighted()) return io::read_measure(*input);
  return make_empirical(io::read_point_cloud(*input));
}

unsigned thread_count(const Settings& s) { return s.get(s.flags().threads, "threads", 0U); }

/// Writes through `write` to the configured path, or to `out` if none.
template <typename Write>
void emit(const std::optional<std::string>& path, std::ostream& out, Write&& write) {
  if (!path) {
    write(out);
    return;
  }
  auto file = io::open_output(*path);
  write(file);
  file.flush();
  if (!file) throw IoError("failed while writing '" + *path + "'");
}

int cmd_dtm(const Settings& s, std::ostream& out) {
  const DtmParams params = s.params();
  const WeightedMeasure measure = load_measure(s);
  PointCloud queries = measure.support();
  if (const auto x = s.point(s.flags().x, "x")) {
    queries = PointCloud(x->size());
    queries.push_back(*x);
  } else if (const auto path = s.find(s.flags().queries, "queries")) {
    queries = io::read_point_cloud(*path);
  }
  const SpatialIndex index(measure);
  if (queries.dim() != index.dim()) throw InvalidInput("query dimension does not match the input");
  const auto values = dtm_batch(index, queries, params, thread_count(s));
  emit(s.find(s.flags().output, "output"), out, [&](std::ostream& o) {
    for (double v : values) o << io::format_double(v) << '\n';
  });
  return kOk;
}

GeodesicResult run_query(const Settings& s) {
  const DtmParams params = s.params();
  const auto x = s.point(s.flags().x, "x");
  const auto y = s.point(s.flags().y, "y");
  if (!x || !y) throw InvalidInput("--x and --y are required");
  const WeightedMeasure measure = load_measure(s);
  const GraphChoice choice = resolve_graph(s, measure.size());
  const SpatialIndex index(measure);
  if (x->size() != index.dim() || y->size() != index.dim())
    throw InvalidInput("query points must have the input's dimension " + std::to_string(index.dim()));
  const MetricGraph graph =
      build_graph(measure.support(), index, choice.topology, choice.weights, params, thread_count(s));
  return fdtm_query(index, graph, *x, *y, params);
}

int cmd_distance(const Settings& s, std::ostream& out) {
  const GeodesicResult result = run_query(s);
  if (const auto path = s.find(s.flags().geodesic, "geodesic"))
    emit(path, out, [&](std::ostream& o) { io::write_geodesic(o, result); });
  out << io::format_double(result.distance) << '\n';
  return kOk;
}

int cmd_geodesic(const Settings& s, std::ostream& out) {
  const GeodesicResult result = run_query(s);
  emit(s.find(s.flags().output, "output"), out, [&](std::ostream& o) { io::write_geodesic(o, result); });
  return kOk;
}

int cmd_graph(const Settings& s, std::ostream& out) {
  const DtmParams params = s.params();
  const WeightedMeasure measure = load_measure(s);
  const GraphChoice choice = resolve_graph(s, measure.size());
  const MetricGraph graph = build_graph(measure, choice.topology, choice.weights, params, thread_count(s));
  emit(s.find(s.flags().output, "output"), out, [&](std::ostream& o) { io::write_graph(o, graph); });
  return kOk;
}

int cmd_experiment(const Settings& s, std::ostream& out) {
  const Flags& f = s.flags();
  ExperimentConfig config;
  const auto name = s.find(f.name, "name");
  if (!name) throw InvalidInput("--name is required");
  config.experiment = parse_experiment(*name);
  config.params = s.params();
  if (const auto n = s.find(f.n, "n")) config.sample_sizes = parse_sizes(*n);
  config.repetitions = s.get(f.reps, "reps", config.repetitions);
  config.seed = s.get(f.seed, "seed", config.seed);
  config.topology = parse_topology(s.find(f.graph, "graph"));
  if (config.topology == TopologyKind::KNearest) config.topology_parameter = s.find(f.k, "k");
  if (config.topology == TopologyKind::Yao || !config.topology) config.topology_parameter = s.find(f.cones, "cones");
  config.weights = parse_weights(s.find(f.weights, "weights"));
  config.subdivisions = s.find(f.subdiv, "subdiv");
  config.fermat_alpha = s.get(f.alpha, "alpha", config.fermat_alpha);
  config.output_path = s.get(f.output, "output", std::string());
  config.threads = thread_count(s);
  config.quadrature_points = s.get(f.quadrature, "quadrature", config.quadrature_points);
  config.grid_resolution = s.get(f.grid, "grid", config.grid_resolution);
  if (const auto x = s.point(f.x, "x")) config.query_x = *x;
  if (const auto y = s.point(f.y, "y")) config.query_y = *y;
  config.sweep = !s.find(f.m, "m") && !s.find(f.beta, "beta");
  config.validate();
  run_experiment(config, out);
  return kOk;
}

int cmd_validate(const Settings& s, std::ostream& out) {
  ValidationOptions options;
  options.seed = s.get(s.flags().seed, "seed", options.seed);
  options.inject_fault = s.flags().inject_fault;
  const auto results = run_validation(options);
  print_table(out, results);
  return all_passed(results) ? kOk : kCheckFailed;
}

void add_params(CLI::App* cmd, Flags& f) {
  cmd->add_option("--m", f.m, "DTM mass fraction in (0, 1] (default 0.1)");
  cmd->add_option("--p", f.p, "DTM exponent >= 1 (default 2)");
  cmd->add_option("--beta", f.beta, "path exponent >= 1 (default 2)");
  cmd->add_option("--threads", f.threads, "worker threads, 0 = all cores (default 0)");
  cmd->add_option("--config", f.config, "JSON file with defaults for any flag");
}

void add_input(CLI::App* cmd, Flags& f) {
  cmd->add_option("--input,-i", f.input, "point cloud CSV");
  cmd->add_flag("--weighted", f.weighted, "input CSV carries the mass in its last column");
}

void add_graph(CLI::App* cmd, Flags& f) {
  cmd->add_option("--graph", f.graph, "edge topology: complete, knn or yao");
  cmd->add_option("--k", f.k, "neighbours per vertex for knn (default max(6, ceil(log2 n)))");
  cmd->add_option("--cones", f.cones, "cones per vertex for yao (default max(6, ceil(log2 n)))");
  cmd->add_option("--weights", f.weights, "edge weights: subdiv, avg or fermat (default subdiv)");
  cmd->add_option("--subdiv", f.subdiv, "midpoints per edge for subdiv (default max(6, ceil(log2 n)))");
  cmd->add_option("--alpha", f.alpha, "sample Fermat exponent > 1 (default 1.1)");
}

void add_queries(CLI::App* cmd, Flags& f) {
  cmd->add_option("--x", f.x, "first query point, comma-separated (use --x=-1,0 for negatives)");
  cmd->add_option("--y", f.y, "second query point");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Distance-to-measure and Fermat distance-to-measure on point clouds", "fdtm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version_string()));

  auto* dtm = app.add_subcommand("dtm", "DTM values at query points (default: the input points)");
  add_input(dtm, f);
  add_params(dtm, f);
  dtm->add_option("--queries", f.queries, "CSV of query points");
  dtm->add_option("--x", f.x, "single query point");
  dtm->add_option("--output,-o", f.output, "write values here instead of standard output");

  auto* distance = app.add_subcommand("distance", "empirical FDTM between two points");
  add_input(distance, f);
  add_params(distance, f);
  add_graph(distance, f);
  add_queries(distance, f);
  distance->add_option("--geodesic", f.geodesic, "also write the geodesic polyline CSV here");

  auto* geodesic = app.add_subcommand("geodesic", "geodesic polyline between two points as CSV");
  add_input(geodesic, f);
  add_params(geodesic, f);
  add_graph(geodesic, f);
  add_queries(geodesic, f);
  geodesic->add_option("--output,-o", f.output, "write the CSV here instead of standard output");

  auto* graph = app.add_subcommand("graph", "edge list i,j,weight of the FDTM graph");
  add_input(graph, f);
  add_params(graph, f);
  add_graph(graph, f);
  graph->add_option("--output,-o", f.output, "write the CSV here instead of standard output");

  auto* experiment = app.add_subcommand("experiment", "circle convergence, ring shortcut or geodesic dump study");
  add_params(experiment, f);
  add_graph(experiment, f);
  add_queries(experiment, f);
  experiment->add_option("--name", f.name, "circle, ring or geodesic");
  experiment->add_option("--n", f.n, "sample sizes: 128..4096 (doubling) or a comma list");
  experiment->add_option("--reps", f.reps, "repetitions per sample size (default 50)");
  experiment->add_option("--seed", f.seed, "RNG seed (default 0)");
  experiment->add_option("--output,-o", f.output, "output CSV (geodesic: file name stem)");
  experiment->add_option("--quadrature", f.quadrature, "analytic reference quadrature points (default 2000)");
  experiment->add_option("--grid", f.grid, "DTM grid cells per axis for the geodesic dump (default 200)");

  auto* validate = app.add_subcommand("validate", "run the oracle and property suite");
  validate->add_option("--seed", f.seed, "RNG seed");
  validate->add_option("--config", f.config, "JSON file with defaults for any flag");
  validate->add_flag("--inject-fault", f.inject_fault, "corrupt one distance to exercise the failure path")
      ->group("");

  std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << version_string() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "fdtm: " << e.what() << '\n';
    return kBadInput;
  }

  try {
    const Settings settings(f);
    if (*dtm) return cmd_dtm(settings, out);
    if (*distance) return cmd_distance(settings, out);
    if (*geodesic) return cmd_geodesic(settings, out);
    if (*graph) return cmd_graph(settings, out);
    if (*experiment) return cmd_experiment(settings, out);
    if (*validate) return cmd_validate(settings, out);
  } catch (const InvalidInput& e) {
    err << "fdtm: " << e.what() << '\n';
    return kBadInput;
  } catch (const Unsupported& e) {
    err << "fdtm: " << e.what() << '\n';
    return kBadInput;
  } catch (const IoError& e) {
    err << "fdtm: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << "fdtm: internal error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kBadInput;
}

}  // namespace fdtm::cli
