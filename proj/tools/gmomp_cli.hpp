#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gmomp/gmomp.hpp"

namespace gmomp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode : int { kOk = 0, kIoOrSchema = 1, kDimension = 2, kStagnation = 3 };

struct Flags {
  fs::path config;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  std::optional<fs::path> output;
  std::optional<std::size_t> iterations;  // analyze -L
};

// Schema helpers. Every reader names the offending key on failure.
namespace schema {

inline void keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

inline const json& required(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing required key '" + key + "'");
  return j.at(key);
}

inline double number(const json& j, const std::string& key, const std::string& where, std::optional<double> def = {}) {
  if (!j.contains(key)) {
    if (def) return *def;
    required(j, key, where);
  }
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline double extended(const json& j, const std::string& key, const std::string& where, std::optional<double> def = {}) {
  if (!j.contains(key)) {
    if (def) return *def;
    required(j, key, where);
  }
  return io::extended_from(j.at(key), where + "." + key);
}

inline std::uint64_t count(const json& j, const std::string& key, const std::string& where,
                           std::optional<std::uint64_t> def = {}) {
  if (!j.contains(key)) {
    if (def) return *def;
    required(j, key, where);
  }
  const json& v = j.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw ConfigError(where + "." + key + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

// Integer, or null for "disabled".
inline std::optional<std::uint64_t> optional_count(const json& j, const std::string& key, const std::string& where,
                                                   std::optional<std::uint64_t> def) {
  if (!j.contains(key)) return def;
  if (j.at(key).is_null()) return std::nullopt;
  return count(j, key, where);
}

inline std::string text(const json& j, const std::string& key, const std::string& where,
                        std::optional<std::string> def = {}) {
  if (!j.contains(key)) {
    if (def) return *def;
    required(j, key, where);
  }
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline MetricKind metric(const json& j, const std::string& key, const std::string& where, MetricKind def) {
  if (!j.contains(key)) return def;
  try {
    return metric_from_string(text(j, key, where));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

}  // namespace schema

struct DictionarySpec {
  std::string kind;
  std::size_t samples = 0;
  std::size_t atoms = 0;
  int max_order = 1;
  double std_dev = 1.0;
  double theta = 1.0, phi = 0.0, psi = 0.0, dt = 1.0;
  fs::path atoms_path, parameters_path;
  MetricKind metric = MetricKind::absolute_1d;
};

inline DictionarySpec parse_dictionary(const json& j, const fs::path& base) {
  const std::string w = "dictionary";
  DictionarySpec d;
  d.kind = schema::text(j, "kind", w);
  if (d.kind == "identity") {
    schema::keys(j, w, {"kind", "samples"});
    d.samples = schema::count(j, "samples", w);
  } else if (d.kind == "gaussian") {
    schema::keys(j, w, {"kind", "samples", "std_dev"});
    d.samples = schema::count(j, "samples", w);
    d.std_dev = schema::number(j, "std_dev", w);
  } else if (d.kind == "gabor") {
    schema::keys(j, w, {"kind", "samples", "theta", "phi", "psi", "dt"});
    d.samples = schema::count(j, "samples", w);
    d.theta = schema::number(j, "theta", w);
    d.phi = schema::number(j, "phi", w, 0.0);
    d.psi = schema::number(j, "psi", w, 0.0);
    d.dt = schema::number(j, "dt", w, 1.0);
  } else if (d.kind == "bspline") {
    schema::keys(j, w, {"kind", "samples", "max_order", "metric"});
    d.samples = schema::count(j, "samples", w);
    d.max_order = static_cast<int>(schema::count(j, "max_order", w));
    d.metric = schema::metric(j, "metric", w, MetricKind::chebyshev);
  } else if (d.kind == "random") {
    schema::keys(j, w, {"kind", "samples", "atoms"});
    d.samples = schema::count(j, "samples", w);
    d.atoms = schema::count(j, "atoms", w);
  } else if (d.kind == "csv") {
    schema::keys(j, w, {"kind", "atoms", "parameters", "metric"});
    d.atoms_path = base / schema::text(j, "atoms", w);
    if (j.contains("parameters")) d.parameters_path = base / schema::text(j, "parameters", w);
    d.metric = schema::metric(j, "metric", w, MetricKind::absolute_1d);
  } else {
    throw ConfigError(w + ".kind: unknown dictionary kind '" + d.kind + "'");
  }
  return d;
}

// Random dictionaries draw i.i.d. standard normal entries from the run seed.
inline Dictionary build_dictionary(const DictionarySpec& d, std::uint64_t seed) {
  if (d.kind == "identity") return identity_dictionary(d.samples);
  if (d.kind == "gaussian") return gaussian_conv_dictionary(d.samples, d.std_dev);
  if (d.kind == "gabor") return gabor_conv_dictionary(d.samples, d.theta, d.phi, d.psi, d.dt);
  if (d.kind == "bspline") return bspline_dictionary(d.samples, d.max_order, d.metric);
  if (d.kind == "random") {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd a(static_cast<Eigen::Index>(d.samples), static_cast<Eigen::Index>(d.atoms));
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = normal(rng);
    return Dictionary(std::move(a), PointSpace::line(d.atoms),
                      {"random", {{"samples", static_cast<double>(d.samples)}, {"atoms", static_cast<double>(d.atoms)}}});
  }
  Eigen::MatrixXd atoms = io::read_csv(d.atoms_path);
  PointSpace params = d.parameters_path.empty() ? PointSpace::line(static_cast<std::size_t>(atoms.cols()))
                                                : io::read_point_space(d.parameters_path, d.metric);
  return Dictionary(std::move(atoms), std::move(params), {"csv", {}});
}

struct DataSpec {
  std::string kind;
  fs::path path;
  double angle = 0.0;
  std::optional<std::uint64_t> row;
  std::optional<std::uint64_t> columns;
  std::string noise = "none";
  double level = 0.0;
};

inline DataSpec parse_data(const json& j, const fs::path& base) {
  const std::string w = "data";
  DataSpec d;
  d.kind = schema::text(j, "kind", w);
  if (d.kind == "csv") {
    schema::keys(j, w, {"kind", "path"});
    d.path = base / schema::text(j, "path", w);
  } else if (d.kind == "slope") {
    schema::keys(j, w, {"kind", "angle"});
    d.angle = schema::number(j, "angle", w);
  } else if (d.kind == "row") {
    schema::keys(j, w, {"kind", "row", "columns", "noise", "level"});
    if (j.contains("row")) d.row = schema::count(j, "row", w);
    if (j.contains("columns")) d.columns = schema::count(j, "columns", w);
    d.noise = schema::text(j, "noise", w, "none");
    if (d.noise != "none" && d.noise != "uniform" && d.noise != "bernoulli")
      throw ConfigError(w + ".noise: expected none, uniform or bernoulli");
    d.level = schema::number(j, "level", w, 0.0);
  } else {
    throw ConfigError(w + ".kind: unknown data kind '" + d.kind + "'");
  }
  return d;
}

// Synthetic kinds plant X on the dictionary grid and return S = D X.
inline Eigen::MatrixXd build_data(const DataSpec& d, const Dictionary& dict, std::uint64_t seed) {
  if (d.kind == "csv") return io::read_csv(d.path);
  const auto p = static_cast<Eigen::Index>(dict.size());
  Eigen::MatrixXd x;
  if (d.kind == "slope") {
    x = make_slope_matrix(dict.size(), d.angle);
  } else {
    const auto m = static_cast<Eigen::Index>(d.columns.value_or(dict.size()));
    const auto row = static_cast<Eigen::Index>(d.row.value_or((dict.size() + 1) / 2));
    if (row < 1 || row > p) throw DimensionError("data.row " + std::to_string(row) + " outside 1.." + std::to_string(p));
    x = Eigen::MatrixXd::Zero(p, m);
    x.row(row - 1).setOnes();
    if (d.noise == "uniform") x = add_uniform_pattern_noise(x, d.level, seed);
    if (d.noise == "bernoulli") x = add_bernoulli_pattern_noise(x, d.level, seed);
  }
  return dict.atoms() * x;
}

struct SolverSpec {
  std::string method = "gm-omp";
  double sigma = kInfinity;
  double tau = kInfinity;
  double lambda_norm = 1.0;
};

inline SolverSpec parse_solver(const json& j) {
  const std::string w = "solver";
  schema::keys(j, w, {"method", "sigma", "tau", "lambda_norm"});
  SolverSpec s;
  s.method = schema::text(j, "method", w, "gm-omp");
  if (s.method != "gm-omp" && s.method != "omp" && s.method != "vectorized-omp" && s.method != "somp")
    throw ConfigError(w + ".method: expected gm-omp, omp, vectorized-omp or somp");
  s.sigma = schema::extended(j, "sigma", w, kInfinity);
  s.tau = schema::extended(j, "tau", w, kInfinity);
  s.lambda_norm = schema::extended(j, "lambda_norm", w, 1.0);
  try {
    FeasibleParams(s.sigma, s.tau);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(w + ": " + e.what());
  }
  if (!(s.lambda_norm >= 1.0)) throw ConfigError(w + ".lambda_norm: must be >= 1");
  return s;
}

inline StopCriteria parse_stop(const json& j) {
  const std::string w = "stop";
  schema::keys(j, w, {"iterations", "residual_tol", "correlation_floor", "beta"});
  StopCriteria s;
  const auto l = schema::optional_count(j, "iterations", w, 1);
  s.max_iterations = l ? std::optional<std::size_t>(static_cast<std::size_t>(*l)) : std::nullopt;
  s.residual_tol = schema::number(j, "residual_tol", w, 0.0);
  if (j.contains("correlation_floor")) s.correlation_floor = schema::number(j, "correlation_floor", w);
  if (j.contains("beta")) s.adaptive_beta = schema::number(j, "beta", w);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(w + ": " + e.what());
  }
  return s;
}

struct PostSpec {
  std::optional<int> pattern_degree = 4;
  double delta = 0.0;
  std::optional<int> amplitude_degree;
};

inline PostSpec parse_post(const json& j, const std::string& w, std::initializer_list<std::string_view> extra = {}) {
  std::vector<std::string_view> allowed{"pattern_degree", "delta", "amplitude_degree"};
  allowed.insert(allowed.end(), extra.begin(), extra.end());
  if (!j.is_object()) throw ConfigError(w + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError(w + ": unknown key '" + it.key() + "'");
  PostSpec p;
  const auto pd = schema::optional_count(j, "pattern_degree", w, 4);
  p.pattern_degree = pd ? std::optional<int>(static_cast<int>(*pd)) : std::nullopt;
  const auto ad = schema::optional_count(j, "amplitude_degree", w, std::nullopt);
  p.amplitude_degree = ad ? std::optional<int>(static_cast<int>(*ad)) : std::nullopt;
  p.delta = schema::number(j, "delta", w, 0.0);
  if (!(p.delta >= 0.0)) throw ConfigError(w + ".delta: must be >= 0");
  return p;
}

inline json load_config(const fs::path& path) {
  const std::string text = io::read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

inline fs::path config_base(const fs::path& path) {
  return path.has_parent_path() ? path.parent_path() : fs::path(".");
}

// Drops run-location keys and pins the seed so the hash covers everything
// that determines the outputs.
inline json effective_config(json config, std::uint64_t seed) {
  config.erase("output");
  config["seed"] = seed;
  return config;
}

inline std::uint64_t resolve_seed(const json& config, const Flags& flags) {
  if (flags.seed) return *flags.seed;
  return schema::count(config, "seed", "config", 0);
}

inline fs::path resolve_output(const json& config, const Flags& flags, const fs::path& base) {
  if (flags.output) return *flags.output;
  if (config.contains("output")) return base / schema::text(config, "output", "config");
  throw ConfigError("no output directory: pass --output or set \"output\"");
}

inline void write_json(const fs::path& path, const json& j) { io::write_file(path, j.dump(2) + "\n"); }

inline void write_solution_dir(const fs::path& dir, const Solution& sol, const PointSpace& mspace,
                               const PointSpace& pspace, json run) {
  fs::create_directories(dir);
  io::write_csv(dir / "X.csv", sol.coefficients);
  io::write_file(dir / "patterns.txt", io::format_patterns(sol));
  io::write_point_space(dir / "measurements.csv", mspace);
  io::write_point_space(dir / "parameters.csv", pspace);
  run["measurement_metric"] = std::string(to_string(mspace.metric()));
  run["parameter_metric"] = std::string(to_string(pspace.metric()));
  run["solution"] = io::solution_json(sol);
  write_json(dir / "run.json", run);
}

struct PostResult {
  Solution solution;
  json structures = json::array();
};

// Pattern denoising per iteration, then optional amplitude smoothing.
inline PostResult apply_postprocess(const Solution& in, const PointSpace& mspace, const PointSpace& pspace,
                                    const PostSpec& spec) {
  PostResult out{in, json::array()};
  if (spec.pattern_degree && (mspace.dimension() != 1 || pspace.dimension() != 1))
    throw DimensionError("pattern denoising needs 1-dimensional measurement and parameter spaces");
  for (std::size_t l = 0; l < out.solution.patterns.size(); ++l) {
    Pattern& p = out.solution.patterns[l];
    if (p.empty()) continue;
    if (spec.pattern_degree) {
      DenoisedPattern d = denoise_pattern_with_fit(p, mspace, pspace, *spec.pattern_degree, spec.delta);
      out.solution.coefficients = relocate_amplitudes(std::move(out.solution.coefficients), p, d.pattern);
      json s = io::to_json(d.fit);
      s["iteration"] = l + 1;
      out.structures.push_back(std::move(s));
      p = std::move(d.pattern);
    }
    if (spec.amplitude_degree && !p.empty())
      out.solution.coefficients =
          denoise_amplitudes(std::move(out.solution.coefficients), p, mspace, *spec.amplitude_degree);
  }
  return out;
}

inline json post_json(const PostSpec& p) {
  return json{{"pattern_degree", p.pattern_degree ? json(*p.pattern_degree) : json(nullptr)},
              {"delta", p.delta},
              {"amplitude_degree", p.amplitude_degree ? json(*p.amplitude_degree) : json(nullptr)}};
}

inline int cmd_solve(const Flags& flags, std::ostream& out) {
  const json config = load_config(flags.config);
  const fs::path base = config_base(flags.config);
  schema::keys(config, "config",
               {"dictionary", "data", "measurements", "solver", "stop", "postprocess", "seed", "output"});
  const DictionarySpec dspec = parse_dictionary(schema::required(config, "dictionary", "config"), base);
  const DataSpec data_spec = parse_data(schema::required(config, "data", "config"), base);
  std::optional<fs::path> mpath;
  MetricKind mmetric = MetricKind::absolute_1d;
  if (config.contains("measurements")) {
    const json& m = config.at("measurements");
    schema::keys(m, "measurements", {"path", "metric"});
    mpath = base / schema::text(m, "path", "measurements");
    mmetric = schema::metric(m, "metric", "measurements", MetricKind::absolute_1d);
  }
  const SolverSpec solver = parse_solver(config.value("solver", json::object()));
  const StopCriteria stop = parse_stop(config.value("stop", json::object()));
  std::optional<PostSpec> post;
  if (config.contains("postprocess")) post = parse_post(config.at("postprocess"), "postprocess");
  const std::uint64_t seed = resolve_seed(config, flags);
  const fs::path dir = resolve_output(config, flags, base);

  const Dictionary dict = build_dictionary(dspec, seed);
  const Eigen::MatrixXd data = build_data(data_spec, dict, seed);
  const PointSpace mspace =
      mpath ? io::read_point_space(*mpath, mmetric) : PointSpace::line(static_cast<std::size_t>(data.cols()));
  const MeasurementMatrix measurements(data, mspace);

  const Execution exec{flags.threads};
  Solution sol;
  if (solver.method == "gm-omp")
    sol = gm_omp(dict, measurements, FeasibleParams(solver.sigma, solver.tau), stop, exec);
  else if (solver.method == "omp")
    sol = column_omp(dict, data, stop, exec);
  else if (solver.method == "vectorized-omp")
    sol = vectorized_omp(dict, data, stop, exec);
  else
    sol = somp(dict, data, solver.lambda_norm, stop, exec);

  const json effective = effective_config(config, seed);
  json run{{"config", effective},
           {"config_hash", io::config_hash(effective)},
           {"method", solver.method},
           {"sigma", io::extended(solver.sigma)},
           {"tau", io::extended(solver.tau)},
           {"lambda", sol.weakness_trace.empty() ? json(nullptr) : json(weakness(sol))}};
  write_solution_dir(dir, sol, mspace, dict.parameters(), run);

  if (post) {
    PostResult pr = apply_postprocess(sol, mspace, dict.parameters(), *post);
    run["postprocess"] = post_json(*post);
    write_solution_dir(dir / "postprocessed", pr.solution, mspace, dict.parameters(), run);
    write_json(dir / "postprocessed" / "structures.json", pr.structures);
  }
  out << "nnz " << sol.nnz() << " iterations " << sol.patterns.size() << " residual "
      << io::format_double(sol.residual_norms.empty() ? data.norm() : sol.residual_norms.back()) << "\n";
  return sol.stagnated ? kStagnation : kOk;
}

inline int cmd_analyze(const Flags& flags, std::ostream& out) {
  const json config = load_config(flags.config);
  const fs::path base = config_base(flags.config);
  schema::keys(config, "config", {"dictionary", "iterations", "lambda", "seed", "output"});
  const DictionarySpec dspec = parse_dictionary(schema::required(config, "dictionary", "config"), base);
  const std::size_t l = flags.iterations ? *flags.iterations : schema::count(config, "iterations", "config", 1);
  const double lambda = schema::number(config, "lambda", "config", 1.0);
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("config.lambda: must lie in (0, 1]");
  if (l < 1) throw ConfigError("iterations must be >= 1");
  const std::uint64_t seed = resolve_seed(config, flags);
  std::optional<fs::path> dir;
  if (flags.output || config.contains("output")) dir = resolve_output(config, flags, base);

  const Dictionary dict = build_dictionary(dspec, seed);
  if (l >= dict.size())
    throw DimensionError("L = " + std::to_string(l) + " must be below the atom count " + std::to_string(dict.size()));
  json effective = effective_config(config, seed);
  effective["iterations"] = l;
  json report = io::to_json(recovery_report(dict, l, lambda));
  report["config_hash"] = io::config_hash(effective);
  const std::string text = report.dump(2) + "\n";
  out << text;
  if (dir) io::write_file(*dir / "report.json", text);
  return kOk;
}

inline int cmd_bench(const Flags& flags, std::ostream& out) {
  const json config = load_config(flags.config);
  const fs::path base = config_base(flags.config);
  const std::string w = "config";
  schema::keys(config, w,
               {"experiment", "size", "levels", "trials", "seed", "std_dev", "sigma", "tau", "bernoulli_sigma",
                "gm_iterations", "somp_iterations", "somp_norm", "relative_tol", "pattern_degree", "output"});
  const std::string kind = schema::text(config, "experiment", w);
  if (kind != "slope" && kind != "uniform" && kind != "bernoulli")
    throw ConfigError("config.experiment: expected slope, uniform or bernoulli");
  ExperimentConfig e;
  e.size = schema::count(config, "size", w, e.size);
  const json& levels = schema::required(config, "levels", w);
  if (!levels.is_array()) throw ConfigError("config.levels: expected an array of numbers");
  for (const auto& v : levels) {
    if (!v.is_number()) throw ConfigError("config.levels: expected an array of numbers");
    e.levels.push_back(v.get<double>());
  }
  e.trials = schema::count(config, "trials", w, e.trials);
  e.std_dev = schema::number(config, "std_dev", w, e.std_dev);
  e.sigma = schema::extended(config, "sigma", w, e.sigma);
  e.tau = schema::extended(config, "tau", w, e.tau);
  e.bernoulli_sigma = schema::extended(config, "bernoulli_sigma", w, e.bernoulli_sigma);
  e.gm_iterations = schema::count(config, "gm_iterations", w, e.gm_iterations);
  e.somp_iterations = schema::count(config, "somp_iterations", w, e.somp_iterations);
  e.somp_norm = schema::extended(config, "somp_norm", w, e.somp_norm);
  e.relative_tol = schema::number(config, "relative_tol", w, e.relative_tol);
  e.pattern_degree = static_cast<int>(schema::count(config, "pattern_degree", w, 4));
  e.base_seed = resolve_seed(config, flags);
  e.threads = flags.threads;
  try {
    e.validate(kind == "slope");
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("config: ") + ex.what());
  }
  const fs::path dir = resolve_output(config, flags, base);

  const ResultsTable table = kind == "slope"     ? run_slope_sweep(e)
                             : kind == "uniform" ? run_noise_experiment(e, NoiseKind::uniform)
                                                 : run_noise_experiment(e, NoiseKind::bernoulli);
  const json effective = effective_config(config, e.base_seed);
  io::write_file(dir / "results.csv", io::format_results_csv(table));
  write_json(dir / "results.json", json{{"experiment", kind},
                                        {"config", effective},
                                        {"config_hash", io::config_hash(effective)},
                                        {"results", io::to_json(table)}});
  out << table.rows.size() << " result rows written to " << (dir / "results.csv").string() << "\n";
  return kOk;
}

inline int cmd_postprocess(const Flags& flags, std::ostream& out) {
  const json config = load_config(flags.config);
  const fs::path base = config_base(flags.config);
  const PostSpec spec = parse_post(config, "config", {"solution", "seed", "output"});
  const fs::path src = base / schema::text(config, "solution", "config");
  const std::uint64_t seed = resolve_seed(config, flags);
  const fs::path dir = resolve_output(config, flags, base);

  const Solution sol = io::read_solution(src);
  json run = load_config(src / "run.json");
  const PointSpace mspace =
      io::read_point_space(src / "measurements.csv", metric_from_string(run.at("measurement_metric").get<std::string>()));
  const PointSpace pspace =
      io::read_point_space(src / "parameters.csv", metric_from_string(run.at("parameter_metric").get<std::string>()));
  if (static_cast<std::size_t>(sol.coefficients.rows()) != pspace.size() ||
      static_cast<std::size_t>(sol.coefficients.cols()) != mspace.size())
    throw DimensionError("solution shape does not match its point spaces");

  const PostResult pr = apply_postprocess(sol, mspace, pspace, spec);
  json effective = effective_config(config, seed);
  effective.erase("solution");
  effective["source_hash"] = run.value("config_hash", "");
  run["postprocess"] = post_json(spec);
  run["postprocess_hash"] = io::config_hash(effective);
  write_solution_dir(dir, pr.solution, mspace, pspace, run);
  write_json(dir / "structures.json", pr.structures);
  out << "nnz " << pr.solution.nnz() << " patterns " << pr.solution.patterns.size() << "\n";
  return kOk;
}

inline int cmd_dict(const Flags& flags, std::ostream& out) {
  const json config = load_config(flags.config);
  const fs::path base = config_base(flags.config);
  schema::keys(config, "config", {"dictionary", "seed", "output"});
  const DictionarySpec dspec = parse_dictionary(schema::required(config, "dictionary", "config"), base);
  const std::uint64_t seed = resolve_seed(config, flags);
  const fs::path dir = resolve_output(config, flags, base);

  const Dictionary dict = build_dictionary(dspec, seed);
  io::write_csv(dir / "atoms.csv", dict.atoms());
  io::write_point_space(dir / "parameters.csv", dict.parameters());
  json params = json::object();
  for (const auto& [k, v] : dict.info().parameters) params[k] = v;
  const json effective = effective_config(config, seed);
  write_json(dir / "dictionary.json", json{{"kind", dict.info().kind},
                                           {"parameters", params},
                                           {"samples", dict.samples()},
                                           {"atoms", dict.size()},
                                           {"parameter_metric", std::string(to_string(dict.parameters().metric()))},
                                           {"config_hash", io::config_hash(effective)}});
  out << dict.samples() << "x" << dict.size() << " dictionary written to " << dir.string() << "\n";
  return kOk;
}

// Entry point shared by the executable and the tests. `args` excludes the
// program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured greedy sparse recovery for multiple measurement vectors"};
  app.require_subcommand(1);
  Flags flags;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  std::string output;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "JSON configuration file")->required();
    sub->add_option("--seed", seed, "Random seed (overrides the config)");
    sub->add_option("--threads", flags.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--output", output, "Output directory (overrides the config)");
  };
  CLI::App* solve = app.add_subcommand("solve", "Run a solver and write X.csv, patterns.txt, run.json");
  CLI::App* analyze = app.add_subcommand("analyze", "Recovery conditions of a dictionary");
  CLI::App* bench = app.add_subcommand("bench", "Run a synthetic benchmark");
  CLI::App* post = app.add_subcommand("postprocess", "Denoise the patterns of a solution");
  CLI::App* dict = app.add_subcommand("dict", "Export a built dictionary");
  for (auto* s : {solve, analyze, bench, post, dict}) common(s);
  analyze->add_option("-L,--iterations", iterations, "Iteration count L")->check(CLI::PositiveNumber);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kIoOrSchema;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--seed")) flags.seed = seed;
  if (chosen->count("--output")) flags.output = fs::path(output);
  if (chosen == analyze && analyze->count("--iterations")) flags.iterations = iterations;

  try {
    if (chosen == solve) return cmd_solve(flags, out);
    if (chosen == analyze) return cmd_analyze(flags, out);
    if (chosen == bench) return cmd_bench(flags, out);
    if (chosen == post) return cmd_postprocess(flags, out);
    return cmd_dict(flags, out);
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kDimension;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kDimension;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoOrSchema;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoOrSchema;
  }
}

}  // namespace gmomp::cli
