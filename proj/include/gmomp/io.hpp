#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "gmomp/analysis.hpp"
#include "gmomp/error.hpp"
#include "gmomp/experiments.hpp"
#include "gmomp/postprocess.hpp"
#include "gmomp/solver.hpp"
#include "gmomp/spaces.hpp"

namespace gmomp::io {

using json = nlohmann::json;

// Shortest decimal string that parses back to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s == "inf" || s == "+inf") return out = kInfinity, true;
  if (s == "-inf") return out = -kInfinity, true;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// Row-major numeric CSV. A first line that does not parse as numbers is
// taken as a header and skipped.
inline Eigen::MatrixXd parse_csv(const std::string& text, const std::string& origin = "<csv>") {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    bool ok = true;
    for (auto field : split(line)) {
      double v = 0.0;
      if (!parse_double(field, v)) {
        ok = false;
        break;
      }
      row.push_back(v);
    }
    if (!ok) {
      if (rows.empty() && lineno == 1) continue;
      throw IoError(origin + ":" + std::to_string(lineno) + ": non-numeric field");
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError(origin + ":" + std::to_string(lineno) + ": expected " + std::to_string(rows.front().size()) +
                    " fields, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.empty() ? 0 : rows.front().size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

inline Eigen::MatrixXd read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path), path.string()); }

inline std::string format_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

inline void write_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) { write_file(path, format_csv(m)); }

inline PointSpace read_point_space(const std::filesystem::path& path, MetricKind metric) {
  return PointSpace(read_csv(path), metric);
}

inline void write_point_space(const std::filesystem::path& path, const PointSpace& space) {
  write_csv(path, space.coordinates());
}

// Extended reals: JSON has no infinity, so +inf travels as "inf".
inline json extended(double v) {
  if (std::isinf(v) && v > 0) return "inf";
  return v;
}

inline double extended_from(const json& j, const std::string& what) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfinity;
    throw ConfigError(what + ": expected a number or \"inf\"");
  }
  if (!j.is_number()) throw ConfigError(what + ": expected a number or \"inf\"");
  return j.get<double>();
}

// patterns.txt: iteration,atom,measurement,amplitude with 1-based indices.
inline std::string format_patterns(const Solution& sol) {
  std::string out = "iteration,atom,measurement,amplitude\n";
  for (std::size_t l = 0; l < sol.patterns.size(); ++l)
    for (const auto& e : sol.patterns[l]) {
      const double a = sol.coefficients(static_cast<Eigen::Index>(e.atom), static_cast<Eigen::Index>(e.measurement));
      out += std::to_string(l + 1) + ',' + std::to_string(e.atom + 1) + ',' + std::to_string(e.measurement + 1) + ',' +
             format_double(a) + '\n';
    }
  return out;
}

inline std::vector<Pattern> parse_patterns(const std::string& text, std::size_t iterations, std::size_t atoms,
                                           std::size_t measurements, const std::string& origin = "patterns") {
  std::vector<Pattern> out(iterations);
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (lineno == 1 && line.rfind("iteration", 0) == 0)) continue;
    const auto f = split(line);
    double v[4];
    if (f.size() != 4 || !parse_double(f[0], v[0]) || !parse_double(f[1], v[1]) || !parse_double(f[2], v[2]) ||
        !parse_double(f[3], v[3]))
      throw IoError(origin + ":" + std::to_string(lineno) + ": expected iteration,atom,measurement,amplitude");
    for (int c = 0; c < 3; ++c)
      if (v[c] < 1.0 || v[c] != std::floor(v[c]))
        throw IoError(origin + ":" + std::to_string(lineno) + ": indices must be positive integers");
    const auto l = static_cast<std::size_t>(v[0]);
    const auto a = static_cast<std::size_t>(v[1]);
    const auto m = static_cast<std::size_t>(v[2]);
    if (l > out.size()) out.resize(l);
    if (a > atoms || m > measurements)
      throw DimensionError(origin + ":" + std::to_string(lineno) + ": index out of range");
    out[l - 1].insert({a - 1, m - 1});
  }
  return out;
}

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

inline std::string config_hash(const json& config) { return hex64(fnv1a(config.dump())); }

inline json solution_json(const Solution& sol) {
  json j;
  j["iterations"] = sol.patterns.size();
  j["nnz"] = sol.nnz();
  j["residual_norms"] = sol.residual_norms;
  j["weakness_trace"] = sol.weakness_trace;
  j["weakness"] = sol.weakness_trace.empty() ? json(nullptr) : json(weakness(sol));
  j["stagnated"] = sol.stagnated;
  return j;
}

// Rebuilds a Solution from X.csv, patterns.txt and the solution block of
// run.json.
inline Solution read_solution(const std::filesystem::path& dir) {
  Solution sol;
  sol.coefficients = read_csv(dir / "X.csv");
  json run;
  try {
    run = json::parse(read_file(dir / "run.json"));
  } catch (const json::parse_error& e) {
    throw IoError((dir / "run.json").string() + ": " + e.what());
  }
  const json& s = run.at("solution");
  sol.patterns = parse_patterns(read_file(dir / "patterns.txt"), s.at("iterations").get<std::size_t>(),
                                static_cast<std::size_t>(sol.coefficients.rows()),
                                static_cast<std::size_t>(sol.coefficients.cols()), (dir / "patterns.txt").string());
  sol.residual_norms = s.at("residual_norms").get<std::vector<double>>();
  sol.weakness_trace = s.at("weakness_trace").get<std::vector<double>>();
  sol.stagnated = s.at("stagnated").get<bool>();
  return sol;
}

inline json to_json(const RecoveryReport& r) {
  return json{{"iterations", r.iterations},
              {"babel", r.babel_values},
              {"lambda", r.lambda},
              {"beta", r.beta},
              {"condition_exact", r.condition_exact},
              {"condition_beta", r.condition_beta}};
}

inline json to_json(const FittedStructure& f) {
  return json{{"degree", f.degree},
              {"coefficients", f.coefficients},
              {"interval", {f.lower, f.upper}},
              {"residual", f.residual},
              {"rank_deficient", f.rank_deficient}};
}

inline std::string format_results_csv(const ResultsTable& t) {
  std::string out = "method,parameter,metric,value\n";
  for (const auto& r : t.rows)
    out += r.method + ',' + format_double(r.parameter) + ',' + r.metric + ',' + format_double(r.value) + '\n';
  return out;
}

// {method: {metric: [[parameter, value], ...]}}
inline json to_json(const ResultsTable& t) {
  json j = json::object();
  for (const auto& r : t.rows) j[r.method][r.metric].push_back({r.parameter, r.value});
  return j;
}

}  // namespace gmomp::io
