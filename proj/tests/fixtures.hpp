#pragma once

#include <Eigen/Dense>

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gmomp/dictionary.hpp"
#include "gmomp/feasibility.hpp"
#include "gmomp/spaces.hpp"

namespace fixtures {

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

inline gmomp::Dictionary random_dictionary(std::size_t samples, std::size_t atoms, std::mt19937_64& rng) {
  return gmomp::Dictionary(
      gaussian_matrix(static_cast<Eigen::Index>(samples), static_cast<Eigen::Index>(atoms), rng),
      gmomp::PointSpace::line(atoms));
}

inline gmomp::Dictionary orthonormal_dictionary(std::size_t n, std::mt19937_64& rng) {
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(size, size, rng));
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(size, size);
  return gmomp::Dictionary(std::move(q), gmomp::PointSpace::line(n));
}

// Three connected, 1-Lipschitz random-walk patterns on the line, pairwise
// disjoint and non-intersecting for (sigma, tau) = (1, 1), with amplitude
// tiers [4, 5], [1.5, 2], [0.5, 0.75] and random signs.
struct PlantedInstance {
  std::vector<gmomp::Pattern> patterns;
  Eigen::MatrixXd x;
};

inline PlantedInstance planted_instance(std::size_t n, std::mt19937_64& rng) {
  const gmomp::PointSpace line = gmomp::PointSpace::line(n);
  const gmomp::FeasibleParams params(1.0, 1.0);
  const double tiers[3][2] = {{4.0, 5.0}, {1.5, 2.0}, {0.5, 0.75}};
  std::uniform_int_distribution<std::size_t> length(5, 20), start_atom(0, n - 1);
  std::uniform_int_distribution<int> step(-1, 1), sign(0, 1);

  PlantedInstance inst;
  while (inst.patterns.size() < 3) {
    const std::size_t len = length(rng);
    const std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - len)(rng);
    long atom = static_cast<long>(start_atom(rng));
    gmomp::Pattern p;
    for (std::size_t k = first; k < first + len; ++k) {
      p.insert({static_cast<std::size_t>(atom), k});
      atom = std::clamp(atom + step(rng), 0L, static_cast<long>(n) - 1);
    }
    bool ok = true;
    for (const auto& q : inst.patterns) {
      for (const auto& e : p)
        if (q.contains(e)) ok = false;
      if (ok && gmomp::are_intersecting(p, q, line, line, params)) ok = false;
    }
    if (ok) inst.patterns.push_back(std::move(p));
  }

  const auto size = static_cast<Eigen::Index>(n);
  inst.x = Eigen::MatrixXd::Zero(size, size);
  for (std::size_t t = 0; t < 3; ++t) {
    std::uniform_real_distribution<double> amp(tiers[t][0], tiers[t][1]);
    for (const auto& e : inst.patterns[t]) {
      const double a = amp(rng);
      inst.x(static_cast<Eigen::Index>(e.atom), static_cast<Eigen::Index>(e.measurement)) = sign(rng) ? a : -a;
    }
  }
  return inst;
}

inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("gmomp_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Relative path -> bytes for every regular file below dir.
inline std::vector<std::pair<std::string, std::string>> snapshot(const std::filesystem::path& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.emplace_back(std::filesystem::relative(e.path(), dir).string(), slurp(e.path()));
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace fixtures
