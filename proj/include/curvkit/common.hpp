#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace curvkit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// kernel-wide defaults
inline constexpr double kAngleTol = 1e-9;
inline constexpr double kLengthTol = 1e-10;
inline constexpr double kBoundaryTol = 1e-8;
inline constexpr double kVerdictTol = 1e-9;

inline constexpr std::uint64_t kDefaultSeed = 0xA1E0;

// Deterministic randomness. std::uniform_real_distribution and friends are
// implementation-defined, so the few transforms we need are spelled out here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : eng_(seed) {}
  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0;
    while (u <= 0) u = uniform();
    double v = uniform();
    double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(2 * kPi * v);
    has_spare_ = true;
    return r * std::cos(2 * kPi * v);
  }
  Vec unit_vector(int dim) {
    Vec v(dim);
    do {
      for (int i = 0; i < dim; ++i) v[i] = normal();
    } while (v.norm() < 1e-12);
    return v / v.norm();
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0;
  bool has_spare_ = false;
};

// Worker count: explicit value, else CURVKIT_JOBS, else 1.
int resolve_jobs(int requested);

// Runs body(begin, end, worker) over [0, n) in contiguous chunks.
void parallel_chunks(std::size_t n, int jobs,
                     const std::function<void(std::size_t, std::size_t, int)>& body);

}  // namespace curvkit
