// Copyright 2026 The shapetensor Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHAPETENSOR_COMMON_HPP
#define SHAPETENSOR_COMMON_HPP

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace shapetensor {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Surface area of the unit sphere S^{k-1} in R^k: 2 pi^{k/2} / Gamma(k/2).
/// omega(1) = 2, omega(2) = 2*pi, omega(3) = 4*pi.
inline double sphere_area(int k) {
  if (k < 1) throw std::invalid_argument("sphere_area: k must be >= 1");
  return 2.0 * std::exp(0.5 * k * std::log(kPi) - std::lgamma(0.5 * k));
}

inline double log_factorial(int k) { return std::lgamma(double(k) + 1.0); }

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k)));
}

inline double sq(double x) { return x * x; }

// ---------------------------------------------------------------------------
// Deterministic RNG. splitmix64 core with Box-Muller normals; sub-streams are
// derived from the seed so multistart results do not depend on scheduling.
// ---------------------------------------------------------------------------
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Standard normal via Box-Muller.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * kPi * u2);
    has_cached_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  /// Uniform direction on S^{n-1}.
  Vec unit_vector(int n) {
    Vec v(n);
    double nrm = 0.0;
    do {
      for (int i = 0; i < n; ++i) v[i] = normal();
      nrm = v.norm();
    } while (nrm < 1e-12);
    return v / nrm;
  }

  /// Independent stream derived from this seed and a stream index.
  Rng stream(std::uint64_t index) const {
    Rng r(state_ ^ (0xa0761d6478bd642fULL * (index + 1)));
    r.next_u64();
    return r;
  }

 private:
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

// ---------------------------------------------------------------------------
// Parallel map over [0, count). Thread count is capped by SHAPETENSOR_THREADS.
// ---------------------------------------------------------------------------
inline int thread_budget() {
  int hw = int(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("SHAPETENSOR_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1 && cap < hw) hw = cap;
  }
  return hw;
}

inline void parallel_for(int count, const std::function<void(int)>& body) {
  int threads = std::min(thread_budget(), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace shapetensor

#endif  // SHAPETENSOR_COMMON_HPP
