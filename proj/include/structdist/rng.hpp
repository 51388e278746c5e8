#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "structdist/tensor.hpp"

namespace structdist {

struct RandomSeed {
  std::uint64_t value = 0;
};

/// Seeded generator. Uniform draws are built from raw 64-bit engine output so the same seed
/// gives the same stream on every standard library.
class Rng {
 public:
  explicit Rng(RandomSeed seed) : engine_(seed.value) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Draws an index with probability proportional to exp(log_weights[i]).
  std::size_t categorical_log(std::span<const double> log_weights) {
    double hi = kNegInf;
    for (double w : log_weights) hi = std::max(hi, w);
    if (hi == kNegInf) throw InvalidArgument("categorical: all weights are zero");
    double total = 0.0;
    for (double w : log_weights) total += std::exp(w - hi);
    const double target = uniform() * total;
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < log_weights.size(); ++i) {
      if (log_weights[i] == kNegInf) continue;
      acc += std::exp(log_weights[i] - hi);
      last = i;
      if (target < acc) return i;
    }
    return last;
  }

  /// Draws an index with probability proportional to weights[i] >= 0.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += std::max(w, 0.0);
    if (!(total > 0.0)) throw InvalidArgument("categorical: all weights are zero");
    const double target = uniform() * total;
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (!(weights[i] > 0.0)) continue;
      acc += weights[i];
      last = i;
      if (target < acc) return i;
    }
    return last;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace structdist
