#pragma once

#include <cstdint>
#include <random>

#include "lifts/geometry.hpp"

namespace lifts {

/// Tags separating independent uses of randomness within one chain.
enum class StreamPurpose : std::uint32_t {
  initial_state = 1,
  dynamics = 2,
  bootstrap = 3,
  test_function = 4,
};

/**
 * Reproducible random stream keyed by (seed, chain, purpose). Distinct keys
 * give statistically independent streams; the same key always replays the
 * same numbers.
 */
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t chain, StreamPurpose purpose);

  double uniform();  ///< in [0, 1)
  double normal();
  double exponential(double rate);
  Vector normal_vector(int dimension);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
};

}  // namespace lifts
