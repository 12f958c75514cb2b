#include "lifts/rng.hpp"

#include <stdexcept>

namespace lifts {

namespace {

std::seed_seq key_sequence(std::uint64_t seed, std::uint64_t chain, StreamPurpose purpose) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(chain), static_cast<std::uint32_t>(chain >> 32),
                       static_cast<std::uint32_t>(purpose), 0x6c696674u};
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t chain, StreamPurpose purpose) {
  auto seq = key_sequence(seed, chain, purpose);
  engine_.seed(seq);
}

double RandomStream::uniform() { return uniform_(engine_); }

double RandomStream::normal() { return normal_(engine_); }

double RandomStream::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
  return std::exponential_distribution<double>(rate)(engine_);
}

Vector RandomStream::normal_vector(int dimension) {
  Vector v(dimension);
  for (int i = 0; i < dimension; ++i) v(i) = normal();
  return v;
}

}  // namespace lifts
