#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace cospec {

// Splittable counter-style generator (splitmix64 core). A draw sequence is a
// pure function of (seed, stream_id), so parallel trials stay reproducible
// per stream and independent streams never share state.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double gaussian();
  std::complex<double> gaussian_complex();
  int uniform_int(int n);                 // {0, ..., n-1}

  // Derived stream: deterministic function of (this stream, substream).
  RandomSource split(std::uint64_t substream) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_;
};

// Weighted index draw; weights need not be normalized.
int draw_index(RandomSource& rng, const std::vector<double>& weights);

}  // namespace cospec
