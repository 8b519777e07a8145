#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ier {

/// Philox4x64-10 counter-based block cipher (Salmon et al., SC'11).
///
/// Maps a 256-bit counter and a 128-bit key to 256 pseudo-random bits.
struct Philox4x64 {
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static Counter block(Counter counter, Key key) noexcept;
};

/// A reproducible stream of random numbers identified by
/// (master_seed, stream_index).
///
/// Output block b of a stream is Philox(counter = {b, 0, stream_index, 0},
/// key = {master_seed, path}), so distinct stream indices occupy disjoint
/// counter ranges. `path` is zero for top-level streams; `substream(k)`
/// folds the parent's identity into the child's key.
///
/// A stream is single-consumer: do not share one between threads.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
      : RngStream(master_seed, 0, stream_index) {}

  std::uint64_t master_seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_; }

  /// Independent child stream number k, fully determined by this stream's
  /// identity (not by how much of it has been consumed).
  RngStream substream(std::uint64_t k) const noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// True with probability p (p <= 0 never, p >= 1 always).
  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept;

  // UniformRandomBitGenerator interface.
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() noexcept { return next_u64(); }

 private:
  RngStream(std::uint64_t seed, std::uint64_t path,
            std::uint64_t stream) noexcept
      : seed_(seed), path_(path), stream_(stream) {}

  std::uint64_t seed_;
  std::uint64_t path_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x64::Counter buffer_{};
  int pos_ = 4;
};

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace ier
