#include "ier/rng.hpp"

namespace ier {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) noexcept {
  __extension__ using u128 = unsigned __int128;
  const u128 product = static_cast<u128>(a) * b;
  hi = static_cast<std::uint64_t>(product >> 64);
  lo = static_cast<std::uint64_t>(product);
}

}  // namespace

Philox4x64::Counter Philox4x64::block(Counter ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

RngStream RngStream::substream(std::uint64_t k) const noexcept {
  const std::uint64_t child_path =
      mix64(path_ ^ mix64(stream_ + kWeyl0) ^ 0x5851F42D4C957F2DULL);
  return RngStream(seed_, child_path, k);
}

std::uint64_t RngStream::next_u64() noexcept {
  if (pos_ == 4) {
    buffer_ = Philox4x64::block({block_, 0, stream_, 0}, {seed_, path_});
    ++block_;
    pos_ = 0;
  }
  return buffer_[pos_++];
}

std::uint64_t RngStream::uniform_index(std::uint64_t bound) noexcept {
  // Rejection sampling on the top of the range keeps the draw unbiased.
  const std::uint64_t limit = max() - (max() % bound + 1) % bound;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x > limit);
  return x % bound;
}

}  // namespace ier
