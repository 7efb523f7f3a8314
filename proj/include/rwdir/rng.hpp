#pragma once

#include <array>
#include <cstdint>

namespace rwdir {

// Philox4x32-10 counter-based generator.
//
// The 64-bit seed is the cipher key; the upper two counter words hold the
// stream id and the lower two count blocks. Streams with different ids never
// share a counter value, so split() children are independent of each other
// and of the parent for every practical purpose.
class RandomStream {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  // Child stream i, a pure function of (seed, stream, i).
  RandomStream split(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64();

  // Uniform on (0, 1]: 53 random bits, never zero.
  double uniform();
  // Unit-rate exponential, -log(U).
  double exponential();
  double normal();
  int rademacher();

  static Block philox(Block counter, Key key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  int next_word_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace rwdir
