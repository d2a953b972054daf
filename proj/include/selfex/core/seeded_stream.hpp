#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace selfex {

// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Draw purposes. Each gets its own counter lane so that e.g. particle j's jump
// draws never depend on how many Brownian draws were made.
enum class DrawKind : std::uint32_t {
  Initial = 1,
  Brownian = 2,
  Jump = 3,
  Sequential = 4,
};

// Counter-based random stream. A draw is a pure function of
// (seed, streamId, kind, step, index), so any subset of draws can be produced
// in any order, on any thread, with identical results.
class SeededStream {
 public:
  SeededStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  // Branches randomness: same seed, new stream id.
  SeededStream with_stream(std::uint64_t stream_id) const noexcept {
    return SeededStream(seed_, stream_id);
  }

  PhiloxCounter block(DrawKind kind, std::uint64_t step, std::uint32_t index) const noexcept;

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform(DrawKind kind, std::uint64_t step, std::uint32_t index) const noexcept;
  // Standard normal (Box-Muller on one block).
  double normal(DrawKind kind, std::uint64_t step, std::uint32_t index) const noexcept;
  // Poisson(mean) by inversion of one uniform; intended for small means.
  std::uint32_t poisson(double mean, DrawKind kind, std::uint64_t step,
                        std::uint32_t index) const noexcept;

  // Sequential engine over the DrawKind::Sequential lane, usable with
  // <random> and <algorithm> where a UniformRandomBitGenerator is expected.
  class Engine;
  Engine engine() const noexcept;

  friend bool operator==(const SeededStream& a, const SeededStream& b) noexcept {
    return a.seed_ == b.seed_ && a.stream_id_ == b.stream_id_;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  PhiloxKey key_;
  std::uint32_t lane_salt_;
};

class SeededStream::Engine {
 public:
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  explicit Engine(const SeededStream& stream) noexcept : stream_(stream) {}
  result_type operator()() noexcept;
  double uniform() noexcept;

 private:
  SeededStream stream_;
  std::uint64_t counter_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 2;
};

inline SeededStream::Engine SeededStream::engine() const noexcept { return Engine(*this); }

// 53-bit uniform in (0, 1) from two 32-bit words.
inline double uniform_from_words(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace selfex
