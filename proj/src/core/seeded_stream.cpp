#include "selfex/core/seeded_stream.hpp"

#include <cmath>
#include <numbers>

namespace selfex {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

SeededStream::SeededStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id) {
  // The key carries 64 bits of (seed, stream); a further 32 bits go into the
  // counter so that distinct pairs colliding in the key still differ.
  const std::uint64_t mixed = splitmix64(seed ^ splitmix64(stream_id + 0x632BE59BD9B4E019ull));
  key_ = {static_cast<std::uint32_t>(mixed), static_cast<std::uint32_t>(mixed >> 32)};
  lane_salt_ = static_cast<std::uint32_t>(splitmix64(stream_id ^ 0xA0761D6478BD642Full) >> 40) << 8;
}

PhiloxCounter SeededStream::block(DrawKind kind, std::uint64_t step,
                                  std::uint32_t index) const noexcept {
  const PhiloxCounter ctr = {static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
                             index, lane_salt_ | static_cast<std::uint32_t>(kind)};
  return philox4x32(ctr, key_);
}

double SeededStream::uniform(DrawKind kind, std::uint64_t step, std::uint32_t index) const noexcept {
  const auto w = block(kind, step, index);
  return uniform_from_words(w[0], w[1]);
}

double SeededStream::normal(DrawKind kind, std::uint64_t step, std::uint32_t index) const noexcept {
  const auto w = block(kind, step, index);
  const double u1 = uniform_from_words(w[0], w[1]);
  const double u2 = uniform_from_words(w[2], w[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint32_t SeededStream::poisson(double mean, DrawKind kind, std::uint64_t step,
                                    std::uint32_t index) const noexcept {
  const double u = uniform(kind, step, index);
  double p = std::exp(-mean);
  double cdf = p;
  std::uint32_t k = 0;
  // The cap only matters for means far outside the intended dt*lambda regime.
  while (u > cdf && k < 10000u) {
    ++k;
    p *= mean / k;
    cdf += p;
    if (p == 0.0) break;
  }
  return k;
}

SeededStream::Engine::result_type SeededStream::Engine::operator()() noexcept {
  if (used_ == 2) {
    buffer_ = stream_.block(DrawKind::Sequential, counter_++, 0);
    used_ = 0;
  }
  const int i = 2 * used_++;
  return (static_cast<std::uint64_t>(buffer_[i]) << 32) | buffer_[i + 1];
}

double SeededStream::Engine::uniform() noexcept {
  const std::uint64_t bits = (*this)() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace selfex
