#include <cstdlib>
#include <string_view>

#include "selfex/core/error.hpp"
#include "selfex/simd/kernels.hpp"

namespace selfex::simd {

#ifndef SELFEX_HAVE_AVX2
const KernelTable* avx2_table() noexcept { return nullptr; }
#endif

std::string to_string(Level level) {
  switch (level) {
    case Level::Scalar: return "scalar";
    case Level::Avx2: return "avx2";
  }
  return "unknown";
}

bool cpu_supports(Level level) noexcept {
  switch (level) {
    case Level::Scalar:
      return true;
    case Level::Avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

namespace {

const KernelTable& select() noexcept {
  const char* env = std::getenv("SELFEX_SIMD");
  const bool scalar_only = env != nullptr && std::string_view(env) == "scalar";
  if (!scalar_only && avx2_table() != nullptr && cpu_supports(Level::Avx2)) return *avx2_table();
  return scalar_table();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& chosen = select();
  return chosen;
}

const KernelTable& table_for(Level level) {
  if (level == Level::Scalar) return scalar_table();
  if (avx2_table() == nullptr || !cpu_supports(Level::Avx2)) {
    fail(ErrorCode::InvalidArgument, "kernel level " + to_string(level) + " unavailable");
  }
  return *avx2_table();
}

}  // namespace selfex::simd
