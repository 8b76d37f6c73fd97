#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>

namespace zol {

/// 64-bit finalizer from SplitMix64 (Stafford variant 13). Bijective on uint64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// Identifies one independent random stream: a master seed plus a key
/// derived from the task that owns the stream.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const RngState&, const RngState&) = default;
};

/// Hashes a tuple of small integers into a stream key under `master_seed`.
RngState derive_rng(std::uint64_t master_seed, std::span<const std::uint64_t> task_key);
RngState derive_rng(std::uint64_t master_seed, std::initializer_list<std::uint64_t> task_key);

/// Child stream of an existing state; used for per-row / per-block substreams.
RngState derive_rng(const RngState& parent, std::uint64_t key);

/// Output `index` (0-based) of Rng(state), without generating the ones before it.
std::uint64_t draw_at(const RngState& state, std::uint64_t index) noexcept;

/// Counter-mode SplitMix64: output i is mix64(base + (i + 1) * gamma) with the
/// base fixed by (seed, stream). Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(const RngState& state) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    counter_ += kGoldenGamma;
    return mix64(counter_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform on the open interval (lo, hi).
  double uniform(double lo, double hi) noexcept;

  /// Uniform integer in [0, bound), bound > 0 (Lemire's nearly-divisionless method).
  std::uint64_t uniform_index(std::uint64_t bound) noexcept;

  /// Standard normal via the Box-Muller transform; caches the second variate.
  double normal() noexcept;

 private:
  std::uint64_t counter_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace zol
