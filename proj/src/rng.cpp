#include "zol/rng.hpp"

#include <cmath>
#include <numbers>

namespace zol {

namespace {

std::uint64_t absorb(std::uint64_t h, std::uint64_t word) {
  return mix64(h ^ mix64(word + kGoldenGamma));
}

}  // namespace

RngState derive_rng(std::uint64_t master_seed, std::span<const std::uint64_t> task_key) {
  std::uint64_t h = mix64(master_seed ^ 0x5851f42d4c957f2dULL);
  for (std::uint64_t word : task_key) h = absorb(h, word);
  h = absorb(h, task_key.size());
  return RngState{master_seed, h};
}

RngState derive_rng(std::uint64_t master_seed, std::initializer_list<std::uint64_t> task_key) {
  return derive_rng(master_seed, std::span<const std::uint64_t>(task_key.begin(), task_key.size()));
}

RngState derive_rng(const RngState& parent, std::uint64_t key) {
  return RngState{parent.seed, absorb(parent.stream, key)};
}

namespace {

std::uint64_t counter_base(const RngState& state) noexcept {
  return mix64(state.seed) ^ mix64(state.stream ^ 0xd1b54a32d192ed03ULL);
}

}  // namespace

Rng::Rng(const RngState& state) noexcept : counter_(counter_base(state)) {}

std::uint64_t draw_at(const RngState& state, std::uint64_t index) noexcept {
  return mix64(counter_base(state) + (index + 1) * kGoldenGamma);
}

double Rng::uniform(double lo, double hi) noexcept {
  // Midpoint of one of 2^53 equal cells, so never exactly lo or hi.
  const double u = (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::uint64_t Rng::uniform_index(std::uint64_t bound) noexcept {
  __uint128_t m = static_cast<__uint128_t>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<__uint128_t>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace zol
