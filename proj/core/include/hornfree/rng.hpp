#pragma once

#include <cstdint>
#include <random>

namespace hornfree {

/// Seed plus stream index. Identical states reproduce identical draws.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Child state for sub-task `index`; distinct indices give independent
  /// streams, so parallel loops stay order-independent.
  [[nodiscard]] RngState substream(std::uint64_t index) const;

  friend bool operator==(const RngState&, const RngState&) = default;
};

inline constexpr std::uint64_t kDefaultSeed = 20080314;

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
 public:
  explicit Rng(RngState state);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t next_u64() { return engine_(); }

  [[nodiscard]] const RngState& state() const { return state_; }

 private:
  RngState state_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace hornfree
