#include "hornfree/rng.hpp"

namespace hornfree {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngState RngState::substream(std::uint64_t index) const {
  return RngState{splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)), index};
}

Rng::Rng(RngState state) : state_(state) {
  std::seed_seq seq{static_cast<std::uint32_t>(state.seed), static_cast<std::uint32_t>(state.seed >> 32),
                    static_cast<std::uint32_t>(state.stream), static_cast<std::uint32_t>(state.stream >> 32)};
  engine_.seed(seq);
}

}  // namespace hornfree
