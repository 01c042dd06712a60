#include "leaderlab/core.hpp"

namespace leaderlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngSpec RngSpec::derive(std::uint64_t tag) const noexcept {
  return RngSpec{seed, splitmix64(splitmix64(stream_id) ^ (tag + 0x632be59bd9b4e019ULL))};
}

Rng RngSpec::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
  return Rng(seq);
}

}  // namespace leaderlab
