#include "asfm/rng.hpp"

#include <cmath>
#include <numbers>

namespace asfm {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng Rng::stream(std::uint64_t master_seed, std::string_view name, std::uint64_t a, std::uint64_t b,
                std::uint64_t c) {
  std::uint64_t s = mix(master_seed ^ 0x9e3779b97f4a7c15ULL);
  s = mix(s ^ fnv1a64(name));
  s = mix(s ^ a);
  s = mix(s ^ (b + 0x632be59bd9b4e019ULL));
  s = mix(s ^ (c + 0x8cb92ba72f3d8dd7ULL));
  return Rng{s};
}

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix(state_);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
  std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double Rng::normal() {
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace asfm
