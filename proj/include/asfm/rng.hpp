#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace asfm {

/// Seeded generator with platform-independent draws.
///
/// Standard library distributions are implementation-defined, so uniform,
/// normal and shuffle are written out here on top of splitmix64. Streams are
/// derived from a master seed and a name so adding a new stream never shifts
/// the draws of an existing one.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Substream keyed by name plus up to three integers (day, agent index, round...).
  static Rng stream(std::uint64_t master_seed, std::string_view name, std::uint64_t a = 0, std::uint64_t b = 0,
                    std::uint64_t c = 0);

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via Box-Muller.
  double normal();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
};

std::uint64_t fnv1a64(std::string_view text);

}  // namespace asfm
