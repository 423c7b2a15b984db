#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace spinelab {

/// xoshiro256** seeded through splitmix64 from a (seed, stream) pair.
/// Distinct streams give independent sequences, so instance i of a batch can
/// be generated on any thread and still match a serial run bit for bit.
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next();

    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound);
    double uniform01();
    bool coin() { return (next() >> 63) != 0; }

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i)
            std::swap(items[i - 1], items[static_cast<std::size_t>(below(i))]);
    }

  private:
    std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

} // namespace spinelab
