#pragma once

#include <cstdint>
#include <vector>

namespace romflux {

/// xorshift64* generator. Deterministic and platform independent, so seeded
/// runs reproduce bit-for-bit.
class Rng {
  public:
    explicit Rng(std::uint64_t seed)
        : state_(seed != 0 ? seed : 0x9E3779B97F4A7C15ULL) {}

    std::uint64_t next() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform in [0, 1) with 53 bits of mantissa.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

    /// Fisher-Yates shuffle, deterministic for a fixed seed.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            const int j = below(i + 1);
            std::swap(v[i], v[j]);
        }
    }

  private:
    std::uint64_t state_;
};

}  // namespace romflux
