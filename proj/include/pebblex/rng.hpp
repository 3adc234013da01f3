#pragma once

#include <cstdint>

namespace pebblex {

// Counter-based generator: output k of a stream is a pure function of
// (key, k), so child streams can be handed to workers in any order and
// every run with the same seed reproduces bit-identical draws.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ull)), ctr_(0) {}

    /// Independent child stream;  (a, b) is typically (query index, sample index).
    Rng derive(std::uint64_t a, std::uint64_t b = 0) const {
        Rng child(0);
        child.key_ = mix(key_ ^ mix(a ^ 0xbb67ae8584caa73bull)) + mix(b ^ 0x3c6ef372fe94f82bull);
        child.ctr_ = 0;
        return child;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = key_ + (ctr_++) * 0x9e3779b97f4a7c15ull;
        return mix(z);
    }

    /// Uniform on the open interval (0, 1); never returns 0 or 1, so log() is safe.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    /// Uniform on {0, 1, ..., n-1}; n > 0.
    std::uint64_t next_below(std::uint64_t n) {
        // rejection keeps it unbiased
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

  private:
    std::uint64_t key_;
    std::uint64_t ctr_;
};

} // namespace pebblex
