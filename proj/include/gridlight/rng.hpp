#pragma once

#include <cstdint>

namespace gridlight::rng {

// SplitMix64 finalizer. Used both to derive per-shot stream keys and to
// advance each stream, so any (seed, shot) pair yields an independent,
// order-free sequence: shot loops can be partitioned across workers and
// still reproduce bit-identical results.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based deterministic stream keyed by (seed, shot index).
class ShotRng {
  public:
    ShotRng(std::uint64_t seed, std::uint64_t shot)
        : state_(mix64(mix64(seed) ^ (shot * 0xd1342543de82ef95ULL + 1))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

} // namespace gridlight::rng
