#pragma once

#include <cstdint>

namespace deep {

// Deterministic splittable generator (splitmix64 core). All randomness in the
// project flows through this so that runs are reproducible bit-for-bit across
// platforms; std::random distributions are implementation-defined and are not
// used anywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed + kGamma) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += kGamma);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 bits of mantissa.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bernoulli(double p) { return next_unit() < p; }

    // Uniform integer in [0, bound). Bias is negligible for bound << 2^64.
    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

    // Derive an independent stream; child streams with distinct tags do not
    // collide with the parent sequence.
    Rng split(std::uint64_t tag) const {
        Rng child(state_ ^ (0x9e3779b97f4a7c15ULL * (tag + 0x632be59bd9b4e019ULL)));
        child.next_u64();
        return child;
    }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    std::uint64_t state_;
};

}  // namespace deep
