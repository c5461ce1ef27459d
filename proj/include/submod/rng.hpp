#pragma once

#include <cstdint>
#include <string_view>

namespace submod {

// Splittable counter-based generator (splitmix64 core). Every algorithmic
// phase derives its own named stream from the run seed, so a run is
// reproducible regardless of how many draws other phases consume.
class Rng {
public:
    Rng() : state_(0x9e3779b97f4a7c15ULL) {}
    explicit Rng(std::uint64_t seed) : state_(mix(seed ^ 0x5851f42d4c957f2dULL)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound). bound must be positive.
    std::uint64_t next_below(std::uint64_t bound) {
        // Lemire-style rejection-free for our purposes; modulo bias is
        // negligible for bound << 2^64 but we reject to keep draws exact.
        std::uint64_t threshold = -bound % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    bool bernoulli(double p) { return next_double() < p; }

    // Child stream independent of this one; does not advance this stream.
    Rng derive(std::uint64_t stream_id) const {
        Rng child;
        child.state_ = mix(state_ ^ mix(stream_id + 0x632be59bd9b4e019ULL));
        return child;
    }

    Rng derive(std::string_view label) const {
        std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
        for (char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
        return derive(h);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace submod
