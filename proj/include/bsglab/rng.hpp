#pragma once
// Counter-based random streams. Every stochastic routine in the library
// derives its randomness from (root_seed, stream_id, counter) through the
// splitmix64 finalizer, so estimates are bit-reproducible for a fixed seed
// and independent of evaluation order.
#include <cstdint>

namespace bsg {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 output finalizer (Stafford mix13 variant used by splitmix64).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Decorrelated substream: two mixing rounds on (root, id).
    static Rng stream(std::uint64_t root_seed, std::uint64_t stream_id) {
        return Rng(mix64(root_seed + kGolden * mix64(stream_id + kGolden)));
    }

    std::uint64_t next_u64() { return mix64(state_ += kGolden); }

    // Uniform in the open interval (0,1); safe as inverse-CDF input.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

// Inverse standard normal CDF (Acklam's rational approximation polished with
// one Halley step through erfc); |error| < 2e-15 over (0,1).
double normal_quantile(double p);

}  // namespace bsg
