#ifndef DYADREG_CORE_RNG_HPP_
#define DYADREG_CORE_RNG_HPP_

#include <cstdint>

namespace dyadreg {

// Counter-based substream generator built on SplitMix64 (Steele, Lea &
// Flood 2014). Output i of a stream is mix64(state0 + (i+1)*GAMMA) with
// the standard finalizer below, so draws depend only on
// (master_seed, stream_id, position) and never on scheduling.
//
// Substream derivation: state0 = mix64(master_seed ^ mix64(stream_id ^ GAMMA)).
// Distinct (seed, id) pairs give statistically independent streams;
// identical pairs reproduce identical draws.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : state_(mix64(master_seed ^ mix64(stream_id ^ kGamma))) {}

    std::uint64_t next_u64() {
        state_ += kGamma;
        return mix64(state_);
    }

    // Uniform in [0,1) from the top 53 bits, so results are reproducible
    // across conforming implementations of this scheme.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace dyadreg

#endif
