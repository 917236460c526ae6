#ifndef QSG_RNG_HPP
#define QSG_RNG_HPP

#include <cstdint>
#include <span>

namespace qsg {

// SplitMix64: tiny splittable generator with platform-independent output.
// Streams are derived by hashing (base seed, trial, agent), so trials can
// run in any order or in parallel and still draw identical sequences.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform double in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    SplitMix64 g(a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
    return g.next_u64();
}

inline SplitMix64 derive_stream(std::uint64_t base_seed, std::uint64_t trial,
                                std::uint64_t agent) {
    return SplitMix64(mix_seed(mix_seed(base_seed, trial), agent));
}

// Sample an index from a probability vector by CDF walk; the final index
// absorbs any rounding slack.
inline int sample_discrete(SplitMix64& rng, std::span<const double> probs) {
    const double u = rng.next_double();
    double cum = 0.0;
    for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
        cum += probs[k];
        if (u < cum) return static_cast<int>(k);
    }
    return static_cast<int>(probs.size()) - 1;
}

} // namespace qsg

#endif // QSG_RNG_HPP
