#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace wscnn {

// Deterministic random stream. Bounded draws use rejection sampling and
// floats are built from the top 24 bits, so sequences depend only on the
// seed, not on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform integer in [0, n), n > 0.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = gen_();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform float in [lo, hi).
    float uniform(float lo, float hi) {
        float u = static_cast<float>(gen_() >> 40) * 0x1.0p-24f;
        return lo + (hi - lo) * u;
    }

    // Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

// FNV-1a over the stage name, mixed with the master seed through
// splitmix64. Every pipeline stage draws from its own sub-stream, so a
// change in one stage cannot shift the randomness of another.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stage,
                                 std::uint64_t index = 0) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : stage) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::uint64_t z = master ^ h ^ (index * 0x9e3779b97f4a7c15ull);
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace wscnn
