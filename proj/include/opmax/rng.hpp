#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace opmax {

// Seeded random stream. The engine is std::mt19937_64; the conversions to
// doubles and bounded integers are done here so results do not depend on the
// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    // splitmix64 finalizer; used to derive independent stream seeds.
    static constexpr std::uint64_t mix(std::uint64_t x) noexcept {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    static constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) noexcept {
        return mix(mix(master) ^ mix(stream + 0x632BE59BD9B4E019ULL));
    }

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform on {0, ..., n-1}; n must be positive. Lemire's nearly-divisionless method.
    std::size_t index(std::size_t n) {
        const auto range = static_cast<std::uint64_t>(n);
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * range;
        auto low = static_cast<std::uint64_t>(m);
        if (low < range) {
            const std::uint64_t threshold = (0 - range) % range;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * range;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::size_t>(m >> 64);
    }

    // Draw from a probability vector. Rounding slack falls on the last
    // positive entry.
    std::size_t categorical(std::span<const double> probs) {
        const double u = uniform();
        double acc = 0.0;
        std::size_t last = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] <= 0.0) continue;
            acc += probs[i];
            last = i;
            if (u < acc) return i;
        }
        return last;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace opmax
