#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <utility>

namespace vrprpd {

// SplitMix64 finalizer. Used to derive independent stream seeds from a
// master seed and a small tuple of integers (replicate, worker, ...).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a) noexcept {
    return mix64(mix64(seed) ^ (a + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    return derive_seed(derive_seed(seed, a), b);
}

/// Portable random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard library distributions are implementation defined,
/// so the mappings to doubles and bounded integers are done here:
///   - uniform01: top 53 bits of one engine draw, times 2^-53, in [0,1).
///   - uniform_int(lo, hi): rejection sampling on the low bits of one draw
///     (threshold = 2^64 mod range), result lo + (draw mod range).
/// The same seed therefore yields identical streams on every platform.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Inclusive bounds.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (hi <= lo) return lo;
        const auto range = static_cast<std::uint64_t>(hi - lo) + 1ULL;
        if (range == 0) return static_cast<std::int64_t>(engine_());  // full 64-bit span
        const std::uint64_t threshold = (0ULL - range) % range;
        std::uint64_t r = engine_();
        while (r < threshold) r = engine_();
        return lo + static_cast<std::int64_t>(r % range);
    }

    std::size_t index(std::size_t size) {
        return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(size) - 1));
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Fisher-Yates, back to front.
    template <typename Container>
    void shuffle(Container& c) {
        for (std::size_t i = c.size(); i > 1; --i) {
            using std::swap;
            swap(c[i - 1], c[index(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace vrprpd
