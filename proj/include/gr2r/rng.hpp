#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gr2r {

// Seeded random stream with named/indexed substream derivation.
// All samplers used by the library live here so results are identical
// across platforms and standard-library versions.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed)
        : material_(mix(seed)), engine_(material_) {}

    // Derives an independent stream; deterministic in (parent seed, index).
    RandomStream substream(std::uint64_t index) const {
        return RandomStream(material_ ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    }

    RandomStream substream(std::string_view name) const {
        return substream(fnv1a(name));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform_positive() { return 1.0 - uniform(); }

    double normal(double mean = 0.0, double stddev = 1.0);
    double gamma(double shape);  // unit rate
    double beta(double a, double b);
    long long poisson(double mean);
    long long binomial(long long trials, double p);
    // Draws `draws` balls without replacement from a population of size
    // `population` containing `successes` marked balls; returns marked count.
    long long hypergeometric(long long population, long long successes, long long draws);

private:
    static std::uint64_t mix(std::uint64_t x) {
        // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    std::uint64_t material_;
    std::mt19937_64 engine_;
};

}  // namespace gr2r
