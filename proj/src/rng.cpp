#include "gr2r/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace gr2r {

double RandomStream::normal(double mean, double stddev) {
    // Box-Muller; two fresh uniforms per draw, no cached spare.
    double u1 = uniform_positive();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
}

double RandomStream::gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
    if (shape < 1.0) {
        // boost: G(a) = G(a+1) * U^{1/a}
        double u = uniform_positive();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = uniform_positive();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double RandomStream::beta(double a, double b) {
    double ga = gamma(a);
    double gb = gamma(b);
    return ga / (ga + gb);
}

long long RandomStream::poisson(double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be nonnegative");
    if (mean == 0.0) return 0;
    if (mean < 30.0) {
        // Inversion by CDF accumulation; exact at small means.
        double p = std::exp(-mean);
        double cdf = p;
        double u = uniform();
        long long k = 0;
        while (u > cdf) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
            if (p < 1e-320 && u > cdf) return k;  // guard against round-off tails
        }
        return k;
    }
    // Hoermann's PTRS transformed rejection for large means.
    double b = 0.931 + 2.53 * std::sqrt(mean);
    double a = -0.059 + 0.02483 * b;
    double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    double v_r = 0.9277 - 3.6224 / (b - 2.0);
    double log_mean = std::log(mean);
    for (;;) {
        double u = uniform() - 0.5;
        double v = uniform();
        double us = 0.5 - std::fabs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        double k = kf;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mean - mean - std::lgamma(k + 1.0))
            return static_cast<long long>(kf);
    }
}

long long RandomStream::binomial(long long trials, double p) {
    if (trials < 0) throw std::invalid_argument("binomial: trials must be nonnegative");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("binomial: p outside [0,1]");
    if (trials == 0 || p == 0.0) return 0;
    if (p == 1.0) return trials;
    if (trials <= 256) {
        long long k = 0;
        for (long long i = 0; i < trials; ++i)
            if (uniform() < p) ++k;
        return k;
    }
    // Geometric skips over failures; O(trials * p) expected.
    bool flip = p > 0.5;
    double q = flip ? 1.0 - p : p;
    double log1mq = std::log1p(-q);
    long long k = 0;
    long long pos = -1;
    for (;;) {
        pos += 1 + static_cast<long long>(std::floor(std::log(uniform_positive()) / log1mq));
        if (pos >= trials) break;
        ++k;
    }
    return flip ? trials - k : k;
}

long long RandomStream::hypergeometric(long long population, long long successes,
                                       long long draws) {
    if (population < 0 || successes < 0 || draws < 0 || successes > population ||
        draws > population)
        throw std::invalid_argument("hypergeometric: invalid parameters");
    if (population > 10000)
        throw std::invalid_argument("hypergeometric: population above urn-simulation limit");
    // Sequential urn draws; exactness over speed at desk scale.
    long long marked = successes;
    long long remaining = population;
    long long k = 0;
    for (long long i = 0; i < draws; ++i) {
        if (uniform() * static_cast<double>(remaining) < static_cast<double>(marked)) {
            ++k;
            --marked;
        }
        --remaining;
    }
    return k;
}

}  // namespace gr2r
