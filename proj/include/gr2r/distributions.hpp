#pragma once

#include <cmath>
#include <limits>

namespace gr2r {

inline double log_binomial_coefficient(long long n, long long k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

inline double poisson_pmf(long long k, double mean) {
    if (k < 0) return 0.0;
    if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(static_cast<double>(k) * std::log(mean) - mean -
                    std::lgamma(static_cast<double>(k) + 1.0));
}

inline double binomial_pmf(long long k, long long n, double p) {
    if (k < 0 || k > n) return 0.0;
    if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return k == n ? 1.0 : 0.0;
    double lp = log_binomial_coefficient(n, k) + static_cast<double>(k) * std::log(p) +
                static_cast<double>(n - k) * std::log1p(-p);
    return std::exp(lp);
}

// P(k marked | population N with K marked, n draws without replacement).
inline double hypergeometric_pmf(long long k, long long population, long long successes,
                                 long long draws) {
    if (k < 0 || k > successes || k > draws || draws - k > population - successes) return 0.0;
    double lp = log_binomial_coefficient(successes, k) +
                log_binomial_coefficient(population - successes, draws - k) -
                log_binomial_coefficient(population, draws);
    return std::exp(lp);
}

}  // namespace gr2r
