#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gr2r/distributions.hpp"
#include "gr2r/rng.hpp"

using namespace gr2r;

TEST_CASE("streams are reproducible and substreams are independent of draw order") {
    RandomStream a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    RandomStream root(7);
    RandomStream s3 = root.substream(3);
    root.uniform();  // advancing the parent must not change substream derivation
    RandomStream s3_again = root.substream(3);
    CHECK(s3.next_u64() == s3_again.next_u64());

    RandomStream by_name = root.substream("splits");
    RandomStream by_name2 = root.substream("splits");
    CHECK(by_name.next_u64() == by_name2.next_u64());
}

TEST_CASE("uniform lies in [0,1) and uniform_positive in (0,1]") {
    RandomStream rng(1);
    for (int i = 0; i < 10000; ++i) {
        double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        double v = rng.uniform_positive();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("normal moments") {
    RandomStream rng(2);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal(1.0, 2.0);
        s += x;
        s2 += x * x;
    }
    double m = s / n, v = s2 / n - m * m;
    CHECK(std::abs(m - 1.0) < 4.0 * 2.0 / std::sqrt(n));
    CHECK(std::abs(v - 4.0) < 0.1);
}

TEST_CASE("gamma sampler matches shape/rate moments across regimes") {
    RandomStream rng(3);
    for (double shape : {0.5, 1.0, 2.5, 30.0}) {
        CAPTURE(shape);
        const int n = 300000;
        double s = 0, s2 = 0;
        for (int i = 0; i < n; ++i) {
            double x = rng.gamma(shape);
            s += x;
            s2 += x * x;
        }
        double m = s / n, v = s2 / n - m * m;
        CHECK(std::abs(m - shape) < 4.0 * std::sqrt(shape / n));
        CHECK(std::abs(v - shape) / shape < 0.05);
    }
}

TEST_CASE("beta sampler moments") {
    RandomStream rng(4);
    double a = 1.0, b = 4.0;  // looks=5, alpha=0.2 splitting weights
    const int n = 300000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        double x = rng.beta(a, b);
        s += x;
        s2 += x * x;
    }
    double mean = a / (a + b);
    double var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
    double m = s / n;
    CHECK(std::abs(m - mean) < 4.0 * std::sqrt(var / n));
    CHECK(std::abs((s2 / n - m * m) - var) / var < 0.05);
}

TEST_CASE("poisson sampler matches pmf in both regimes") {
    for (double mean : {2.5, 80.0}) {
        CAPTURE(mean);
        RandomStream rng(5);
        const int n = 200000;
        double s = 0, s2 = 0;
        for (int i = 0; i < n; ++i) {
            double x = static_cast<double>(rng.poisson(mean));
            s += x;
            s2 += x * x;
        }
        double m = s / n;
        CHECK(std::abs(m - mean) < 4.0 * std::sqrt(mean / n));
        CHECK(std::abs((s2 / n - m * m) - mean) / mean < 0.05);
    }
}

TEST_CASE("binomial and hypergeometric frequencies match their pmfs") {
    RandomStream rng(6);
    const int n = 200000;
    std::vector<int> bin_counts(7, 0);
    for (int i = 0; i < n; ++i) bin_counts[static_cast<std::size_t>(rng.binomial(6, 0.3))]++;
    for (int k = 0; k <= 6; ++k) {
        double p = binomial_pmf(k, 6, 0.3);
        double se = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(bin_counts[k] / double(n) - p) <= 4.0 * se + 1e-12);
    }

    // population 10, 4 marked, 5 draws
    std::vector<int> hyp_counts(5, 0);
    for (int i = 0; i < n; ++i) hyp_counts[static_cast<std::size_t>(rng.hypergeometric(10, 4, 5))]++;
    for (int k = 0; k <= 4; ++k) {
        double p = hypergeometric_pmf(k, 10, 4, 5);
        double se = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(hyp_counts[k] / double(n) - p) <= 4.0 * se + 1e-12);
    }
}

TEST_CASE("hypergeometric rejects oversized populations") {
    RandomStream rng(7);
    CHECK_THROWS(rng.hypergeometric(20000, 10, 5));
}
