#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "gr2r/distributions.hpp"
#include "gr2r/oracles.hpp"
#include "gr2r/splitters.hpp"

using namespace gr2r;

TEST_CASE("binomial grid enumerates the full joint support") {
    EnumerationGrid grid = enumerate_split_law(NoiseModel::binomial(2), 0.5, 0.5);
    // z in {0,1,2}; z=0 forces omega=0 and z=2 (both balls drawn) forces
    // omega=1, so only z=1 admits two feasible omega values: 4 atoms total.
    CHECK(grid.atoms.size() == 4);
    CHECK(grid.tail_mass_dropped == 0.0);
    double total = 0.0;
    for (const GridAtom& a : grid.atoms) total += a.probability;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("grid marginal of y reproduces the family pmf") {
    NoiseModel model = NoiseModel::binomial(6);
    EnumerationGrid grid = enumerate_split_law(model, 0.4, 1.0 / 3.0);
    std::map<long long, double> marginal;
    for (const GridAtom& a : grid.atoms) marginal[std::llround(a.y * 6)] += a.probability;
    for (long long z = 0; z <= 6; ++z) {
        CHECK(std::abs(marginal[z] - binomial_pmf(z, 6, 0.4)) < 1e-14);
    }

    NoiseModel pois = NoiseModel::poisson(1.0);
    EnumerationGrid pg = enumerate_split_law(pois, 1.5, 0.2, 1e-12);
    std::map<long long, double> pm;
    for (const GridAtom& a : pg.atoms) pm[std::llround(a.y)] += a.probability;
    for (long long z = 0; z <= 10; ++z) {
        CHECK(std::abs(pm[z] - poisson_pmf(z, 1.5)) < 1e-12);
    }
}

TEST_CASE("conditional split weights do not depend on the clean value") {
    // p(y1 | y) must be shared between grids built from different x.
    NoiseModel model = NoiseModel::poisson(1.0);
    EnumerationGrid g1 = enumerate_split_law(model, 1.0, 0.4, 1e-13);
    EnumerationGrid g2 = enumerate_split_law(model, 2.0, 0.4, 1e-13);
    auto conditional = [](const EnumerationGrid& g) {
        std::map<long long, double> y_mass;
        for (const GridAtom& a : g.atoms) y_mass[std::llround(a.y)] += a.probability;
        std::map<std::pair<long long, long long>, double> cond;
        for (const GridAtom& a : g.atoms) {
            long long z = std::llround(a.y);
            cond[{z, std::llround(a.y1 * (1.0 - 0.4) / 1.0)}] = a.probability / y_mass[z];
        }
        return cond;
    };
    auto c1 = conditional(g1), c2 = conditional(g2);
    for (const auto& [key, w] : c1) {
        if (key.first > 6) continue;  // deep Poisson tail differs only by truncation
        CHECK(std::abs(w - c2.at(key)) < 1e-10);
    }
}

TEST_CASE("expected_functional basics") {
    EnumerationGrid grid = enumerate_split_law(NoiseModel::poisson(1.0), 1.0, 0.2);
    double mass = expected_functional(grid, [](const GridAtom&) { return 1.0; });
    CHECK(mass == doctest::Approx(1.0 - grid.tail_mass_dropped).epsilon(1e-14));
    double mean2 = expected_functional(grid, [](const GridAtom& a) { return a.y2; });
    CHECK(mean2 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS(expected_functional(
        grid, [](const GridAtom& a) { return a.y2 > 0 ? 1.0 / 0.0 * a.y2 : 0.0; }));
}

TEST_CASE("posterior mean for finite priors") {
    NoiseModel model = NoiseModel::poisson(1.0);

    // Point mass: the posterior is the prior.
    CHECK(toy_posterior_mean({{2.0, 1.0}}, model, 0.5, 0.0) == doctest::Approx(2.0));

    // Uniform {1,2}: hand Bayes with p1(y1=0|x) = sum_z P(z|x) * P(omega=z|z).
    // y1=0 forces omega=z, so p1(0|x) = sum_z pois(z;x) alpha^z = exp(-x(1-alpha)).
    double p1 = std::exp(-0.5), p2 = std::exp(-1.0);
    double hand = (1.0 * p1 + 2.0 * p2) / (p1 + p2);
    CHECK(toy_posterior_mean({{1.0, 0.5}, {2.0, 0.5}}, model, 0.5, 0.0) ==
          doctest::Approx(hand).epsilon(1e-9));

    CHECK_THROWS(toy_posterior_mean({{1.0, 1.0}}, model, 0.5, -3.0));
}

TEST_CASE("reachable split values are sorted and cover the prior") {
    auto values = reachable_y1_values({{1.0, 0.5}, {2.0, 0.5}}, NoiseModel::poisson(1.0), 0.5);
    CHECK(!values.empty());
    CHECK(values.front() == doctest::Approx(0.0));
    for (std::size_t i = 1; i < values.size(); ++i) CHECK(values[i] > values[i - 1]);
}

TEST_CASE("monte-carlo expectation bands") {
    CiEstimate constant = ci_expectation([](RandomStream&) { return 3.0; }, 1000, 1);
    CHECK(constant.mean == doctest::Approx(3.0));
    CHECK(constant.half_width == doctest::Approx(0.0));

    CiEstimate chi = ci_expectation(
        [](RandomStream& r) {
            double w = r.normal();
            return w * w;
        },
        1000000, 2);
    CHECK(std::abs(chi.mean - 1.0) <= chi.half_width);
    CHECK(chi.half_width == doctest::Approx(4.0 * std::sqrt(2.0 / 1e6)).epsilon(0.05));

    CHECK_THROWS(ci_expectation([](RandomStream&) { return 0.0; }, 50, 1));

    // Agreement with enumeration on a Poisson toy case.
    NoiseModel model = NoiseModel::poisson(1.0);
    EnumerationGrid grid = enumerate_split_law(model, 1.0, 0.2);
    double exact = expected_functional(grid, [](const GridAtom& a) { return a.y1 * a.y1; });
    CiEstimate mc = ci_expectation(
        [&](RandomStream& r) {
            ImageTensor y = sample_noisy(model, ImageTensor::scalar(1.0), r);
            SplitPair p = split(model, y, 0.2, r);
            return p.y1[0] * p.y1[0];
        },
        200000, 3);
    CHECK(std::abs(mc.mean - exact) <= mc.half_width);
}

TEST_CASE("grid exports to csv") {
    EnumerationGrid grid = enumerate_split_law(NoiseModel::binomial(2), 0.5, 0.5);
    std::string csv = grid_to_csv(grid);
    CHECK(csv.find("atom,probability,y,y1,y2") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 atoms
}
