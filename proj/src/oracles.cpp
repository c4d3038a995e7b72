#include "gr2r/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "gr2r/distributions.hpp"

namespace gr2r {

EnumerationGrid enumerate_split_law(const NoiseModel& model, double x, double alpha,
                                    double tail_eps) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("enumerate_split_law: alpha must lie in (0,1)");
    EnumerationGrid grid;
    double one_minus = 1.0 - alpha;
    if (model.family() == Family::Poisson) {
        if (!(x >= 0.0)) throw std::domain_error("enumerate_split_law: x must be >= 0");
        double mean_count = x / model.gain();
        double tail = 1.0;
        for (long long z = 0;; ++z) {
            double pz = poisson_pmf(z, mean_count);
            tail -= pz;
            double y = model.gain() * static_cast<double>(z);
            for (long long w = 0; w <= z; ++w) {
                double p = pz * binomial_pmf(w, z, alpha);
                if (p == 0.0) continue;
                double y2 = model.gain() * static_cast<double>(w) / alpha;
                double y1 = (y - model.gain() * static_cast<double>(w)) / one_minus;
                grid.atoms.push_back({p, y, y1, y2});
            }
            if (tail <= tail_eps || (x == 0.0 && z == 0)) {
                grid.tail_mass_dropped = std::max(tail, 0.0);
                break;
            }
            if (z > 100000)
                throw std::runtime_error("enumerate_split_law: truncation failed");
        }
    } else if (model.family() == Family::Binomial) {
        if (!(x >= 0.0 && x <= 1.0))
            throw std::domain_error("enumerate_split_law: x must be in [0,1]");
        long long l = model.looks();
        double la_real = static_cast<double>(l) * alpha;
        long long la = static_cast<long long>(std::llround(la_real));
        if (std::fabs(la_real - static_cast<double>(la)) > 1e-9 || la < 1)
            throw std::invalid_argument(
                "enumerate_split_law: binomial requires looks*alpha to be a positive integer");
        for (long long z = 0; z <= l; ++z) {
            double pz = binomial_pmf(z, l, x);
            double y = static_cast<double>(z) / static_cast<double>(l);
            for (long long w = 0; w <= std::min(la, z); ++w) {
                double p = pz * hypergeometric_pmf(w, l, la, z);
                if (p == 0.0) continue;
                double wv = static_cast<double>(w) / static_cast<double>(l);
                grid.atoms.push_back({p, y, (y - wv) / one_minus, wv / alpha});
            }
        }
        grid.tail_mass_dropped = 0.0;
    } else {
        throw std::invalid_argument("enumerate_split_law: continuous family");
    }
    return grid;
}

double expected_functional(const EnumerationGrid& grid,
                           const std::function<double(const GridAtom&)>& functional) {
    double acc = 0.0;
    for (const GridAtom& atom : grid.atoms) {
        double v = functional(atom);
        if (!std::isfinite(v))
            throw std::runtime_error("expected_functional: non-finite functional value");
        acc += atom.probability * v;
    }
    return acc;
}

namespace {

// Marginal p1(y1|x) as a value->probability table.
std::map<double, double> y1_marginal(const NoiseModel& model, double x, double alpha,
                                     double tail_eps) {
    EnumerationGrid grid = enumerate_split_law(model, x, alpha, tail_eps);
    std::map<double, double> marginal;
    for (const GridAtom& atom : grid.atoms) marginal[atom.y1] += atom.probability;
    return marginal;
}

}  // namespace

double toy_posterior_mean(const std::vector<std::pair<double, double>>& prior_value_prob,
                          const NoiseModel& model, double alpha, double y1_value,
                          double tail_eps) {
    if (prior_value_prob.empty())
        throw std::invalid_argument("toy_posterior_mean: empty prior");
    double numer = 0.0, denom = 0.0;
    for (const auto& [x, px] : prior_value_prob) {
        auto marginal = y1_marginal(model, x, alpha, tail_eps);
        double likelihood = 0.0;
        for (const auto& [y1, p] : marginal)
            if (std::fabs(y1 - y1_value) < 1e-9) likelihood += p;
        numer += px * likelihood * x;
        denom += px * likelihood;
    }
    if (denom <= 0.0)
        throw std::domain_error("toy_posterior_mean: y1 value outside reachable support");
    return numer / denom;
}

std::vector<double> reachable_y1_values(
    const std::vector<std::pair<double, double>>& prior_value_prob, const NoiseModel& model,
    double alpha, double tail_eps) {
    std::map<double, double> all;
    for (const auto& [x, px] : prior_value_prob) {
        (void)px;
        for (const auto& [y1, p] : y1_marginal(model, x, alpha, tail_eps)) all[y1] += p;
    }
    std::vector<double> values;
    for (const auto& [y1, p] : all)
        if (p > 1e-11) values.push_back(y1);
    return values;
}

CiEstimate ci_expectation(const std::function<double(RandomStream&)>& sampler, std::size_t n,
                          std::uint64_t seed) {
    if (n < 100) throw std::invalid_argument("ci_expectation: need at least 100 samples");
    RandomStream rng(seed);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = sampler(rng);
        sum += v;
        sum_sq += v * v;
    }
    double mean = sum / static_cast<double>(n);
    double var = std::max(sum_sq / static_cast<double>(n) - mean * mean, 0.0);
    double se = std::sqrt(var / static_cast<double>(n));
    return {mean, 4.0 * se};
}

std::string grid_to_csv(const EnumerationGrid& grid) {
    std::string out = "atom,probability,y,y1,y2\n";
    char line[160];
    for (std::size_t i = 0; i < grid.atoms.size(); ++i) {
        const GridAtom& a = grid.atoms[i];
        std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g,%.17g,%.17g\n", i, a.probability,
                      a.y, a.y1, a.y2);
        out += line;
    }
    return out;
}

}  // namespace gr2r
