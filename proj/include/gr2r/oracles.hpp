#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gr2r/nef_models.hpp"
#include "gr2r/rng.hpp"

namespace gr2r {

// One atom of the joint split law (y, y1, y2) for a scalar observation.
struct GridAtom {
    double probability;
    double y;
    double y1;
    double y2;
};

struct EnumerationGrid {
    std::vector<GridAtom> atoms;
    double tail_mass_dropped = 0.0;
};

// Full joint support of (y, y1, y2) given scalar x for Poisson/Binomial.
// Poisson counts truncated where the remaining mass drops below tail_eps;
// Binomial enumerated fully.
EnumerationGrid enumerate_split_law(const NoiseModel& model, double x, double alpha,
                                    double tail_eps = 1e-12);

// Sum of probability * functional(atom); exact up to the dropped tail.
double expected_functional(const EnumerationGrid& grid,
                           const std::function<double(const GridAtom&)>& functional);

// E[x | y1 = y1_value] for a finite prior over clean values, by Bayes over the
// marginal p1(y1|x) of the enumerated split law.
double toy_posterior_mean(const std::vector<std::pair<double, double>>& prior_value_prob,
                          const NoiseModel& model, double alpha, double y1_value,
                          double tail_eps = 1e-12);

// All distinct y1 atoms reachable under the prior (sorted).
std::vector<double> reachable_y1_values(
    const std::vector<std::pair<double, double>>& prior_value_prob, const NoiseModel& model,
    double alpha, double tail_eps = 1e-12);

struct CiEstimate {
    double mean;
    double half_width;  // 4 standard errors
};

// Monte-Carlo expectation of functional(sampler(rng)) with a 4-SE half width.
CiEstimate ci_expectation(const std::function<double(RandomStream&)>& sampler, std::size_t n,
                          std::uint64_t seed);

// Debug export: atom index, probability, y, y1, y2 columns.
std::string grid_to_csv(const EnumerationGrid& grid);

}  // namespace gr2r
