#pragma once

#include <utility>

#include "gr2r/rng.hpp"
#include "gr2r/tensor.hpp"

namespace gr2r {

enum class Family { Gaussian, Poisson, Gamma, Binomial };

// Interior margin for mean-domain checks; exact boundary values are errors.
inline constexpr double kDomainMargin = 1e-12;

// Tagged noise-family descriptor. Exactly the parameters of the declared
// family are available; accessing another family's parameter throws.
class NoiseModel {
public:
    static NoiseModel gaussian(double sigma);
    static NoiseModel poisson(double gain);
    static NoiseModel gamma(int looks);
    static NoiseModel binomial(int looks);

    Family family() const { return family_; }
    double sigma() const;
    double gain() const;
    int looks() const;

    const char* family_name() const;

    // Mean-domain check for a prospective clean value x (strict interior for
    // Poisson/Gamma/Binomial). Throws std::domain_error naming the index.
    void check_mean_domain(const ImageTensor& x) const;
    bool mean_in_domain(double v) const;

    // Validity check for an observation y of this family (lattice membership
    // for the discrete families, positivity for Gamma).
    void check_observation(const ImageTensor& y) const;

    double variance_at(double x) const;

private:
    NoiseModel(Family f, double sigma, double gain, int looks)
        : family_(f), sigma_(sigma), gain_(gain), looks_(looks) {}

    Family family_;
    double sigma_;
    double gain_;
    int looks_;
};

// Draws y with E{y|x} = x elementwise. Gamma convention: shape l, rate l/x.
ImageTensor sample_noisy(const NoiseModel& model, const ImageTensor& x, RandomStream& rng);

// (mean, variance) of y given x; mean is x bit-exactly.
std::pair<ImageTensor, ImageTensor> mean_variance(const NoiseModel& model,
                                                  const ImageTensor& x);

// Elementwise exponential-family decomposition functions eta(v), phi(v).
std::pair<ImageTensor, ImageTensor> eta_phi(const NoiseModel& model, const ImageTensor& v);

// Negative log-density of y at mean v, up to v-independent terms; summed over
// pixels. Minimized over interior v at v = y for every family.
double family_nll(const NoiseModel& model, const ImageTensor& y, const ImageTensor& v);

// Rounds y/gain to the Poisson count lattice; throws if any entry is further
// than 1e-9 from an integer (decimal-text round-trip tolerance).
long long poisson_count_at(const NoiseModel& model, double y_value, std::size_t index);

long long binomial_count_at(const NoiseModel& model, double y_value, std::size_t index);

}  // namespace gr2r
