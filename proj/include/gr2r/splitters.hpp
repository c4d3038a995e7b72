#pragma once

#include <functional>

#include "gr2r/nef_models.hpp"
#include "gr2r/rng.hpp"
#include "gr2r/tensor.hpp"

namespace gr2r {

// Conditionally independent recorrupted pair with y = (1-alpha)*y1 + alpha*y2.
struct SplitPair {
    ImageTensor y1;
    ImageTensor y2;
    double alpha = 0.0;
};

struct SplitConfig {
    double alpha = 0.5;
    int mc_samples = 1;
};

// Default recorruption level per family, matching the experimental settings
// each family was validated with.
double default_alpha(Family family);

SplitPair split(const NoiseModel& model, const ImageTensor& y, double alpha,
                RandomStream& rng);

// Exact conditional moments of (y1, y2) given scalar x for the discrete
// families, by enumerating the joint support.
struct SplitMoments {
    double mean1;
    double var1;
    double mean2;
    double var2;
    double cov12;
    double tail_mass_dropped;
};

SplitMoments split_statistics_exact(const NoiseModel& model, double x, double alpha,
                                    double tail_eps = 1e-12);

struct SnrValue {
    double value;
    bool infinite;
};

// ||mean||^2 / sum(var); infinite flag when the total variance is zero.
SnrValue snr(const ImageTensor& mean, const ImageTensor& variance);

// Test-time Monte-Carlo inference: average of f over J independent splits of y.
ImageTensor mc_inference(const std::function<ImageTensor(const ImageTensor&)>& f,
                         const NoiseModel& model, const ImageTensor& y, double alpha,
                         int mc_samples, RandomStream& rng);

}  // namespace gr2r
