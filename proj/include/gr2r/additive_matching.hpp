#pragma once

#include <cstdint>
#include <vector>

#include "gr2r/rng.hpp"
#include "gr2r/splitters.hpp"
#include "gr2r/tensor.hpp"

namespace gr2r {

// Raw-moment targets mu_1..mu_k for the synthetic recorruption noise omega in
// y1 = y + tau*omega, y2 = y - omega/tau.
struct MomentSpec {
    std::vector<double> moments;
    int order = 2;  // k >= 2
    double tau = 1.0;
};

struct GdConfig {
    double step_size = 0.0;  // 0 -> 0.1 / order
    int max_iters = 10000;
    double rel_tol = 0.1;
};

// n i.i.d. samples of log R with R Rayleigh-distributed, affinely standardized
// to zero mean and standard deviation sigma using the analytic moments of the
// log transform (mean ln s + (ln 2 - euler_gamma)/2, variance pi^2/24). The
// result is left-skewed.
ImageTensor log_rayleigh_sample(double sigma, std::size_t n, RandomStream& rng);

// Targets for omega given observed noise samples eps: mu_1 = 0,
// mu_2 = E[eps^2], and for k = 3, mu_3 = E[eps^3] / tau.
MomentSpec target_moments(const ImageTensor& noise_samples, int k, double tau);

// Relative (absolute for zero targets) moment residuals of z against spec.
std::vector<double> moment_residuals(const ImageTensor& z, const MomentSpec& spec);

// Draws n values whose empirical raw moments match spec.moments: gradient
// descent on the squared moment residuals from a z ~ N(mu_1, mu_2 - mu_1^2)
// initialization, stopping when every residual is below cfg.rel_tol. Throws
// std::runtime_error carrying the final residuals on non-convergence.
ImageTensor maxent_sample(const MomentSpec& spec, std::size_t n, const GdConfig& cfg,
                          RandomStream& rng);

// (y + tau*omega, y - omega/tau); the stored alpha is the equivalent
// recorruption level tau^2 / (1 + tau^2).
SplitPair r2r_additive_split(const ImageTensor& y, const ImageTensor& omega, double tau);

double alpha_equivalent(double tau);

}  // namespace gr2r
