#include "gr2r/additive_matching.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <stdexcept>
#include <string>

namespace gr2r {

namespace {

constexpr double kLogHalfVariance = std::numbers::pi * std::numbers::pi / 24.0;

void check_spec(const MomentSpec& spec) {
    if (spec.order < 2 || spec.order > 3) {
        throw std::invalid_argument("moment order must be 2 or 3");
    }
    if (spec.moments.size() != static_cast<std::size_t>(spec.order)) {
        throw std::invalid_argument("moment count must equal the order");
    }
    if (!(spec.tau > 0.0)) throw std::invalid_argument("tau must be positive");
    double var = spec.moments[1] - spec.moments[0] * spec.moments[0];
    if (!(var > 0.0)) throw std::invalid_argument("moment targets imply a non-positive variance");
}

std::vector<double> raw_moments(const ImageTensor& z, int order) {
    std::vector<double> m(order, 0.0);
    for (std::size_t j = 0; j < z.size(); ++j) {
        double p = 1.0;
        for (int i = 0; i < order; ++i) {
            p *= z[j];
            m[i] += p;
        }
    }
    for (int i = 0; i < order; ++i) m[i] /= static_cast<double>(z.size());
    return m;
}

std::vector<double> residuals_against(const std::vector<double>& achieved,
                                      const std::vector<double>& targets, double scale2) {
    std::vector<double> r(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] != 0.0) {
            r[i] = std::abs(achieved[i] - targets[i]) / std::abs(targets[i]);
        } else {
            // Absolute criterion in units of sqrt(mu_2)^(i+1).
            r[i] = std::abs(achieved[i]) / std::pow(std::sqrt(scale2), i + 1.0);
        }
    }
    return r;
}

}  // namespace

ImageTensor log_rayleigh_sample(double sigma, std::size_t n, RandomStream& rng) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (n == 0) throw std::invalid_argument("sample count must be positive");
    // ln R = (ln 2 + ln E)/2 for R = sqrt(2 E), E ~ Exp(1); E[ln E] = -euler_gamma.
    const double mean = 0.5 * (std::numbers::ln2 - std::numbers::egamma);
    const double stddev = std::sqrt(kLogHalfVariance);
    ImageTensor out = ImageTensor::zeros({n});
    for (std::size_t j = 0; j < n; ++j) {
        double e = -std::log(1.0 - rng.uniform());
        double log_r = 0.5 * (std::numbers::ln2 + std::log(e));
        out[j] = sigma * (log_r - mean) / stddev;
    }
    return out;
}

MomentSpec target_moments(const ImageTensor& noise_samples, int k, double tau) {
    if (k < 2 || k > 3) throw std::invalid_argument("moment order must be 2 or 3");
    if (noise_samples.size() == 0) throw std::invalid_argument("noise samples must be non-empty");
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    std::vector<double> m = raw_moments(noise_samples, k);
    MomentSpec spec;
    spec.order = k;
    spec.tau = tau;
    spec.moments = {0.0, m[1]};
    if (k == 3) spec.moments.push_back(m[2] / tau);
    check_spec(spec);
    return spec;
}

std::vector<double> moment_residuals(const ImageTensor& z, const MomentSpec& spec) {
    check_spec(spec);
    return residuals_against(raw_moments(z, spec.order), spec.moments, spec.moments[1]);
}

ImageTensor maxent_sample(const MomentSpec& spec, std::size_t n, const GdConfig& cfg,
                          RandomStream& rng) {
    check_spec(spec);
    if (n == 0) throw std::invalid_argument("sample count must be positive");
    if (!(cfg.rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
    const int k = spec.order;
    const double step = cfg.step_size > 0.0 ? cfg.step_size : 0.1 / k;

    // Work in units of sqrt(mu_2) so the descent step is scale-free; raw
    // moments transform as mu_i -> mu_i / scale^i.
    const double scale = std::sqrt(spec.moments[1]);
    std::vector<double> targets(k);
    for (int i = 0; i < k; ++i) targets[i] = spec.moments[i] / std::pow(scale, i + 1.0);

    ImageTensor z = ImageTensor::zeros({n});
    const double init_mean = targets[0];
    const double init_std = std::sqrt(targets[1] - targets[0] * targets[0]);
    for (std::size_t j = 0; j < n; ++j) z[j] = init_mean + init_std * rng.normal();

    auto objective = [&](const std::vector<double>& m) {
        double f = 0.0;
        for (int i = 0; i < k; ++i) f += (m[i] - targets[i]) * (m[i] - targets[i]);
        return f;
    };

    std::vector<double> m = raw_moments(z, k);
    std::vector<double> grad(n);
    ImageTensor cand = z;
    std::vector<double> res;
    // The configured step acts as a cap; backtracking halves it whenever a
    // full step would increase the moment mismatch (the cubic term can
    // otherwise blow up tail samples), then recovers toward the cap.
    double step_eff = step;
    for (int iter = 0; iter <= cfg.max_iters; ++iter) {
        res = residuals_against(m, targets, targets[1]);
        bool done = true;
        for (double r : res) done = done && r < cfg.rel_tol;
        if (done) {
            for (std::size_t j = 0; j < n; ++j) z[j] *= scale;
            return z;
        }
        if (iter == cfg.max_iters) break;
        // Gradient of the per-sample residual objective sum_i (m_i - nu_i)^2.
        for (std::size_t j = 0; j < n; ++j) {
            double g = 0.0;
            double p = 1.0;
            for (int i = 0; i < k; ++i) {
                g += 2.0 * (m[i] - targets[i]) * (i + 1.0) * p;
                p *= z[j];
            }
            grad[j] = g;
        }
        const double f0 = objective(m);
        bool stalled = false;
        while (true) {
            for (std::size_t j = 0; j < n; ++j) cand[j] = z[j] - step_eff * grad[j];
            std::vector<double> m_cand = raw_moments(cand, k);
            double f1 = objective(m_cand);
            if (std::isfinite(f1) && f1 < f0) {
                std::swap(z, cand);
                m = std::move(m_cand);
                break;
            }
            step_eff *= 0.5;
            if (step_eff < step * 1e-12) {
                stalled = true;
                break;
            }
        }
        if (stalled) break;
        step_eff = std::min(step, 2.0 * step_eff);
    }
    std::string msg = "moment matching did not converge; residuals:";
    for (double r : res) msg += " " + std::to_string(r);
    throw std::runtime_error(msg);
}

SplitPair r2r_additive_split(const ImageTensor& y, const ImageTensor& omega, double tau) {
    require_same_shape(y, omega);
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    SplitPair pair;
    pair.y1 = y;
    pair.y2 = y;
    for (std::size_t i = 0; i < y.size(); ++i) {
        pair.y1[i] = y[i] + tau * omega[i];
        pair.y2[i] = y[i] - omega[i] / tau;
    }
    pair.alpha = alpha_equivalent(tau);
    return pair;
}

double alpha_equivalent(double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    return tau * tau / (1.0 + tau * tau);
}

}  // namespace gr2r
