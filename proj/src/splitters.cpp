#include "gr2r/splitters.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gr2r/distributions.hpp"

namespace gr2r {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("split: alpha must lie in (0,1)");
}

// Binomial splits need l*alpha to be a positive integer.
long long binomial_alpha_count(const NoiseModel& model, double alpha) {
    double la = static_cast<double>(model.looks()) * alpha;
    double rounded = std::round(la);
    if (std::fabs(la - rounded) > 1e-9 || rounded < 1.0)
        throw std::invalid_argument("split: binomial requires looks*alpha to be a positive integer");
    return static_cast<long long>(rounded);
}

}  // namespace

double default_alpha(Family family) {
    switch (family) {
        case Family::Gaussian: return 0.5;
        case Family::Poisson: return 0.15;
        case Family::Gamma: return 0.2;
        case Family::Binomial: return 0.5;
    }
    return 0.5;
}

SplitPair split(const NoiseModel& model, const ImageTensor& y, double alpha,
                RandomStream& rng) {
    check_alpha(alpha);
    model.check_observation(y);
    SplitPair pair{y, y, alpha};
    double one_minus = 1.0 - alpha;
    switch (model.family()) {
        case Family::Gaussian: {
            double scale = std::sqrt(alpha / one_minus);
            for (std::size_t i = 0; i < y.size(); ++i) {
                double omega = rng.normal(0.0, model.sigma());
                pair.y1[i] = y[i] + scale * omega;
                pair.y2[i] = (y[i] - one_minus * pair.y1[i]) / alpha;
            }
            break;
        }
        case Family::Poisson: {
            for (std::size_t i = 0; i < y.size(); ++i) {
                long long z = poisson_count_at(model, y[i], i);
                long long omega = rng.binomial(z, alpha);
                pair.y1[i] = (y[i] - model.gain() * static_cast<double>(omega)) / one_minus;
                pair.y2[i] = model.gain() * static_cast<double>(omega) / alpha;
            }
            break;
        }
        case Family::Gamma: {
            double l = static_cast<double>(model.looks());
            for (std::size_t i = 0; i < y.size(); ++i) {
                double omega = rng.beta(l * alpha, l * one_minus);
                pair.y1[i] = y[i] * (1.0 - omega) / one_minus;
                pair.y2[i] = y[i] * omega / alpha;
            }
            break;
        }
        case Family::Binomial: {
            long long l = model.looks();
            long long la = binomial_alpha_count(model, alpha);
            for (std::size_t i = 0; i < y.size(); ++i) {
                long long z = binomial_count_at(model, y[i], i);
                long long omega = rng.hypergeometric(l, la, z);
                double w = static_cast<double>(omega) / static_cast<double>(l);
                pair.y1[i] = (y[i] - w) / one_minus;
                pair.y2[i] = w / alpha;
            }
            break;
        }
    }
    return pair;
}

SplitMoments split_statistics_exact(const NoiseModel& model, double x, double alpha,
                                    double tail_eps) {
    check_alpha(alpha);
    if (model.family() != Family::Poisson && model.family() != Family::Binomial)
        throw std::invalid_argument(
            "split_statistics_exact: continuous family; use the Monte-Carlo path");

    double m1 = 0, m2 = 0, s11 = 0, s22 = 0, s12 = 0, mass = 0;
    auto accumulate = [&](double p, double y1, double y2) {
        mass += p;
        m1 += p * y1;
        m2 += p * y2;
        s11 += p * y1 * y1;
        s22 += p * y2 * y2;
        s12 += p * y1 * y2;
    };

    double one_minus = 1.0 - alpha;
    if (model.family() == Family::Poisson) {
        if (!(x >= 0.0)) throw std::domain_error("split_statistics_exact: x must be >= 0");
        double mean_count = x / model.gain();
        double tail = 1.0;
        for (long long z = 0; tail > tail_eps; ++z) {
            double pz = poisson_pmf(z, mean_count);
            tail -= pz;
            for (long long w = 0; w <= z; ++w) {
                double p = pz * binomial_pmf(w, z, alpha);
                double y = model.gain() * static_cast<double>(z);
                double y2 = model.gain() * static_cast<double>(w) / alpha;
                double y1 = (y - model.gain() * static_cast<double>(w)) / one_minus;
                accumulate(p, y1, y2);
            }
            if (z > 100000) throw std::runtime_error("split_statistics_exact: truncation failed");
        }
    } else {
        if (!(x >= 0.0 && x <= 1.0))
            throw std::domain_error("split_statistics_exact: x must be in [0,1]");
        long long l = model.looks();
        long long la = binomial_alpha_count(model, alpha);
        for (long long z = 0; z <= l; ++z) {
            double pz = binomial_pmf(z, l, x);
            for (long long w = 0; w <= la && w <= z; ++w) {
                double p = pz * hypergeometric_pmf(w, l, la, z);
                if (p == 0.0) continue;
                double y = static_cast<double>(z) / static_cast<double>(l);
                double wv = static_cast<double>(w) / static_cast<double>(l);
                accumulate(p, (y - wv) / one_minus, wv / alpha);
            }
        }
    }

    SplitMoments out{};
    m1 /= mass;
    m2 /= mass;
    out.mean1 = m1;
    out.mean2 = m2;
    out.var1 = s11 / mass - m1 * m1;
    out.var2 = s22 / mass - m2 * m2;
    out.cov12 = s12 / mass - m1 * m2;
    out.tail_mass_dropped = 1.0 - mass;
    return out;
}

SnrValue snr(const ImageTensor& mean, const ImageTensor& variance) {
    require_same_shape(mean, variance, "snr");
    double total_var = 0.0;
    for (double v : variance.data) {
        if (v < 0.0) throw std::invalid_argument("snr: negative variance entry");
        total_var += v;
    }
    double num = squared_norm(mean);
    if (num == 0.0) throw std::invalid_argument("snr: all-zero mean");
    if (total_var == 0.0) return {std::numeric_limits<double>::infinity(), true};
    return {num / total_var, false};
}

ImageTensor mc_inference(const std::function<ImageTensor(const ImageTensor&)>& f,
                         const NoiseModel& model, const ImageTensor& y, double alpha,
                         int mc_samples, RandomStream& rng) {
    if (mc_samples < 1) throw std::invalid_argument("mc_inference: mc_samples must be >= 1");
    ImageTensor acc = ImageTensor::zeros(y.shape);
    for (int j = 0; j < mc_samples; ++j) {
        RandomStream sub = rng.substream(static_cast<std::uint64_t>(j));
        SplitPair pair = split(model, y, alpha, sub);
        ImageTensor fy = f(pair.y1);
        require_same_shape(fy, y, "mc_inference");
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += fy[i];
    }
    for (double& v : acc.data) v /= static_cast<double>(mc_samples);
    return acc;
}

}  // namespace gr2r
