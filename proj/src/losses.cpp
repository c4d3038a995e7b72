#include "gr2r/losses.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include "gr2r/distributions.hpp"
#include "gr2r/oracles.hpp"

namespace gr2r {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie strictly inside (0, 1)");
    }
}

double max_abs(const ImageTensor& y) {
    double m = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) m = std::max(m, std::abs(y[i]));
    return m;
}

// Gauss-Hermite nodes/weights for weight exp(-t^2), by Newton iteration on the
// Hermite recurrence (largest roots first, symmetry for the rest).
struct GhRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GhRule gauss_hermite(int n) {
    GhRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    double z = 0.0;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * rule.nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * rule.nodes[1];
        } else {
            z = 2.0 * z - rule.nodes[i - 2];
        }
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        rule.nodes[i] = z;
        rule.nodes[n - 1 - i] = -z;
        rule.weights[i] = 2.0 / (pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

constexpr int kGhNodes = 48;

// Per-pixel scalar evaluation; only valid for elementwise estimator kinds.
double scalar_f(const Estimator& f, double v) { return f.apply(ImageTensor::scalar(v))[0]; }

void require_elementwise(const Estimator& f) {
    if (f.kind() == EstimatorKind::Convolution) {
        throw std::invalid_argument(
            "enumeration-based expectations require an elementwise estimator");
    }
}

// Per-pixel contribution of the recorrupted NLL forms (constants dropped).
double nll_pixel(Family family, double fv, double y2) {
    switch (family) {
        case Family::Gaussian: {
            double d = fv - y2;
            return d * d;
        }
        case Family::Poisson:
            if (!(fv > 0.0)) throw std::domain_error("prediction left the Poisson mean domain");
            return fv - y2 * std::log(fv);
        case Family::Gamma:
            if (!(fv > 0.0)) throw std::domain_error("prediction left the Gamma mean domain");
            return std::log(fv) + y2 / fv;
        case Family::Binomial:
            if (!(fv > 0.0 && fv < 1.0)) {
                throw std::domain_error("prediction left the Binomial mean domain");
            }
            return -y2 * std::log(fv) + (y2 - 1.0) * std::log1p(-fv);
    }
    throw std::logic_error("unknown family");
}

const char* nll_convention(Family family) {
    switch (family) {
        case Family::Gaussian:
            return "none";
        case Family::Poisson:
            return "global alpha/gain scale and y2-only terms dropped";
        case Family::Gamma:
            return "global looks*alpha scale and y2-only terms dropped";
        case Family::Binomial:
            return "global looks*alpha scale and y2-only terms dropped";
    }
    return "none";
}

struct PixelAtom {
    double p;
    double y;
    double y1;
    double y2;
};

// Joint law of (y, y1, y2) at one pixel, conditioned on either the clean
// value or the observed value. Gauss-Hermite for the Gaussian family,
// exact enumeration elsewhere.
std::vector<PixelAtom> pixel_atoms(const NoiseModel& model, bool given_clean, double value,
                                   std::size_t index, double alpha, double tail_eps) {
    std::vector<PixelAtom> atoms;
    switch (model.family()) {
        case Family::Gaussian: {
            static const GhRule rule = gauss_hermite(kGhNodes);
            const double sigma = model.sigma();
            const double c1 = std::sqrt(alpha / (1.0 - alpha));
            const double c2 = std::sqrt((1.0 - alpha) / alpha);
            const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
            if (given_clean) {
                for (int a = 0; a < kGhNodes; ++a) {
                    double y = value + std::sqrt(2.0) * sigma * rule.nodes[a];
                    double pa = rule.weights[a] * inv_sqrt_pi;
                    for (int b = 0; b < kGhNodes; ++b) {
                        double w = std::sqrt(2.0) * sigma * rule.nodes[b];
                        atoms.push_back({pa * rule.weights[b] * inv_sqrt_pi, y, y + c1 * w,
                                         y - c2 * w});
                    }
                }
            } else {
                for (int b = 0; b < kGhNodes; ++b) {
                    double w = std::sqrt(2.0) * sigma * rule.nodes[b];
                    atoms.push_back({rule.weights[b] * inv_sqrt_pi, value, value + c1 * w,
                                     value - c2 * w});
                }
            }
            return atoms;
        }
        case Family::Poisson: {
            if (given_clean) {
                EnumerationGrid grid = enumerate_split_law(model, value, alpha, tail_eps);
                atoms.reserve(grid.atoms.size());
                for (const GridAtom& a : grid.atoms) atoms.push_back({a.probability, a.y, a.y1, a.y2});
                return atoms;
            }
            const double gain = model.gain();
            long long z = poisson_count_at(model, value, index);
            for (long long w = 0; w <= z; ++w) {
                double p = binomial_pmf(w, z, alpha);
                double y1 = (value - gain * static_cast<double>(w)) / (1.0 - alpha);
                double y2 = gain * static_cast<double>(w) / alpha;
                atoms.push_back({p, value, y1, y2});
            }
            return atoms;
        }
        case Family::Binomial: {
            if (given_clean) {
                EnumerationGrid grid = enumerate_split_law(model, value, alpha, tail_eps);
                atoms.reserve(grid.atoms.size());
                for (const GridAtom& a : grid.atoms) atoms.push_back({a.probability, a.y, a.y1, a.y2});
                return atoms;
            }
            const long long looks = model.looks();
            const long long marked = std::llround(alpha * static_cast<double>(looks));
            long long z = binomial_count_at(model, value, index);
            for (long long w = std::max<long long>(0, z - (looks - marked));
                 w <= std::min(z, marked); ++w) {
                double p = hypergeometric_pmf(w, looks, marked, z);
                double y1 = (value - static_cast<double>(w) / looks) / (1.0 - alpha);
                double y2 = (static_cast<double>(w) / looks) / alpha;
                atoms.push_back({p, value, y1, y2});
            }
            return atoms;
        }
        case Family::Gamma:
            throw std::invalid_argument(
                "enumeration is not available for the Gamma family; use Monte-Carlo");
    }
    throw std::logic_error("unknown family");
}

// Marginal law of y at one pixel given the clean value (for the two-sample
// Noise2Noise expectation).
std::vector<std::pair<double, double>> pixel_y_marginal(const NoiseModel& model, double x,
                                                        double tail_eps) {
    std::vector<std::pair<double, double>> out;
    switch (model.family()) {
        case Family::Gaussian: {
            static const GhRule rule = gauss_hermite(kGhNodes);
            const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
            for (int a = 0; a < kGhNodes; ++a) {
                out.emplace_back(rule.weights[a] * inv_sqrt_pi,
                                 x + std::sqrt(2.0) * model.sigma() * rule.nodes[a]);
            }
            return out;
        }
        case Family::Poisson: {
            const double gain = model.gain();
            const double mean = x / gain;
            double cum = 0.0;
            for (long long z = 0;; ++z) {
                double p = poisson_pmf(z, mean);
                out.emplace_back(p, gain * static_cast<double>(z));
                cum += p;
                if (1.0 - cum <= tail_eps && static_cast<double>(z) >= mean) break;
            }
            return out;
        }
        case Family::Binomial: {
            const long long looks = model.looks();
            for (long long z = 0; z <= looks; ++z) {
                out.emplace_back(binomial_pmf(z, looks, x),
                                 static_cast<double>(z) / static_cast<double>(looks));
            }
            return out;
        }
        case Family::Gamma:
            throw std::invalid_argument(
                "enumeration is not available for the Gamma family; use Monte-Carlo");
    }
    throw std::logic_error("unknown family");
}

double loss_of_sample(const NoiseModel& model, WhichLoss which, const Estimator& f,
                      const ImageTensor& x_or_y, bool given_clean, double alpha,
                      RandomStream& rng) {
    switch (which) {
        case WhichLoss::SupMse: {
            // Supervised risk on the recorrupted input: E ||f(y1) - x||^2.
            if (!given_clean) throw std::invalid_argument("supervised loss needs the clean image");
            ImageTensor y = sample_noisy(model, x_or_y, rng);
            SplitPair pair = split(model, y, alpha, rng);
            return squared_distance(f.apply(pair.y1), x_or_y);
        }
        case WhichLoss::N2n: {
            if (!given_clean) throw std::invalid_argument("paired loss needs the clean image");
            ImageTensor ya = sample_noisy(model, x_or_y, rng);
            ImageTensor yb = sample_noisy(model, x_or_y, rng);
            return squared_distance(f.apply(ya), yb);
        }
        case WhichLoss::Gr2rMse:
        case WhichLoss::Gr2rNll: {
            ImageTensor y = given_clean ? sample_noisy(model, x_or_y, rng) : x_or_y;
            SplitPair pair = split(model, y, alpha, rng);
            if (which == WhichLoss::Gr2rMse) return squared_distance(f.apply(pair.y1), pair.y2);
            ImageTensor fx = f.apply(pair.y1);
            double total = 0.0;
            for (std::size_t i = 0; i < fx.size(); ++i) {
                total += nll_pixel(model.family(), fx[i], pair.y2[i]);
            }
            return total;
        }
    }
    throw std::logic_error("unknown loss selector");
}

}  // namespace

LossValue sup_mse(const Estimator& f, const ImageTensor& y_in, const ImageTensor& x) {
    require_same_shape(y_in, x);
    return {squared_distance(f.apply(y_in), x), 0, "none"};
}

LossValue n2n_loss(const Estimator& f, const ImageTensor& y1, const ImageTensor& y2) {
    require_same_shape(y1, y2);
    return {squared_distance(f.apply(y1), y2), 0, "none"};
}

LossValue gr2r_mse(const Estimator& f, const SplitPair& pair) {
    require_same_shape(pair.y1, pair.y2);
    return {squared_distance(f.apply(pair.y1), pair.y2), 1, "none"};
}

LossValue gr2r_nll(const NoiseModel& model, const Estimator& f, const SplitPair& pair) {
    require_same_shape(pair.y1, pair.y2);
    ImageTensor fx = f.apply(pair.y1);
    double total = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i) {
        total += nll_pixel(model.family(), fx[i], pair.y2[i]);
    }
    return {total, 1, nll_convention(model.family())};
}

LossValue sure_gaussian(const Estimator& f, const ImageTensor& y, double sigma,
                        const SureOptions& opts, RandomStream* rng) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    ImageTensor fx = f.apply(y);
    double value = squared_distance(fx, y);
    double div = 0.0;
    if (opts.mode == DivergenceMode::ExactDiagonal) {
        ImageTensor jac = f.diag_jacobian(y);
        for (std::size_t i = 0; i < jac.size(); ++i) div += jac[i];
    } else {
        if (rng == nullptr) {
            throw std::invalid_argument("Monte-Carlo divergence needs a random stream");
        }
        if (opts.probes < 1) throw std::invalid_argument("at least one probe is required");
        double eps = opts.epsilon > 0.0 ? opts.epsilon : 1e-3 * (1.0 + max_abs(y));
        for (int p = 0; p < opts.probes; ++p) {
            ImageTensor probe = y;
            std::vector<double> signs(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) {
                signs[i] = rng->uniform() < 0.5 ? -1.0 : 1.0;
                probe[i] = y[i] + eps * signs[i];
            }
            ImageTensor fp = f.apply(probe);
            for (std::size_t i = 0; i < y.size(); ++i) {
                div += signs[i] * (fp[i] - fx[i]) / (eps * opts.probes);
            }
        }
    }
    value += 2.0 * sigma * sigma * div;
    return {value, 0, "none"};
}

LossValue pure_limit_poisson(const Estimator& f, const ImageTensor& y, double gain) {
    if (!(gain > 0.0)) throw std::invalid_argument("gain must be positive");
    ImageTensor fx = f.apply(y);
    double value = squared_distance(fx, y);
    ImageTensor shifted = y;
    for (std::size_t i = 0; i < y.size(); ++i) {
        shifted[i] = y[i] - gain;
        double fi_minus = f.apply(shifted)[i];
        shifted[i] = y[i];
        value += 2.0 * y[i] * (fx[i] - fi_minus);
    }
    return {value, 0, "none"};
}

double gamma_series_coefficient(int looks, int k) {
    if (looks < 1 || k < 1) throw std::invalid_argument("looks and k must be positive");
    double l = static_cast<double>(looks);
    return l * (k - 1.0) / (k * (l + k - 1.0));
}

LossValue sure_gamma_series(const Estimator& f, const ImageTensor& y, int looks, int order_k,
                            double fd_step) {
    if (looks < 1) throw std::invalid_argument("looks must be a positive integer");
    if (order_k < 1 || order_k > 4) {
        throw std::invalid_argument("series order must lie in [1, 4]");
    }
    ImageTensor fx = f.apply(y);
    double value = squared_distance(fx, y);
    const double lg_l = std::lgamma(static_cast<double>(looks));
    // b(l, 1) = 0, so the series effectively starts at k = 2.
    for (int k = 2; k <= order_k; ++k) {
        double coeff = gamma_series_coefficient(looks, k) *
                       std::exp(lg_l - std::lgamma(static_cast<double>(looks + k)));
        for (std::size_t i = 0; i < y.size(); ++i) {
            double step = fd_step > 0.0 ? fd_step : std::max(1e-4, 1e-3 * std::abs(y[i]));
            double deriv = fd_derivative(f, y, i, k, step);
            value += 2.0 * coeff * std::pow(-y[i], k + 1) * deriv;
        }
    }
    return {value, 0, "none"};
}

LossValue gr2r_operator_mse(const ForwardOperator& op, const Estimator& f,
                            const SplitPair& pair) {
    return {squared_distance(op.apply(f.apply(pair.y1)), pair.y2), 1, "none"};
}

LossValue ei_loss(const ForwardOperator& op, const Estimator& f, const ImageTensor& x_hat,
                  const TransformGroup& transforms, RandomStream& rng, int samples) {
    if (transforms.elements.empty()) {
        throw std::invalid_argument("the transform group must be non-empty");
    }
    std::vector<std::size_t> chosen;
    if (samples <= 0) {
        for (std::size_t i = 0; i < transforms.elements.size(); ++i) chosen.push_back(i);
    } else {
        for (int s = 0; s < samples; ++s) {
            chosen.push_back(static_cast<std::size_t>(rng.uniform() * transforms.elements.size()) %
                             transforms.elements.size());
        }
    }
    double total = 0.0;
    for (std::size_t idx : chosen) {
        ImageTensor xt = apply_transform(transforms.elements[idx], x_hat);
        total += squared_distance(xt, f.apply(op.apply(xt)));
    }
    return {total / static_cast<double>(chosen.size()), 0, "none"};
}

ExpectedLoss expected_loss(const NoiseModel& model, const Conditioning& cond, double alpha,
                           const Estimator& f, WhichLoss which,
                           const ExpectationMethod& method) {
    check_alpha(alpha);
    const bool given_clean = cond.on == Conditioning::On::CleanX;
    if (given_clean) {
        model.check_mean_domain(cond.value);
    } else {
        model.check_observation(cond.value);
    }

    if (method.kind == ExpectationMethod::Kind::MonteCarlo) {
        RandomStream root(method.seed);
        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t j = 0; j < method.n_samples; ++j) {
            RandomStream stream = root.substream(j);
            double v = loss_of_sample(model, which, f, cond.value, given_clean, alpha, stream);
            sum += v;
            sum_sq += v * v;
        }
        double n = static_cast<double>(method.n_samples);
        double mean = sum / n;
        double var = std::max(0.0, sum_sq / n - mean * mean);
        return {mean, 4.0 * std::sqrt(var / n)};
    }

    require_elementwise(f);
    if ((which == WhichLoss::SupMse || which == WhichLoss::N2n) && !given_clean) {
        throw std::invalid_argument("this loss is only defined conditioned on the clean image");
    }

    double total = 0.0;
    for (std::size_t i = 0; i < cond.value.size(); ++i) {
        const double v = cond.value[i];
        if (which == WhichLoss::SupMse) {
            // Supervised risk on the recorrupted input y1, target x.
            for (const PixelAtom& atom :
                 pixel_atoms(model, true, v, i, alpha, method.tail_eps)) {
                double d = scalar_f(f, atom.y1) - v;
                total += atom.p * d * d;
            }
        } else if (which == WhichLoss::N2n) {
            auto marginal = pixel_y_marginal(model, v, method.tail_eps);
            for (const auto& [pa, ya] : marginal) {
                double fv = scalar_f(f, ya);
                for (const auto& [pb, yb] : marginal) {
                    double d = fv - yb;
                    total += pa * pb * d * d;
                }
            }
        } else {
            for (const PixelAtom& atom :
                 pixel_atoms(model, given_clean, v, i, alpha, method.tail_eps)) {
                double fv = scalar_f(f, atom.y1);
                if (which == WhichLoss::Gr2rMse) {
                    double d = fv - atom.y2;
                    total += atom.p * d * d;
                } else {
                    total += atom.p * nll_pixel(model.family(), fv, atom.y2);
                }
            }
        }
    }
    return {total, 0.0};
}

}  // namespace gr2r
