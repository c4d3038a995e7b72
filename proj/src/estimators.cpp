#include "gr2r/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "gr2r/rng.hpp"

namespace gr2r {

namespace {

double softplus(double t) {
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double range_forward(RangeMap map, double t) {
    switch (map) {
        case RangeMap::None: return t;
        case RangeMap::Positive: return softplus(t) + kRangeMargin;
        case RangeMap::UnitInterval: {
            double v = logistic(t);
            if (v < kRangeMargin) return kRangeMargin;
            if (v > 1.0 - kRangeMargin) return 1.0 - kRangeMargin;
            return v;
        }
    }
    return t;
}

double range_derivative(RangeMap map, double t) {
    switch (map) {
        case RangeMap::None: return 1.0;
        case RangeMap::Positive: return logistic(t);
        case RangeMap::UnitInterval: {
            double v = logistic(t);
            if (v < kRangeMargin || v > 1.0 - kRangeMargin) return 0.0;
            return v * (1.0 - v);
        }
    }
    return 1.0;
}

const char* kind_name(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::Identity: return "identity";
        case EstimatorKind::Constant: return "constant";
        case EstimatorKind::Affine: return "affine";
        case EstimatorKind::Polynomial: return "polynomial";
        case EstimatorKind::Convolution: return "convolution";
    }
    return "?";
}

const char* range_name(RangeMap map) {
    switch (map) {
        case RangeMap::None: return "none";
        case RangeMap::Positive: return "positive";
        case RangeMap::UnitInterval: return "unit-interval";
    }
    return "?";
}

}  // namespace

Estimator Estimator::identity() { return Estimator(EstimatorKind::Identity, {}, 0); }

Estimator Estimator::constant(double c) { return Estimator(EstimatorKind::Constant, {c}, 0); }

Estimator Estimator::affine(double a, double b) {
    return Estimator(EstimatorKind::Affine, {a, b}, 0);
}

Estimator Estimator::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty() || coeffs.size() > 5)
        throw std::invalid_argument("Estimator: polynomial degree must be <= 4");
    return Estimator(EstimatorKind::Polynomial, std::move(coeffs), 0);
}

Estimator Estimator::convolution(std::vector<double> kernel, std::size_t kernel_side) {
    if (kernel_side % 2 == 0 || kernel.size() != kernel_side * kernel_side)
        throw std::invalid_argument("Estimator: kernel must be square with odd side");
    return Estimator(EstimatorKind::Convolution, std::move(kernel), kernel_side);
}

Estimator& Estimator::with_range_map(RangeMap map) {
    range_map_ = map;
    return *this;
}

ImageTensor Estimator::raw_apply(const ImageTensor& y) const {
    switch (kind_) {
        case EstimatorKind::Identity: return y;
        case EstimatorKind::Constant: return ImageTensor::full(y.shape, params_[0]);
        case EstimatorKind::Affine: {
            ImageTensor out = y;
            for (double& v : out.data) v = params_[0] * v + params_[1];
            return out;
        }
        case EstimatorKind::Polynomial: {
            ImageTensor out = y;
            for (std::size_t i = 0; i < y.size(); ++i) {
                double acc = 0.0;
                for (std::size_t j = params_.size(); j-- > 0;) acc = acc * y[i] + params_[j];
                out[i] = acc;
            }
            return out;
        }
        case EstimatorKind::Convolution: {
            if (y.shape.size() != 2)
                throw std::invalid_argument("Estimator: convolution needs a 2-D tensor");
            std::size_t h = y.shape[0], w = y.shape[1];
            long long r = static_cast<long long>(kernel_side_) / 2;
            ImageTensor out = ImageTensor::zeros(y.shape);
            for (std::size_t row = 0; row < h; ++row)
                for (std::size_t col = 0; col < w; ++col) {
                    double acc = 0.0;
                    for (long long dr = -r; dr <= r; ++dr)
                        for (long long dc = -r; dc <= r; ++dc) {
                            std::size_t rr = static_cast<std::size_t>(
                                ((static_cast<long long>(row) + dr) % static_cast<long long>(h) +
                                 static_cast<long long>(h)) %
                                static_cast<long long>(h));
                            std::size_t cc = static_cast<std::size_t>(
                                ((static_cast<long long>(col) + dc) % static_cast<long long>(w) +
                                 static_cast<long long>(w)) %
                                static_cast<long long>(w));
                            acc += params_[static_cast<std::size_t>((dr + r) * (2 * r + 1) +
                                                                    (dc + r))] *
                                   y.data[rr * w + cc];
                        }
                    out.data[row * w + col] = acc;
                }
            return out;
        }
    }
    return y;
}

ImageTensor Estimator::apply(const ImageTensor& y) const {
    ImageTensor out = raw_apply(y);
    if (range_map_ != RangeMap::None)
        for (double& v : out.data) v = range_forward(range_map_, v);
    return out;
}

ImageTensor Estimator::diag_jacobian(const ImageTensor& y) const {
    ImageTensor deriv = ImageTensor::zeros(y.shape);
    switch (kind_) {
        case EstimatorKind::Identity:
            for (double& v : deriv.data) v = 1.0;
            break;
        case EstimatorKind::Constant: break;
        case EstimatorKind::Affine:
            for (double& v : deriv.data) v = params_[0];
            break;
        case EstimatorKind::Polynomial:
            for (std::size_t i = 0; i < y.size(); ++i) {
                double acc = 0.0;
                for (std::size_t j = params_.size(); j-- > 1;)
                    acc = acc * y[i] + static_cast<double>(j) * params_[j];
                deriv[i] = acc;
            }
            break;
        case EstimatorKind::Convolution: {
            std::size_t center = (kernel_side_ * kernel_side_) / 2;
            for (double& v : deriv.data) v = params_[center];
            break;
        }
    }
    if (range_map_ != RangeMap::None) {
        ImageTensor raw = raw_apply(y);
        for (std::size_t i = 0; i < y.size(); ++i)
            deriv[i] *= range_derivative(range_map_, raw[i]);
    }
    return deriv;
}

std::vector<double> Estimator::param_gradient(const ImageTensor& y,
                                              const ImageTensor& upstream) const {
    require_same_shape(y, upstream, "param_gradient");
    ImageTensor chain = upstream;
    if (range_map_ != RangeMap::None) {
        ImageTensor raw = raw_apply(y);
        for (std::size_t i = 0; i < y.size(); ++i)
            chain[i] *= range_derivative(range_map_, raw[i]);
    }
    std::vector<double> grad(params_.size(), 0.0);
    switch (kind_) {
        case EstimatorKind::Identity: break;
        case EstimatorKind::Constant:
            for (double g : chain.data) grad[0] += g;
            break;
        case EstimatorKind::Affine:
            for (std::size_t i = 0; i < y.size(); ++i) {
                grad[0] += chain[i] * y[i];
                grad[1] += chain[i];
            }
            break;
        case EstimatorKind::Polynomial:
            for (std::size_t i = 0; i < y.size(); ++i) {
                double power = 1.0;
                for (std::size_t j = 0; j < params_.size(); ++j) {
                    grad[j] += chain[i] * power;
                    power *= y[i];
                }
            }
            break;
        case EstimatorKind::Convolution: {
            std::size_t h = y.shape.at(0), w = y.shape.at(1);
            long long r = static_cast<long long>(kernel_side_) / 2;
            for (std::size_t row = 0; row < h; ++row)
                for (std::size_t col = 0; col < w; ++col) {
                    double g = chain.data[row * w + col];
                    for (long long dr = -r; dr <= r; ++dr)
                        for (long long dc = -r; dc <= r; ++dc) {
                            std::size_t rr = static_cast<std::size_t>(
                                ((static_cast<long long>(row) + dr) % static_cast<long long>(h) +
                                 static_cast<long long>(h)) %
                                static_cast<long long>(h));
                            std::size_t cc = static_cast<std::size_t>(
                                ((static_cast<long long>(col) + dc) % static_cast<long long>(w) +
                                 static_cast<long long>(w)) %
                                static_cast<long long>(w));
                            grad[static_cast<std::size_t>((dr + r) * (2 * r + 1) + (dc + r))] +=
                                g * y.data[rr * w + cc];
                        }
                }
            break;
        }
    }
    return grad;
}

std::string Estimator::serialize_json() const {
    nlohmann::json j;
    j["kind"] = kind_name(kind_);
    j["params"] = params_;
    j["range_map"] = range_name(range_map_);
    if (kind_ == EstimatorKind::Convolution) j["kernel_side"] = kernel_side_;
    return j.dump();
}

Estimator Estimator::deserialize_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::string kind = j.at("kind").get<std::string>();
    std::vector<double> params = j.at("params").get<std::vector<double>>();
    Estimator out = Estimator::identity();
    if (kind == "identity") {
        out = Estimator::identity();
    } else if (kind == "constant") {
        out = Estimator::constant(params.at(0));
    } else if (kind == "affine") {
        out = Estimator::affine(params.at(0), params.at(1));
    } else if (kind == "polynomial") {
        out = Estimator::polynomial(params);
    } else if (kind == "convolution") {
        out = Estimator::convolution(params, j.at("kernel_side").get<std::size_t>());
    } else {
        throw std::invalid_argument("Estimator: unknown kind '" + kind + "'");
    }
    std::string rm = j.value("range_map", "none");
    if (rm == "positive") out.with_range_map(RangeMap::Positive);
    else if (rm == "unit-interval") out.with_range_map(RangeMap::UnitInterval);
    else if (rm != "none") throw std::invalid_argument("Estimator: unknown range_map");
    return out;
}

double fd_derivative(const Estimator& f, const ImageTensor& y, std::size_t pixel, int order,
                     double step) {
    if (order < 1 || order > 4) throw std::invalid_argument("fd_derivative: order must be in [1,4]");
    if (!(step > 1e-12)) throw std::invalid_argument("fd_derivative: step underflow");
    auto eval = [&](double offset) {
        ImageTensor shifted = y;
        shifted[pixel] += offset;
        return f.apply(shifted)[pixel];
    };
    double h = step;
    switch (order) {
        case 1: return (eval(h) - eval(-h)) / (2.0 * h);
        case 2: return (eval(h) - 2.0 * eval(0.0) + eval(-h)) / (h * h);
        case 3: return (eval(2 * h) - 2.0 * eval(h) + 2.0 * eval(-h) - eval(-2 * h)) /
                       (2.0 * h * h * h);
        case 4:
            return (eval(2 * h) - 4.0 * eval(h) + 6.0 * eval(0.0) - 4.0 * eval(-h) +
                    eval(-2 * h)) /
                   (h * h * h * h);
    }
    return 0.0;
}

PixelLoss mse_pixel_loss() {
    return {[](double f, double t) { double d = f - t; return d * d; },
            [](double f, double t) { return 2.0 * (f - t); }, "mse"};
}

PixelLoss poisson_nll_pixel_loss() {
    return {[](double f, double t) { return f - t * std::log(f); },
            [](double f, double t) { return 1.0 - t / f; }, "poisson-nll"};
}

PixelLoss gamma_nll_pixel_loss() {
    return {[](double f, double t) { return std::log(f) + t / f; },
            [](double f, double t) { return 1.0 / f - t / (f * f); }, "gamma-nll"};
}

PixelLoss binomial_nll_pixel_loss() {
    return {[](double f, double t) { return -t * std::log(f) + (t - 1.0) * std::log1p(-f); },
            [](double f, double t) { return -t / f + (1.0 - t) / (1.0 - f); }, "binomial-nll"};
}

namespace {

void apply_step(Estimator& f, const std::vector<double>& grad, double step, std::size_t count) {
    double scale = step / static_cast<double>(count);
    for (std::size_t k = 0; k < grad.size(); ++k) f.params()[k] -= scale * grad[k];
}

}  // namespace

Estimator train(Estimator f, const PixelLoss& loss, const std::vector<TrainSample>& data,
                const TrainConfig& cfg) {
    if (!(cfg.step_size > 0.0)) throw std::invalid_argument("train: step_size must be > 0");
    if (cfg.epochs < 0) throw std::invalid_argument("train: epochs must be >= 0");
    if (f.params().empty() || data.empty()) return f;
    RandomStream rng(cfg.seed);
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::size_t batch = cfg.batch_size > 0 ? static_cast<std::size_t>(cfg.batch_size)
                                           : data.size();
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // Fisher-Yates from the config seed keeps epochs deterministic.
        for (std::size_t i = order.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
            std::swap(order[i - 1], order[j]);
        }
        for (std::size_t start = 0; start < data.size(); start += batch) {
            std::size_t stop = std::min(start + batch, data.size());
            double batch_loss = 0.0;
            std::vector<double> grad(f.params().size(), 0.0);
            std::size_t pixels = 0;
            for (std::size_t s = start; s < stop; ++s) {
                const TrainSample& sample = data[order[s]];
                ImageTensor fy;
                if (cfg.gradient_mode == GradientMode::Analytic) {
                    fy = f.apply(sample.input);
                    require_same_shape(fy, sample.target, "train");
                    ImageTensor upstream = fy;
                    for (std::size_t i = 0; i < fy.size(); ++i) {
                        batch_loss += loss.value(fy[i], sample.target[i]);
                        upstream[i] = loss.grad(fy[i], sample.target[i]);
                    }
                    std::vector<double> g = f.param_gradient(sample.input, upstream);
                    for (std::size_t k = 0; k < g.size(); ++k) grad[k] += g[k];
                } else {
                    auto sample_loss = [&](const Estimator& est) {
                        ImageTensor out = est.apply(sample.input);
                        double acc = 0.0;
                        for (std::size_t i = 0; i < out.size(); ++i)
                            acc += loss.value(out[i], sample.target[i]);
                        return acc;
                    };
                    batch_loss += sample_loss(f);
                    Estimator probe = f;
                    for (std::size_t k = 0; k < f.params().size(); ++k) {
                        double saved = probe.params()[k];
                        probe.params()[k] = saved + cfg.fd_step;
                        double up = sample_loss(probe);
                        probe.params()[k] = saved - cfg.fd_step;
                        double down = sample_loss(probe);
                        probe.params()[k] = saved;
                        grad[k] += (up - down) / (2.0 * cfg.fd_step);
                    }
                }
                pixels += sample.input.size();
            }
            if (!std::isfinite(batch_loss))
                throw std::runtime_error("train: loss diverged (non-finite); last state " +
                                         f.serialize_json());
            apply_step(f, grad, cfg.step_size, pixels);
        }
    }
    return f;
}

Estimator train_custom(Estimator f,
                       const std::function<double(const Estimator&, const TrainSample&)>& loss,
                       const std::vector<TrainSample>& data, const TrainConfig& cfg) {
    if (f.params().empty() || data.empty()) return f;
    RandomStream rng(cfg.seed);
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::size_t batch = cfg.batch_size > 0 ? static_cast<std::size_t>(cfg.batch_size)
                                           : data.size();
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
            std::swap(order[i - 1], order[j]);
        }
        for (std::size_t start = 0; start < data.size(); start += batch) {
            std::size_t stop = std::min(start + batch, data.size());
            std::vector<double> grad(f.params().size(), 0.0);
            double batch_loss = 0.0;
            std::size_t pixels = 0;
            for (std::size_t s = start; s < stop; ++s) {
                const TrainSample& sample = data[order[s]];
                batch_loss += loss(f, sample);
                Estimator probe = f;
                for (std::size_t k = 0; k < f.params().size(); ++k) {
                    double saved = probe.params()[k];
                    probe.params()[k] = saved + cfg.fd_step;
                    double up = loss(probe, sample);
                    probe.params()[k] = saved - cfg.fd_step;
                    double down = loss(probe, sample);
                    probe.params()[k] = saved;
                    grad[k] += (up - down) / (2.0 * cfg.fd_step);
                }
                pixels += sample.input.size();
            }
            if (!std::isfinite(batch_loss))
                throw std::runtime_error("train_custom: loss diverged; last state " +
                                         f.serialize_json());
            apply_step(f, grad, cfg.step_size, pixels);
        }
    }
    return f;
}

}  // namespace gr2r
