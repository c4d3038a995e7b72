#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gr2r/tensor.hpp"

namespace gr2r {

enum class EstimatorKind { Identity, Constant, Affine, Polynomial, Convolution };
enum class RangeMap { None, Positive, UnitInterval };

// Range-map clamp margin; outputs stay at least this far inside (0,inf)/(0,1).
inline constexpr double kRangeMargin = 1e-6;

// Small analytic denoiser f: R^n -> R^n with per-pixel derivative access.
//  identity            f(y) = y
//  constant(c)         f(y) = c
//  affine(a, b)        f(y) = a*y + b elementwise
//  polynomial(coeffs)  f(y) = sum_j coeffs[j] * y^j elementwise, degree <= 4
//  convolution(kernel) periodic 2-D convolution, odd kernel side
// An optional range map (applied last) keeps outputs strictly inside the mean
// domain required by the Poisson/Gamma/Binomial NLL losses.
class Estimator {
public:
    static Estimator identity();
    static Estimator constant(double c);
    static Estimator affine(double a, double b);
    static Estimator polynomial(std::vector<double> coeffs);
    static Estimator convolution(std::vector<double> kernel, std::size_t kernel_side);

    EstimatorKind kind() const { return kind_; }
    RangeMap range_map() const { return range_map_; }
    Estimator& with_range_map(RangeMap map);

    const std::vector<double>& params() const { return params_; }
    std::vector<double>& params() { return params_; }
    std::size_t kernel_side() const { return kernel_side_; }

    ImageTensor apply(const ImageTensor& y) const;

    // Elementwise df_i/dy_i, including the range-map chain factor.
    ImageTensor diag_jacobian(const ImageTensor& y) const;

    // dLoss/dparams given the elementwise upstream gradient dLoss/df (after
    // the range map). Same backward chain as apply.
    std::vector<double> param_gradient(const ImageTensor& y,
                                       const ImageTensor& upstream) const;

    std::string serialize_json() const;
    static Estimator deserialize_json(const std::string& text);

private:
    Estimator(EstimatorKind kind, std::vector<double> params, std::size_t kernel_side)
        : kind_(kind), params_(std::move(params)), kernel_side_(kernel_side) {}

    // f and df/dy before the range map.
    ImageTensor raw_apply(const ImageTensor& y) const;

    EstimatorKind kind_;
    std::vector<double> params_;
    std::size_t kernel_side_ = 0;
    RangeMap range_map_ = RangeMap::None;
};

// Central finite-difference estimate of the k-th derivative of f_i along
// pixel i, k <= 4.
double fd_derivative(const Estimator& f, const ImageTensor& y, std::size_t pixel,
                     int order, double step);

enum class GradientMode { Analytic, FiniteDifference };

struct TrainConfig {
    double step_size = 0.1;
    int epochs = 50;
    int batch_size = 32;
    std::uint64_t seed = 0;
    GradientMode gradient_mode = GradientMode::Analytic;
    double fd_step = 1e-5;
};

struct TrainSample {
    ImageTensor input;
    ImageTensor target;
};

// Per-pixel training losses; value and d/df at a single pixel.
struct PixelLoss {
    std::function<double(double f, double t)> value;
    std::function<double(double f, double t)> grad;
    std::string name;
};

PixelLoss mse_pixel_loss();
PixelLoss poisson_nll_pixel_loss();
PixelLoss gamma_nll_pixel_loss();
PixelLoss binomial_nll_pixel_loss();

// Mini-batch gradient descent on sum over samples/pixels of loss(f(input), target).
// Deterministic given cfg.seed; throws on non-finite loss.
Estimator train(Estimator f, const PixelLoss& loss, const std::vector<TrainSample>& data,
                const TrainConfig& cfg);

// Generic variant for composite losses (e.g. operator + equivariance terms);
// gradients by finite differences over the parameter vector.
Estimator train_custom(Estimator f,
                       const std::function<double(const Estimator&, const TrainSample&)>& loss,
                       const std::vector<TrainSample>& data, const TrainConfig& cfg);

}  // namespace gr2r
