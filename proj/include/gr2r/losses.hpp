#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gr2r/estimators.hpp"
#include "gr2r/inverse_ops.hpp"
#include "gr2r/nef_models.hpp"
#include "gr2r/splitters.hpp"

namespace gr2r {

struct LossValue {
    double value = 0.0;
    int n_splits_used = 0;
    // Which v-independent constants / positive scales were dropped.
    std::string constant_convention = "none";
};

// Supervised squared loss ||f(y_in) - x||^2.
LossValue sup_mse(const Estimator& f, const ImageTensor& y_in, const ImageTensor& x);

// Noise2Noise loss ||f(y1) - y2||^2 on an independent pair.
LossValue n2n_loss(const Estimator& f, const ImageTensor& y1, const ImageTensor& y2);

// Single-sample recorrupted MSE ||f(y1) - y2||^2.
LossValue gr2r_mse(const Estimator& f, const SplitPair& pair);

// Recorrupted negative log-likelihood; per-family forms with all
// v-independent terms and global positive scales dropped.
LossValue gr2r_nll(const NoiseModel& model, const Estimator& f, const SplitPair& pair);

enum class DivergenceMode { ExactDiagonal, MonteCarlo };

struct SureOptions {
    DivergenceMode mode = DivergenceMode::ExactDiagonal;
    int probes = 1;
    double epsilon = 0.0;  // 0 -> 1e-3 * (1 + max|y|)
};

// ||f(y)-y||^2 + 2 sigma^2 * div f(y). Monte-Carlo divergence uses +/-1 probes.
LossValue sure_gaussian(const Estimator& f, const ImageTensor& y, double sigma,
                        const SureOptions& opts = {}, RandomStream* rng = nullptr);

// ||f(y)-y||^2 + 2 sum_i y_i (f_i(y) - f_i(y - gain*e_i)).
LossValue pure_limit_poisson(const Estimator& f, const ImageTensor& y, double gain);

// Gamma SURE-family series truncated at K; derivatives by central finite
// differences. b(l,1) = 0, so the series starts at k = 2.
LossValue sure_gamma_series(const Estimator& f, const ImageTensor& y, int looks, int order_k,
                            double fd_step = 0.0);

double gamma_series_coefficient(int looks, int k);  // b(l,k)

// Operator-domain recorrupted loss ||A f(y1) - y2||^2.
LossValue gr2r_operator_mse(const ForwardOperator& op, const Estimator& f,
                            const SplitPair& pair);

// Equivariant-imaging loss averaged over the group's elements at x_hat.
LossValue ei_loss(const ForwardOperator& op, const Estimator& f, const ImageTensor& x_hat,
                  const TransformGroup& transforms, RandomStream& rng, int samples = 0);

// ---- Expected-value forms ----------------------------------------------

enum class WhichLoss { SupMse, N2n, Gr2rMse, Gr2rNll };

struct Conditioning {
    enum class On { CleanX, ObservedY } on;
    ImageTensor value;

    static Conditioning clean_x(ImageTensor x) { return {On::CleanX, std::move(x)}; }
    static Conditioning observed_y(ImageTensor y) { return {On::ObservedY, std::move(y)}; }
};

struct ExpectationMethod {
    enum class Kind { Enumerate, MonteCarlo } kind = Kind::Enumerate;
    double tail_eps = 1e-12;
    std::size_t n_samples = 100000;
    std::uint64_t seed = 0;

    static ExpectationMethod enumerate(double tail_eps = 1e-12) {
        ExpectationMethod m;
        m.kind = Kind::Enumerate;
        m.tail_eps = tail_eps;
        return m;
    }
    static ExpectationMethod monte_carlo(std::size_t n, std::uint64_t seed) {
        ExpectationMethod m;
        m.kind = Kind::MonteCarlo;
        m.n_samples = n;
        m.seed = seed;
        return m;
    }
};

struct ExpectedLoss {
    double value = 0.0;
    double half_width = 0.0;  // 0 for enumeration (up to tail mass), 4 SE for Monte-Carlo
};

// Expectation of the chosen loss over the relevant conditional law.
// Enumeration requires a per-pixel estimator; it is exact for the discrete
// families and uses Gauss-Hermite quadrature for the Gaussian split law
// conditioned on y.
ExpectedLoss expected_loss(const NoiseModel& model, const Conditioning& cond, double alpha,
                           const Estimator& f, WhichLoss which, const ExpectationMethod& method);

}  // namespace gr2r
