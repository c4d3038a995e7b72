#include "verify_suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <vector>

#include "gr2r/additive_matching.hpp"
#include "gr2r/estimators.hpp"
#include "gr2r/inverse_ops.hpp"
#include "gr2r/io_formats.hpp"
#include "gr2r/losses.hpp"
#include "gr2r/nef_models.hpp"
#include "gr2r/oracles.hpp"
#include "gr2r/rng.hpp"
#include "gr2r/splitters.hpp"

namespace gr2r {

namespace {

struct Suite {
    std::vector<InvariantResult> results;

    void record(const std::string& id, double residual, double threshold) {
        InvariantResult r;
        r.id = id;
        r.residual = residual;
        r.threshold = threshold;
        r.passed = std::isfinite(residual) && residual <= threshold;
        results.push_back(r);
    }
};

struct SampleStats {
    double mean = 0.0;
    double var = 0.0;
    double se_mean = 0.0;
    double se_var = 0.0;
};

SampleStats stats_of(const std::vector<double>& v) {
    SampleStats s;
    const double n = static_cast<double>(v.size());
    for (double x : v) s.mean += x;
    s.mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : v) {
        double d = x - s.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    s.var = m2;
    s.se_mean = std::sqrt(m2 / n);
    s.se_var = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
    return s;
}

double sample_cov(const std::vector<double>& a, const std::vector<double>& b, double ma,
                  double mb, double* se_out) {
    const double n = static_cast<double>(a.size());
    double c = 0.0, c2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double p = (a[i] - ma) * (b[i] - mb);
        c += p;
        c2 += p * p;
    }
    c /= n;
    if (se_out) *se_out = std::sqrt(std::max(c2 / n - c * c, 0.0) / n);
    return c;
}

ImageTensor recombine(const SplitPair& pair) {
    ImageTensor y = pair.y1;
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = (1.0 - pair.alpha) * pair.y1[i] + pair.alpha * pair.y2[i];
    }
    return y;
}

double max_abs_diff(const ImageTensor& a, const ImageTensor& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// ---- splitters invariants --------------------------------------------------

void check_split_recombination(Suite& suite, std::uint64_t seed) {
    struct Case {
        NoiseModel model;
        double alpha;
    };
    const std::vector<Case> cases = {{NoiseModel::gaussian(0.1), 0.5},
                                     {NoiseModel::poisson(0.5), 0.15},
                                     {NoiseModel::gamma(5), 0.2},
                                     {NoiseModel::binomial(10), 0.2}};
    RandomStream rng = RandomStream(seed).substream("verify.split.recombination");
    SyntheticSpec spec;
    spec.height = 8;
    spec.width = 8;
    double worst = 0.0;
    for (const Case& c : cases) {
        ImageTensor x = make_synthetic_image(spec, seed + 1);
        ImageTensor y = sample_noisy(c.model, x, rng);
        SplitPair pair = split(c.model, y, c.alpha, rng);
        worst = std::max(worst, max_abs_diff(recombine(pair), y));
    }
    suite.record("splitters.recombination-identity", worst, 1e-10);
}

void check_split_discrete_moments(Suite& suite) {
    double worst = 0.0;
    auto run = [&](const NoiseModel& model, double x, double alpha) {
        SplitMoments m = split_statistics_exact(model, x, alpha);
        double var_y = model.variance_at(x);
        worst = std::max({worst, std::abs(m.mean1 - x), std::abs(m.mean2 - x),
                          std::abs(m.var1 - var_y / (1.0 - alpha)),
                          std::abs(m.var2 - var_y / alpha), std::abs(m.cov12)});
    };
    run(NoiseModel::poisson(1.0), 0.7, 0.15);
    run(NoiseModel::poisson(0.5), 1.3, 0.5);
    run(NoiseModel::binomial(10), 0.5, 0.3);
    suite.record("splitters.discrete-moment-identities", worst, 1e-8);
}

void check_split_continuous_moments(Suite& suite, std::uint64_t seed) {
    struct Case {
        NoiseModel model;
        double x;
        double alpha;
        const char* stream;
    };
    const std::vector<Case> cases = {{NoiseModel::gaussian(0.1), 0.5, 0.3, "gaussian"},
                                     {NoiseModel::gamma(5), 1.0, 0.2, "gamma"}};
    const std::size_t n = 1000000;
    double worst = 0.0;
    for (const Case& c : cases) {
        RandomStream rng =
            RandomStream(seed).substream("verify.split.continuous").substream(c.stream);
        ImageTensor x = ImageTensor::scalar(c.x);
        std::vector<double> s1(n), s2(n);
        for (std::size_t i = 0; i < n; ++i) {
            ImageTensor y = sample_noisy(c.model, x, rng);
            SplitPair pair = split(c.model, y, c.alpha, rng);
            s1[i] = pair.y1[0];
            s2[i] = pair.y2[0];
        }
        SampleStats a = stats_of(s1);
        SampleStats b = stats_of(s2);
        double se_cov = 0.0;
        double cov = sample_cov(s1, s2, a.mean, b.mean, &se_cov);
        double var_y = c.model.variance_at(c.x);
        worst = std::max({worst, std::abs(a.mean - c.x) / (4.0 * a.se_mean),
                          std::abs(b.mean - c.x) / (4.0 * b.se_mean),
                          std::abs(a.var - var_y / (1.0 - c.alpha)) / (4.0 * a.se_var),
                          std::abs(b.var - var_y / c.alpha) / (4.0 * b.se_var),
                          std::abs(cov) / (4.0 * se_cov)});
    }
    suite.record("splitters.continuous-moment-identities", worst, 1.0);
}

// The conditional law of the split given y must not depend on x: group grid
// atoms by observed y and compare the conditional weights across two x values.
double conditional_weight_mismatch(const NoiseModel& model, double x_a, double x_b,
                                   double alpha) {
    auto conditionals = [&](double x) {
        EnumerationGrid grid = enumerate_split_law(model, x, alpha);
        std::map<long long, std::map<long long, double>> by_y;  // y-key -> y1-key -> weight
        std::map<long long, double> mass;
        for (const GridAtom& a : grid.atoms) {
            long long yk = std::llround(a.y * 1e6);
            long long y1k = std::llround(a.y1 * 1e6);
            by_y[yk][y1k] += a.probability;
            mass[yk] += a.probability;
        }
        for (auto& [yk, inner] : by_y) {
            for (auto& [y1k, w] : inner) w /= mass[yk];
        }
        return by_y;
    };
    auto ca = conditionals(x_a);
    auto cb = conditionals(x_b);
    double worst = 0.0;
    for (const auto& [yk, inner] : ca) {
        auto it = cb.find(yk);
        if (it == cb.end()) continue;  // y atom unreachable under the other x's truncation
        for (const auto& [y1k, w] : inner) {
            auto jt = it->second.find(y1k);
            double other = jt == it->second.end() ? 0.0 : jt->second;
            worst = std::max(worst, std::abs(w - other));
        }
    }
    return worst;
}

void check_split_conditional_x_free(Suite& suite) {
    double worst = conditional_weight_mismatch(NoiseModel::poisson(1.0), 0.6, 1.7, 0.5);
    suite.record("splitters.conditional-law-x-free", worst, 1e-12);
}

// ---- losses invariants -----------------------------------------------------

double expected_gr2r_mse_diff(const NoiseModel& model, double x, double alpha,
                              const Estimator& f, const Estimator& g) {
    Conditioning cond = Conditioning::clean_x(ImageTensor::scalar(x));
    return expected_loss(model, cond, alpha, f, WhichLoss::Gr2rMse, ExpectationMethod::enumerate())
               .value -
           expected_loss(model, cond, alpha, g, WhichLoss::Gr2rMse, ExpectationMethod::enumerate())
               .value;
}

double expected_sup_mse_diff(const NoiseModel& model, double x, double alpha, const Estimator& f,
                             const Estimator& g) {
    Conditioning cond = Conditioning::clean_x(ImageTensor::scalar(x));
    return expected_loss(model, cond, alpha, f, WhichLoss::SupMse, ExpectationMethod::enumerate())
               .value -
           expected_loss(model, cond, alpha, g, WhichLoss::SupMse, ExpectationMethod::enumerate())
               .value;
}

void check_mse_unbiasedness(Suite& suite) {
    Estimator f = Estimator::identity();
    Estimator g = Estimator::affine(0.5, 0.1);
    double worst = 0.0;
    worst = std::max(worst, std::abs(expected_gr2r_mse_diff(NoiseModel::poisson(1.0), 0.7, 0.5, f, g) -
                                     expected_sup_mse_diff(NoiseModel::poisson(1.0), 0.7, 0.5, f, g)));
    worst = std::max(worst, std::abs(expected_gr2r_mse_diff(NoiseModel::binomial(4), 0.5, 0.25, f, g) -
                                     expected_sup_mse_diff(NoiseModel::binomial(4), 0.5, 0.25, f, g)));
    suite.record("losses.mse-unbiasedness-difference-form", worst, 1e-8);
}

void check_nll_unbiasedness(Suite& suite) {
    // Poisson: the per-pixel likelihood term is v - y2*log v, which is linear
    // in y2, so the recorrupted expectation must equal the expectation of the
    // same form with the clean value in place of y2.
    const NoiseModel model = NoiseModel::poisson(1.0);
    const double x = 0.7, alpha = 0.5;
    Estimator f = Estimator::constant(0.9);
    Estimator g = Estimator::affine(0.5, 0.3);
    Conditioning cond = Conditioning::clean_x(ImageTensor::scalar(x));
    auto gr2r_side = [&](const Estimator& e) {
        return expected_loss(model, cond, alpha, e, WhichLoss::Gr2rNll,
                             ExpectationMethod::enumerate())
            .value;
    };
    EnumerationGrid grid = enumerate_split_law(model, x, alpha);
    auto supervised_side = [&](const Estimator& e) {
        return expected_functional(grid, [&](const GridAtom& a) {
            double v = e.apply(ImageTensor::scalar(a.y1))[0];
            return v - x * std::log(v);
        });
    };
    double lhs = gr2r_side(f) - gr2r_side(g);
    double rhs = supervised_side(f) - supervised_side(g);
    suite.record("losses.nll-unbiasedness-difference-form", std::abs(lhs - rhs), 1e-8);
}

void check_gaussian_sure_limit(Suite& suite) {
    const double sigma = 0.1;
    SyntheticSpec spec;
    spec.height = 4;
    spec.width = 4;
    ImageTensor y = make_synthetic_image(spec, 7);
    Estimator f = Estimator::affine(0.7, 0.05);
    Estimator g = Estimator::identity();
    NoiseModel model = NoiseModel::gaussian(sigma);
    double delta_sure = sure_gaussian(f, y, sigma).value - sure_gaussian(g, y, sigma).value;
    Conditioning cond = Conditioning::observed_y(y);
    const std::vector<double> alphas = {0.1, 0.03, 0.01};
    std::vector<double> ratios;
    double final_gap = 0.0;
    for (double alpha : alphas) {
        double delta =
            expected_loss(model, cond, alpha, f, WhichLoss::Gr2rMse, ExpectationMethod::enumerate())
                .value -
            expected_loss(model, cond, alpha, g, WhichLoss::Gr2rMse, ExpectationMethod::enumerate())
                .value;
        final_gap = std::abs(delta - delta_sure);
        ratios.push_back(final_gap / alpha);
    }
    bool monotone = ratios[0] >= ratios[1] - 1e-12 && ratios[1] >= ratios[2] - 1e-12;
    suite.record("losses.gaussian-sure-limit", monotone ? final_gap : 1e9, 1e-3);
}

void check_poisson_pure_limit(Suite& suite) {
    // For affine f with gain a the gap is sum(y) * alpha/(1-alpha) *
    // (2(a-1) + (a-1)^2), so a near-identity gain keeps the O(alpha) constant
    // small enough for the fixed 1e-3 budget at alpha = 0.01.
    const NoiseModel model = NoiseModel::poisson(1.0);
    ImageTensor y = ImageTensor::flat({0.0, 1.0, 0.0, 1.0});
    Estimator f = Estimator::affine(0.98, 0.05);
    Estimator g = Estimator::identity();
    double delta_pure =
        pure_limit_poisson(f, y, 1.0).value - pure_limit_poisson(g, y, 1.0).value;
    Conditioning cond = Conditioning::observed_y(y);
    const double alpha = 0.01;
    double delta =
        expected_loss(model, cond, alpha, f, WhichLoss::Gr2rMse, ExpectationMethod::enumerate())
            .value -
        expected_loss(model, cond, alpha, g, WhichLoss::Gr2rMse, ExpectationMethod::enumerate())
            .value;
    suite.record("losses.poisson-pure-limit", std::abs(delta - delta_pure), 1e-3);
}

void check_gaussian_nll_equals_mse(Suite& suite, std::uint64_t seed) {
    NoiseModel model = NoiseModel::gaussian(0.2);
    RandomStream rng = RandomStream(seed).substream("verify.losses.nll-mse");
    ImageTensor x = ImageTensor::flat({0.3, 0.5, 0.8, 0.1});
    ImageTensor y = sample_noisy(model, x, rng);
    SplitPair pair = split(model, y, 0.4, rng);
    Estimator f = Estimator::affine(0.9, 0.02);
    double mse = gr2r_mse(f, pair).value;
    double nll = gr2r_nll(model, f, pair).value;
    suite.record("losses.gaussian-nll-equals-mse", std::abs(nll - mse), 0.0);
}

void check_series_coefficients(Suite& suite) {
    double worst = 0.0;
    for (int l = 1; l <= 10; ++l) {
        worst = std::max(worst, std::abs(gamma_series_coefficient(l, 1)));
        for (int k = 2; k <= 6; ++k) {
            double b = gamma_series_coefficient(l, k);
            if (!(b > 0.0 && b < 1.0)) worst = std::max(worst, 1.0);
            if (l >= 2 && !(b > gamma_series_coefficient(l - 1, k))) worst = std::max(worst, 1.0);
        }
    }
    suite.record("losses.series-coefficient-table", worst, 0.0);
}

// ---- additive-matching invariants -------------------------------------------

void check_additive_decorrelation(Suite& suite, std::uint64_t seed) {
    const double sigma = 0.1, tau = 1.0;
    const std::size_t n = 1000000;
    RandomStream base = RandomStream(seed).substream("verify.additive");

    // Second-moment matching kills the k=1 error term E[(eps - w/tau)(eps + tau*w)].
    {
        RandomStream rng = base.substream("k1");
        ImageTensor eps = log_rayleigh_sample(sigma, n, rng);
        double m2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) m2 += eps[i] * eps[i];
        m2 /= static_cast<double>(n);
        const double sd = std::sqrt(m2);
        std::vector<double> prod(n);
        for (std::size_t i = 0; i < n; ++i) {
            double w = sd * rng.normal();
            prod[i] = (eps[i] - w / tau) * (eps[i] + tau * w);
        }
        SampleStats s = stats_of(prod);
        suite.record("additive.second-moment-decorrelation",
                     std::abs(s.mean) / (4.0 * s.se_mean), 1.0);
    }

    // Third-moment matching kills the k=2 term E[(eps - w/tau)(eps + tau*w)^2].
    {
        RandomStream rng = base.substream("k2");
        const std::size_t m = 200000;
        ImageTensor eps_fit = log_rayleigh_sample(sigma, m, rng);
        MomentSpec spec = target_moments(eps_fit, 3, tau);
        GdConfig cfg;
        cfg.rel_tol = 1e-3;
        ImageTensor w = maxent_sample(spec, m, cfg, rng);
        std::vector<double> res = moment_residuals(w, spec);
        double worst_res = 0.0;
        for (double r : res) worst_res = std::max(worst_res, r);
        suite.record("additive.stopping-rule-post-hoc", worst_res / cfg.rel_tol, 1.0);

        ImageTensor eps = log_rayleigh_sample(sigma, m, rng);
        std::vector<double> prod(m);
        for (std::size_t i = 0; i < m; ++i) {
            prod[i] = (eps[i] - w[i] / tau) * (eps[i] + tau * w[i]) * (eps[i] + tau * w[i]);
        }
        SampleStats s = stats_of(prod);
        // Tolerance: 4 SE plus the systematic slack the stopping rule allows.
        double mu2 = spec.moments[1];
        double slack = cfg.rel_tol * (std::abs(spec.moments[2]) + 3.0 * std::pow(mu2, 1.5));
        suite.record("additive.third-moment-decorrelation",
                     std::abs(s.mean) / (4.0 * s.se_mean + slack), 1.0);
    }
}

void check_additive_recombination(Suite& suite, std::uint64_t seed) {
    RandomStream rng = RandomStream(seed).substream("verify.additive.recombination");
    const double tau = 0.7;
    ImageTensor y = ImageTensor::zeros({64});
    ImageTensor w = ImageTensor::zeros({64});
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = rng.normal(0.5, 0.2);
        w[i] = rng.normal(0.0, 0.1);
    }
    SplitPair pair = r2r_additive_split(y, w, tau);
    const double c1 = 1.0 / (1.0 + tau * tau);
    const double c2 = tau * tau / (1.0 + tau * tau);
    double worst = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        worst = std::max(worst, std::abs(c1 * pair.y1[i] + c2 * pair.y2[i] - y[i]));
    }
    suite.record("additive.recombination-identity", worst, 1e-12);
}

// ---- oracle invariants -------------------------------------------------------

void check_oracle_conditional_x_free(Suite& suite) {
    double worst = conditional_weight_mismatch(NoiseModel::binomial(6), 0.3, 0.65, 0.5);
    suite.record("oracles.conditional-weights-x-free", worst, 1e-12);
}

void check_oracle_marginals(Suite& suite) {
    double worst = 0.0;
    {
        NoiseModel model = NoiseModel::binomial(6);
        EnumerationGrid grid = enumerate_split_law(model, 0.4, 0.5);
        std::map<long long, double> marginal;
        for (const GridAtom& a : grid.atoms) marginal[std::llround(a.y * 6)] += a.probability;
        for (long long z = 0; z <= 6; ++z) {
            double pmf = 1.0;
            // Binomial(6, 0.4) pmf via the multiplicative recurrence.
            double p = 0.4;
            pmf = std::pow(1.0 - p, 6);
            for (long long j = 1; j <= z; ++j) {
                pmf *= static_cast<double>(6 - j + 1) / static_cast<double>(j) * p / (1.0 - p);
            }
            worst = std::max(worst, std::abs(marginal[z] - pmf));
        }
    }
    {
        NoiseModel model = NoiseModel::poisson(1.0);
        EnumerationGrid grid = enumerate_split_law(model, 1.3, 0.5);
        std::map<long long, double> marginal;
        for (const GridAtom& a : grid.atoms) marginal[std::llround(a.y)] += a.probability;
        double pmf = std::exp(-1.3);
        for (long long z = 0; z <= 8; ++z) {
            if (z > 0) pmf *= 1.3 / static_cast<double>(z);
            worst = std::max(worst, std::abs(marginal[z] - pmf));
        }
    }
    suite.record("oracles.grid-marginal-matches-pmf", worst, 1e-12);
}

void check_oracle_ci_brackets(Suite& suite, std::uint64_t seed) {
    NoiseModel model = NoiseModel::poisson(1.0);
    EnumerationGrid grid = enumerate_split_law(model, 0.8, 0.5);
    double exact = expected_functional(grid, [](const GridAtom& a) { return a.y * a.y; });
    const int reps = 200;
    int covered = 0;
    for (int r = 0; r < reps; ++r) {
        CiEstimate ci = ci_expectation(
            [](RandomStream& rng) {
                double y = static_cast<double>(rng.poisson(0.8));
                return y * y;
            },
            4000, seed + 1000 + static_cast<std::uint64_t>(r));
        if (std::abs(ci.mean - exact) <= ci.half_width) ++covered;
    }
    double miss_rate = 1.0 - static_cast<double>(covered) / reps;
    suite.record("oracles.ci-brackets-enumeration", miss_rate, 0.01);
}

// ---- operator invariants ------------------------------------------------------

void check_operator_adjoint(Suite& suite, std::uint64_t seed) {
    RandomStream rng = RandomStream(seed).substream("verify.operators.adjoint");
    double worst = 0.0;
    auto check = [&](const ForwardOperator& op, std::vector<std::size_t> in_shape,
                     std::vector<std::size_t> out_shape) {
        ImageTensor x = ImageTensor::zeros(in_shape);
        ImageTensor u = ImageTensor::zeros(out_shape);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal();
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = rng.normal();
        double lhs = dot(op.apply(x), u);
        double rhs = dot(x, op.adjoint(u));
        worst = std::max(worst, std::abs(lhs - rhs));
    };
    check(ForwardOperator::identity(), {8, 8}, {8, 8});
    check(make_bernoulli_mask({8, 8}, 0.7, seed + 5), {8, 8}, {8, 8});
    std::vector<double> matrix(6 * 10);
    for (double& v : matrix) v = rng.normal();
    check(ForwardOperator::dense(matrix, 6, 10), {10}, {6});
    suite.record("inverse-ops.adjoint-identity", worst, 1e-10);
}

void check_transform_bijection(Suite& suite, std::uint64_t seed) {
    RandomStream rng = RandomStream(seed).substream("verify.operators.transforms");
    ImageTensor x = ImageTensor::zeros({8, 8});
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal();
    std::vector<Transform> transforms;
    transforms.push_back({TransformKind::Identity, 0, 0, 0});
    transforms.push_back({TransformKind::Shift, 3, 5, 0});
    for (int q = 1; q <= 3; ++q) transforms.push_back({TransformKind::Rotate90, 0, 0, q});
    transforms.push_back({TransformKind::FlipHorizontal, 0, 0, 0});
    transforms.push_back({TransformKind::FlipVertical, 0, 0, 0});
    double worst = 0.0;
    for (const Transform& t : transforms) {
        ImageTensor round = apply_transform(inverse_transform(t), apply_transform(t, x));
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (round[i] != x[i]) worst = 1.0;
        }
    }
    suite.record("inverse-ops.transform-bijection", worst, 0.0);
}

void check_mask_idempotent(Suite& suite, std::uint64_t seed) {
    RandomStream rng = RandomStream(seed).substream("verify.operators.idempotent");
    ForwardOperator op = make_bernoulli_mask({8, 8}, 0.6, seed + 9);
    ImageTensor x = ImageTensor::zeros({8, 8});
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal();
    ImageTensor once = op.apply(x);
    ImageTensor twice = op.apply(once);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (once[i] != twice[i]) worst = 1.0;
    }
    suite.record("inverse-ops.mask-idempotent", worst, 0.0);
}

}  // namespace

VerifyReport run_verify_suite(std::uint64_t seed) {
    Suite suite;
    check_split_recombination(suite, seed);
    check_split_discrete_moments(suite);
    check_split_continuous_moments(suite, seed);
    check_split_conditional_x_free(suite);
    check_mse_unbiasedness(suite);
    check_nll_unbiasedness(suite);
    check_gaussian_sure_limit(suite);
    check_poisson_pure_limit(suite);
    check_gaussian_nll_equals_mse(suite, seed);
    check_series_coefficients(suite);
    check_additive_decorrelation(suite, seed);
    check_additive_recombination(suite, seed);
    check_oracle_conditional_x_free(suite);
    check_oracle_marginals(suite);
    check_oracle_ci_brackets(suite, seed);
    check_operator_adjoint(suite, seed);
    check_transform_bijection(suite, seed);
    check_mask_idempotent(suite, seed);

    VerifyReport report;
    report.invariants = suite.results;
    report.seed = seed;
    report.all_pass = true;
    for (const InvariantResult& r : report.invariants) report.all_pass = report.all_pass && r.passed;
    return report;
}

std::string render_verify_report(const VerifyReport& report) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"all_pass\": " << (report.all_pass ? "true" : "false") << ",\n";
    out << "  \"invariants\": [\n";
    for (std::size_t i = 0; i < report.invariants.size(); ++i) {
        const InvariantResult& r = report.invariants[i];
        out << "    {\"id\": \"" << r.id << "\", \"residual\": " << format_double(r.residual)
            << ", \"status\": \"" << (r.passed ? "pass" : "fail")
            << "\", \"threshold\": " << format_double(r.threshold) << "}"
            << (i + 1 < report.invariants.size() ? "," : "") << "\n";
    }
    out << "  ],\n";
    out << "  \"seed\": " << report.seed << "\n";
    out << "}\n";
    return out.str();
}

}  // namespace gr2r
