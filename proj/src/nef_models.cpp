#include "gr2r/nef_models.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gr2r {

namespace {

[[noreturn]] void domain_fail(const char* family, std::size_t index, double value,
                              const char* what) {
    throw std::domain_error(std::string(family) + ": " + what + " at index " +
                            std::to_string(index) + " (value " + std::to_string(value) + ")");
}

}  // namespace

NoiseModel NoiseModel::gaussian(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("NoiseModel: sigma must be > 0");
    return NoiseModel(Family::Gaussian, sigma, 0.0, 0);
}

NoiseModel NoiseModel::poisson(double gain) {
    if (!(gain > 0.0)) throw std::invalid_argument("NoiseModel: gain must be > 0");
    return NoiseModel(Family::Poisson, 0.0, gain, 0);
}

NoiseModel NoiseModel::gamma(int looks) {
    if (looks < 1) throw std::invalid_argument("NoiseModel: looks must be >= 1");
    return NoiseModel(Family::Gamma, 0.0, 0.0, looks);
}

NoiseModel NoiseModel::binomial(int looks) {
    if (looks < 1) throw std::invalid_argument("NoiseModel: looks must be >= 1");
    return NoiseModel(Family::Binomial, 0.0, 0.0, looks);
}

double NoiseModel::sigma() const {
    if (family_ != Family::Gaussian)
        throw std::logic_error("NoiseModel: sigma is Gaussian-only");
    return sigma_;
}

double NoiseModel::gain() const {
    if (family_ != Family::Poisson) throw std::logic_error("NoiseModel: gain is Poisson-only");
    return gain_;
}

int NoiseModel::looks() const {
    if (family_ != Family::Gamma && family_ != Family::Binomial)
        throw std::logic_error("NoiseModel: looks is Gamma/Binomial-only");
    return looks_;
}

const char* NoiseModel::family_name() const {
    switch (family_) {
        case Family::Gaussian: return "gaussian";
        case Family::Poisson: return "poisson";
        case Family::Gamma: return "gamma";
        case Family::Binomial: return "binomial";
    }
    return "?";
}

bool NoiseModel::mean_in_domain(double v) const {
    switch (family_) {
        case Family::Gaussian: return std::isfinite(v);
        case Family::Poisson:
        case Family::Gamma: return v > kDomainMargin;
        case Family::Binomial: return v > kDomainMargin && v < 1.0 - kDomainMargin;
    }
    return false;
}

void NoiseModel::check_mean_domain(const ImageTensor& x) const {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!mean_in_domain(x[i])) domain_fail(family_name(), i, x[i], "mean outside domain");
}

long long poisson_count_at(const NoiseModel& model, double y_value, std::size_t index) {
    double counts = y_value / model.gain();
    double rounded = std::round(counts);
    if (std::fabs(counts - rounded) > 1e-9 || rounded < 0.0)
        domain_fail("poisson", index, y_value, "observation off the gain lattice");
    return static_cast<long long>(rounded);
}

long long binomial_count_at(const NoiseModel& model, double y_value, std::size_t index) {
    double counts = y_value * static_cast<double>(model.looks());
    double rounded = std::round(counts);
    if (std::fabs(counts - rounded) > 1e-9 || rounded < 0.0 ||
        rounded > static_cast<double>(model.looks()))
        domain_fail("binomial", index, y_value, "observation off the 1/looks lattice");
    return static_cast<long long>(rounded);
}

void NoiseModel::check_observation(const ImageTensor& y) const {
    switch (family_) {
        case Family::Gaussian:
            for (std::size_t i = 0; i < y.size(); ++i)
                if (!std::isfinite(y[i]))
                    domain_fail("gaussian", i, y[i], "non-finite observation");
            break;
        case Family::Poisson:
            for (std::size_t i = 0; i < y.size(); ++i) poisson_count_at(*this, y[i], i);
            break;
        case Family::Gamma:
            for (std::size_t i = 0; i < y.size(); ++i)
                if (!(y[i] > 0.0)) domain_fail("gamma", i, y[i], "observation must be > 0");
            break;
        case Family::Binomial:
            for (std::size_t i = 0; i < y.size(); ++i) binomial_count_at(*this, y[i], i);
            break;
    }
}

ImageTensor sample_noisy(const NoiseModel& model, const ImageTensor& x, RandomStream& rng) {
    // Poisson/Binomial x = 0 (or Binomial x = 1) is a degenerate but valid
    // sampling mean, so the check here is looser than check_mean_domain.
    ImageTensor y = x;
    switch (model.family()) {
        case Family::Gaussian:
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (!std::isfinite(x[i])) domain_fail("gaussian", i, x[i], "mean not finite");
                y[i] = x[i] + rng.normal(0.0, model.sigma());
            }
            break;
        case Family::Poisson:
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (!(x[i] >= 0.0)) domain_fail("poisson", i, x[i], "mean must be >= 0");
                y[i] = model.gain() * static_cast<double>(rng.poisson(x[i] / model.gain()));
            }
            break;
        case Family::Gamma:
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (!(x[i] > 0.0)) domain_fail("gamma", i, x[i], "mean must be > 0");
                // shape l, rate l/x => mean x
                y[i] = rng.gamma(static_cast<double>(model.looks())) * x[i] /
                       static_cast<double>(model.looks());
            }
            break;
        case Family::Binomial:
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (!(x[i] >= 0.0 && x[i] <= 1.0))
                    domain_fail("binomial", i, x[i], "mean must be in [0,1]");
                y[i] = static_cast<double>(rng.binomial(model.looks(), x[i])) /
                       static_cast<double>(model.looks());
            }
            break;
    }
    return y;
}

std::pair<ImageTensor, ImageTensor> mean_variance(const NoiseModel& model,
                                                  const ImageTensor& x) {
    ImageTensor var = x;
    for (std::size_t i = 0; i < x.size(); ++i) var[i] = model.variance_at(x[i]);
    return {x, var};
}

double NoiseModel::variance_at(double x) const {
    switch (family_) {
        case Family::Gaussian: return sigma_ * sigma_;
        case Family::Poisson:
            if (!(x >= 0.0)) throw std::domain_error("poisson: mean must be >= 0");
            return gain_ * x;
        case Family::Gamma:
            if (!(x > 0.0)) throw std::domain_error("gamma: mean must be > 0");
            return x * x / static_cast<double>(looks_);
        case Family::Binomial:
            if (!(x >= 0.0 && x <= 1.0))
                throw std::domain_error("binomial: mean must be in [0,1]");
            return x * (1.0 - x) / static_cast<double>(looks_);
    }
    return 0.0;
}

std::pair<ImageTensor, ImageTensor> eta_phi(const NoiseModel& model, const ImageTensor& v) {
    model.check_mean_domain(v);
    ImageTensor eta = v;
    ImageTensor phi = v;
    switch (model.family()) {
        case Family::Gaussian: {
            double s2 = model.sigma() * model.sigma();
            for (std::size_t i = 0; i < v.size(); ++i) {
                eta[i] = v[i] / s2;
                phi[i] = v[i] * v[i] / (2.0 * s2);
            }
            break;
        }
        case Family::Poisson:
            for (std::size_t i = 0; i < v.size(); ++i) {
                eta[i] = std::log(v[i]);
                phi[i] = v[i] / model.gain();
            }
            break;
        case Family::Gamma: {
            double l = static_cast<double>(model.looks());
            for (std::size_t i = 0; i < v.size(); ++i) {
                eta[i] = -l / v[i];
                phi[i] = l * std::log(v[i]);
            }
            break;
        }
        case Family::Binomial: {
            double l = static_cast<double>(model.looks());
            for (std::size_t i = 0; i < v.size(); ++i) {
                eta[i] = std::log(v[i] / (1.0 - v[i]));
                phi[i] = l * std::log1p(-v[i]);
            }
            break;
        }
    }
    return {eta, phi};
}

double family_nll(const NoiseModel& model, const ImageTensor& y, const ImageTensor& v) {
    require_same_shape(y, v, "family_nll");
    model.check_observation(y);
    model.check_mean_domain(v);
    double nll = 0.0;
    switch (model.family()) {
        case Family::Gaussian: {
            double s2 = model.sigma() * model.sigma();
            for (std::size_t i = 0; i < y.size(); ++i)
                nll += v[i] * v[i] / (2.0 * s2) - y[i] * v[i] / s2;
            break;
        }
        case Family::Poisson:
            // Natural statistic is the count y/gain, so the minimizer sits at
            // v = y for every gain.
            for (std::size_t i = 0; i < y.size(); ++i)
                nll += v[i] / model.gain() - (y[i] / model.gain()) * std::log(v[i]);
            break;
        case Family::Gamma: {
            double l = static_cast<double>(model.looks());
            for (std::size_t i = 0; i < y.size(); ++i)
                nll += l * std::log(v[i]) + l * y[i] / v[i];
            break;
        }
        case Family::Binomial: {
            double l = static_cast<double>(model.looks());
            for (std::size_t i = 0; i < y.size(); ++i) {
                double z = y[i] * l;
                nll += -z * std::log(v[i]) - (l - z) * std::log1p(-v[i]);
            }
            break;
        }
    }
    return nll;
}

}  // namespace gr2r
