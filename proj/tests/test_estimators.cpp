#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gr2r/estimators.hpp"
#include "gr2r/rng.hpp"

using namespace gr2r;

TEST_CASE("apply across kinds") {
    ImageTensor y = ImageTensor::flat({1.0, 2.0, -0.5});
    ImageTensor id = Estimator::identity().apply(y);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(id[i] == y[i]);

    CHECK(Estimator::affine(0.5, 1.0).apply(ImageTensor::scalar(2.0))[0] == doctest::Approx(2.0));
    CHECK(Estimator::constant(0.7).apply(y)[1] == 0.7);
    // coeffs (0,0,1): f(y) = y^2
    CHECK(Estimator::polynomial({0.0, 0.0, 1.0}).apply(ImageTensor::scalar(3.0))[0] ==
          doctest::Approx(9.0));
    CHECK_THROWS(Estimator::polynomial({0, 0, 0, 0, 0, 1.0}));  // degree 5
}

TEST_CASE("delta-kernel convolution is the identity") {
    std::vector<double> kernel(9, 0.0);
    kernel[4] = 1.0;
    Estimator conv = Estimator::convolution(kernel, 3);
    ImageTensor y = ImageTensor::zeros({4, 5});
    RandomStream rng(1);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = rng.uniform();
    ImageTensor out = conv.apply(y);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(out[i] == doctest::Approx(y[i]));
}

TEST_CASE("diagonal jacobian closed forms") {
    ImageTensor y = ImageTensor::flat({0.5, 2.0});
    ImageTensor j1 = Estimator::identity().diag_jacobian(y);
    CHECK(j1[0] == 1.0);
    ImageTensor j2 = Estimator::affine(0.3, 5.0).diag_jacobian(y);
    CHECK(j2[1] == doctest::Approx(0.3));
    ImageTensor j3 = Estimator::polynomial({0.0, 0.0, 1.0}).diag_jacobian(y);
    CHECK(j3[0] == doctest::Approx(1.0));  // 2y at y=0.5
    CHECK(j3[1] == doctest::Approx(4.0));
}

TEST_CASE("finite differences agree with analytic derivatives") {
    RandomStream rng(5);
    ImageTensor y = ImageTensor::zeros({3, 3});
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.2 + rng.uniform();

    std::vector<Estimator> built_ins = {
        Estimator::identity(), Estimator::constant(0.4), Estimator::affine(0.7, 0.1),
        Estimator::polynomial({0.1, 0.5, 0.2, 0.05}),
        Estimator::convolution({0.0, 0.2, 0.0, 0.2, 0.2, 0.2, 0.0, 0.2, 0.0}, 3)};
    for (std::size_t k = 0; k < built_ins.size(); ++k) {
        CAPTURE(k);
        ImageTensor jac = built_ins[k].diag_jacobian(y);
        for (std::size_t i = 0; i < y.size(); ++i) {
            CHECK(std::abs(fd_derivative(built_ins[k], y, i, 1, 1e-4) - jac[i]) < 1e-6);
        }
    }

    // k=2 of y^3 at y=2 is 6y = 12.
    Estimator cubic = Estimator::polynomial({0.0, 0.0, 0.0, 1.0});
    CHECK(fd_derivative(cubic, ImageTensor::scalar(2.0), 0, 2, 1e-4) ==
          doctest::Approx(12.0).epsilon(1e-6));
    CHECK(fd_derivative(cubic, ImageTensor::scalar(2.0), 0, 3, 1e-3) ==
          doctest::Approx(6.0).epsilon(1e-4));
    CHECK_THROWS(fd_derivative(cubic, ImageTensor::scalar(2.0), 0, 5, 1e-4));
    CHECK_THROWS(fd_derivative(cubic, ImageTensor::scalar(2.0), 0, 1, 0.0));
}

TEST_CASE("range maps keep outputs strictly interior") {
    Estimator neg = Estimator::constant(-50.0).with_range_map(RangeMap::Positive);
    double v = neg.apply(ImageTensor::scalar(0.0))[0];
    CHECK(v >= 1e-6);

    Estimator big = Estimator::affine(100.0, 0.0).with_range_map(RangeMap::UnitInterval);
    double u = big.apply(ImageTensor::scalar(10.0))[0];
    CHECK(u <= 1.0 - 1e-6);
    CHECK(u > 0.0);

    // Chain factor shows up in the jacobian.
    Estimator mapped = Estimator::affine(1.0, 0.0).with_range_map(RangeMap::UnitInterval);
    ImageTensor y = ImageTensor::scalar(0.3);
    CHECK(std::abs(fd_derivative(mapped, y, 0, 1, 1e-5) - mapped.diag_jacobian(y)[0]) < 1e-6);
}

TEST_CASE("estimator serialization round trip") {
    Estimator f = Estimator::polynomial({0.2, 0.5, 0.1}).with_range_map(RangeMap::Positive);
    Estimator g = Estimator::deserialize_json(f.serialize_json());
    CHECK(g.kind() == f.kind());
    CHECK(g.range_map() == f.range_map());
    CHECK(g.params() == f.params());

    CHECK_THROWS(Estimator::convolution({0.25, 0.25, 0.25, 0.25}, 2));  // even side
}

TEST_CASE("training basics") {
    // y = x exactly: supervised MSE drives affine towards (1, 0).
    RandomStream rng(9);
    std::vector<TrainSample> data;
    for (int s = 0; s < 64; ++s) {
        ImageTensor x = ImageTensor::zeros({16});
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform();
        data.push_back({x, x});
    }
    TrainConfig cfg;
    cfg.epochs = 0;
    Estimator before = Estimator::affine(0.2, 0.1);
    Estimator same = train(before, mse_pixel_loss(), data, cfg);
    CHECK(same.params() == before.params());

    cfg.epochs = 400;
    cfg.step_size = 0.5;
    cfg.batch_size = 16;
    Estimator after = train(before, mse_pixel_loss(), data, cfg);
    CHECK(after.params()[0] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(after.params()[1]) < 0.02);

    // Analytic and finite-difference gradients land in the same place.
    TrainConfig fd = cfg;
    fd.gradient_mode = GradientMode::FiniteDifference;
    Estimator after_fd = train(before, mse_pixel_loss(), data, fd);
    CHECK(after_fd.params()[0] == doctest::Approx(after.params()[0]).epsilon(1e-3));

    // Divergent step size is reported with the last state attached.
    TrainConfig bad = cfg;
    bad.step_size = 1e6;
    CHECK_THROWS_AS(train(before, mse_pixel_loss(), data, bad), std::runtime_error);
}

TEST_CASE("training is deterministic in the seed") {
    RandomStream rng(10);
    std::vector<TrainSample> data;
    for (int s = 0; s < 32; ++s) {
        ImageTensor x = ImageTensor::zeros({8});
        ImageTensor t = ImageTensor::zeros({8});
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = rng.uniform();
            t[i] = 0.5 * x[i] + rng.normal(0.0, 0.01);
        }
        data.push_back({x, t});
    }
    TrainConfig cfg;
    cfg.epochs = 20;
    cfg.seed = 77;
    Estimator a = train(Estimator::affine(0.0, 0.0), mse_pixel_loss(), data, cfg);
    Estimator b = train(Estimator::affine(0.0, 0.0), mse_pixel_loss(), data, cfg);
    CHECK(a.params() == b.params());
}
