#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gr2r/inverse_ops.hpp"
#include "gr2r/rng.hpp"

using namespace gr2r;

namespace {

ImageTensor random_tensor(std::vector<std::size_t> shape, std::uint64_t seed) {
    ImageTensor t = ImageTensor::zeros(std::move(shape));
    RandomStream rng(seed);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.normal();
    return t;
}

}  // namespace

TEST_CASE("identity and mask operators") {
    ImageTensor x = random_tensor({3, 3}, 1);
    ForwardOperator id = ForwardOperator::identity();
    CHECK(squared_distance(id.apply(x), x) == 0.0);
    CHECK(squared_distance(id.adjoint(x), x) == 0.0);

    ForwardOperator zero = ForwardOperator::binary_mask(ImageTensor::zeros({3, 3}));
    CHECK(squared_norm(zero.apply(x)) == 0.0);

    CHECK_THROWS(ForwardOperator::binary_mask(ImageTensor::flat({0.0, 0.5})));

    // Masks are idempotent.
    ImageTensor m = ImageTensor::flat({1, 0, 1, 1, 0, 0, 1, 0, 1});
    m.shape = {3, 3};
    ForwardOperator mask = ForwardOperator::binary_mask(m);
    ImageTensor once = mask.apply(x);
    CHECK(squared_distance(mask.apply(once), once) == 0.0);
}

TEST_CASE("adjoint identity on random pairs") {
    ImageTensor x = random_tensor({12}, 2);
    ImageTensor y = random_tensor({5}, 3);
    std::vector<double> matrix(5 * 12);
    RandomStream rng(4);
    for (double& v : matrix) v = rng.normal();
    ForwardOperator dense = ForwardOperator::dense(matrix, 5, 12);
    CHECK(std::abs(dot(dense.apply(x), y) - dot(x, dense.adjoint(y))) < 1e-10);

    ImageTensor img = random_tensor({4, 4}, 5);
    ImageTensor img2 = random_tensor({4, 4}, 6);
    ForwardOperator mask = make_bernoulli_mask({4, 4}, 0.5, 9);
    CHECK(std::abs(dot(mask.apply(img), img2) - dot(img, mask.adjoint(img2))) < 1e-12);
}

TEST_CASE("bernoulli masks are seed-deterministic with the right density") {
    ForwardOperator a = make_bernoulli_mask({64, 64}, 0.9, 123);
    ForwardOperator b = make_bernoulli_mask({64, 64}, 0.9, 123);
    CHECK(squared_distance(a.mask(), b.mask()) == 0.0);

    double ones = 0.0;
    const std::size_t n = 512 * 512;
    ForwardOperator big = make_bernoulli_mask({512, 512}, 0.9, 7);
    for (std::size_t i = 0; i < n; ++i) ones += big.mask()[i];
    CHECK(std::abs(ones / n - 0.9) <= 4.0 * std::sqrt(0.9 * 0.1 / n));

    CHECK_THROWS(make_bernoulli_mask({4, 4}, 1.5, 0));
}

TEST_CASE("mask serialization round trips") {
    ForwardOperator mask = make_bernoulli_mask({8, 8}, 0.7, 11);
    ForwardOperator back = ForwardOperator::mask_from_json(mask.mask_to_json());
    CHECK(back.mask().shape == mask.mask().shape);
    CHECK(squared_distance(back.mask(), mask.mask()) == 0.0);
    CHECK_THROWS(ForwardOperator::identity().mask_to_json());
}

TEST_CASE("transforms are exact permutations") {
    ImageTensor x = random_tensor({4, 4}, 21);

    Transform shift;
    shift.kind = TransformKind::Shift;
    shift.shift_rows = 1;
    shift.shift_cols = -2;
    Transform rot;
    rot.kind = TransformKind::Rotate90;
    rot.quarter_turns = 1;
    Transform fliph;
    fliph.kind = TransformKind::FlipHorizontal;
    Transform flipv;
    flipv.kind = TransformKind::FlipVertical;

    for (const Transform& t : {Transform{}, shift, rot, fliph, flipv}) {
        ImageTensor moved = apply_transform(t, x);
        // Permutation preserves the multiset of pixel values.
        std::vector<double> a(x.data), b(moved.data);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
        // Inverse composes to the identity bit-exactly.
        ImageTensor back = apply_transform(inverse_transform(t), moved);
        CHECK(back.data == x.data);
    }

    // Four quarter turns compose to the identity.
    ImageTensor r = x;
    for (int i = 0; i < 4; ++i) r = apply_transform(rot, r);
    CHECK(r.data == x.data);

    ImageTensor rect = random_tensor({2, 4}, 22);
    CHECK_THROWS(apply_transform(rot, rect));
}
