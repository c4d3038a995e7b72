#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gr2r/rng.hpp"
#include "gr2r/tensor.hpp"

namespace gr2r {

enum class OperatorKind { Identity, BinaryMask, Dense };

// Linear measurement operator A with apply/adjoint.
class ForwardOperator {
public:
    static ForwardOperator identity();
    static ForwardOperator binary_mask(ImageTensor mask);
    // Row-major m x n matrix mapping flat image vectors to measurements.
    static ForwardOperator dense(std::vector<double> matrix, std::size_t rows,
                                 std::size_t cols);

    OperatorKind kind() const { return kind_; }
    const ImageTensor& mask() const { return mask_; }

    ImageTensor apply(const ImageTensor& x) const;
    ImageTensor adjoint(const ImageTensor& y) const;

    // Run-length-encoded mask serialization: {"kind","shape","runs"} where
    // runs alternate zero/one counts starting from zero.
    std::string mask_to_json() const;
    static ForwardOperator mask_from_json(const std::string& text);

private:
    ForwardOperator(OperatorKind kind) : kind_(kind) {}

    OperatorKind kind_;
    ImageTensor mask_;
    std::vector<double> matrix_;
    std::size_t rows_ = 0, cols_ = 0;
};

// Deterministic Bernoulli(p) 0/1 mask; the same seed yields the same operator.
ForwardOperator make_bernoulli_mask(const std::vector<std::size_t>& shape, double p,
                                    std::uint64_t seed);

enum class TransformKind { Identity, Shift, Rotate90, FlipHorizontal, FlipVertical };

// Pixel permutations: periodic shifts, quarter-turn rotations, flips.
struct Transform {
    TransformKind kind = TransformKind::Identity;
    long long shift_rows = 0;
    long long shift_cols = 0;
    int quarter_turns = 0;  // multiples of 90 degrees, 0..3
};

struct TransformGroup {
    std::vector<Transform> elements;
};

ImageTensor apply_transform(const Transform& t, const ImageTensor& x);
Transform inverse_transform(const Transform& t);

}  // namespace gr2r
