#include "gr2r/inverse_ops.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace gr2r {

ForwardOperator ForwardOperator::identity() { return ForwardOperator(OperatorKind::Identity); }

ForwardOperator ForwardOperator::binary_mask(ImageTensor mask) {
    for (double v : mask.data)
        if (v != 0.0 && v != 1.0)
            throw std::invalid_argument("ForwardOperator: mask entries must be 0 or 1");
    ForwardOperator op(OperatorKind::BinaryMask);
    op.mask_ = std::move(mask);
    return op;
}

ForwardOperator ForwardOperator::dense(std::vector<double> matrix, std::size_t rows,
                                       std::size_t cols) {
    if (matrix.size() != rows * cols)
        throw std::invalid_argument("ForwardOperator: matrix size mismatch");
    ForwardOperator op(OperatorKind::Dense);
    op.matrix_ = std::move(matrix);
    op.rows_ = rows;
    op.cols_ = cols;
    return op;
}

ImageTensor ForwardOperator::apply(const ImageTensor& x) const {
    switch (kind_) {
        case OperatorKind::Identity: return x;
        case OperatorKind::BinaryMask: {
            require_same_shape(x, mask_, "ForwardOperator::apply");
            ImageTensor out = x;
            for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask_[i];
            return out;
        }
        case OperatorKind::Dense: {
            if (x.size() != cols_)
                throw std::invalid_argument("ForwardOperator::apply: size mismatch");
            ImageTensor out = ImageTensor::zeros({rows_});
            for (std::size_t r = 0; r < rows_; ++r) {
                double acc = 0.0;
                for (std::size_t c = 0; c < cols_; ++c) acc += matrix_[r * cols_ + c] * x[c];
                out[r] = acc;
            }
            return out;
        }
    }
    return x;
}

ImageTensor ForwardOperator::adjoint(const ImageTensor& y) const {
    switch (kind_) {
        case OperatorKind::Identity: return y;
        case OperatorKind::BinaryMask:
            // 0/1 diagonal is self-adjoint.
            return apply(y);
        case OperatorKind::Dense: {
            if (y.size() != rows_)
                throw std::invalid_argument("ForwardOperator::adjoint: size mismatch");
            ImageTensor out = ImageTensor::zeros({cols_});
            for (std::size_t r = 0; r < rows_; ++r)
                for (std::size_t c = 0; c < cols_; ++c)
                    out[c] += matrix_[r * cols_ + c] * y[r];
            return out;
        }
    }
    return y;
}

std::string ForwardOperator::mask_to_json() const {
    if (kind_ != OperatorKind::BinaryMask)
        throw std::logic_error("mask_to_json: not a mask operator");
    nlohmann::json j;
    j["kind"] = "binary-mask";
    j["shape"] = mask_.shape;
    std::vector<std::size_t> runs;
    double current = 0.0;
    std::size_t run = 0;
    for (double v : mask_.data) {
        if (v == current) {
            ++run;
        } else {
            runs.push_back(run);
            current = v;
            run = 1;
        }
    }
    runs.push_back(run);
    j["runs"] = runs;
    return j.dump();
}

ForwardOperator ForwardOperator::mask_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("kind").get<std::string>() != "binary-mask")
        throw std::invalid_argument("mask_from_json: unexpected kind");
    std::vector<std::size_t> shape = j.at("shape").get<std::vector<std::size_t>>();
    std::vector<std::size_t> runs = j.at("runs").get<std::vector<std::size_t>>();
    ImageTensor mask = ImageTensor::zeros(shape);
    std::size_t pos = 0;
    double value = 0.0;
    for (std::size_t run : runs) {
        for (std::size_t i = 0; i < run; ++i, ++pos) {
            if (pos >= mask.size()) throw std::invalid_argument("mask_from_json: runs overflow");
            mask[pos] = value;
        }
        value = 1.0 - value;
    }
    if (pos != mask.size()) throw std::invalid_argument("mask_from_json: runs underflow");
    return binary_mask(std::move(mask));
}

ForwardOperator make_bernoulli_mask(const std::vector<std::size_t>& shape, double p,
                                    std::uint64_t seed) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("make_bernoulli_mask: p must lie in (0,1)");
    RandomStream rng(seed);
    ImageTensor mask = ImageTensor::zeros(shape);
    for (double& v : mask.data) v = rng.uniform() < p ? 1.0 : 0.0;
    return ForwardOperator::binary_mask(std::move(mask));
}

ImageTensor apply_transform(const Transform& t, const ImageTensor& x) {
    if (x.shape.size() != 2 && t.kind != TransformKind::Identity &&
        t.kind != TransformKind::Shift)
        throw std::invalid_argument("apply_transform: needs a 2-D tensor");
    switch (t.kind) {
        case TransformKind::Identity: return x;
        case TransformKind::Shift: {
            std::size_t h = x.height(), w = x.width();
            ImageTensor out = ImageTensor::zeros(x.shape);
            for (std::size_t r = 0; r < h; ++r)
                for (std::size_t c = 0; c < w; ++c) {
                    std::size_t rr = static_cast<std::size_t>(
                        ((static_cast<long long>(r) + t.shift_rows) % static_cast<long long>(h) +
                         static_cast<long long>(h)) % static_cast<long long>(h));
                    std::size_t cc = static_cast<std::size_t>(
                        ((static_cast<long long>(c) + t.shift_cols) % static_cast<long long>(w) +
                         static_cast<long long>(w)) % static_cast<long long>(w));
                    out.data[rr * w + cc] = x.data[r * w + c];
                }
            return out;
        }
        case TransformKind::Rotate90: {
            if (x.shape[0] != x.shape[1])
                throw std::invalid_argument("apply_transform: rotation needs a square tensor");
            ImageTensor out = x;
            int turns = ((t.quarter_turns % 4) + 4) % 4;
            std::size_t n = x.shape[0];
            for (int k = 0; k < turns; ++k) {
                ImageTensor rotated = ImageTensor::zeros(out.shape);
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t c = 0; c < n; ++c)
                        rotated.data[c * n + (n - 1 - r)] = out.data[r * n + c];
                out = rotated;
            }
            return out;
        }
        case TransformKind::FlipHorizontal: {
            std::size_t h = x.height(), w = x.width();
            ImageTensor out = ImageTensor::zeros(x.shape);
            for (std::size_t r = 0; r < h; ++r)
                for (std::size_t c = 0; c < w; ++c)
                    out.data[r * w + (w - 1 - c)] = x.data[r * w + c];
            return out;
        }
        case TransformKind::FlipVertical: {
            std::size_t h = x.height(), w = x.width();
            ImageTensor out = ImageTensor::zeros(x.shape);
            for (std::size_t r = 0; r < h; ++r)
                for (std::size_t c = 0; c < w; ++c)
                    out.data[(h - 1 - r) * w + c] = x.data[r * w + c];
            return out;
        }
    }
    return x;
}

Transform inverse_transform(const Transform& t) {
    Transform inv = t;
    switch (t.kind) {
        case TransformKind::Shift:
            inv.shift_rows = -t.shift_rows;
            inv.shift_cols = -t.shift_cols;
            break;
        case TransformKind::Rotate90:
            inv.quarter_turns = (4 - ((t.quarter_turns % 4) + 4) % 4) % 4;
            break;
        default: break;  // identity and flips are involutions
    }
    return inv;
}

}  // namespace gr2r
