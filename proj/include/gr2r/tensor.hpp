#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace gr2r {

// Flat sequence of 64-bit values with (height, width) or (n,) shape.
struct ImageTensor {
    std::vector<double> data;
    std::vector<std::size_t> shape;

    ImageTensor() = default;

    ImageTensor(std::vector<double> values, std::vector<std::size_t> dims)
        : data(std::move(values)), shape(std::move(dims)) {
        if (data.size() != element_count(shape))
            throw std::invalid_argument("ImageTensor: data length does not match shape");
    }

    static std::size_t element_count(const std::vector<std::size_t>& dims) {
        std::size_t n = 1;
        for (std::size_t d : dims) n *= d;
        return dims.empty() ? 0 : n;
    }

    static ImageTensor zeros(std::vector<std::size_t> dims) {
        std::size_t n = element_count(dims);
        return ImageTensor(std::vector<double>(n, 0.0), std::move(dims));
    }

    static ImageTensor full(std::vector<std::size_t> dims, double value) {
        std::size_t n = element_count(dims);
        return ImageTensor(std::vector<double>(n, value), std::move(dims));
    }

    static ImageTensor scalar(double value) { return ImageTensor({value}, {1}); }

    static ImageTensor flat(std::vector<double> values) {
        std::size_t n = values.size();
        return ImageTensor(std::move(values), {n});
    }

    std::size_t size() const { return data.size(); }
    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    std::size_t height() const { return shape.size() == 2 ? shape[0] : 1; }
    std::size_t width() const { return shape.size() == 2 ? shape[1] : shape.at(0); }

    bool same_shape(const ImageTensor& other) const { return shape == other.shape; }
};

inline void require_same_shape(const ImageTensor& a, const ImageTensor& b,
                               const std::string& where = "tensor op") {
    if (!a.same_shape(b))
        throw std::invalid_argument(where + ": shape mismatch");
}

inline double dot(const ImageTensor& a, const ImageTensor& b) {
    require_same_shape(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double squared_norm(const ImageTensor& a) {
    double s = 0.0;
    for (double v : a.data) s += v * v;
    return s;
}

inline double squared_distance(const ImageTensor& a, const ImageTensor& b) {
    require_same_shape(a, b, "squared_distance");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace gr2r
