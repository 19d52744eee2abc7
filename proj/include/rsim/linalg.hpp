#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rsim {

using Vec = std::vector<double>;

// Dense row-major parameter tensor. cols == 1 for bias vectors.
struct Tensor {
    std::string name;
    std::size_t rows = 0;
    std::size_t cols = 0;
    Vec data;

    Tensor() = default;
    Tensor(std::string n, std::size_t r, std::size_t c)
        : name(std::move(n)), rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::size_t size() const { return data.size(); }
};

// y = W x  (W: rows x cols, x: cols, y: rows)
inline void matvec(const Tensor& w, const double* x, double* y) {
    for (std::size_t r = 0; r < w.rows; ++r) {
        const double* row = w.data.data() + r * w.cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < w.cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

// dx += W^T dy
inline void matvec_transposed_acc(const Tensor& w, const double* dy, double* dx) {
    for (std::size_t r = 0; r < w.rows; ++r) {
        const double g = dy[r];
        if (g == 0.0) continue;
        const double* row = w.data.data() + r * w.cols;
        for (std::size_t c = 0; c < w.cols; ++c) dx[c] += row[c] * g;
    }
}

// Gw += dy (outer) x
inline void outer_acc(Tensor& gw, const double* dy, const double* x) {
    for (std::size_t r = 0; r < gw.rows; ++r) {
        const double g = dy[r];
        if (g == 0.0) continue;
        double* row = gw.data.data() + r * gw.cols;
        for (std::size_t c = 0; c < gw.cols; ++c) row[c] += g * x[c];
    }
}

inline double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

// Zero-filled tensors with the same names/shapes.
inline std::vector<Tensor> clone_shapes(const std::vector<Tensor>& params) {
    std::vector<Tensor> out;
    out.reserve(params.size());
    for (const Tensor& t : params) out.emplace_back(t.name, t.rows, t.cols);
    return out;
}

} // namespace rsim
