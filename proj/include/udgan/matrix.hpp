#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "udgan/error.hpp"
#include "udgan/rng.hpp"

namespace udgan {

// Dense row-major matrix of doubles. The only tensor type in the project;
// vectors are 1xN or Nx1 matrices.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }

    static Matrix zeros_like(const Matrix& m) { return Matrix(m.rows, m.cols); }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows_init) {
        Matrix m(rows_init.size(), rows_init.begin()->size());
        std::size_t r = 0;
        for (const auto& row : rows_init) {
            if (row.size() != m.cols) throw ConfigError("ragged initializer for Matrix");
            std::size_t c = 0;
            for (double v : row) m(r, c++) = v;
            ++r;
        }
        return m;
    }

    // Uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)].
    static Matrix uniform_init(std::size_t r, std::size_t c, std::size_t fan_in, Rng& rng) {
        Matrix m(r, c);
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& v : m.data) v = uniform_range(rng, -bound, bound);
        return m;
    }
};

} // namespace udgan
