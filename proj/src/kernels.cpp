#include "udgan/kernels.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace udgan::kernels {

namespace {

void check_mul(const Matrix& a, const Matrix& b, const Matrix& out, std::size_t ar,
               std::size_t inner_a, std::size_t inner_b, std::size_t bc) {
    if (inner_a != inner_b)
        throw ConfigError("matmul: inner dimensions disagree");
    if (out.rows != ar || out.cols != bc)
        throw ConfigError("matmul: output shape mismatch");
}

std::atomic<bool> g_enabled{true};
std::atomic<std::size_t> g_threshold{16 * 1024};

} // namespace

namespace serial {

void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
    check_mul(a, b, out, a.rows, a.cols, b.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        double* orow = &out.data[i * out.cols];
        for (std::size_t j = 0; j < b.cols; ++j) orow[j] = 0.0;
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double av = a.data[i * a.cols + k];
            const double* brow = &b.data[k * b.cols];
            for (std::size_t j = 0; j < b.cols; ++j) orow[j] += av * brow[j];
        }
    }
}

void matmul_acc(const Matrix& a, const Matrix& b, Matrix& out) {
    check_mul(a, b, out, a.rows, a.cols, b.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        double* orow = &out.data[i * out.cols];
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double av = a.data[i * a.cols + k];
            const double* brow = &b.data[k * b.cols];
            for (std::size_t j = 0; j < b.cols; ++j) orow[j] += av * brow[j];
        }
    }
}

void matmul_tn(const Matrix& a, const Matrix& b, Matrix& out) {
    check_mul(a, b, out, a.cols, a.rows, b.rows, b.cols);
    for (std::size_t i = 0; i < a.cols; ++i)
        for (std::size_t j = 0; j < out.cols; ++j) out.data[i * out.cols + j] = 0.0;
    for (std::size_t k = 0; k < a.rows; ++k) {
        const double* arow = &a.data[k * a.cols];
        const double* brow = &b.data[k * b.cols];
        for (std::size_t i = 0; i < a.cols; ++i) {
            double* orow = &out.data[i * out.cols];
            const double av = arow[i];
            for (std::size_t j = 0; j < b.cols; ++j) orow[j] += av * brow[j];
        }
    }
}

void matmul_tn_acc(const Matrix& a, const Matrix& b, Matrix& out) {
    check_mul(a, b, out, a.cols, a.rows, b.rows, b.cols);
    for (std::size_t k = 0; k < a.rows; ++k) {
        const double* arow = &a.data[k * a.cols];
        const double* brow = &b.data[k * b.cols];
        for (std::size_t i = 0; i < a.cols; ++i) {
            double* orow = &out.data[i * out.cols];
            const double av = arow[i];
            for (std::size_t j = 0; j < b.cols; ++j) orow[j] += av * brow[j];
        }
    }
}

void matmul_nt(const Matrix& a, const Matrix& b, Matrix& out) {
    check_mul(a, b, out, a.rows, a.cols, b.cols, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = &a.data[i * a.cols];
        double* orow = &out.data[i * out.cols];
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* brow = &b.data[j * b.cols];
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            orow[j] = acc;
        }
    }
}

void matmul_nt_acc(const Matrix& a, const Matrix& b, Matrix& out) {
    check_mul(a, b, out, a.rows, a.cols, b.cols, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = &a.data[i * a.cols];
        double* orow = &out.data[i * out.cols];
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* brow = &b.data[j * b.cols];
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            orow[j] += acc;
        }
    }
}

} // namespace serial

namespace parallel {

// Each variant parallelizes over independent output rows; the per-element
// accumulation order matches the serial kernel exactly, so results are
// bitwise identical for any thread count.

void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
    check_mul(a, b, out, a.rows, a.cols, b.rows, b.cols);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        double* orow = &out.data[i * out.cols];
        for (std::size_t j = 0; j < b.cols; ++j) orow[j] = 0.0;
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double av = a.data[i * a.cols + k];
            const double* brow = &b.data[k * b.cols];
            for (std::size_t j = 0; j < b.cols; ++j) orow[j] += av * brow[j];
        }
    }
}

void matmul_acc(const Matrix& a, const Matrix& b, Matrix& out) {
    check_mul(a, b, out, a.rows, a.cols, b.rows, b.cols);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        double* orow = &out.data[i * out.cols];
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double av = a.data[i * a.cols + k];
            const double* brow = &b.data[k * b.cols];
            for (std::size_t j = 0; j < b.cols; ++j) orow[j] += av * brow[j];
        }
    }
}

void matmul_tn(const Matrix& a, const Matrix& b, Matrix& out) {
    check_mul(a, b, out, a.cols, a.rows, b.rows, b.cols);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.cols);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        double* orow = &out.data[i * out.cols];
        for (std::size_t j = 0; j < b.cols; ++j) orow[j] = 0.0;
        for (std::size_t k = 0; k < a.rows; ++k) {
            const double av = a.data[k * a.cols + i];
            const double* brow = &b.data[k * b.cols];
            for (std::size_t j = 0; j < b.cols; ++j) orow[j] += av * brow[j];
        }
    }
}

void matmul_tn_acc(const Matrix& a, const Matrix& b, Matrix& out) {
    check_mul(a, b, out, a.cols, a.rows, b.rows, b.cols);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.cols);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        double* orow = &out.data[i * out.cols];
        for (std::size_t k = 0; k < a.rows; ++k) {
            const double av = a.data[k * a.cols + i];
            const double* brow = &b.data[k * b.cols];
            for (std::size_t j = 0; j < b.cols; ++j) orow[j] += av * brow[j];
        }
    }
}

void matmul_nt(const Matrix& a, const Matrix& b, Matrix& out) {
    check_mul(a, b, out, a.rows, a.cols, b.cols, b.rows);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double* arow = &a.data[i * a.cols];
        double* orow = &out.data[i * out.cols];
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* brow = &b.data[j * b.cols];
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            orow[j] = acc;
        }
    }
}

void matmul_nt_acc(const Matrix& a, const Matrix& b, Matrix& out) {
    check_mul(a, b, out, a.rows, a.cols, b.cols, b.rows);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double* arow = &a.data[i * a.cols];
        double* orow = &out.data[i * out.cols];
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* brow = &b.data[j * b.cols];
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            orow[j] += acc;
        }
    }
}

} // namespace parallel

bool enabled() { return g_enabled.load(std::memory_order_relaxed); }
void set_enabled(bool on) { g_enabled.store(on, std::memory_order_relaxed); }

int threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

std::size_t parallel_threshold() { return g_threshold.load(std::memory_order_relaxed); }
void set_parallel_threshold(std::size_t flops) {
    g_threshold.store(flops, std::memory_order_relaxed);
}

namespace {

inline bool go_parallel(std::size_t out_rows, std::size_t out_cols, std::size_t inner) {
#ifdef _OPENMP
    return enabled() && out_rows > 1 &&
           out_rows * out_cols * inner >= parallel_threshold();
#else
    (void)out_rows;
    (void)out_cols;
    (void)inner;
    return false;
#endif
}

} // namespace

void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
    if (go_parallel(a.rows, b.cols, a.cols))
        parallel::matmul(a, b, out);
    else
        serial::matmul(a, b, out);
}

void matmul_tn(const Matrix& a, const Matrix& b, Matrix& out) {
    if (go_parallel(a.cols, b.cols, a.rows))
        parallel::matmul_tn(a, b, out);
    else
        serial::matmul_tn(a, b, out);
}

void matmul_nt(const Matrix& a, const Matrix& b, Matrix& out) {
    if (go_parallel(a.rows, b.rows, a.cols))
        parallel::matmul_nt(a, b, out);
    else
        serial::matmul_nt(a, b, out);
}

void matmul_acc(const Matrix& a, const Matrix& b, Matrix& out) {
    if (go_parallel(a.rows, b.cols, a.cols))
        parallel::matmul_acc(a, b, out);
    else
        serial::matmul_acc(a, b, out);
}

void matmul_tn_acc(const Matrix& a, const Matrix& b, Matrix& out) {
    if (go_parallel(a.cols, b.cols, a.rows))
        parallel::matmul_tn_acc(a, b, out);
    else
        serial::matmul_tn_acc(a, b, out);
}

void matmul_nt_acc(const Matrix& a, const Matrix& b, Matrix& out) {
    if (go_parallel(a.rows, b.rows, a.cols))
        parallel::matmul_nt_acc(a, b, out);
    else
        serial::matmul_nt_acc(a, b, out);
}

} // namespace udgan::kernels
