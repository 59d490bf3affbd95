#pragma once

#include "udgan/matrix.hpp"

namespace udgan::kernels {

// Serial reference kernels. These define the semantics; the OpenMP versions
// below must produce bitwise-identical results (each output element is
// accumulated in the same order by exactly one thread).
namespace serial {

void matmul(const Matrix& a, const Matrix& b, Matrix& out);     // out = a*b
void matmul_tn(const Matrix& a, const Matrix& b, Matrix& out);  // out = a^T * b
void matmul_nt(const Matrix& a, const Matrix& b, Matrix& out);  // out = a * b^T
void matmul_acc(const Matrix& a, const Matrix& b, Matrix& out); // out += a*b
void matmul_tn_acc(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_nt_acc(const Matrix& a, const Matrix& b, Matrix& out);

} // namespace serial

namespace parallel {

void matmul(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_tn(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_nt(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_acc(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_tn_acc(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_nt_acc(const Matrix& a, const Matrix& b, Matrix& out);

} // namespace parallel

// Global switch. threads() reports the OpenMP pool size (1 when built
// without OpenMP). set_enabled(false) forces every dispatching call onto the
// serial path; useful for timing comparisons and tests.
bool enabled();
void set_enabled(bool on);
int threads();

// Work threshold (element count of the output times inner dim) below which
// dispatch stays serial; tiny matmuls lose more to fork/join than they gain.
std::size_t parallel_threshold();
void set_parallel_threshold(std::size_t flops);

// Dispatching kernels used throughout the library.
void matmul(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_tn(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_nt(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_acc(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_tn_acc(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_nt_acc(const Matrix& a, const Matrix& b, Matrix& out);

} // namespace udgan::kernels
