#pragma once

#include <vector>

#include "phigamma/zq.hpp"

namespace phigamma {

/// Dense row-major matrix over Z/p^N.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<u64> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0) {}
    static Mat identity(int n);

    u64& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    u64 operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
    u64* row(int i) { return a.data() + static_cast<std::size_t>(i) * cols; }
    const u64* row(int i) const { return a.data() + static_cast<std::size_t>(i) * cols; }
};

Mat matmul(const Zq& R, const Mat& A, const Mat& B);
Mat vstack(const Mat& A, const Mat& B);
Mat hstack(const Mat& A, const Mat& B);
Mat block_diag(const Mat& A, const Mat& B);
Mat scale(const Zq& R, const Mat& A, u64 s);
Mat subtract(const Zq& R, const Mat& A, const Mat& B);
bool is_zero(const Mat& A);

/**
 * U * A * V = diag(p^{v_0}, p^{v_1}, ...) with v_0 <= v_1 <= ...;
 * `vals` has min(rows, cols) entries, N marking a zero divisor.
 */
struct SNF {
    std::vector<int> vals;
    Mat U, V;
};

SNF smith_normal_form(const Zq& R, Mat A, bool want_u = true, bool want_v = true);

}  // namespace phigamma
