#include "phigamma/matrix.hpp"

#include <algorithm>

namespace phigamma {

Mat Mat::identity(int n) {
    Mat I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1;
    return I;
}

Mat matmul(const Zq& R, const Mat& A, const Mat& B) {
    if (A.cols != B.rows) throw PreconditionError("matmul shape mismatch");
    Mat C(A.rows, B.cols);
    const u128 m = static_cast<u128>(R.q - 1) * (R.q - 1);
    const u128 lim128 = m ? (~static_cast<u128>(0)) / m : 1;
    const int lim = static_cast<int>(std::min<u128>(lim128, u128(1) << 30));
    std::vector<u128> acc(static_cast<std::size_t>(B.cols));
    for (int i = 0; i < A.rows; ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        u64* c = C.row(i);
        int cnt = 0;
        for (int k = 0; k < A.cols; ++k) {
            u64 x = A(i, k);
            if (!x) continue;
            const u64* b = B.row(k);
            for (int j = 0; j < B.cols; ++j) acc[static_cast<std::size_t>(j)] += static_cast<u128>(x) * b[j];
            if (++cnt == lim) {
                for (int j = 0; j < B.cols; ++j) {
                    c[j] = R.add(c[j], static_cast<u64>(acc[static_cast<std::size_t>(j)] % R.q));
                    acc[static_cast<std::size_t>(j)] = 0;
                }
                cnt = 0;
            }
        }
        for (int j = 0; j < B.cols; ++j) c[j] = R.add(c[j], static_cast<u64>(acc[static_cast<std::size_t>(j)] % R.q));
    }
    return C;
}

Mat vstack(const Mat& A, const Mat& B) {
    if (A.rows == 0) return B;
    if (B.rows == 0) return A;
    if (A.cols != B.cols) throw PreconditionError("vstack shape mismatch");
    Mat C(A.rows + B.rows, A.cols);
    std::copy(A.a.begin(), A.a.end(), C.a.begin());
    std::copy(B.a.begin(), B.a.end(), C.a.begin() + static_cast<long>(A.a.size()));
    return C;
}

Mat hstack(const Mat& A, const Mat& B) {
    if (A.rows != B.rows) throw PreconditionError("hstack shape mismatch");
    Mat C(A.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) {
        std::copy(A.row(i), A.row(i) + A.cols, C.row(i));
        std::copy(B.row(i), B.row(i) + B.cols, C.row(i) + A.cols);
    }
    return C;
}

Mat block_diag(const Mat& A, const Mat& B) {
    Mat C(A.rows + B.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) std::copy(A.row(i), A.row(i) + A.cols, C.row(i));
    for (int i = 0; i < B.rows; ++i) std::copy(B.row(i), B.row(i) + B.cols, C.row(A.rows + i) + A.cols);
    return C;
}

Mat scale(const Zq& R, const Mat& A, u64 s) {
    Mat C = A;
    for (auto& x : C.a) x = R.mul(x, s);
    return C;
}

Mat subtract(const Zq& R, const Mat& A, const Mat& B) {
    if (A.rows != B.rows || A.cols != B.cols) throw PreconditionError("subtract shape mismatch");
    Mat C = A;
    for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] = R.sub(A.a[i], B.a[i]);
    return C;
}

bool is_zero(const Mat& A) {
    return std::all_of(A.a.begin(), A.a.end(), [](u64 x) { return x == 0; });
}

SNF smith_normal_form(const Zq& R, Mat A, bool want_u, bool want_v) {
    const int m = A.rows, n = A.cols;
    SNF out;
    if (want_u) out.U = Mat::identity(m);
    if (want_v) out.V = Mat::identity(n);
    const int steps = std::min(m, n);
    // Row-wise valuation cache speeds up the pivot search.
    for (int t = 0; t < steps; ++t) {
        int bv = R.N, bi = -1, bj = -1;
        for (int i = t; i < m && bv > 0; ++i) {
            const u64* r = A.row(i);
            for (int j = t; j < n; ++j) {
                u64 x = r[j];
                if (!x) continue;
                int v = R.val(x);
                if (v < bv) {
                    bv = v;
                    bi = i;
                    bj = j;
                    if (v == 0) break;
                }
            }
        }
        if (bi < 0) {
            for (int k = t; k < steps; ++k) out.vals.push_back(R.N);
            break;
        }
        if (bi != t) {
            std::swap_ranges(A.row(t), A.row(t) + n, A.row(bi));
            if (want_u) std::swap_ranges(out.U.row(t), out.U.row(t) + m, out.U.row(bi));
        }
        if (bj != t) {
            for (int i = 0; i < m; ++i) std::swap(A(i, t), A(i, bj));
            if (want_v)
                for (int i = 0; i < n; ++i) std::swap(out.V(i, t), out.V(i, bj));
        }
        const u64 pa = R.ppow(bv);
        const u64 ui = R.inv((A(t, t) / pa) % R.q);
        {
            u64* r = A.row(t);
            for (int j = t; j < n; ++j) r[j] = R.mul(r[j], ui);
            if (want_u) {
                u64* u = out.U.row(t);
                for (int j = 0; j < m; ++j) u[j] = R.mul(u[j], ui);
            }
        }
        // Column t of the pivot row is now p^bv exactly.
        for (int i = t + 1; i < m; ++i) {
            u64 x = A(i, t);
            if (!x) continue;
            u64 f = R.neg(x / pa);
            u64* r = A.row(i);
            const u64* s = A.row(t);
            for (int j = t; j < n; ++j)
                if (s[j]) r[j] = R.add(r[j], R.mul(f, s[j]));
            if (want_u) {
                u64* u = out.U.row(i);
                const u64* us = out.U.row(t);
                for (int j = 0; j < m; ++j)
                    if (us[j]) u[j] = R.add(u[j], R.mul(f, us[j]));
            }
        }
        const u64* s = A.row(t);
        for (int j = t + 1; j < n; ++j) {
            u64 x = s[j];
            if (!x) continue;
            u64 f = R.neg(x / pa);
            // Rows below t are zero in column t, so only the pivot row changes.
            A(t, j) = 0;
            if (want_v)
                for (int i = 0; i < n; ++i) {
                    u64 y = out.V(i, t);
                    if (y) out.V(i, j) = R.add(out.V(i, j), R.mul(f, y));
                }
        }
        out.vals.push_back(bv);
    }
    return out;
}

}  // namespace phigamma
