#include "phigamma/module.hpp"

#include <algorithm>
#include <climits>
#include <numeric>

namespace phigamma {

namespace {

TruncatedLaurent zero_series(u64 p, int N) { return TruncatedLaurent(p, N, 0, 0, false); }

TruncatedLaurent constant(const PAdic& a) { return TruncatedLaurent::monomial(a.p(), a.N(), 0, a); }

LaurentMatrix identity_matrix(u64 p, int N, int d) {
    LaurentMatrix I(static_cast<std::size_t>(d), std::vector<TruncatedLaurent>(static_cast<std::size_t>(d), zero_series(p, N)));
    for (int i = 0; i < d; ++i) I[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = constant(PAdic::one(p, N));
    return I;
}

ScalarMatrix scalar_identity(u64 p, int N, int d) {
    ScalarMatrix I(static_cast<std::size_t>(d), std::vector<PAdic>(static_cast<std::size_t>(d), PAdic::zero(p, N)));
    for (int i = 0; i < d; ++i) I[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = PAdic::one(p, N);
    return I;
}

LaurentMatrix scalar_to_laurent(const ScalarMatrix& S, u64 p, int N) {
    LaurentMatrix A;
    for (auto& row : S) {
        A.emplace_back();
        for (auto& x : row) A.back().push_back(x.is_zero() ? zero_series(p, N) : constant(x));
    }
    return A;
}

ScalarMatrix laurent_to_scalar(const LaurentMatrix& A) {
    ScalarMatrix S;
    for (auto& row : A) {
        S.emplace_back();
        for (auto& x : row) S.back().push_back(x.coeff(0));
    }
    return S;
}

PAdic pow_padic(const PAdic& a, int n) {
    PAdic b = n >= 0 ? a : a.inverse();
    PAdic r = PAdic::one(a.p(), a.N());
    for (int i = 0; i < std::abs(n); ++i) r *= b;
    return r;
}

/// omega(g) for g the smallest primitive root mod p.
PAdic omega_generator(u64 p, int N) { return teichmuller_lift(primitive_root(p), p, N); }

void note_defect(CommutationDefect& d, const TruncatedLaurent& diff, int row, int col) {
    int top = diff.tail() ? diff.hi() : INT_MAX;
    for (auto& [k, a] : diff.coeffs()) {
        if (k > top || a.is_zero()) continue;
        Valuation v = valuation(a);
        if (v.infinite) continue;
        if (d.zero || v.value < d.valuation) {
            d.zero = false;
            d.valuation = v.value;
            d.exponent = k;
            d.row = row;
            d.col = col;
        }
    }
}

void compare_matrices(CommutationDefect& d, const LaurentMatrix& A, const LaurentMatrix& B) {
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A[i].size(); ++j)
            note_defect(d, series_sub(A[i][j], B[i][j]), static_cast<int>(i), static_cast<int>(j));
}

int diag_valuation(const TruncatedLaurent& f) {
    PAdic c0 = f.coeff(0);
    if (c0.is_zero()) throw PreconditionError("degree undefined at desk scope");
    int a = valuation(c0).value;
    int top = f.tail() ? f.hi() : INT_MAX;
    for (auto& [k, c] : f.coeffs()) {
        if (k >= 0 || k > top || c.is_zero()) continue;
        if (valuation(c).value <= a) throw PreconditionError("degree undefined at desk scope");
    }
    return a;
}

bool is_diagonal(const LaurentMatrix& A) {
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A.size(); ++j)
            if (i != j && !A[i][j].is_zero()) return false;
    return true;
}

}  // namespace

LaurentMatrix mat_mul(const LaurentMatrix& A, const LaurentMatrix& B) {
    if (A.empty()) return {};
    const u64 p = A[0][0].p();
    const int N = A[0][0].N();
    std::size_t n = A.size(), m = B.empty() ? 0 : B[0].size(), k = B.size();
    LaurentMatrix C(n, std::vector<TruncatedLaurent>(m, zero_series(p, N)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t l = 0; l < k; ++l) {
                if (A[i][l].is_zero() && !A[i][l].tail()) continue;
                if (B[l][j].is_zero() && !B[l][j].tail()) continue;
                C[i][j] = series_add(C[i][j], series_mul(A[i][l], B[l][j]));
            }
    return C;
}

LaurentMatrix mat_transpose(const LaurentMatrix& A) {
    LaurentMatrix T = A;
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A.size(); ++j) T[j][i] = A[i][j];
    return T;
}

LaurentMatrix mat_apply(const LaurentMatrix& A, const std::function<TruncatedLaurent(const TruncatedLaurent&)>& f) {
    LaurentMatrix B = A;
    for (auto& row : B)
        for (auto& x : row) x = f(x);
    return B;
}

LaurentMatrix mat_inverse(const LaurentMatrix& A, int hi_out) {
    const std::size_t d = A.size();
    if (d == 0) return {};
    const u64 p = A[0][0].p();
    const int N = A[0][0].N();
    LaurentMatrix M = A, Inv = identity_matrix(p, N, static_cast<int>(d));
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t piv = d;
        int best_order = INT_MAX, best_val = INT_MAX;
        for (std::size_t r = c; r < d; ++r) {
            int o = M[r][c].order();
            if (o == INT_MAX) continue;
            int v = valuation(M[r][c].coeff(o)).value;
            if (v < best_val || (v == best_val && o < best_order)) {
                best_val = v;
                best_order = o;
                piv = r;
            }
        }
        if (piv == d) throw PreconditionError("matrix not invertible at precision");
        std::swap(M[c], M[piv]);
        std::swap(Inv[c], Inv[piv]);
        TruncatedLaurent s = M[c][c].coeffs().size() == 1 && !M[c][c].tail() ? series_invert(M[c][c], -best_order)
                                                                              : series_invert(M[c][c], hi_out);
        for (std::size_t j = 0; j < d; ++j) {
            M[c][j] = series_mul(M[c][j], s);
            Inv[c][j] = series_mul(Inv[c][j], s);
        }
        for (std::size_t r = 0; r < d; ++r) {
            if (r == c || M[r][c].is_zero()) continue;
            TruncatedLaurent f = M[r][c];
            for (std::size_t j = 0; j < d; ++j) {
                M[r][j] = series_sub(M[r][j], series_mul(f, M[c][j]));
                Inv[r][j] = series_sub(Inv[r][j], series_mul(f, Inv[c][j]));
            }
        }
    }
    return Inv;
}

TruncatedLaurent mat_det(const LaurentMatrix& A) {
    const std::size_t d = A.size();
    if (d == 0) throw PreconditionError("determinant of an empty matrix");
    if (d == 1) return A[0][0];
    if (d > 8) throw PreconditionError("determinant supported up to rank 8");
    TruncatedLaurent s = zero_series(A[0][0].p(), A[0][0].N());
    for (std::size_t j = 0; j < d; ++j) {
        if (A[0][j].is_zero() && !A[0][j].tail()) continue;
        LaurentMatrix minor;
        for (std::size_t r = 1; r < d; ++r) {
            minor.emplace_back();
            for (std::size_t c = 0; c < d; ++c)
                if (c != j) minor.back().push_back(A[r][c]);
        }
        TruncatedLaurent t = series_mul(A[0][j], mat_det(minor));
        s = (j % 2 == 0) ? series_add(s, t) : series_sub(s, t);
    }
    return s;
}

nlohmann::json PhiGammaModule::to_json() const {
    nlohmann::json j;
    j["p"] = p;
    j["N"] = N;
    j["rank"] = rank;
    auto mat = [](const LaurentMatrix& A) {
        auto out = nlohmann::json::array();
        for (auto& row : A) {
            auto r = nlohmann::json::array();
            for (auto& x : row) r.push_back(phigamma::to_json(x));
            out.push_back(r);
        }
        return out;
    };
    j["phi"] = mat(phi);
    j["gam"] = mat(gam);
    auto dj = nlohmann::json::array();
    for (auto& row : delta) {
        auto r = nlohmann::json::array();
        for (auto& x : row) r.push_back({x.mantissa(), x.denom_exp()});
        dj.push_back(r);
    }
    j["delta"] = dj;
    return j;
}

PhiGammaModule PhiGammaModule::from_json(const nlohmann::json& j) {
    PhiGammaModule M;
    M.p = j.at("p").get<u64>();
    M.N = j.at("N").get<int>();
    M.rank = j.at("rank").get<int>();
    auto mat = [](const nlohmann::json& a) {
        LaurentMatrix A;
        for (auto& row : a) {
            A.emplace_back();
            for (auto& x : row) A.back().push_back(laurent_from_json(x));
        }
        return A;
    };
    M.phi = mat(j.at("phi"));
    M.gam = mat(j.at("gam"));
    if (j.contains("delta")) {
        for (auto& row : j.at("delta")) {
            M.delta.emplace_back();
            for (auto& x : row) M.delta.back().push_back(PAdic(M.p, M.N, x.at(0).get<u64>(), x.at(1).get<int>()));
        }
    } else {
        M.delta = scalar_identity(M.p, M.N, M.rank);
    }
    auto bad = [&](const auto& A) {
        if (static_cast<int>(A.size()) != M.rank) return true;
        for (auto& row : A)
            if (static_cast<int>(row.size()) != M.rank) return true;
        return false;
    };
    if (bad(M.phi) || bad(M.gam) || bad(M.delta)) throw PreconditionError("matrix shape does not match rank");
    return M;
}

PhiGammaModule PhiGammaModule::at_precision(int N2) const {
    PhiGammaModule M;
    M.p = p;
    M.N = N2;
    M.rank = rank;
    auto lift = [&](const TruncatedLaurent& f) {
        TruncatedLaurent g(p, N2, f.lo(), f.hi(), f.tail());
        for (auto& [k, a] : f.coeffs())
            if (!a.exhausted()) g.set(k, PAdic(p, N2, a.mantissa(), a.denom_exp()));
        return g;
    };
    M.phi = mat_apply(phi, lift);
    M.gam = mat_apply(gam, lift);
    for (auto& row : delta) {
        M.delta.emplace_back();
        for (auto& x : row) {
            // Roots of unity are re-lifted so that Delta keeps finite order.
            if (x.is_unit() && x.denom_exp() == 0 && Zq(p, N).pow(x.mantissa(), p - 1) == 1)
                M.delta.back().push_back(teichmuller_lift(x.mantissa() % p, p, N2));
            else
                M.delta.back().push_back(PAdic(p, N2, x.mantissa(), x.denom_exp()));
        }
    }
    return M;
}

PhiGammaModule module_from_character(const PAdic& lam, int n) {
    if (lam.is_zero()) throw PreconditionError("lam indistinguishable from 0");
    const u64 p = lam.p();
    const int N = lam.N();
    PhiGammaModule M;
    M.p = p;
    M.N = N;
    M.rank = 1;
    M.phi = {{constant(lam)}};
    M.gam = {{constant(pow_padic(PAdic::from_int(static_cast<i64>(1 + p), p, N), n))}};
    int r = static_cast<int>(((n % static_cast<int>(p - 1)) + static_cast<int>(p - 1)) % static_cast<int>(p - 1));
    M.delta = {{pow_padic(omega_generator(p, N), r)}};
    return M;
}

PhiGammaModule twist_module(u64 p, int N, int n) { return module_from_character(PAdic::one(p, N), n); }

PhiGammaModule zero_module(u64 p, int N) {
    PhiGammaModule M;
    M.p = p;
    M.N = N;
    M.rank = 0;
    return M;
}

PhiGammaModule diagonal_phi_module(const std::vector<PAdic>& entries) {
    if (entries.empty()) throw PreconditionError("empty diagonal");
    const u64 p = entries[0].p();
    const int N = entries[0].N();
    PhiGammaModule M;
    M.p = p;
    M.N = N;
    M.rank = static_cast<int>(entries.size());
    M.phi = identity_matrix(p, N, M.rank);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].is_zero()) throw PreconditionError("singular diagonal entry");
        M.phi[i][i] = constant(entries[i]);
    }
    M.gam = identity_matrix(p, N, M.rank);
    M.delta = scalar_identity(p, N, M.rank);
    return M;
}

CommutationDefect check_commutation(const PhiGammaModule& M) {
    CommutationDefect d;
    if (M.rank == 0) return d;
    GammaElement g0 = GammaElement::generator(M.p, M.N);
    LaurentMatrix lhs = mat_mul(M.phi, mat_apply(M.gam, [](const TruncatedLaurent& f) { return frobenius_series(f); }));
    LaurentMatrix rhs = mat_mul(M.gam, mat_apply(M.phi, [&](const TruncatedLaurent& f) { return gamma_series(f, g0); }));
    compare_matrices(d, lhs, rhs);
    return d;
}

CommutationDefect check_delta(const PhiGammaModule& M) {
    CommutationDefect d;
    if (M.rank == 0) return d;
    GammaElement w = GammaElement::make(M.p, M.N, primitive_root(M.p), 0);
    LaurentMatrix D = scalar_to_laurent(M.delta, M.p, M.N);
    auto gw = [&](const TruncatedLaurent& f) { return gamma_series(f, w); };
    compare_matrices(d, mat_mul(D, mat_apply(M.phi, gw)), mat_mul(M.phi, D));
    compare_matrices(d, mat_mul(D, mat_apply(M.gam, gw)), mat_mul(M.gam, D));
    LaurentMatrix P = identity_matrix(M.p, M.N, M.rank);
    for (u64 i = 0; i + 1 < M.p; ++i) P = mat_mul(P, D);
    compare_matrices(d, P, identity_matrix(M.p, M.N, M.rank));
    return d;
}

PhiGammaModule direct_sum(const PhiGammaModule& A, const PhiGammaModule& B) {
    if (A.p != B.p || A.N != B.N) throw PreconditionError("mismatched p or N");
    if (A.rank == 0) return B;
    if (B.rank == 0) return A;
    PhiGammaModule M;
    M.p = A.p;
    M.N = A.N;
    M.rank = A.rank + B.rank;
    auto blk = [&](const LaurentMatrix& X, const LaurentMatrix& Y) {
        LaurentMatrix Z(static_cast<std::size_t>(M.rank),
                        std::vector<TruncatedLaurent>(static_cast<std::size_t>(M.rank), zero_series(M.p, M.N)));
        for (int i = 0; i < A.rank; ++i)
            for (int j = 0; j < A.rank; ++j) Z[i][j] = X[i][j];
        for (int i = 0; i < B.rank; ++i)
            for (int j = 0; j < B.rank; ++j) Z[A.rank + i][A.rank + j] = Y[i][j];
        return Z;
    };
    M.phi = blk(A.phi, B.phi);
    M.gam = blk(A.gam, B.gam);
    M.delta = laurent_to_scalar(blk(scalar_to_laurent(A.delta, M.p, M.N), scalar_to_laurent(B.delta, M.p, M.N)));
    return M;
}

PhiGammaModule tensor(const PhiGammaModule& A, const PhiGammaModule& B) {
    if (A.p != B.p || A.N != B.N) throw PreconditionError("mismatched p or N");
    PhiGammaModule M;
    M.p = A.p;
    M.N = A.N;
    M.rank = A.rank * B.rank;
    auto kron = [&](const LaurentMatrix& X, const LaurentMatrix& Y) {
        LaurentMatrix Z(static_cast<std::size_t>(M.rank),
                        std::vector<TruncatedLaurent>(static_cast<std::size_t>(M.rank), zero_series(M.p, M.N)));
        for (int i = 0; i < A.rank; ++i)
            for (int j = 0; j < A.rank; ++j)
                for (int k = 0; k < B.rank; ++k)
                    for (int l = 0; l < B.rank; ++l) Z[i * B.rank + k][j * B.rank + l] = series_mul(X[i][j], Y[k][l]);
        return Z;
    };
    M.phi = kron(A.phi, B.phi);
    M.gam = kron(A.gam, B.gam);
    M.delta = laurent_to_scalar(kron(scalar_to_laurent(A.delta, M.p, M.N), scalar_to_laurent(B.delta, M.p, M.N)));
    return M;
}

PhiGammaModule dual(const PhiGammaModule& M) {
    PhiGammaModule D = M;
    if (M.rank == 0) return D;
    D.phi = mat_transpose(mat_inverse(M.phi));
    D.gam = mat_transpose(mat_inverse(M.gam));
    D.delta = laurent_to_scalar(mat_transpose(mat_inverse(scalar_to_laurent(M.delta, M.p, M.N))));
    return D;
}

PhiGammaModule cartier_dual(const PhiGammaModule& M) { return tensor(dual(M), twist_module(M.p, M.N, 1)); }

PhiGammaModule slope_twist(const PhiGammaModule& M, int m) {
    PhiGammaModule T = M;
    PAdic f = m >= 0 ? PAdic(M.p, M.N, 1, m) : PAdic(M.p, M.N, ipow(M.p, -m), 0);
    T.phi = mat_apply(M.phi, [&](const TruncatedLaurent& x) { return series_scale(x, f); });
    return T;
}

DegreeSlope degree_slope(const PhiGammaModule& M) {
    if (M.rank == 0) throw PreconditionError("degree undefined for the zero module");
    DegreeSlope r;
    r.degree = diag_valuation(mat_det(M.phi));
    int g = std::gcd(std::abs(r.degree), M.rank);
    r.num = r.degree / g;
    r.den = M.rank / g;
    return r;
}

bool is_etale(const PhiGammaModule& M) {
    if (M.rank == 0) return true;
    if (M.rank == 1) return degree_slope(M).degree == 0;
    if (!is_diagonal(M.phi)) throw PreconditionError("etale test out of desk scope");
    for (int i = 0; i < M.rank; ++i)
        if (diag_valuation(M.phi[i][i]) != 0) return false;
    return true;
}

HNPolygon hn_polygon_split(const PhiGammaModule& M) {
    if (!is_diagonal(M.phi)) throw PreconditionError("non-diagonal Phi");
    std::vector<int> v;
    for (int i = 0; i < M.rank; ++i) v.push_back(diag_valuation(M.phi[i][i]));
    std::sort(v.rbegin(), v.rend());
    HNPolygon poly;
    for (int x : v) {
        if (!poly.empty() && poly.back().num == x)
            ++poly.back().multiplicity;
        else
            poly.push_back({x, 1, 1});
    }
    return poly;
}

}  // namespace phigamma
