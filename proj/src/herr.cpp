#include "phigamma/herr.hpp"

#include <algorithm>

namespace phigamma {

namespace {

ModuleFactory lift_factory(const PhiGammaModule& M) {
    return [M](int N2) { return N2 == M.N ? M : M.at_precision(N2); };
}

WindowComplex finish(ModuleEngine& E, WindowComplex C, const std::vector<BlockOp>& ops0, const std::vector<BlockOp>& ops1) {
    for (int i = 0; i < 3; ++i) C.pr[static_cast<std::size_t>(i)] = E.project(C.sp[static_cast<std::size_t>(i)]);
    C.dfull[0] = E.assemble(C.sp[0], C.sp[1], ops0);
    C.dfull[1] = E.assemble(C.sp[1], C.sp[2], ops1);
    C.d[0] = E.restrict(C.dfull[0], C.pr[0], C.pr[1]);
    C.d[1] = E.restrict(C.dfull[1], C.pr[1], C.pr[2]);
    return C;
}

std::array<Mat, 3> transfers(ModuleEngine& E, const WindowComplex& a, const WindowComplex& b) {
    std::array<Mat, 3> J;
    for (std::size_t i = 0; i < 3; ++i) J[i] = E.transfer(a.sp[i], a.pr[i], b.sp[i], b.pr[i]);
    return J;
}

bool same_dims(const std::array<DegreeData, 3>& a, const std::array<DegreeData, 3>& b, std::size_t i) {
    return a[i] == b[i];
}

CohomologyReport run_protocol(const ModuleFactory& F, u64 p, int N, const HerrParams& P, const std::string& kind,
                              const std::function<std::array<DegreeData, 3>(ModuleEngine&, int D)>& level) {
    if (P.G < 1 || N <= P.G) throw PreconditionError("need N > G >= 1");
    if (P.D < 1) throw PreconditionError("window must be positive");
    CohomologyReport rep;
    rep.complex = kind;
    rep.p = p;
    rep.N = N;
    rep.D = P.D;
    rep.G = P.G;
    const int dD = P.dD > 0 ? P.dD : std::max(1, P.D / 2);
    const int nlev = std::max(P.levels, 1);
    for (int l = 0; l < std::max(nlev, P.max_levels); ++l) {
        LevelData ld;
        ld.D = P.D + l * dD;
        ld.N = N + l * P.G;
        PhiGammaModule M = F(ld.N);
        if (l == 0) {
            rep.defect = check_commutation(M);
            if (!rep.defect.zero) throw PreconditionError("module fails the commutation check");
        }
        if (M.rank == 0) {
            rep.levels.push_back(ld);
        } else {
            ModuleEngine E(M);
            ld.deg = level(E, ld.D);
            rep.levels.push_back(ld);
        }
        if (static_cast<int>(rep.levels.size()) >= nlev && rep.levels.size() >= 2) {
            const auto& a = rep.levels[rep.levels.size() - 2].deg;
            const auto& b = rep.levels.back().deg;
            bool all = true;
            for (std::size_t i = 0; i < 3; ++i) all = all && same_dims(a, b, i);
            if (all) break;
        }
    }
    const auto& last = rep.levels.back().deg;
    for (std::size_t i = 0; i < 3; ++i) {
        rep.dims[i] = last[i].dim;
        rep.divisors[i] = last[i].divisors;
        rep.torsion[i] = last[i].torsion;
        rep.converged[i] = rep.levels.size() >= 2 && same_dims(rep.levels[rep.levels.size() - 2].deg, last, i);
    }
    return rep;
}

int psi_lower(ModuleEngine& E) {
    int L = 1;
    while (E.psi_pole(L) > L) ++L;
    return L;
}

}  // namespace

nlohmann::json to_json(const DegreeData& d) {
    return {{"dim", d.dim}, {"torsion", d.torsion}, {"divisors", d.divisors}};
}

nlohmann::json CohomologyReport::to_json() const {
    nlohmann::json j;
    j["complex"] = complex;
    j["params"] = {{"p", p}, {"N", N}, {"D", D}, {"guard", G}};
    j["dims"] = dims;
    j["divisors"] = divisors;
    j["torsion"] = torsion;
    j["converged"] = converged;
    auto lv = nlohmann::json::array();
    for (auto& l : levels) {
        auto dj = nlohmann::json::array();
        for (auto& d : l.deg) dj.push_back(phigamma::to_json(d));
        lv.push_back({{"D", l.D}, {"N", l.N}, {"degrees", dj}});
    }
    j["levels"] = lv;
    j["defect_norms"] = {{"commutation_zero", defect.zero}, {"valuation", defect.zero ? N : defect.valuation}};
    return j;
}

nlohmann::json ComparisonResult::to_json() const {
    return {{"chain_map", chain_map},
            {"image_dims", image_dims},
            {"phi_dims", phi_dims},
            {"psi_dims", psi_dims},
            {"isomorphism", isomorphism}};
}

WindowComplex phi_complex(ModuleEngine& E, int L, int H) {
    const int L1 = std::max(L, E.phi_pole(L));
    const int d = E.rank();
    WindowComplex C;
    C.sp[0] = Space(d, {{-L, H}});
    C.sp[1] = Space(d, {{-L1, H}, {-L, H}});
    C.sp[2] = Space(d, {{-L1, H}});
    return finish(E, C,
                  {{0, 0, Op::Phi, 1}, {0, 0, Op::Id, -1}, {0, 1, Op::Gam, 1}, {0, 1, Op::Id, -1}},
                  {{0, 0, Op::Gam, 1}, {0, 0, Op::Id, -1}, {1, 0, Op::Phi, -1}, {1, 0, Op::Id, 1}});
}

WindowComplex psi_complex(ModuleEngine& E, int L, int H) {
    const int Hp = std::min(H, E.psi_top(H));
    if (E.psi_pole(L) > L) throw PreconditionError("psi enlarges the pole window");
    const int d = E.rank();
    WindowComplex C;
    C.sp[0] = Space(d, {{-L, H}});
    C.sp[1] = Space(d, {{-L, Hp}, {-L, H}});
    C.sp[2] = Space(d, {{-L, Hp}});
    return finish(E, C,
                  {{0, 0, Op::Psi, 1}, {0, 0, Op::Id, -1}, {0, 1, Op::Gam, 1}, {0, 1, Op::Id, -1}},
                  {{0, 0, Op::Gam, 1}, {0, 0, Op::Id, -1}, {1, 0, Op::Psi, -1}, {1, 0, Op::Id, 1}});
}

std::array<DegreeData, 3> persistent_cohomology(const Zq& R, int G, const WindowComplex& src,
                                                const WindowComplex& dst, const std::array<Mat, 3>& J) {
    const int N = R.N;
    std::array<DegreeData, 3> out;
    for (std::size_t i = 0; i < 3; ++i) {
        const int ns = src.pr[i].S.cols, nd = dst.pr[i].S.cols;
        Mat K;
        if (i < 2) {
            SNF s = smith_normal_form(R, src.d[i], false, true);
            std::vector<int> keep;
            for (int j = 0; j < ns; ++j) {
                int b = j < static_cast<int>(s.vals.size()) ? s.vals[static_cast<std::size_t>(j)] : N;
                if (b > 0) keep.push_back(j);
            }
            K = Mat(ns, static_cast<int>(keep.size()));
            for (std::size_t c = 0; c < keep.size(); ++c) {
                int j = keep[c];
                int b = j < static_cast<int>(s.vals.size()) ? s.vals[static_cast<std::size_t>(j)] : N;
                u64 f = R.ppow(N - b);
                for (int r = 0; r < ns; ++r) K(r, static_cast<int>(c)) = R.mul(s.V(r, j), f);
            }
        } else {
            K = Mat::identity(ns);
        }
        Mat U2;
        std::vector<int> a(static_cast<std::size_t>(nd), N);
        if (i > 0) {
            SNF s = smith_normal_form(R, dst.d[i - 1], true, false);
            U2 = std::move(s.U);
            for (std::size_t r = 0; r < s.vals.size(); ++r) a[r] = s.vals[r];
        } else {
            U2 = Mat::identity(nd);
        }
        Mat Gm = matmul(R, U2, matmul(R, J[i], K));
        for (int r = 0; r < Gm.rows; ++r) {
            u64 f = R.ppow(N - a[static_cast<std::size_t>(r)]);
            u64* row = Gm.row(r);
            for (int c = 0; c < Gm.cols; ++c) row[c] = R.mul(row[c], f);
        }
        SNF g = smith_normal_form(R, Gm, false, false);
        DegreeData dd;
        for (int c : g.vals) {
            if (c >= N) continue;
            dd.divisors.push_back(N - c);
            if (c <= G)
                ++dd.dim;
            else
                dd.torsion.push_back(N - c);
        }
        std::sort(dd.torsion.begin(), dd.torsion.end());
        std::sort(dd.divisors.begin(), dd.divisors.end());
        out[i] = dd;
    }
    return out;
}

std::array<DegreeData, 3> plain_cohomology(const Zq& R, int G, const WindowComplex& C) {
    std::array<Mat, 3> J;
    for (std::size_t i = 0; i < 3; ++i) J[i] = Mat::identity(C.pr[i].S.cols);
    return persistent_cohomology(R, G, C, C, J);
}

CohomologyReport herr_complex(const ModuleFactory& F, u64 p, int N, const HerrParams& P) {
    const int H = P.H > 0 ? P.H : static_cast<int>(p);
    return run_protocol(F, p, N, P, "phi", [&](ModuleEngine& E, int D) {
        WindowComplex a = phi_complex(E, D, H);
        WindowComplex b = phi_complex(E, 2 * D, H);
        return persistent_cohomology(E.R(), P.G, a, b, transfers(E, a, b));
    });
}

CohomologyReport herr_complex(const PhiGammaModule& M, const HerrParams& P) {
    return herr_complex(lift_factory(M), M.p, M.N, P);
}

CohomologyReport psi_herr_complex(const ModuleFactory& F, u64 p, int N, const HerrParams& P) {
    return run_protocol(F, p, N, P, "psi", [&](ModuleEngine& E, int D) {
        const int L = psi_lower(E);
        WindowComplex big = psi_complex(E, L, 3 * D);
        WindowComplex small = psi_complex(E, L, 2 * D);
        return persistent_cohomology(E.R(), P.G, big, small, transfers(E, big, small));
    });
}

CohomologyReport psi_herr_complex(const PhiGammaModule& M, const HerrParams& P) {
    return psi_herr_complex(lift_factory(M), M.p, M.N, P);
}

ComparisonResult compare_phi_psi(const ModuleFactory& F, u64 p, int N, const HerrParams& P, int sign) {
    CohomologyReport rp = herr_complex(F, p, N, P);
    CohomologyReport rs = psi_herr_complex(F, p, N, P);
    if (!rp.all_converged() || !rs.all_converged()) throw PreconditionError("reports did not converge");
    ComparisonResult out;
    out.phi_dims = rp.dims;
    out.psi_dims = rs.dims;
    const LevelData& lv = rp.levels.back();
    PhiGammaModule M = F(lv.N);
    if (M.rank == 0) {
        out.chain_map = true;
        out.isomorphism = out.phi_dims == out.psi_dims;
        return out;
    }
    ModuleEngine E(M);
    const int H = 2 * lv.D;
    const int L = lv.D;
    WindowComplex A = phi_complex(E, L, H);
    const int L1 = -A.sp[1].blocks[0].lo;
    int Lp = std::max({L, E.psi_pole(L1), psi_lower(E)});
    WindowComplex B = psi_complex(E, Lp, H);
    const i64 s = sign;
    std::array<Mat, 3> Jf;
    Jf[0] = E.assemble(A.sp[0], B.sp[0], {{0, 0, Op::Id, 1}});
    Jf[1] = E.assemble(A.sp[1], B.sp[1], {{0, 0, Op::Psi, s}, {1, 1, Op::Id, 1}});
    Jf[2] = E.assemble(A.sp[2], B.sp[2], {{0, 0, Op::Psi, s}});
    std::array<Mat, 3> J;
    for (std::size_t i = 0; i < 3; ++i) J[i] = E.restrict(Jf[i], A.pr[i], B.pr[i]);
    const Zq& R = E.R();
    bool ok = true;
    for (std::size_t i = 0; i < 2; ++i) {
        Mat l = matmul(R, J[i + 1], A.d[i]);
        Mat r = matmul(R, B.d[i], J[i]);
        ok = ok && l.a == r.a;
    }
    out.chain_map = ok;
    auto img = persistent_cohomology(R, P.G, A, B, J);
    for (std::size_t i = 0; i < 3; ++i) out.image_dims[i] = img[i].dim;
    out.isomorphism = ok && out.image_dims == out.phi_dims && out.phi_dims == out.psi_dims;
    return out;
}

ComparisonResult compare_phi_psi(const PhiGammaModule& M, const HerrParams& P, int sign) {
    return compare_phi_psi(lift_factory(M), M.p, M.N, P, sign);
}

int euler_characteristic(const CohomologyReport& r) {
    if (!r.all_converged()) throw PreconditionError("report did not converge");
    return r.dims[0] - r.dims[1] + r.dims[2];
}

std::vector<u64> delta_projector(const PhiGammaModule& M, int lo, int hi, const std::vector<u64>& v) {
    ModuleEngine E(M);
    Mat P = E.projector_matrix({lo, hi});
    if (static_cast<int>(v.size()) != P.cols) throw PreconditionError("vector length does not match the window");
    Mat x(P.cols, 1);
    for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<int>(i), 0) = v[i] % E.R().q;
    Mat y = matmul(E.R(), P, x);
    return y.a;
}

KernelReport scalar_phi_kernel(u64 p, int N, int G, int n, int L, int H) {
    ModuleEngine E(twist_module(p, N, 0));
    const int L1 = std::max(L, E.phi_pole(L));
    Space src(1, {{-L, H}}), dst(1, {{-L1, H}});
    const i64 pn = static_cast<i64>(ipow(p, n));
    Mat A = E.assemble(src, dst, {{0, 0, Op::Phi, pn}, {0, 0, Op::Id, -1}});
    SNF s = smith_normal_form(E.R(), A, false, true);
    KernelReport kr;
    kr.divisors = s.vals;
    for (int j = 0; j < src.dim; ++j) {
        int b = j < static_cast<int>(s.vals.size()) ? s.vals[static_cast<std::size_t>(j)] : N;
        if (b < N - G) continue;
        ++kr.dim;
        std::vector<std::pair<int, u64>> v;
        for (int r = 0; r < src.dim; ++r)
            if (s.V(r, j)) v.push_back({r - L, s.V(r, j)});
        kr.basis.push_back(v);
    }
    return kr;
}

}  // namespace phigamma
