#include "phigamma/iwasawa.hpp"

#include <algorithm>
#include <climits>

namespace phigamma {

namespace {

using Vec = std::vector<u64>;

int step(const IwasawaParams& P) { return P.dD > 0 ? P.dD : std::max(1, P.D / 2); }

/// Largest degree among the polynomial entries of Phi and Phi^{-1}.
int entry_degree(const PhiGammaModule& M) {
    int e = 0;
    for (auto& row : M.phi)
        for (auto& x : row) {
            if (x.tail()) throw PreconditionError("exact Laurent computations need polynomial Phi");
            if (!x.is_zero()) e = std::max(e, x.coeffs().rbegin()->first);
        }
    return e;
}

Vec mat_vec(const Zq& R, const Mat& A, const Vec& x) {
    Mat X(static_cast<int>(x.size()), 1);
    X.a = x;
    return matmul(R, A, X).a;
}

ModuleElement to_element(const PhiGammaModule& M, const Space& sp, const Vec& x, int denom, bool tail) {
    ModuleElement out;
    const Block& b = sp.blocks[0];
    for (int j = 0; j < sp.d; ++j) {
        TruncatedLaurent f(M.p, M.N, b.lo, b.hi - 1, tail);
        for (int k = b.lo; k < b.hi; ++k) {
            u64 c = x[static_cast<std::size_t>(sp.index(0, j, k))];
            if (c) f.set(k, PAdic(M.p, M.N, c, denom));
        }
        out.push_back(f);
    }
    return out;
}

/// Integral coordinates of e scaled by p^E on the window of sp (coefficients above the window are dropped).
Vec to_coords(const Space& sp, const ModuleElement& e, int E) {
    Vec x(static_cast<std::size_t>(sp.dim), 0);
    const Block& b = sp.blocks[0];
    for (int j = 0; j < sp.d; ++j) {
        for (auto& [k, a] : e[static_cast<std::size_t>(j)].coeffs()) {
            if (a.is_zero() || k >= b.hi) continue;
            if (k < b.lo) throw PreconditionError("element leaves the window");
            Zq R(a.p(), a.N());
            x[static_cast<std::size_t>(sp.index(0, j, k))] = R.mul(a.mantissa(), R.ppow(E - a.denom_exp()));
        }
    }
    return x;
}

int max_denom(const ModuleElement& e) {
    int E = 0;
    for (auto& f : e) E = std::max(E, f.max_denom_exp());
    return E;
}

int pole_of(const ModuleElement& e) {
    int L = 0;
    for (auto& f : e) {
        int o = f.order();
        if (o != INT_MAX) L = std::max(L, -o);
    }
    return L;
}

/// Reduce vectors to a canonical echelon form with pivots p^v on the earliest coordinate.
std::vector<Vec> echelon(const Zq& R, std::vector<Vec> vs) {
    std::vector<Vec> out;
    while (!vs.empty()) {
        int bv = R.N, bi = -1, bc = -1;
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t c = 0; c < vs[i].size(); ++c) {
                if (!vs[i][c]) continue;
                int v = R.val(vs[i][c]);
                if (v < bv || (v == bv && static_cast<int>(c) < bc)) {
                    bv = v;
                    bi = static_cast<int>(i);
                    bc = static_cast<int>(c);
                }
            }
        if (bi < 0) break;
        Vec piv = vs[static_cast<std::size_t>(bi)];
        vs.erase(vs.begin() + bi);
        u64 pa = R.ppow(bv);
        u64 ui = R.inv((piv[static_cast<std::size_t>(bc)] / pa) % R.q);
        for (auto& x : piv) x = R.mul(x, ui);
        auto clear = [&](Vec& w) {
            u64 x = w[static_cast<std::size_t>(bc)];
            if (!x || R.val(x) < bv) return;
            u64 f = x / pa;
            for (std::size_t c = 0; c < w.size(); ++c) w[c] = R.sub(w[c], R.mul(f, piv[c]));
        };
        for (auto& w : vs) clear(w);
        for (auto& w : out) clear(w);
        out.push_back(piv);
    }
    return out;
}

struct KernelData {
    std::vector<Vec> free;
    std::vector<int> torsion;
};

KernelData kernel_of(const Zq& R, int G, const Mat& A) {
    SNF s = smith_normal_form(R, A, false, true);
    KernelData k;
    std::vector<Vec> vs;
    for (int j = 0; j < A.cols; ++j) {
        int b = j < static_cast<int>(s.vals.size()) ? s.vals[static_cast<std::size_t>(j)] : R.N;
        if (b == 0) continue;
        if (b >= R.N - G) {
            Vec v(static_cast<std::size_t>(A.cols));
            for (int r = 0; r < A.cols; ++r) v[static_cast<std::size_t>(r)] = s.V(r, j);
            vs.push_back(v);
        } else {
            k.torsion.push_back(b);
        }
    }
    k.free = echelon(R, vs);
    std::sort(k.torsion.begin(), k.torsion.end());
    return k;
}

/// Matrix of op on Laurent polynomials with exponents in [-L, H], exact.
Mat exact_matrix(ModuleEngine& E, Op op, int L, int H, Space& src, Space& dst) {
    const int d = E.rank();
    src = Space(d, {{-L, H + 1}});
    if (op == Op::Psi) {
        if (E.psi_pole(L) > L) throw PreconditionError("psi enlarges the pole window");
        dst = src;
    } else {
        int e = entry_degree(E.module());
        dst = Space(d, {{-std::max(L, E.phi_pole(L)), static_cast<int>(E.p()) * H + e + 1}});
    }
    return E.assemble(src, dst, {{0, 0, op, 1}});
}

Mat minus_identity(ModuleEngine& E, const Mat& A, const Space& src, const Space& dst) {
    Mat I = E.assemble(src, dst, {{0, 0, Op::Id, 1}});
    return subtract(E.R(), A, I);
}

PsiBasis eigen_basis(const PhiGammaModule& M, const IwasawaParams& P, Op op, bool minus_one) {
    if (P.G < 1 || M.N <= P.G) throw PreconditionError("need N > G >= 1");
    PsiBasis out;
    if (M.rank == 0) {
        out.stabilized = true;
        out.level_dims = {0, 0};
        return out;
    }
    ModuleEngine E(M);
    std::vector<KernelData> levels;
    std::vector<Vec> prev_vecs;
    Space prev_src;
    bool contained = true;
    for (int l = 0; l < 2; ++l) {
        const int D = P.D + l * step(P);
        Space src, dst;
        Mat A = exact_matrix(E, op, D, D, src, dst);
        if (minus_one) A = minus_identity(E, A, src, dst);
        KernelData kd = kernel_of(E.R(), P.G, A);
        if (l == 1 && !minus_one) {
            // Each earlier kernel vector must stay in the kernel on the larger window.
            for (auto& v : prev_vecs) {
                Vec w(static_cast<std::size_t>(src.dim), 0);
                for (int j = 0; j < src.d; ++j)
                    for (int k = prev_src.blocks[0].lo; k < prev_src.blocks[0].hi; ++k)
                        w[static_cast<std::size_t>(src.index(0, j, k))] = v[static_cast<std::size_t>(prev_src.index(0, j, k))];
                Vec y = mat_vec(E.R(), A, w);
                contained = contained && std::all_of(y.begin(), y.end(), [&](u64 x) { return x == 0 || E.R().val(x) >= E.N() - P.G; });
            }
        }
        out.level_dims.push_back(static_cast<int>(kd.free.size()));
        out.vectors.clear();
        for (auto& v : kd.free) out.vectors.push_back(to_element(M, src, v, 0, false));
        out.dim = static_cast<int>(kd.free.size());
        out.torsion = kd.torsion;
        out.L = D;
        out.H = D;
        prev_vecs = kd.free;
        prev_src = src;
        levels.push_back(kd);
    }
    if (minus_one)
        out.stabilized = levels[0].free.size() == levels[1].free.size() && levels[0].torsion == levels[1].torsion;
    else
        out.stabilized = contained;
    return out;
}

nlohmann::json element_json(const ModuleElement& e) {
    auto a = nlohmann::json::array();
    for (auto& f : e) a.push_back(to_json(f));
    return a;
}

bool zero_vec(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](u64 x) { return x == 0; });
}

}  // namespace

nlohmann::json PsiBasis::to_json() const {
    auto vs = nlohmann::json::array();
    for (auto& v : vectors) vs.push_back(element_json(v));
    return {{"dim", dim}, {"torsion", torsion}, {"stabilized", stabilized}, {"level_dims", level_dims},
            {"window", {-L, H}}, {"basis", vs}};
}

PsiBasis psi_fixed_points(const PhiGammaModule& M, const IwasawaParams& P) { return eigen_basis(M, P, Op::Psi, true); }
PsiBasis psi_kernel(const PhiGammaModule& M, const IwasawaParams& P) { return eigen_basis(M, P, Op::Psi, false); }
PsiBasis phi_fixed_points(const PhiGammaModule& M, const IwasawaParams& P) { return eigen_basis(M, P, Op::Phi, true); }

nlohmann::json ExactSequenceReport::to_json() const {
    auto im = nlohmann::json::array();
    for (auto& v : images) im.push_back(element_json(v));
    return {{"phi1_dim", phi1_dim},       {"psi1_dim", psi1_dim},         {"kernel_on_psi1", kernel_on_psi1},
            {"phi1_in_psi1", phi1_in_psi1}, {"image_in_psi0", image_in_psi0}, {"clean", clean()},
            {"images", im}};
}

ExactSequenceReport exact_sequence_check(const PhiGammaModule& M, const IwasawaParams& P) {
    ExactSequenceReport rep;
    PsiBasis psi1 = psi_fixed_points(M, P);
    PsiBasis phi1 = phi_fixed_points(M, P);
    if (!psi1.stabilized || !phi1.stabilized) throw PreconditionError("eigenspaces did not stabilize");
    rep.psi1_dim = psi1.dim;
    rep.phi1_dim = phi1.dim;
    rep.phi1_in_psi1 = true;
    rep.image_in_psi0 = true;
    if (M.rank == 0) return rep;
    ModuleEngine E(M);
    const int D = psi1.L;
    Space s0, d0;
    Mat Phi = exact_matrix(E, Op::Phi, D, D, s0, d0);
    Mat PhiM1 = minus_identity(E, Phi, s0, d0);
    const int L1 = -d0.blocks[0].lo, top = d0.blocks[0].hi - 1;
    Space s1(E.rank(), {{-L1, top + 1}});
    if (E.psi_pole(L1) > L1) throw PreconditionError("psi enlarges the pole window");
    Mat Psi1 = E.assemble(s1, s1, {{0, 0, Op::Psi, 1}});
    Mat PsiM1 = minus_identity(E, E.assemble(s0, s0, {{0, 0, Op::Psi, 1}}), s0, s0);
    for (auto& v : phi1.vectors) {
        Space sv(E.rank(), {{-phi1.L, phi1.H + 1}});
        Vec x = to_coords(s0, v, 0);
        rep.phi1_in_psi1 = rep.phi1_in_psi1 && zero_vec(mat_vec(E.R(), PsiM1, x));
    }
    Mat W(d0.dim, static_cast<int>(psi1.vectors.size()));
    for (std::size_t i = 0; i < psi1.vectors.size(); ++i) {
        Vec x = to_coords(s0, psi1.vectors[i], 0);
        Vec w = mat_vec(E.R(), PhiM1, x);
        for (int r = 0; r < d0.dim; ++r) W(r, static_cast<int>(i)) = w[static_cast<std::size_t>(r)];
        // d0 and s1 describe the same window, so w is already in s1 coordinates.
        rep.image_in_psi0 = rep.image_in_psi0 && zero_vec(mat_vec(E.R(), Psi1, w));
        rep.images.push_back(to_element(M, s1, w, 0, false));
    }
    rep.kernel_on_psi1 = static_cast<int>(kernel_of(E.R(), P.G, W).free.size());
    return rep;
}

nlohmann::json CoinvariantReport::to_json() const {
    return {{"dim", dim}, {"divisors", divisors}, {"torsion", torsion}, {"stabilized", stabilized}, {"level_dims", level_dims}};
}

CoinvariantReport psi_coinvariants(const PhiGammaModule& M, const IwasawaParams& P) {
    CoinvariantReport rep;
    if (M.rank == 0) {
        rep.stabilized = true;
        rep.level_dims = {0, 0};
        return rep;
    }
    std::vector<std::vector<int>> tors;
    for (int l = 0; l < 2; ++l) {
        const int D = P.D + l * step(P);
        PhiGammaModule Ml = l == 0 ? M : M.at_precision(M.N + l * P.G);
        ModuleEngine E(Ml);
        int L = 1;
        while (E.psi_pole(L) > L) ++L;
        const int H = 2 * D;
        const int Hp = std::min(H, E.psi_top(H));
        Space src(E.rank(), {{-L, H}}), dst(E.rank(), {{-L, Hp}});
        Mat A = E.assemble(src, dst, {{0, 0, Op::Psi, 1}, {0, 0, Op::Id, -1}});
        SNF s = smith_normal_form(E.R(), A, false, false);
        const int N = E.N();
        CoinvariantReport cur;
        for (int r = 0; r < A.rows; ++r) {
            int v = r < static_cast<int>(s.vals.size()) ? s.vals[static_cast<std::size_t>(r)] : N;
            if (v == 0) continue;
            cur.divisors.push_back(v);
            if (v >= N - P.G)
                ++cur.dim;
            else
                cur.torsion.push_back(v);
        }
        rep.level_dims.push_back(cur.dim);
        tors.push_back(cur.torsion);
        rep.dim = cur.dim;
        rep.divisors = cur.divisors;
        rep.torsion = cur.torsion;
    }
    rep.stabilized = rep.level_dims[0] == rep.level_dims[1] && tors[0] == tors[1];
    return rep;
}

nlohmann::json SolveResult::to_json() const {
    return {{"consistent", consistent}, {"v", element_json(v)},           {"denom_exp", denom_exp},
            {"residual_zero", residual_zero}, {"psi_zero", psi_zero}, {"window", {-L, H}}};
}

SolveResult solve_gamma_minus_one(const PhiGammaModule& M, const ModuleElement& w, int H) {
    if (static_cast<int>(w.size()) != M.rank) throw PreconditionError("element rank mismatch");
    ModuleEngine E(M);
    const Zq& R = E.R();
    const int N = R.N;
    SolveResult out;
    out.L = std::max(1, pole_of(w));
    for (auto& f : w)
        if (f.tail()) H = std::min(H, f.hi() + 1);
    while (E.psi_pole(out.L) > out.L) ++out.L;
    out.H = H;
    const int Hp = std::min(H, E.psi_top(H));
    Space src(M.rank, {{-out.L, H}});
    Space dst(M.rank, {{-out.L, H}, {-out.L, Hp}});
    Mat A = E.assemble(src, dst, {{0, 0, Op::Gam, 1}, {0, 0, Op::Id, -1}, {0, 1, Op::Psi, 1}});
    const int Ew = max_denom(w);
    Vec wc = to_coords(src, w, Ew);
    Vec b(static_cast<std::size_t>(dst.dim), 0);
    std::copy(wc.begin(), wc.end(), b.begin());
    {
        Mat Ps = E.assemble(src, Space(M.rank, {{-out.L, Hp}}), {{0, 0, Op::Psi, 1}});
        if (!zero_vec(mat_vec(R, Ps, wc))) throw PreconditionError("w is not in M^{psi=0}");
    }
    out.v = to_element(M, src, Vec(static_cast<std::size_t>(src.dim), 0), 0, true);
    if (zero_vec(wc)) {
        out.consistent = out.residual_zero = out.psi_zero = true;
        return out;
    }
    SNF s = smith_normal_form(R, A, true, true);
    Vec ub = mat_vec(R, s.U, b);
    int need = 0;
    for (int r = 0; r < A.rows; ++r) {
        u64 x = ub[static_cast<std::size_t>(r)];
        if (!x) continue;
        int v = r < static_cast<int>(s.vals.size()) ? s.vals[static_cast<std::size_t>(r)] : N;
        need = std::max(need, v - R.val(x));
    }
    out.consistent = need < N - 4;
    if (!out.consistent) return out;
    const u64 ps = R.ppow(need);
    Vec y(static_cast<std::size_t>(A.cols), 0);
    for (int r = 0; r < std::min(A.rows, A.cols); ++r) {
        int v = r < static_cast<int>(s.vals.size()) ? s.vals[static_cast<std::size_t>(r)] : N;
        if (v >= N) continue;
        u64 x = R.mul(ub[static_cast<std::size_t>(r)], ps);
        y[static_cast<std::size_t>(r)] = (x / R.ppow(v)) % R.q;
    }
    Vec x = mat_vec(R, s.V, y);
    Vec ax = mat_vec(R, A, x);
    bool ok = true, psi0 = true;
    for (int r = 0; r < dst.dim; ++r) {
        u64 want = R.mul(b[static_cast<std::size_t>(r)], ps);
        if (ax[static_cast<std::size_t>(r)] != want) {
            ok = false;
            if (r >= src.dim) psi0 = false;
        }
    }
    out.residual_zero = ok;
    out.psi_zero = psi0;
    out.denom_exp = need + Ew;
    out.v = to_element(M, src, x, out.denom_exp, true);
    return out;
}

nlohmann::json H1Class::to_json() const {
    return {{"a", element_json(a)},         {"b", element_json(b)},
            {"denom_exp", denom_exp},       {"cocycle", cocycle},
            {"class_valuation", class_valuation}, {"nonzero", nonzero}};
}

H1Class h1_iwasawa_class(const PhiGammaModule& M, const ModuleElement& v, int H, int G) {
    if (static_cast<int>(v.size()) != M.rank) throw PreconditionError("element rank mismatch");
    for (auto& f : v)
        if (f.tail()) throw PreconditionError("v must be a Laurent polynomial");
    ModuleEngine E(M);
    const Zq& R = E.R();
    const int N = R.N;
    const int Lb = std::max(1, pole_of(v));
    int hb = 0;
    for (auto& f : v)
        if (!f.is_zero()) hb = std::max(hb, f.coeffs().rbegin()->first);
    Space sb, sw;
    Mat Phi = exact_matrix(E, Op::Phi, Lb, hb, sb, sw);
    Mat PhiM1 = minus_identity(E, Phi, sb, sw);
    const int Eb = max_denom(v);
    Vec bc = to_coords(sb, v, Eb);
    Vec wc = mat_vec(R, PhiM1, bc);
    H1Class out;
    out.b = v;
    ModuleElement w = to_element(M, sw, wc, Eb, false);
    int s = Eb;
    if (zero_vec(wc)) {
        out.a = to_element(M, Space(M.rank, {{-Lb, H}}), Vec(static_cast<std::size_t>(M.rank * (H + Lb)), 0), 0, true);
    } else {
        SolveResult sol = solve_gamma_minus_one(M, w, H);
        if (!sol.consistent) throw PreconditionError("solve failure");
        out.a = sol.v;
        s = std::max(s, sol.denom_exp);
    }
    out.denom_exp = s;
    // Cocycle identity in coordinates scaled by p^s on S[-La, H).
    {
        int La = std::max(pole_of(out.a), Lb);
        La = std::max(La, -sw.blocks[0].lo);
        Space sp(M.rank, {{-La, H}});
        Mat Gm = minus_identity(E, E.assemble(sp, sp, {{0, 0, Op::Gam, 1}}), sp, sp);
        Vec ac = to_coords(sp, out.a, s);
        Vec lhs = mat_vec(R, Gm, ac);
        Vec rhs = to_coords(sp, w, s);
        out.cocycle = lhs == rhs;
    }
    // Class in H^1 of the phi-complex at pole order 2 Lb.
    WindowComplex C = phi_complex(E, 2 * Lb, static_cast<int>(M.p));
    Vec x(static_cast<std::size_t>(C.sp[1].dim), 0);
    {
        Space s0(M.rank, {C.sp[1].blocks[0]}), s1(M.rank, {C.sp[1].blocks[1]});
        Vec xa = to_coords(s0, out.a, s), xb = to_coords(s1, out.b, s);
        Mat P0 = E.projector_matrix(C.sp[1].blocks[0]), P1 = E.projector_matrix(C.sp[1].blocks[1]);
        Vec ya = mat_vec(R, P0, xa), yb = mat_vec(R, P1, xb);
        std::copy(ya.begin(), ya.end(), x.begin());
        std::copy(yb.begin(), yb.end(), x.begin() + s0.dim);
    }
    Vec xp;
    for (int r : C.pr[1].rows) xp.push_back(x[static_cast<std::size_t>(r)]);
    if (!zero_vec(mat_vec(R, C.d[1], xp))) out.cocycle = false;
    SNF sn = smith_normal_form(R, C.d[0], true, false);
    Vec ux = mat_vec(R, sn.U, xp);
    int c = N;
    for (std::size_t r = 0; r < ux.size(); ++r) {
        int a = r < sn.vals.size() ? sn.vals[r] : N;
        u64 y = R.mul(ux[r], R.ppow(N - a));
        if (y) c = std::min(c, R.val(y));
    }
    out.class_valuation = c >= N ? N : c - s;
    out.nonzero = c < N && c - s <= G;
    return out;
}

PhiGammaModule DeformationModule::as_module() const {
    const int d = base.rank;
    PhiGammaModule M;
    M.p = base.p;
    M.N = base.N;
    M.rank = d * k;
    const TruncatedLaurent z(base.p, base.N, 0, 0, false);
    M.phi.assign(static_cast<std::size_t>(M.rank), std::vector<TruncatedLaurent>(static_cast<std::size_t>(M.rank), z));
    M.gam = M.phi;
    M.delta.assign(static_cast<std::size_t>(M.rank),
                   std::vector<PAdic>(static_cast<std::size_t>(M.rank), PAdic::zero(base.p, base.N)));
    for (int i = 0; i < k; ++i)
        for (int a = 0; i + a < k; ++a)
            for (int r = 0; r < d; ++r)
                for (int j = 0; j < d; ++j) {
                    M.phi[(i + a) * d + r][i * d + j] = phi_T[static_cast<std::size_t>(a)][r][j];
                    M.gam[(i + a) * d + r][i * d + j] = gam_T[static_cast<std::size_t>(a)][r][j];
                }
    for (int i = 0; i < k; ++i)
        for (int r = 0; r < d; ++r)
            for (int j = 0; j < d; ++j) M.delta[i * d + r][i * d + j] = base.delta[r][j];
    return M;
}

nlohmann::json DeformationModule::to_json() const {
    auto mats = [](const std::vector<LaurentMatrix>& v) {
        auto out = nlohmann::json::array();
        for (auto& A : v) {
            auto m = nlohmann::json::array();
            for (auto& row : A) {
                auto r = nlohmann::json::array();
                for (auto& x : row) r.push_back(phigamma::to_json(x));
                m.push_back(r);
            }
            out.push_back(m);
        }
        return out;
    };
    return {{"base", base.to_json()}, {"level", k}, {"phi_T", mats(phi_T)}, {"gam_T", mats(gam_T)}};
}

DeformationModule deformation_build(const PhiGammaModule& M, int k) {
    if (k < 1) throw PreconditionError("deformation level must be at least 1");
    DeformationModule DM;
    DM.base = M;
    DM.k = k;
    LaurentMatrix zero(static_cast<std::size_t>(M.rank),
                       std::vector<TruncatedLaurent>(static_cast<std::size_t>(M.rank), TruncatedLaurent(M.p, M.N, 0, 0)));
    for (int a = 0; a < k; ++a) {
        DM.phi_T.push_back(a == 0 ? M.phi : zero);
        DM.gam_T.push_back(a <= 1 ? M.gam : zero);
    }
    return DM;
}

PhiGammaModule deformation_specialize(const DeformationModule& DM, int n) {
    const PhiGammaModule& B = DM.base;
    if (DM.k == 1 && n != 0) throw PreconditionError("level 1 jets only specialize at the origin");
    PAdic chi = PAdic::from_int(static_cast<i64>(1 + B.p), B.p, B.N);
    PAdic cn = PAdic::one(B.p, B.N);
    for (int i = 0; i < std::abs(n); ++i) cn *= n > 0 ? chi : chi.inverse();
    PAdic T = cn - PAdic::one(B.p, B.N);
    if (!T.is_zero() && valuation(T).value < 1) throw PreconditionError("specialization outside the open disc");
    PhiGammaModule M = B;
    auto eval = [&](const std::vector<LaurentMatrix>& cs) {
        LaurentMatrix out = cs[0];
        PAdic Ta = PAdic::one(B.p, B.N);
        for (std::size_t a = 1; a < cs.size(); ++a) {
            Ta *= T;
            for (int r = 0; r < B.rank; ++r)
                for (int j = 0; j < B.rank; ++j) out[r][j] = series_add(out[r][j], series_scale(cs[a][r][j], Ta));
        }
        return out;
    };
    M.phi = eval(DM.phi_T);
    M.gam = eval(DM.gam_T);
    int rr = ((n % static_cast<int>(B.p - 1)) + static_cast<int>(B.p - 1)) % static_cast<int>(B.p - 1);
    PAdic w = teichmuller_lift(primitive_root(B.p), B.p, B.N);
    PAdic wn = PAdic::one(B.p, B.N);
    for (int i = 0; i < rr; ++i) wn *= w;
    for (auto& row : M.delta)
        for (auto& x : row) x = x * wn;
    return M;
}

std::vector<CommutationDefect> deformation_defects(const DeformationModule& DM) {
    std::vector<CommutationDefect> out;
    const PhiGammaModule& B = DM.base;
    GammaElement g0 = GammaElement::generator(B.p, B.N);
    auto fr = [](const TruncatedLaurent& f) { return frobenius_series(f); };
    auto ga = [&](const TruncatedLaurent& f) { return gamma_series(f, g0); };
    for (int deg = 0; deg < DM.k; ++deg) {
        CommutationDefect d;
        for (int r = 0; r < B.rank; ++r)
            for (int j = 0; j < B.rank; ++j) {
                TruncatedLaurent diff(B.p, B.N, 0, 0);
                for (int a = 0; a <= deg; ++a) {
                    const int b = deg - a;
                    LaurentMatrix l = mat_mul(DM.phi_T[static_cast<std::size_t>(a)], mat_apply(DM.gam_T[static_cast<std::size_t>(b)], fr));
                    LaurentMatrix rr = mat_mul(DM.gam_T[static_cast<std::size_t>(b)], mat_apply(DM.phi_T[static_cast<std::size_t>(a)], ga));
                    diff = series_add(diff, series_sub(l[r][j], rr[r][j]));
                }
                int top = diff.tail() ? diff.hi() : INT_MAX;
                for (auto& [e, c] : diff.coeffs()) {
                    if (e > top || c.is_zero()) continue;
                    int v = valuation(c).value;
                    if (d.zero || v < d.valuation) {
                        d.zero = false;
                        d.valuation = v;
                        d.exponent = e;
                        d.row = r;
                        d.col = j;
                    }
                }
            }
        out.push_back(d);
    }
    return out;
}

nlohmann::json DeformationIdentities::to_json() const {
    return {{"levels", levels},
            {"invariant_dims", invariant_dims},
            {"coinvariant_dims", coinvariant_dims},
            {"coinvariants_surjective", coinvariants_surjective},
            {"psi_gamma_dims", psi_gamma_dims},
            {"psi_fixed_dim", psi_fixed_dim}};
}

DeformationIdentities deformation_gamma_identities(const PhiGammaModule& M, int k, int D, int G) {
    if (k < 2) throw PreconditionError("need level k >= 2");
    DeformationIdentities out;
    ModuleEngine E1(M);
    const int H = static_cast<int>(M.p);
    Space s1(M.rank, {{-D, H}});
    Projection p1 = E1.project(s1);
    for (int kk = 1; kk <= k; ++kk) {
        DeformationModule DM = deformation_build(M, kk);
        PhiGammaModule Mk = DM.as_module();
        ModuleEngine E(Mk);
        const Zq& R = E.R();
        Space sp(Mk.rank, {{-D, H}});
        Projection pr = E.project(sp);
        Mat A = E.restrict(minus_identity(E, E.assemble(sp, sp, {{0, 0, Op::Gam, 1}}), sp, sp), pr, pr);
        SNF s = smith_normal_form(R, A, false, false);
        int inv = 0, coinv = 0;
        for (int j = 0; j < A.cols; ++j) {
            int v = j < static_cast<int>(s.vals.size()) ? s.vals[static_cast<std::size_t>(j)] : R.N;
            if (v >= R.N - G) ++inv;
        }
        for (int r = 0; r < A.rows; ++r) {
            int v = r < static_cast<int>(s.vals.size()) ? s.vals[static_cast<std::size_t>(r)] : R.N;
            if (v >= R.N - G) ++coinv;
        }
        // M (x) 1 sits in the T^0 coordinates of the deformation.
        Mat I(sp.dim, s1.dim);
        for (int j = 0; j < M.rank; ++j)
            for (int e = -D; e < H; ++e) I(sp.index(0, j, e), s1.index(0, j, e)) = 1;
        Mat Ip = E.restrict(I, p1, pr);
        SNF t = smith_normal_form(R, hstack(A, Ip), false, false);
        int full = 0;
        for (int v : t.vals)
            if (v < R.N - G) ++full;
        out.levels.push_back(kk);
        out.invariant_dims.push_back(inv);
        out.coinvariant_dims.push_back(coinv);
        out.coinvariants_surjective.push_back(full == A.rows);
        HerrParams P;
        P.D = D;
        P.G = G;
        CohomologyReport rep = psi_herr_complex(Mk, P);
        out.psi_gamma_dims.push_back(rep.dims);
    }
    IwasawaParams ip;
    ip.D = D;
    ip.G = G;
    out.psi_fixed_dim = psi_fixed_points(M, ip).dim;
    return out;
}

nlohmann::json DcrysResult::to_json() const {
    return {{"weight", weight}, {"phi_eigenvalue", {eigenvalue.mantissa(), eigenvalue.denom_exp()}},
            {"phi_eigenvalue_str", eigenvalue.str()}, {"series_check", series_check}};
}

DcrysResult dcrys_rank1(const PhiGammaModule& M, int J) {
    if (M.rank != 1) throw PreconditionError("rank 1 character input required");
    const TruncatedLaurent& f = M.phi[0][0];
    const TruncatedLaurent& g = M.gam[0][0];
    for (auto* x : {&f, &g})
        for (auto& [k, c] : x->coeffs())
            if (k != 0 && !c.is_zero()) throw PreconditionError("character input must have constant entries");
    const u64 p = M.p;
    const int N = M.N;
    PAdic chi = PAdic::from_int(static_cast<i64>(1 + p), p, N);
    PAdic gv = g.coeff(0);
    DcrysResult out;
    bool found = false;
    for (int j = -J; j <= J && !found; ++j) {
        PAdic x = gv;
        for (int i = 0; i < std::abs(j); ++i) x *= j > 0 ? chi : chi.inverse();
        if (x == PAdic::one(p, N)) {
            out.weight = -j;
            out.eigenvalue = f.coeff(0).shift(j);
            found = true;
        }
    }
    if (!found) throw PreconditionError("no invariant exponent in range");
    // phi is a ring map, so phi(t^j) = p^j t^j is checked on the integral power t^{|j|}.
    const int j = std::abs(out.weight);
    TruncatedLaurent t = log_one_plus_pi(p, N, 10);
    TruncatedLaurent tj = TruncatedLaurent::monomial(p, N, 0, 1);
    for (int i = 0; i < j; ++i) tj = series_mul(tj, t);
    TruncatedLaurent lhs = frobenius_series(tj);
    TruncatedLaurent rhs = series_scale(tj, PAdic::one(p, N).shift(j));
    out.series_check = lhs.equals(rhs);
    return out;
}

}  // namespace phigamma
