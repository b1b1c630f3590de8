// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "phigamma/cli.hpp"
#include "phigamma/herr.hpp"
#include "phigamma/iwasawa.hpp"
#include "phigamma/pairing.hpp"
#include "phigamma/witt.hpp"

using namespace phigamma;
using namespace phigamma::oracle;

namespace {

constexpr int kN = 12, kG = 4, kD = 60;
const u64 kPrimes[] = {3, 5};

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail << "first failure: " << what;
        pass = pass && ok;
    }
};

HerrParams herr_params() {
    HerrParams P;
    P.D = kD;
    P.G = kG;
    return P;
}

IwasawaParams iw_params() {
    IwasawaParams P;
    P.D = kD;
    P.G = kG;
    return P;
}

ModuleFactory twist_factory(u64 p, int n) {
    return [p, n](int N) { return twist_module(p, N, n); };
}

ModuleFactory sum_factory(u64 p) {
    return [p](int N) { return direct_sum(twist_module(p, N, 0), twist_module(p, N, 1)); };
}

PerfLaurent one_plus_t(u64 p) { return perf_add(PerfLaurent::monomial(p, 0, 0), PerfLaurent::monomial(p, 1, 0)); }

void criterion1(Outcome& o) {
    std::mt19937_64 rng(101);
    int checks = 0;
    for (u64 p : kPrimes) {
        for (int s = 0; s < 20; ++s) {
            TruncatedLaurent f = random_laurent(rng, p, kN, -6, 12);
            o.require(series_sub(psi_series(frobenius_series(f)), f).is_zero(), "psi phi = id");
            TruncatedLaurent r = random_laurent(rng, p, kN, -4, 10), g = random_laurent(rng, p, kN, -3, 6);
            o.require(series_sub(psi_series(series_mul(r, frobenius_series(g))), series_mul(psi_series(r), g)).is_zero(),
                      "psi(r phi(s)) = psi(r) s");
            checks += 2;
        }
        for (int s = 0; s < 20; ++s) {
            GammaElement c = GammaElement::make(p, kN, 1 + rng() % (p - 1), static_cast<i64>(rng() % 200));
            GammaElement d = GammaElement::make(p, kN, 1 + rng() % (p - 1), static_cast<i64>(rng() % 200));
            TruncatedLaurent f = random_laurent(rng, p, kN, -3, 8);
            o.require(frobenius_series(gamma_series(f, c)).equals(gamma_series(frobenius_series(f), c)), "phi gamma = gamma phi");
            o.require(gamma_series(gamma_series(f, d), c).equals(gamma_series(f, c * d)), "gamma_c gamma_c' = gamma_cc'");
            checks += 2;
        }
        for (int j = -10; j <= 10; ++j) {
            TruncatedLaurent m = TruncatedLaurent::monomial(p, kN, j, 1);
            TruncatedLaurent tr = trace_phi(m);
            o.require(series_sub(tr, trace_oracle(p, kN, j)).is_zero(), "Tr = root-of-unity oracle at j = " + std::to_string(j));
            o.require(series_sub(tr, series_scale(frobenius_series(psi_series(m)), PAdic::from_int(static_cast<i64>(p), p, kN))).is_zero(),
                      "Tr = p phi psi");
            checks += 2;
        }
    }
    o.detail << (o.pass ? "" : "; ") << checks << " identity checks at p = 3, 5, N = " << kN;
}

void criterion2(Outcome& o) {
    for (u64 p : kPrimes) {
        o.require(series_sub(psi_series(TruncatedLaurent::monomial(p, kN, 1, 1)), TruncatedLaurent::monomial(p, kN, 0, -1)).is_zero(),
                  "psi(pi) = -1");
        TruncatedLaurent inv = TruncatedLaurent::monomial(p, kN, -1, 1);
        o.require(series_sub(psi_series(inv), inv).is_zero(), "psi(pi^-1) = pi^-1");
        for (int i = 1; i < static_cast<int>(p); ++i) {
            std::vector<i64> c;
            for (int k = 0; k <= i; ++k) c.push_back(binom(i, k));
            o.require(psi_series(TruncatedLaurent::from_ints(p, kN, 0, c)).is_zero(), "psi((1+pi)^i) = 0");
        }
        TruncatedLaurent t = log_one_plus_pi(p, kN, kD);
        o.require(series_sub(frobenius_series(t), series_scale(t, PAdic::from_int(static_cast<i64>(p), p, kN))).is_zero(), "phi(t) = p t");
        for (GammaElement c : {GammaElement::generator(p, kN), GammaElement::make(p, kN, p - 1, 0), GammaElement::make(p, kN, 2, 7)})
            o.require(series_sub(gamma_series(t, c), series_scale(t, c.value())).is_zero(), "gamma_c(t) = c t");
    }
    o.detail << (o.pass ? "" : "; ") << "window [1, " << kD << "]";
}

struct CohomologyCase {
    std::string name;
    std::array<int, 3> expect;
    std::function<ModuleFactory(u64)> factory;
};

std::vector<CohomologyCase> cohomology_cases() {
    std::vector<CohomologyCase> cs = {
        {"R(0)", {1, 2, 0}, [](u64 p) { return twist_factory(p, 0); }},
        {"R(1)", {0, 2, 1}, [](u64 p) { return twist_factory(p, 1); }},
        {"R(-2)", {0, 1, 0}, [](u64 p) { return twist_factory(p, -2); }},
        {"R(-1)", {0, 1, 0}, [](u64 p) { return twist_factory(p, -1); }},
        {"R(2)", {0, 1, 0}, [](u64 p) { return twist_factory(p, 2); }},
        {"R(0)+R(1)", {1, 4, 1}, [](u64 p) { return sum_factory(p); }},
    };
    return cs;
}

void criterion3(Outcome& o) {
    std::ostringstream dims;
    for (u64 p : kPrimes)
        for (auto& c : cohomology_cases()) {
            CohomologyReport r = herr_complex(c.factory(p), p, kN, herr_params());
            const std::string tag = c.name + " at p = " + std::to_string(p);
            o.require(r.all_converged(), tag + " did not stabilize");
            o.require(r.dims == c.expect, tag + " dims");
            if (r.all_converged()) {
                const int chi = euler_characteristic(r);
                o.require(chi == (c.name == "R(0)+R(1)" ? -2 : -1), tag + " Euler characteristic");
            }
            if (p == 3) dims << c.name << " (" << r.dims[0] << "," << r.dims[1] << "," << r.dims[2] << ") ";
        }
    o.detail << (o.pass ? "" : "; ") << "p = 3: " << dims.str() << "chi additive on R(0)+R(1)";
}

void criterion4(Outcome& o) {
    int n = 0;
    for (u64 p : kPrimes)
        for (auto& c : cohomology_cases()) {
            ComparisonResult cr = compare_phi_psi(c.factory(p), p, kN, herr_params());
            const std::string tag = c.name + " at p = " + std::to_string(p);
            o.require(cr.chain_map, tag + " chain map");
            o.require(cr.isomorphism, tag + " quasi-isomorphism");
            ++n;
        }
    o.detail << (o.pass ? "" : "; ") << n << " modules compared";
}

void criterion5(Outcome& o) {
    for (u64 p : kPrimes) {
        KernelReport k0 = scalar_phi_kernel(p, kN, kG, 0, kD, kD);
        bool constants = k0.dim == 1 && k0.basis.size() == 1;
        if (constants)
            for (auto& [e, c] : k0.basis[0]) constants = constants && e == 0;
        o.require(constants, "ker(phi - 1) is the constants at p = " + std::to_string(p));
        for (int n = 1; n <= 3; ++n)
            o.require(scalar_phi_kernel(p, kN, kG, n, kD, kD).dim == 0, "ker(p^" + std::to_string(n) + " phi - 1) = 0");
    }
    o.detail << (o.pass ? "" : "; ") << "window S[-" << kD << ", " << kD << ")";
}

void criterion6(Outcome& o) {
    int classes = 0;
    for (u64 p : kPrimes) {
        const std::string at = " at p = " + std::to_string(p);
        for (int n = -1; n <= 1; ++n) {
            ExactSequenceReport es = exact_sequence_check(twist_module(p, kN, n), iw_params());
            o.require(es.clean(), "psi sequence for R(" + std::to_string(n) + ")" + at);
        }
        for (int n : {0, 1}) {
            PhiGammaModule M = twist_module(p, kN, n);
            CoinvariantReport own = psi_coinvariants(M, iw_params());
            o.require(own.stabilized, "M/(psi - 1) stabilizes for R(" + std::to_string(n) + ")" + at);
            CoinvariantReport dual_co = psi_coinvariants(cartier_dual(M), iw_params());
            o.require(dual_co.stabilized, "M*/(psi - 1) stabilizes" + at);
            o.require(exact_sequence_check(M, iw_params()).phi1_dim == dual_co.dim, "dim M^{phi=1} = dim M*/(psi - 1)" + at);
            PsiBasis fixed = psi_fixed_points(M, iw_params());
            o.require(fixed.stabilized && !fixed.vectors.empty(), "M^{psi=1} stabilizes" + at);
            for (auto& v : fixed.vectors) {
                H1Class h = h1_iwasawa_class(M, v, 2 * kD, kG);
                o.require(h.cocycle, "h1 cocycle identity" + at);
                ++classes;
            }
        }
    }
    o.detail << (o.pass ? "" : "; ") << "R(-1), R(0), R(1); duality pairs (R(0), R(1)) and (R(1), R(0)); "
             << classes << " h1 classes from M^{psi=1} bases are cocycles";
}

void criterion7(Outcome& o) {
    std::mt19937_64 rng(707);
    for (int s = 0; s < 1000; ++s) {
        const u64 p = s % 2 ? 3 : 5;
        const int len = 1 + s % 4;
        WittVector x = random_witt(rng, p, len), y = random_witt(rng, p, len), z = random_witt(rng, p, len);
        bool ok = witt_equal(witt_add(x, y), witt_add(y, x)) && witt_equal(witt_mul(x, y), witt_mul(y, x)) &&
                  witt_equal(witt_add(witt_add(x, y), z), witt_add(x, witt_add(y, z))) &&
                  witt_equal(witt_mul(witt_mul(x, y), z), witt_mul(x, witt_mul(y, z))) &&
                  witt_equal(witt_mul(x, witt_add(y, z)), witt_add(witt_mul(x, y), witt_mul(x, z))) &&
                  witt_equal(witt_add(x, witt_neg(x)), witt_zero(p, len)) && witt_equal(witt_mul(x, witt_one(p, len)), x);
        o.require(ok, "ring axioms, sample " + std::to_string(s));
        if (!ok) break;
    }
    for (int s = 0; s < 100; ++s) {
        const u64 p = s % 2 ? 3 : 5;
        WittVector x = random_witt(rng, p, 3);
        WittVector px = witt_mul(witt_scalar(p, 3, static_cast<i64>(p)), x);
        o.require(witt_equal(witt_frobenius(verschiebung(x)), px), "FV = p");
        o.require(witt_equal(verschiebung(witt_frobenius(x)), px), "phi V = p");
    }
    for (int s = 0; s < 100; ++s) {
        const u64 p = s % 2 ? 3 : 5;
        WittVector x = random_witt(rng, p, 4);
        Rational r(1 + static_cast<i64>(rng() % 4), 1 + static_cast<i64>(rng() % 3));
        bool any = false;
        Rational best;
        i64 pn = 1;
        for (int n = 0; n < 4; ++n, pn *= static_cast<i64>(p)) {
            const PerfLaurent& a = x.comps[static_cast<std::size_t>(n)];
            if (a.is_zero()) continue;
            Rational e = Rational(n) + r * a.lowest() * Rational(static_cast<i64>(p), static_cast<i64>(p) - 1) * Rational(1, pn);
            if (!any || e < best) best = e;
            any = true;
        }
        NormValue nv = witt_gauss_norm(x, r);
        o.require(nv.zero == !any && (!any || nv.exponent == best), "norm formula");
    }
    // theta on W_4 is defined mod p^4, so N - G = 3 < 4 leaves the strict bound attainable.
    ThetaParams P;
    P.m = 3;
    P.N = 7;
    P.G = 4;
    P.guard = 1;
    const int len = 4, target = P.N - P.G;
    int worst = P.N;
    for (u64 p : kPrimes) {
        if (p == 5) P.m = 2;
        for (int s = 0; s < 4; ++s) {
            WittVector x = random_witt(rng, p, len), y = random_witt(rng, p, len);
            CycloLevel tx = theta_map(x, P), ty = theta_map(y, P);
            worst = std::min(worst, cyclo_sub(theta_map(witt_add(x, y), P), cyclo_add(tx, ty)).valuation());
            worst = std::min(worst, cyclo_sub(theta_map(witt_mul(x, y), P), cyclo_mul(tx, ty)).valuation());
        }
        o.require(theta_map(xi_element(p, len, P.m - 1), P).valuation() >= target, "theta(xi) = 0 mod p^{N-G}");
        CycloLevel te = theta_map(teichmuller(one_plus_t(p), len), P);
        o.require(cyclo_sub(te, CycloLevel::root_of_unity(p, P.N, te.M, P.m)).valuation() >= target, "theta([eps]) = zeta");
    }
    o.require(worst > target, "theta homomorphism residual below p^{-(N-G)}");
    for (u64 p : kPrimes)
        for (int k : {1, 2, -1}) {
            TruncatedLaurent f(p, kN, -1, 30, false);
            f.set(k, PAdic::one(p, kN));
            WittVector ef = embed_pi(f, 3, 16);
            o.require(witt_equal(embed_pi(frobenius_series(f), 3, 16), witt_frobenius(ef)), "embed_pi phi-equivariance");
            o.require(witt_equal(embed_pi(gamma_series(f, GammaElement::generator(p, kN)), 3, 16), witt_gamma(ef, static_cast<i64>(1 + p), 16)),
                      "embed_pi gamma-equivariance");
            o.require(witt_equal(embed_pi(gamma_series(f, GammaElement::make(p, kN, p - 1, 0)), 3, 16), witt_gamma(ef, -1, 16)),
                      "embed_pi gamma_{-1}-equivariance");
        }
    PhiEigenResult pe = phi_eigen_element(PerfLaurent::monomial(3, 1, 0), 3, Rational(1));
    o.require(pe.below_bound, "phi-eigen defect below truncation bound");
    o.detail << (o.pass ? "" : "; ") << "1000 axiom samples; theta residual valuation " << worst << " > " << target
             << "; phi-eigen defect p^-" << pe.defect_exponent.str() << " vs bound p^-" << pe.bound_exponent.str();
}

void criterion8(Outcome& o) {
    std::mt19937_64 rng(808);
    std::ostringstream cs;
    for (u64 p : kPrimes) {
        AdjunctionReport a = phi_phi_constant(p, kN, 6);
        AdjunctionReport b = phi_psi_constant(p, kN, 6);
        o.require(a.consistent && a.pairs_nonzero > 0, "phi-phi constant independent of the pair");
        o.require(b.consistent && b.pairs_nonzero > 0, "phi-psi constant independent of the pair");
        for (int s = 0; s < 100; ++s) {
            TruncatedLaurent x = random_laurent(rng, p, kN, -4, 4), y = random_laurent(rng, p, kN, -4, 4);
            o.require(phi_phi_holds(x, y, a.constant), "<phi x, phi y> = c1 <x, y>");
            o.require(phi_psi_holds(x, y, b.constant), "<phi x, y> = c2 <x, psi y>");
        }
        const bool expected = a.constant == PAdic::one(p, kN).shift(-1);
        cs << "p = " << p << ": c1 = " << a.constant.str() << ", c2 = " << b.constant.str()
           << (expected ? "" : " (derivation expected c1 = p^-1)") << "; ";
    }
    o.detail << (o.pass ? "" : "; ") << cs.str() << "100 random pairs each";
}

bool same_data(const PhiGammaModule& A, const PhiGammaModule& B) {
    if (A.rank != B.rank) return false;
    for (int i = 0; i < A.rank; ++i)
        for (int j = 0; j < A.rank; ++j)
            if (!A.phi[i][j].equals(B.phi[i][j]) || !A.gam[i][j].equals(B.gam[i][j]) || !(A.delta[i][j] == B.delta[i][j])) return false;
    return true;
}

void criterion9(Outcome& o) {
    for (u64 p : kPrimes)
        for (int base : {0, 1}) {
            PhiGammaModule M = twist_module(p, kN, base);
            o.require(same_data(deformation_specialize(deformation_build(M, 1), 0), M), "level-1 specialization is the identity");
            for (int k = 1; k <= 3; ++k) {
                DeformationModule DM = deformation_build(M, k);
                for (auto& d : deformation_defects(DM)) o.require(d.zero, "deformation commutation defect at level " + std::to_string(k));
                if (k < 2) continue;
                for (int n = -2; n <= 2; ++n)
                    o.require(same_data(deformation_specialize(DM, n), twist_module(p, kN, base + n)), "specialization at n equals the twist");
            }
        }
    o.detail << (o.pass ? "" : "; ") << "bases R(0), R(1); levels k <= 3; n in -2..2";
}

RunConfig full_config() {
    RunConfig c;
    c.p = 3;
    c.N = kN;
    c.D = kD;
    c.G = kG;
    c.jobs = {{"cohomology", {{"twist", 0}}},
              {"cohomology", {{"twist", 1}, {"complex", "psi"}}},
              {"cohomology", {{"twist", -1}, {"complex", "compare"}}},
              {"psi-fixed", {{"twist", 1}}},
              {"exact-seq", {{"twist", 0}}},
              {"pairing-table", nlohmann::json::object()},
              {"theta-check", nlohmann::json::object()},
              {"witt-demo", nlohmann::json::object()},
              {"embed-check", nlohmann::json::object()},
              {"deform", {{"level", 3}, {"specialize", 2}}},
              {"dcrys", {{"lam", 1}, {"twist", 1}}},
              {"slopes", {{"diag", {1, 3, 9}}}}};
    return c;
}

void criterion10(Outcome& o) {
    RunConfig c = full_config();
    RunResult a = run_all(c), b = run_all(c);
    const std::string da = a.report.dump(2), db = b.report.dump(2);
    o.require(da == db, "reports differ");
    o.require(a.exit == kExitOk, "full suite exit code " + std::to_string(a.exit));
    o.detail << (o.pass ? "" : "; ") << c.jobs.size() << " jobs, " << da.size() << " bytes, identical";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria = {
        {"exact operator identities", criterion1},  {"special values", criterion2},
        {"Herr cohomology dimensions", criterion3}, {"phi/psi comparison", criterion4},
        {"scalar eigenspace laws", criterion5},     {"Iwasawa layer", criterion6},
        {"Witt/tilt layer", criterion7},            {"pairing normalization", criterion8},
        {"deformation layer", criterion9},          {"determinism", criterion10}};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %2zu %-28s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.str().c_str(), sec);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
