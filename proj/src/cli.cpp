#include "phigamma/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "phigamma/herr.hpp"
#include "phigamma/iwasawa.hpp"
#include "phigamma/module.hpp"
#include "phigamma/pairing.hpp"
#include "phigamma/witt.hpp"

namespace phigamma {

nlohmann::json RunConfig::to_json() const {
    auto js = nlohmann::json::array();
    for (auto& j : jobs) js.push_back({{"command", j.command}, {"params", j.params}});
    return {{"p", p}, {"N", N}, {"D", D}, {"G", G}, {"witt_length", witt_length}, {"m", m}, {"seed", seed}, {"jobs", js}};
}

void validate(const RunConfig& c) {
    if (c.p == 2 || !is_prime(c.p)) throw PreconditionError("p must be an odd prime");
    if (c.G < 1 || c.N <= c.G) throw PreconditionError("need N > G >= 1");
    if (c.D < static_cast<int>(c.p)) throw PreconditionError("need window D >= p");
    if (c.witt_length < 1 || c.witt_length > kMaxWittLength) throw PreconditionError("witt length must lie in [1, 4]");
    if (c.m < 1) throw PreconditionError("cyclotomic level must be at least 1");
    double bits = std::log2(static_cast<double>(c.p)) * (c.N + 2 * c.G);
    if (bits > 60) throw PreconditionError("p^(N + 2G) must stay below 2^60");
}

RunConfig config_from_json(const nlohmann::json& j, RunConfig c) {
    if (!j.is_object()) throw PreconditionError("config must be a JSON object");
    if (j.contains("p")) c.p = j.at("p").get<u64>();
    if (j.contains("N")) c.N = j.at("N").get<int>();
    if (j.contains("D")) c.D = j.at("D").get<int>();
    if (j.contains("G")) c.G = j.at("G").get<int>();
    if (j.contains("witt_length")) c.witt_length = j.at("witt_length").get<int>();
    if (j.contains("m")) c.m = j.at("m").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<u64>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("jobs")) {
        c.jobs.clear();
        for (auto& e : j.at("jobs")) {
            Job job;
            job.command = e.at("command").get<std::string>();
            if (e.contains("params")) job.params = e.at("params");
            c.jobs.push_back(job);
        }
    }
    return c;
}

namespace {

template <class T>
T param(const Job& job, const char* key, T def) {
    return job.params.contains(key) ? job.params.at(key).get<T>() : def;
}

HerrParams herr_params(const RunConfig& c) {
    HerrParams P;
    P.D = c.D;
    P.G = c.G;
    return P;
}

IwasawaParams iw_params(const RunConfig& c) {
    IwasawaParams P;
    P.D = c.D;
    P.G = c.G;
    return P;
}

nlohmann::json defect_json(const CommutationDefect& d) {
    if (d.zero) return {{"zero", true}};
    return {{"zero", false}, {"valuation", d.valuation}, {"exponent", d.exponent}, {"row", d.row}, {"col", d.col}};
}

JobResult job_cohomology(const RunConfig& c, const Job& job) {
    const int n = param(job, "twist", 0);
    const std::string complex = param<std::string>(job, "complex", "phi");
    const u64 p = c.p;
    ModuleFactory F = [p, n](int N) { return twist_module(p, N, n); };
    JobResult r;
    if (complex == "compare") {
        ComparisonResult cr = compare_phi_psi(F, p, c.N, herr_params(c));
        r.report = cr.to_json();
        r.report["twist"] = n;
        return r;
    }
    if (complex != "phi" && complex != "psi") throw PreconditionError("complex must be phi, psi or compare");
    CohomologyReport rep = complex == "phi" ? herr_complex(F, p, c.N, herr_params(c)) : psi_herr_complex(F, p, c.N, herr_params(c));
    r.report = rep.to_json();
    r.report["twist"] = n;
    if (rep.all_converged())
        r.report["euler_characteristic"] = euler_characteristic(rep);
    else
        r.exit = kExitNotConverged;
    return r;
}

JobResult job_psi_fixed(const RunConfig& c, const Job& job) {
    const int n = param(job, "twist", 0);
    PhiGammaModule M = twist_module(c.p, c.N, n);
    JobResult r;
    PsiBasis b = psi_fixed_points(M, iw_params(c));
    PsiBasis k = psi_kernel(M, iw_params(c));
    CoinvariantReport co = psi_coinvariants(M, iw_params(c));
    nlohmann::json kj = k.to_json();
    kj.erase("basis");
    r.report = {{"twist", n}, {"psi_fixed", b.to_json()}, {"psi_kernel", kj}, {"psi_coinvariants", co.to_json()}};
    if (!b.stabilized || !co.stabilized) r.exit = kExitNotConverged;
    return r;
}

JobResult job_exact_seq(const RunConfig& c, const Job& job) {
    const int n = param(job, "twist", 0);
    PhiGammaModule M = twist_module(c.p, c.N, n);
    JobResult r;
    ExactSequenceReport es = exact_sequence_check(M, iw_params(c));
    CoinvariantReport co = psi_coinvariants(cartier_dual(M), iw_params(c));
    ModuleElement v{TruncatedLaurent::monomial(c.p, c.N, -1, 1)};
    H1Class h = h1_iwasawa_class(M, v, 2 * c.D, c.G);
    nlohmann::json hj = h.to_json();
    hj.erase("a");
    r.report = {{"twist", n},
                {"exact_sequence", es.to_json()},
                {"dual_coinvariants", co.to_json()},
                {"duality_match", es.phi1_dim == co.dim},
                {"h1_class_of_pi_inverse", hj}};
    if (!co.stabilized) r.exit = kExitNotConverged;
    return r;
}

JobResult job_pairing(const RunConfig& c, const Job& job) {
    const int J = param(job, "span", 6);
    JobResult r;
    auto a = phi_phi_constant(c.p, c.N, J);
    auto b = phi_psi_constant(c.p, c.N, J);
    auto table = nlohmann::json::array();
    for (int i = -3; i <= 3; ++i) {
        auto row = nlohmann::json::array();
        for (int j = -3; j <= 3; ++j)
            row.push_back(iwasawa_pairing(TruncatedLaurent::monomial(c.p, c.N, i, 1), TruncatedLaurent::monomial(c.p, c.N, j, 1)).str());
        table.push_back(row);
    }
    r.report = {{"phi_phi", a.to_json()}, {"phi_psi", b.to_json()}, {"monomial_table", table}, {"exponents", {-3, 3}}};
    if (!a.consistent || !b.consistent) r.exit = kExitNotConverged;
    return r;
}

PerfLaurent sample_perf(std::mt19937_64& rng, u64 p, int level, int max_num) {
    PerfLaurent x(p);
    x.level = level;
    for (int k = 0; k <= max_num; ++k) {
        u64 v = rng() % (2 * p);
        if (v < p) x.terms[k] = v;
    }
    x.normalize();
    return x;
}

WittVector sample_witt(std::mt19937_64& rng, u64 p, int length, int level, int max_num) {
    WittVector w = witt_zero(p, length);
    for (auto& comp : w.comps) comp = sample_perf(rng, p, level, max_num);
    return w;
}

JobResult job_theta(const RunConfig& c, const Job& job) {
    const int samples = param(job, "samples", 6);
    const int len = c.witt_length;
    ThetaParams P;
    P.m = c.m;
    P.G = c.G;
    // theta is defined on W_len, hence only modulo p^len.
    P.N = std::min(c.N, len + c.G - 1);
    P.guard = 1;
    const int target = P.N - P.G;
    std::mt19937_64 rng(c.seed);
    int worst_add = P.N, worst_mul = P.N;
    for (int s = 0; s < samples; ++s) {
        WittVector x = sample_witt(rng, c.p, len, 1, 3), y = sample_witt(rng, c.p, len, 1, 3);
        CycloLevel tx = theta_map(x, P), ty = theta_map(y, P);
        worst_add = std::min(worst_add, cyclo_sub(theta_map(witt_add(x, y), P), cyclo_add(tx, ty)).valuation());
        worst_mul = std::min(worst_mul, cyclo_sub(theta_map(witt_mul(x, y), P), cyclo_mul(tx, ty)).valuation());
    }
    PerfLaurent one = PerfLaurent::monomial(c.p, 0, 0, 1);
    WittVector eps = teichmuller(perf_add(one, PerfLaurent::monomial(c.p, 1, 0, 1)), len);
    CycloLevel te = theta_map(eps, P);
    CycloLevel zeta = CycloLevel::root_of_unity(c.p, P.N, te.M, P.m);
    const int eps_val = cyclo_sub(te, zeta).valuation();
    CycloLevel zpow = cyclo_pow(te, ipow(c.p, P.m - 1));
    const bool primitive = cyclo_sub(cyclo_pow(te, ipow(c.p, P.m)), CycloLevel::constant(c.p, P.N, te.M, 1)).valuation() >= target &&
                           cyclo_sub(zpow, CycloLevel::constant(c.p, P.N, te.M, 1)).valuation() == 0;
    const int p_val = cyclo_sub(theta_map(witt_scalar(c.p, len, static_cast<i64>(c.p)), P),
                                CycloLevel::constant(c.p, P.N, P.m, static_cast<i64>(c.p)))
                          .valuation();
    const int xi_val = theta_map(xi_element(c.p, len, P.m - 1), P).valuation();
    const int xi_literal_val = theta_map(xi_element(c.p, len, -1), P).valuation();
    JobResult r;
    bool ok = worst_add > target && worst_mul > target && eps_val >= target && primitive && p_val >= target && xi_val >= target;
    r.report = {{"requested_N", c.N},
                {"effective_N", P.N},
                {"G", P.G},
                {"m", P.m},
                {"samples", samples},
                {"add_residual_valuation", worst_add},
                {"mul_residual_valuation", worst_mul},
                {"theta_eps_minus_zeta_valuation", eps_val},
                {"theta_eps_primitive", primitive},
                {"theta_p_minus_p_valuation", p_val},
                {"theta_xi_valuation", xi_val},
                {"theta_xi_literal_valuation", xi_literal_val},
                {"threshold", target},
                {"pass", ok}};
    if (!ok) r.exit = kExitNotConverged;
    return r;
}

JobResult job_witt_demo(const RunConfig& c, const Job&) {
    const u64 p = c.p;
    const int len = c.witt_length;
    PerfLaurent one = PerfLaurent::monomial(p, 0, 0, 1);
    PerfLaurent t = PerfLaurent::monomial(p, 1, 0, 1);
    WittVector two = witt_add(witt_one(p, 2), witt_one(p, 2));
    WittVector x = witt_add(teichmuller(perf_add(t, one), len), verschiebung(teichmuller(perf_root(t), len)));
    bool fv = witt_equal(witt_frobenius(verschiebung(x)), witt_mul(witt_scalar(p, len, static_cast<i64>(p)), x));
    bool vf = witt_equal(verschiebung(witt_frobenius(x)), witt_mul_p(x));
    WittVector y = witt_add(teichmuller(t, len), witt_scalar(p, len, static_cast<i64>(p)));
    NormValue nv = witt_gauss_norm(y, Rational(1));
    PhiEigenResult pe = phi_eigen_element(t, 3, Rational(1));
    PerfLaurent s = perf_add(t, PerfLaurent::monomial(p, 2, 1, 1));
    bool root = perf_equal(perf_frobenius(perf_root(s)), s);
    JobResult r;
    r.report = {{"one_plus_one_W2", two.to_json()},
                {"FV_equals_p", fv},
                {"phiV_equals_p", vf},
                {"norm_tbar_plus_p", {{"exponent", nv.exponent.str()}, {"value", nv.value()}}},
                {"v_tbar", tilt_valuation(t).str()},
                {"v_tbar_root", tilt_valuation(perf_root(t)).str()},
                {"phi_eigen_T3", pe.to_json()},
                {"frobenius_root_witness", root}};
    return r;
}

JobResult job_embed(const RunConfig& c, const Job& job) {
    const u64 p = c.p;
    const int len = c.witt_length;
    const int W = param(job, "window", 30);
    const i64 cap = param<i64>(job, "cap", 16);
    JobResult r;
    auto rows = nlohmann::json::array();
    bool all = true;
    GammaElement gens[2] = {GammaElement::generator(p, c.N), GammaElement::make(p, c.N, p - 1, 0)};
    const i64 cs[2] = {static_cast<i64>(1 + p), -1};
    for (int k : {1, 2, -1}) {
        TruncatedLaurent f(p, c.N, -1, W, false);
        f.set(k, PAdic::one(p, c.N));
        WittVector ef = embed_pi(f, len, cap);
        bool phi_ok = witt_equal(embed_pi(frobenius_series(f), len, cap), witt_frobenius(ef));
        nlohmann::json row = {{"exponent", k}, {"phi", phi_ok}};
        all = all && phi_ok;
        auto gs = nlohmann::json::array();
        for (int g = 0; g < 2; ++g) {
            WittVector lhs = embed_pi(gamma_series(f, gens[g]), len, cap);
            WittVector rhs = witt_gamma(ef, cs[g], cap);
            bool ok = witt_equal(lhs, rhs);
            all = all && ok;
            auto known = nlohmann::json::array();
            for (int n = 0; n < len; ++n) {
                const PerfLaurent& a = lhs.comps[static_cast<std::size_t>(n)];
                const PerfLaurent& b = rhs.comps[static_cast<std::size_t>(n)];
                Rational h = a.exact() ? (b.exact() ? Rational(i64(1) << 40) : b.bound())
                                       : (b.exact() || a.bound() < b.bound() ? a.bound() : b.bound());
                known.push_back(h.str());
            }
            gs.push_back({{"c", cs[g]}, {"equal", ok}, {"known_below", known}});
        }
        row["gamma"] = gs;
        rows.push_back(row);
    }
    r.report = {{"checks", rows}, {"embed_pi", embed_pi(TruncatedLaurent::monomial(p, c.N, 1, 1), len, cap).to_json()}, {"pass", all}};
    if (!all) r.exit = kExitNotConverged;
    return r;
}

bool same_module(const PhiGammaModule& A, const PhiGammaModule& B) {
    if (A.rank != B.rank) return false;
    for (int i = 0; i < A.rank; ++i)
        for (int j = 0; j < A.rank; ++j) {
            if (!A.phi[i][j].equals(B.phi[i][j]) || !A.gam[i][j].equals(B.gam[i][j])) return false;
            if (!(A.delta[i][j] == B.delta[i][j])) return false;
        }
    return true;
}

JobResult job_deform(const RunConfig& c, const Job& job) {
    const int k = param(job, "level", 2);
    const int n = param(job, "specialize", 0);
    const int base = param(job, "twist", 0);
    PhiGammaModule M = twist_module(c.p, c.N, base);
    DeformationModule DM = deformation_build(M, k);
    auto defs = nlohmann::json::array();
    bool zero = true;
    for (auto& d : deformation_defects(DM)) {
        defs.push_back(defect_json(d));
        zero = zero && d.zero;
    }
    PhiGammaModule S = deformation_specialize(DM, n);
    bool match = same_module(S, twist_module(c.p, c.N, base + n));
    JobResult r;
    r.report = {{"level", k}, {"twist", base}, {"specialize", n}, {"defects", defs}, {"defects_zero", zero},
                {"specialization_matches_twist", match}, {"specialized", S.to_json()}};
    if (param(job, "identities", false)) r.report["gamma_identities"] = deformation_gamma_identities(M, k, std::min(c.D, 30), c.G).to_json();
    if (!zero || !match) r.exit = kExitNotConverged;
    return r;
}

JobResult job_dcrys(const RunConfig& c, const Job& job) {
    const i64 lam = param<i64>(job, "lam", 1);
    const int n = param(job, "twist", 0);
    PhiGammaModule M = module_from_character(PAdic::from_int(lam, c.p, c.N), n);
    JobResult r;
    r.report = dcrys_rank1(M).to_json();
    r.report["lam"] = lam;
    r.report["twist"] = n;
    return r;
}

JobResult job_slopes(const RunConfig& c, const Job& job) {
    std::vector<i64> diag = param(job, "diag", std::vector<i64>{1});
    std::vector<PAdic> entries;
    for (i64 a : diag) entries.push_back(PAdic::from_int(a, c.p, c.N));
    PhiGammaModule M = diagonal_phi_module(entries);
    DegreeSlope ds = degree_slope(M);
    auto hn = nlohmann::json::array();
    for (auto& s : hn_polygon_split(M)) hn.push_back({{"slope", Rational(s.num, s.den).str()}, {"multiplicity", s.multiplicity}});
    JobResult r;
    r.report = {{"diag", diag}, {"degree", ds.degree}, {"slope", Rational(ds.num, ds.den).str()}, {"etale", is_etale(M)}, {"hn_polygon", hn}};
    return r;
}

}  // namespace

JobResult run_job(const RunConfig& c, const Job& job) {
    using Fn = JobResult (*)(const RunConfig&, const Job&);
    static const std::vector<std::pair<std::string, Fn>> table = {
        {"cohomology", job_cohomology}, {"psi-fixed", job_psi_fixed},   {"exact-seq", job_exact_seq},
        {"pairing-table", job_pairing}, {"theta-check", job_theta},     {"witt-demo", job_witt_demo},
        {"embed-check", job_embed},     {"deform", job_deform},         {"dcrys", job_dcrys},
        {"slopes", job_slopes}};
    JobResult r;
    auto t0 = std::chrono::steady_clock::now();
    try {
        auto it = std::find_if(table.begin(), table.end(), [&](auto& e) { return e.first == job.command; });
        if (it == table.end()) throw PreconditionError("unknown command " + job.command);
        r = it->second(c, job);
        r.report = {{"status", r.exit == kExitOk ? "ok" : "not_converged"}, {"result", r.report}};
    } catch (const PreconditionError& e) {
        r.exit = kExitPrecondition;
        r.report = {{"status", "precondition"}, {"error", e.what()}};
    }
    r.report["command"] = job.command;
    r.report["params"] = job.params;
    r.report["exit"] = r.exit;
    if (c.timing) r.report["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

RunResult run_all(const RunConfig& c) {
    RunResult out;
    auto jobs = nlohmann::json::array();
    int converged = 0;
    for (auto& job : c.jobs) {
        JobResult r = run_job(c, job);
        out.exit = std::max(out.exit, r.exit);
        if (r.exit == kExitOk) ++converged;
        jobs.push_back(r.report);
    }
    out.report = {{"config", c.to_json()},
                  {"jobs", jobs},
                  {"summary", {{"jobs", c.jobs.size()}, {"ok", converged}, {"exit", out.exit}}}};
    return out;
}

}  // namespace phigamma
