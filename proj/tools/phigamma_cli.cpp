#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "phigamma/cli.hpp"

using namespace phigamma;

int main(int argc, char** argv) {
    CLI::App app{"phigamma: finite-precision (phi, Gamma)-module laboratory"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    RunConfig cfg;
    std::string config_path;
    u64 p = cfg.p;
    int N = cfg.N, D = cfg.D, G = cfg.G, wl = cfg.witt_length, m = cfg.m;
    u64 seed = cfg.seed;
    std::string output;
    bool timing = false;
    app.add_option("--config", config_path, "JSON config file (fields and a jobs list)");
    auto* o_p = app.add_option("--p", p, "odd prime");
    auto* o_N = app.add_option("--prec", N, "p-adic precision N");
    auto* o_D = app.add_option("--window", D, "window D");
    auto* o_G = app.add_option("--guard", G, "guard digits G");
    auto* o_w = app.add_option("--witt-length", wl, "Witt vector length (<= 4)");
    auto* o_m = app.add_option("--cyclo-level", m, "cyclotomic level m");
    auto* o_s = app.add_option("--seed", seed, "seed for sampled checks");
    app.add_option("--output", output, "write the report here instead of stdout");
    app.add_flag("--timing", timing, "include wall-clock seconds per job");

    Job job;
    int twist = 0, level = 2, specialize = 0, span = 6, samples = 6;
    long long lam = 1;
    std::string complex = "phi";
    std::vector<long long> diag;
    bool identities = false;

    auto* coh = app.add_subcommand("cohomology", "Herr cohomology of R(n)");
    coh->add_option("--twist", twist);
    coh->add_option("--complex", complex, "phi, psi or compare");
    auto* psf = app.add_subcommand("psi-fixed", "M^{psi=1}, M^{psi=0} and M/(psi-1) for R(n)");
    psf->add_option("--twist", twist);
    auto* exs = app.add_subcommand("exact-seq", "psi sequence, duality and the h1 class of pi^-1");
    exs->add_option("--twist", twist);
    auto* pair = app.add_subcommand("pairing-table", "adjunction constants of the residue pairing");
    pair->add_option("--span", span);
    auto* th = app.add_subcommand("theta-check", "theta homomorphism and kernel witness");
    th->add_option("--samples", samples);
    app.add_subcommand("witt-demo", "Witt vector identities and norms");
    int embed_top = 30;
    long long embed_cap = 16;
    auto* emb = app.add_subcommand("embed-check", "pi -> [eps] - 1 equivariance");
    emb->add_option("--top", embed_top, "top exponent of the test series");
    emb->add_option("--cap", embed_cap, "tbar-adic cap of the Witt components");
    auto* def = app.add_subcommand("deform", "truncated cyclotomic deformation");
    def->add_option("--level", level);
    def->add_option("--specialize", specialize);
    def->add_option("--twist", twist);
    def->add_flag("--identities", identities);
    auto* dc = app.add_subcommand("dcrys", "D_crys of a rank-1 character");
    dc->add_option("--lam", lam);
    dc->add_option("--twist", twist);
    auto* sl = app.add_subcommand("slopes", "degree, slope and HN polygon of a diagonal module");
    sl->add_option("--diag", diag)->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitPrecondition;
    }

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw PreconditionError("cannot read " + config_path);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw PreconditionError(std::string("malformed config: ") + e.what());
            }
            cfg = config_from_json(j, cfg);
        }
        if (*o_p) cfg.p = p;
        if (*o_N) cfg.N = N;
        if (*o_D) cfg.D = D;
        if (*o_G) cfg.G = G;
        if (*o_w) cfg.witt_length = wl;
        if (*o_m) cfg.m = m;
        if (*o_s) cfg.seed = seed;
        if (!output.empty()) cfg.output = output;
        cfg.timing = timing;
        validate(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    }

    if (!app.get_subcommands().empty()) {
        CLI::App* sub = app.get_subcommands().front();
        job.command = sub->get_name();
        if (sub == coh) job.params = {{"twist", twist}, {"complex", complex}};
        if (sub == psf || sub == exs) job.params = {{"twist", twist}};
        if (sub == pair) job.params = {{"span", span}};
        if (sub == th) job.params = {{"samples", samples}};
        if (sub == emb) job.params = {{"window", embed_top}, {"cap", embed_cap}};
        if (sub == def) job.params = {{"level", level}, {"specialize", specialize}, {"twist", twist}, {"identities", identities}};
        if (sub == dc) job.params = {{"lam", lam}, {"twist", twist}};
        if (sub == sl) job.params = {{"diag", diag.empty() ? std::vector<long long>{1} : diag}};
        cfg.jobs = {job};
    }
    if (cfg.jobs.empty()) {
        std::cerr << "error: no subcommand and no jobs in the config\n";
        return kExitPrecondition;
    }

    RunResult res = run_all(cfg);
    const std::string text = res.report.dump(2) + "\n";
    if (cfg.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(cfg.output);
        if (!out) {
            std::cerr << "error: cannot write " << cfg.output << "\n";
            return kExitPrecondition;
        }
        out << text;
    }
    return res.exit;
}
