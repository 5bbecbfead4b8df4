// Command-line front door: omega analysis, walk experiments, invariant
// suites, graph/growth/tail exports. All runs are seeded and emit their
// resolved configuration next to the results.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "grig/construction.hpp"
#include "grig/core.hpp"
#include "grig/germs.hpp"
#include "grig/measures.hpp"
#include "grig/orbit.hpp"
#include "grig/subst.hpp"
#include "grig/walks.hpp"

using json = nlohmann::json;
using namespace grig;

namespace {

constexpr uint64_t kDefaultSeed = 12345;  // fixed, never wall-clock

void write_text(const std::string& path, const std::string& text) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream os(path, std::ios::app);
    os << text;
}

void emit_config(const std::string& dir, const std::string& name, const json& cfg) {
    write_text(dir + "/" + name + ".config.json", cfg.dump(2) + "\n");
}

json load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    json j;
    is >> j;
    return j;
}

struct CommonOpts {
    std::string omega = "|012";
    std::string out_dir = "out";
    uint64_t seed = kDefaultSeed;
};

int cmd_analyze(const std::string& omega_text, int D, const std::string& out) {
    OmegaString om;
    try {
        om = OmegaString::parse(omega_text);
    } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    }
    json j;
    j["omega"] = om.str();
    j["D"] = D;
    j["torsion_type"] = om.torsion_type();
    j["eventually_constant"] = om.eventually_constant();

    auto norm = normalize_frD(om, D);
    bool fr_ok = norm.has_value();
    if (fr_ok) {
        j["fr"] = {{"ok", true},
                   {"shift", norm->report.shift},
                   {"omega_shifted", norm->omega.str()},
                   {"m_cycle", norm->report.m_cycle}};
        std::vector<long> I;
        for (long pos = 0; pos < 3 * D * (long)norm->omega.per.size() && (long)I.size() < 12; ++pos)
            if (norm->report.in_I(norm->omega, pos)) I.push_back(pos);
        j["fr"]["I_prefix"] = I;
    } else {
        FrReport direct = check_frD(om, D);
        j["fr"] = {{"ok", false}, {"fail_block", direct.fail_block}};
    }

    try {
        ExponentReport rep = growth_exponent(om);
        j["exponent"] = {{"lambda", rep.lambda},
                         {"alpha", rep.alpha},
                         {"q", rep.q},
                         {"preperiod_ignored", rep.preperiod_ignored}};
    } catch (const std::exception& e) {
        j["exponent"] = {{"error", e.what()}};
    }

    std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!out.empty()) write_text(out, text);
    return fr_ok ? 0 : 2;
}

int cmd_simulate(const CommonOpts& c, const std::string& experiment, double beta, long A,
                 long nmax, long steps, long trials, double eps, const std::string& mode) {
    Grig G(OmegaString::parse(c.omega));
    json cfg = {{"command", "simulate"},   {"experiment", experiment}, {"omega", c.omega},
                {"beta", beta},            {"A", A},                   {"nmax", nmax},
                {"steps", steps},          {"trials", trials},         {"eps", eps},
                {"mode", mode},            {"seed", c.seed},           {"out", c.out_dir},
                {"capacity", OrbitPoint::kDefaultCapacity}};
    emit_config(c.out_dir, experiment, cfg);

    if (experiment == "stabilization") {
        auto norm = normalize_frD(G.omega(), 3);
        if (!norm) throw std::runtime_error("omega fails Fr(3); stabilization needs it");
        Grig Gs(norm->omega);
        MuBetaParams p{beta, A, nmax, mode == "faithful"};
        MuBetaBuild b = build_mu_beta(Gs, norm->report, p);
        cfg["theorem_faithful_ok"] = b.faithful_ok;
        cfg["A_lower_bound"] = b.a_lower_bound;
        cfg["kn"] = b.kn_values;
        cfg["shift"] = norm->report.shift;
        emit_config(c.out_dir, experiment + ".resolved", cfg);
        std::vector<long> grid{100, 1000, 10000};
        if (steps < 10000) grid = {steps / 100, steps / 10, steps};
        StabilizationStats st = stabilization_stats(b.sampler, steps, trials, c.seed, grid);
        std::string csv = "t,frac_flipping_after_t\n";
        for (size_t i = 0; i < st.grid.size(); ++i)
            csv += std::to_string(st.grid[i]) + "," + std::to_string(st.frac_flipping[i]) + "\n";
        write_text(c.out_dir + "/stabilization.csv", csv);
        std::string jsonl;
        for (size_t i = 0; i < st.flip_histogram.size(); ++i)
            jsonl += json{{"trial", i}, {"flips", st.flip_histogram[i]}}.dump() + "\n";
        write_text(c.out_dir + "/stabilization.jsonl", jsonl);
        std::cout << "stabilization: trials=" << trials << " steps=" << steps << "\n";
        for (size_t i = 0; i < st.grid.size(); ++i)
            std::cout << "  frac flipping after t=" << st.grid[i] << ": " << st.frac_flipping[i]
                      << "\n";
        if (!b.faithful_ok && mode != "faithful")
            std::cout << "  note: desk-mode parameters, below the stabilization theorem bound\n";
        return 0;
    }

    if (experiment == "eta0-transience" || experiment == "us-contrast") {
        MixtureSampler mu = experiment == "eta0-transience" ? build_eta0(G, eps, nmax)
                                                            : build_f1_only(G);
        std::vector<long> horizons{steps / 2, steps};
        auto est = green_mc(mu, {OrbitPoint{}}, horizons, trials, c.seed);
        std::string csv = "horizon,green_oo,stderr\n";
        for (size_t h = 0; h < horizons.size(); ++h)
            csv += std::to_string(horizons[h]) + "," + std::to_string(est[0].estimate[h]) + "," +
                   std::to_string(est[0].stderr_[h]) + "\n";
        write_text(c.out_dir + "/" + experiment + ".csv", csv);
        std::cout << experiment << ": G(o,o) at T/2=" << est[0].estimate[0]
                  << " at T=" << est[0].estimate[1] << "\n";
        return 0;
    }

    throw std::runtime_error("unknown experiment: " + experiment);
}

struct SuiteResult {
    std::string name;
    bool pass;
    std::string detail;
};

SuiteResult suite_relations() {
    Grig G(OmegaString::parse("|012"));
    bool ok = true;
    std::string detail;
    for (std::string s : {"a", "b", "c", "d"})
        ok = ok && is_identity(make_element(G, s + s));
    ok = ok && equal_elements(make_element(G, "bc"), make_element(G, "d"));
    ok = ok && equal_elements(make_element(G, "cd"), make_element(G, "b"));
    ok = ok && equal_elements(make_element(G, "bd"), make_element(G, "c"));
    ok = ok && is_identity(power(make_element(G, "ad"), 4));
    auto ord = element_order(make_element(G, "ab"), 64);
    ok = ok && ord && *ord == 16;
    detail = ord ? "order(ab)=" + std::to_string(*ord) : "order(ab) exceeded cap";
    return {"relations", ok, detail};
}

SuiteResult suite_gray_vs_bfs() {
    Grig G(OmegaString::parse("|012"));
    bool ok = true;
    for (uint64_t n = 0; n < (1u << 10) && ok; ++n) {
        OrbitPoint p = from_gray_index(n);
        if (gray_index(p).to_u64() != n) ok = false;
        bool up = false, down = (n == 0);
        for (auto& e : neighbors(G, p)) {
            BigUint gi = gray_index(e.to);
            uint64_t m = gi.to_u64();
            if (m == n + 1) up = true;
            if (n > 0 && m == n - 1) down = true;
            if (m != n && m != n + 1 && (n == 0 || m != n - 1)) ok = false;
        }
        ok = ok && up && down;
    }
    std::mt19937_64 rng(7);
    for (int t = 0; t < 32 && ok; ++t) {
        OrbitPoint x = from_gray_index(rng() % 256), y = from_gray_index(rng() % 256);
        auto d = bfs_distance(G, x, y, 600);
        ok = d && BigUint(*d) == schreier_distance(x, y);
    }
    return {"gray-vs-bfs", ok, "line graph to 2^10 + 32 random BFS pairs"};
}

SuiteResult suite_cube_independence() {
    Grig G(OmegaString::parse("|012"));
    std::vector<CubeActor> gs;
    std::vector<int> ks;
    for (long n = 1; n <= 6; ++n) {
        gs.push_back(actor_of(gn_factor(G, n)));
        ks.push_back(1);
    }
    CubeResult r = check_cube_independence(gs, ks, 8);
    bool ok = r.independent;
    Element a = make_element(G, "a");
    CubeResult bad = check_cube_independence({actor_of(a), actor_of(a)}, {1, 1}, 4);
    ok = ok && !bad.independent && bad.witness.has_value();
    return {"cube-independence", ok, "g_1..g_6 pass, (a,a) rejected"};
}

SuiteResult suite_ckv_portrait() {
    Grig G(OmegaString::parse("|201"));
    FrReport fr = check_frD(G.omega(), 3);
    if (!fr.ok) return {"ckv-portrait", false, "Fr(3) fails on |201"};
    bool ok = true;
    for (auto& iv : build_Vk(G.omega(), fr, 0, 6)) {
        Element ck = build_ckv_word(G, 0, iv.v);
        if (act_vertex(iv.v, ck) != iv.v) ok = false;
        auto portrait = portrait_along_ray(ck, iv.v);
        Element at_v = portrait.back().section;
        if (!equal_elements(at_v, Element{&G, "c", at_v.level})) ok = false;
    }
    return {"ckv-portrait", ok, "V_6^0 on |201"};
}

int cmd_verify(const std::string& suite) {
    std::vector<SuiteResult> results;
    if (suite == "relations" || suite == "all") results.push_back(suite_relations());
    if (suite == "gray-vs-bfs" || suite == "all") results.push_back(suite_gray_vs_bfs());
    if (suite == "cube-independence" || suite == "all") results.push_back(suite_cube_independence());
    if (suite == "ckv-portrait" || suite == "all") results.push_back(suite_ckv_portrait());
    if (results.empty()) {
        std::cerr << "unknown suite: " << suite << "\n";
        return 1;
    }
    int failures = 0;
    for (auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "  " << r.detail << "\n";
        if (!r.pass) ++failures;
    }
    return failures ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grigorchuk group family toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file mirroring the flags");

    // analyze-omega
    auto* an = app.add_subcommand("analyze-omega", "Fr(D) report and growth exponent");
    std::string an_omega = "|012";
    int an_D = 3;
    std::string an_out;
    an->add_option("--omega", an_omega, "omega as pre|per");
    an->add_option("--D", an_D, "block length for the frequency assumption");
    an->add_option("--out", an_out, "JSON output path");

    // simulate
    auto* sim = app.add_subcommand("simulate", "random-walk experiments");
    CommonOpts sc;
    std::string experiment = "stabilization", mode = "desk";
    double beta = 0.9, eps = 0.1;
    long A = 6, nmax = 24, steps = 10000, trials = 200;
    sim->add_option("--experiment", experiment, "stabilization | eta0-transience | us-contrast");
    sim->add_option("--omega", sc.omega, "omega as pre|per");
    sim->add_option("--beta", beta, "tail exponent");
    sim->add_option("--A", A, "k_n = A floor(log2 n)");
    sim->add_option("--nmax", nmax, "mixture truncation");
    sim->add_option("--steps", steps, "walk length T");
    sim->add_option("--trials", trials, "number of trajectories");
    sim->add_option("--eps", eps, "epsilon in the n^{1+eps} weights");
    sim->add_option("--seed", sc.seed, "base seed");
    sim->add_option("--mode", mode, "desk | faithful");
    sim->add_option("--out", sc.out_dir, "output directory");

    // verify
    auto* ver = app.add_subcommand("verify", "invariant suites");
    std::string suite = "all";
    ver->add_option("--suite", suite, "relations | gray-vs-bfs | cube-independence | ckv-portrait | all");

    // export-graph
    auto* ex = app.add_subcommand("export-graph", "Schreier ball as DOT");
    std::string ex_omega = "|012", ex_out = "schreier.dot";
    uint64_t ex_radius = 7;
    ex->add_option("--omega", ex_omega, "omega as pre|per");
    ex->add_option("--radius", ex_radius, "Gray-index radius");
    ex->add_option("--out", ex_out, "DOT output path");

    // ball-growth
    auto* bg = app.add_subcommand("ball-growth", "word-metric ball sizes by BFS");
    std::string bg_omega = "|012", bg_out;
    int bg_radius = 8;
    bg->add_option("--omega", bg_omega, "omega as pre|per");
    bg->add_option("--radius", bg_radius, "max radius (cap 12)");
    bg->add_option("--out", bg_out, "CSV output path");

    // tail-report
    auto* tl = app.add_subcommand("tail-report", "moment/tail post-processing");
    std::string tl_omega = "|012", tl_measure = "eta0", tl_out;
    long tl_trials = 20000, tl_nmax = 18, tl_A = 6;
    double tl_beta = 0.9, tl_eps = 0.1;
    uint64_t tl_seed = kDefaultSeed;
    tl->add_option("--omega", tl_omega, "omega as pre|per");
    tl->add_option("--measure", tl_measure, "eta0 | eta2 | mu-beta");
    tl->add_option("--trials", tl_trials, "samples");
    tl->add_option("--nmax", tl_nmax, "mixture truncation");
    tl->add_option("--A", tl_A, "k_n parameter for mu-beta");
    tl->add_option("--beta", tl_beta, "beta for mu-beta");
    tl->add_option("--eps", tl_eps, "epsilon weight parameter");
    tl->add_option("--seed", tl_seed, "seed");
    tl->add_option("--out", tl_out, "CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    try {
        if (!config_path.empty()) {
            json j = load_config_file(config_path);
            if (j.contains("omega")) sc.omega = j["omega"].get<std::string>();
            if (j.contains("beta")) beta = j["beta"].get<double>();
            if (j.contains("A")) A = j["A"].get<long>();
            if (j.contains("nmax")) nmax = j["nmax"].get<long>();
            if (j.contains("steps")) steps = j["steps"].get<long>();
            if (j.contains("trials")) trials = j["trials"].get<long>();
            if (j.contains("seed")) sc.seed = j["seed"].get<uint64_t>();
            if (j.contains("mode")) mode = j["mode"].get<std::string>();
            if (j.contains("experiment")) experiment = j["experiment"].get<std::string>();
            if (j.contains("out")) sc.out_dir = j["out"].get<std::string>();
        }
        if (an->parsed()) return cmd_analyze(an_omega, an_D, an_out);
        if (sim->parsed()) return cmd_simulate(sc, experiment, beta, A, nmax, steps, trials, eps, mode);
        if (ver->parsed()) return cmd_verify(suite);
        if (ex->parsed()) {
            Grig G(OmegaString::parse(ex_omega));
            std::ofstream os(ex_out);
            export_graph_dot(G, ex_radius, os);
            std::cout << "wrote " << ex_out << "\n";
            return 0;
        }
        if (bg->parsed()) {
            Grig G(OmegaString::parse(bg_omega));
            GrowthTable t = ball_growth(G, bg_radius);
            std::string csv = "n,v_n\n";
            for (size_t i = 0; i < t.radii.size(); ++i)
                csv += std::to_string(t.radii[i]) + "," + std::to_string(t.ball_sizes[i]) + "\n";
            if (!bg_out.empty()) write_text(bg_out, csv);
            std::cout << csv;
            return 0;
        }
        if (tl->parsed()) {
            Grig G(OmegaString::parse(tl_omega));
            std::vector<long> grid{2, 4, 8, 16, 32, 64, 128};
            TailReport rep;
            if (tl_measure == "eta0") {
                rep = tail_report(build_eta0(G, tl_eps, tl_nmax), tl_trials, tl_seed, grid);
            } else if (tl_measure == "eta2") {
                rep = tail_report(build_eta2(G, tl_eps, tl_nmax), tl_trials, tl_seed, grid);
            } else if (tl_measure == "mu-beta") {
                auto norm = normalize_frD(G.omega(), 3);
                if (!norm) throw std::runtime_error("omega fails Fr(3)");
                Grig Gs(norm->omega);
                MuBetaBuild b = build_mu_beta(Gs, norm->report, MuBetaParams{tl_beta, tl_A, tl_nmax, false});
                rep = tail_report(b.sampler, tl_trials, tl_seed, grid);
            } else {
                throw std::runtime_error("unknown measure " + tl_measure);
            }
            std::string csv = "n,rho_n,phi_rho,R_n\n";
            for (size_t i = 0; i < rep.n_grid.size(); ++i)
                csv += std::to_string(rep.n_grid[i]) + "," + std::to_string(rep.rho_n[i]) + "," +
                       std::to_string(rep.phi_rho[i]) + "," + std::to_string(rep.R_n[i]) + "\n";
            if (!tl_out.empty()) write_text(tl_out, csv);
            std::cout << csv;
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
