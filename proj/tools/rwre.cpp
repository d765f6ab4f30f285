// Experiment orchestration CLI. Every numeric output is a pure function of
// the configuration (master seed included); worker threads only affect
// wall-clock. Exit codes: 0 success, 2 config validation, 3 numerical
// failure with a partial report persisted.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rwre/experiments.hpp"
#include "rwre/invariant.hpp"
#include "rwre/io.hpp"
#include "rwre/kernels.hpp"
#include "rwre/montecarlo.hpp"
#include "rwre/parallel.hpp"
#include "rwre/rng.hpp"
#include "rwre/testfn.hpp"
#include "rwre/version.hpp"

namespace fs = std::filesystem;
using rwre::io::ordered_json;

namespace {

struct CommonOpts {
    int dim = 0;
    double kappa = 0.0;
    std::string law = "clipped-simplex";
    std::uint64_t seed = 0;
    int threads_opt = 0;
    std::string outdir = ".";
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--dim", c.dim, "lattice dimension d >= 2")->required();
    cmd->add_option("--kappa", c.kappa, "ellipticity constant in (0, 1/(2d)]")->required();
    cmd->add_option("--law", c.law, "single-site law: clipped-simplex|two-point|constant");
    cmd->add_option("--seed", c.seed, "master seed")->required();
    cmd->add_option("--threads", c.threads_opt, "worker threads (RWRE_THREADS overrides)");
    cmd->add_option("--out", c.outdir, "output directory");
    cmd->add_option("--format", c.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
}

rwre::EnvironmentLaw make_law(const CommonOpts& c) {
    rwre::EnvironmentLaw law;
    law.dim = c.dim;
    law.kappa = c.kappa;
    law.kind = rwre::law_from_name(c.law);
    law.master_seed = c.seed;
    law.validate();
    return law;
}

ordered_json config_echo(const CommonOpts& c) {
    ordered_json j;
    j["dim"] = c.dim;
    j["kappa"] = c.kappa;
    j["law"] = c.law;
    j["seed"] = c.seed;
    j["format"] = c.format;
    return j;
}

rwre::Site parse_site(const std::string& s, int d) {
    rwre::Site x;
    std::istringstream ss(s);
    std::string tok;
    for (int i = 0; i < d; ++i) {
        if (!std::getline(ss, tok, ','))
            throw rwre::ConfigError("site needs " + std::to_string(d) + " coordinates");
        x[i] = std::stoi(tok);
    }
    return x;
}

void write_csv(const fs::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << header << "\r\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            out << rwre::io::format_g17(r[i]) << (i + 1 < r.size() ? "," : "");
        out << "\r\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random walks in balanced random environments: simulation and verification lab"};
    app.require_subcommand(1);

    CommonOpts c;

    auto* cmd_env = app.add_subcommand("env-sample", "export an environment snapshot and a window of weights");
    int window = 0;
    add_common(cmd_env, c);
    cmd_env->add_option("--window", window, "export weights on [-W,W]^d")->required();

    auto* cmd_green = app.add_subcommand("green", "ball Green function field");
    double gR = 0;
    double gtol = 1e-12;
    double grelax = 1.0;
    std::string gsource;
    add_common(cmd_green, c);
    cmd_green->add_option("--R", gR, "ball radius")->required();
    cmd_green->add_option("--tol", gtol, "solver residual tolerance");
    cmd_green->add_option("--relax", grelax, "SOR relaxation in (0,2]");
    cmd_green->add_option("--source", gsource, "source site 'a,b,...' (default origin)");

    auto* cmd_kernel = app.add_subcommand("kernel", "heat kernel slice");
    double kt = -1;
    int kn = -1;
    double ktol = 1e-10;
    std::string kx0;
    add_common(cmd_kernel, c);
    cmd_kernel->add_option("--t", kt, "continuous time");
    cmd_kernel->add_option("--n", kn, "discrete steps");
    cmd_kernel->add_option("--x0", kx0, "start site (default origin)");
    cmd_kernel->add_option("--tol", ktol, "mass-deficit tolerance");

    auto* cmd_rho = app.add_subcommand("rho", "torus invariant measure and effective coefficients");
    int rL = 0;
    double rtol = 1e-12;
    add_common(cmd_rho, c);
    cmd_rho->add_option("--L", rL, "torus side")->required();
    cmd_rho->add_option("--tol", rtol, "invariance residual tolerance");
    long rtail = 0;
    cmd_rho->add_option("--tail-n", rtail, "also sample rho(0) across this many environments");

    auto* cmd_homog = app.add_subcommand("homog", "homogenization error vs R and rate fit");
    std::string hcase = "B";
    std::vector<double> hR;
    int hseeds = 1;
    double htol = 1e-11;
    double hrelax = 1.5;
    add_common(cmd_homog, c);
    cmd_homog->add_option("--case", hcase, "A|B|C")->required();
    cmd_homog->add_option("--R", hR, "radius list")->required()->delimiter(',');
    cmd_homog->add_option("--seeds", hseeds, "environments per radius")->required();
    cmd_homog->add_option("--tol", htol, "solver tolerance");
    cmd_homog->add_option("--relax", hrelax, "SOR relaxation");

    auto* cmd_testfn = app.add_subcommand("testfn", "test-function lemma verifiers");
    std::string which;
    double tf_delta = 0.2, tf_R = 0, tf_R0 = 0, tf_alpha = 0.1, tf_gamma = 4.0;
    int tf_nenv = 100;
    std::vector<double> tf_rgrid;
    add_common(cmd_testfn, c);
    cmd_testfn->add_option("--which", which, "radial|exponential|eta|assembly|comparison")->required();
    cmd_testfn->add_option("--delta", tf_delta, "profile exponent delta");
    cmd_testfn->add_option("--R", tf_R, "outer radius");
    cmd_testfn->add_option("--R0", tf_R0, "inner (homogenization) radius");
    cmd_testfn->add_option("--alpha", tf_alpha, "exponential rate for h3");
    cmd_testfn->add_option("--gamma", tf_gamma, "exponential rate for ell3");
    cmd_testfn->add_option("--n-env", tf_nenv, "environment samples");
    cmd_testfn->add_option("--r-grid", tf_rgrid, "radius grid")->delimiter(',');

    auto* cmd_decay = app.add_subcommand("decay", "semigroup variance/L1 decay curve");
    int dL = 0;
    long dnenv = 0;
    std::vector<double> dt;
    double dktol = 1e-6;
    add_common(cmd_decay, c);
    cmd_decay->add_option("--L", dL, "torus side for rho weights")->required();
    cmd_decay->add_option("--n-env", dnenv, "environment samples")->required();
    cmd_decay->add_option("--t", dt, "time grid")->required()->delimiter(',');
    cmd_decay->add_option("--ktol", dktol, "kernel tolerance");

    auto* cmd_fclt = app.add_subcommand("fclt", "environment-process CLT samples and KS test");
    double ft = 0;
    long freps = 0;
    int fL = 0;
    long fest = 100;
    add_common(cmd_fclt, c);
    cmd_fclt->add_option("--t", ft, "integration time")->required();
    cmd_fclt->add_option("--reps", freps, "replicates")->required();
    cmd_fclt->add_option("--L", fL, "torus side for the centering estimate")->required();
    cmd_fclt->add_option("--n-est", fest, "tori for the centering estimate");

    auto* cmd_corr = app.add_subcommand("corrector", "corrector growth or stationary corrector");
    std::string cmode;
    std::vector<double> cR;
    int cL = 0;
    std::vector<double> cT;
    double cqtol = 1e-8;
    add_common(cmd_corr, c);
    cmd_corr->add_option("--mode", cmode, "growth|stationary")->required();
    cmd_corr->add_option("--R", cR, "radius list (growth)")->delimiter(',');
    cmd_corr->add_option("--L", cL, "torus side");
    cmd_corr->add_option("--T", cT, "time list (stationary)")->delimiter(',');
    cmd_corr->add_option("--quad-tol", cqtol, "integration tolerance");

    auto* cmd_envl = app.add_subcommand("envelope", "Green envelope statistics across seeds");
    std::vector<double> eR;
    int eseeds = 0;
    double etol = 1e-11;
    add_common(cmd_envl, c);
    cmd_envl->add_option("--R", eR, "radius list")->required()->delimiter(',');
    cmd_envl->add_option("--seeds", eseeds, "number of seeded environments")->required();
    cmd_envl->add_option("--tol", etol, "solver tolerance");

    auto* cmd_plot = app.add_subcommand("plot", "emit a gnuplot script for an existing curve CSV");
    std::string pcsv, pkind;
    int pdim = 2;
    cmd_plot->add_option("--csv", pcsv, "curve csv")->required();
    cmd_plot->add_option("--kind", pkind, "decay|rate|envelope-hist")->required();
    cmd_plot->add_option("--dim", pdim, "dimension for guide lines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const auto t_start = std::chrono::steady_clock::now();
    fs::path outdir;
    ordered_json report;
    try {
        if (cmd_plot->parsed()) {
            rwre::io::emit_plot_script(pcsv, pkind, pcsv + ".gp", pdim);
            std::cout << "wrote " << pcsv << ".gp\n";
            return 0;
        }

        if (c.threads_opt > 0 && std::getenv("RWRE_THREADS") == nullptr)
            rwre::set_threads(c.threads_opt);
        outdir = c.outdir;
        fs::create_directories(outdir);
        const rwre::EnvironmentLaw law = make_law(c);
        const rwre::Environment env(law);
        report["tool"] = rwre::VERSION;
        report["config"] = config_echo(c);

        if (cmd_env->parsed()) {
            report["config"]["window"] = window;
            rwre::io::write_json(rwre::io::environment_to_json(env), outdir / "env.json");
            std::ofstream out(outdir / "weights.csv");
            for (int i = 0; i < c.dim; ++i) out << "coord_" << (i + 1) << ",";
            for (int i = 0; i < c.dim; ++i) out << "w_" << (i + 1) << (i + 1 < c.dim ? "," : "");
            out << "\r\n";
            rwre::Site lo, hi;
            for (int i = 0; i < c.dim; ++i) {
                lo[i] = -window;
                hi[i] = window;
            }
            auto dom = rwre::LatticeDomain::box(lo, hi, c.dim);
            for (const rwre::Site& x : dom->sites()) {
                const rwre::DiagWeights w = env.site_weights(x);
                for (int i = 0; i < c.dim; ++i) out << x[i] << ",";
                for (int i = 0; i < c.dim; ++i)
                    out << rwre::io::format_g17(w[i]) << (i + 1 < c.dim ? "," : "");
                out << "\r\n";
            }
            report["sites"] = dom->sites().size();
            rwre::io::write_json(report, outdir / "report.json");
        } else if (cmd_green->parsed()) {
            report["config"]["R"] = gR;
            report["config"]["tol"] = gtol;
            rwre::SolverConfig cfg;
            cfg.tol = gtol;
            cfg.relaxation = grelax;
            std::vector<rwre::Site> src = {rwre::Site{}};
            if (!gsource.empty()) src = {parse_site(gsource, c.dim)};
            rwre::SolveStats st;
            const rwre::Field G = rwre::green_ball(env, gR, src, cfg, &st);
            rwre::io::write_field_csv(G, outdir / "green.csv");
            report["residual"] = st.residual;
            report["iterations"] = st.iterations;
            report["G_at_origin"] = G.at(rwre::Site{});
            rwre::io::write_json(report, outdir / "report.json");
        } else if (cmd_kernel->parsed()) {
            rwre::Site x0{};
            if (!kx0.empty()) x0 = parse_site(kx0, c.dim);
            rwre::KernelSlice ks;
            if (kn >= 0) {
                report["config"]["n"] = kn;
                ks = rwre::heat_kernel_discrete(env, x0, kn);
            } else if (kt >= 0) {
                report["config"]["t"] = kt;
                report["config"]["tol"] = ktol;
                ks = rwre::heat_kernel_continuous(env, x0, kt, ktol);
            } else {
                throw rwre::ConfigError("kernel: give --t or --n");
            }
            rwre::io::write_kernel_slice(ks, outdir / "kernel.csv", outdir / "kernel.json", c.seed);
            report["deficit"] = ks.deficit;
            rwre::io::write_json(report, outdir / "report.json");
        } else if (cmd_rho->parsed()) {
            report["config"]["L"] = rL;
            report["config"]["tol"] = rtol;
            const rwre::InvariantMeasure inv = rwre::torus_invariant_measure(env, rL, rtol);
            rwre::io::write_field_csv(inv.field, outdir / "rho.csv");
            const rwre::EffectiveData eff = rwre::effective_matrix(env, inv);
            report["residual"] = inv.residual;
            report["rho_at_origin"] = inv.rho(rwre::Site{});
            ordered_json ab = ordered_json::array();
            for (int i = 0; i < c.dim; ++i) ab.push_back(eff.a_bar[static_cast<std::size_t>(i)]);
            report["a_bar"] = ab;
            report["psi_bar"] = eff.psi_bar;
            if (rtail > 0) {
                report["config"]["tail_n"] = rtail;
                const auto xs = rwre::experiments::rho_origin_samples(law, rtail, rL, c.seed);
                std::vector<std::vector<double>> rows;
                const double n = static_cast<double>(xs.size());
                for (std::size_t k = 0; k < xs.size(); ++k)
                    rows.push_back({xs[k], 1.0 / xs[xs.size() - 1 - k],
                                    (n - static_cast<double>(k)) / n});
                write_csv(outdir / "rho_tail.csv", "rho_sorted,inv_rho_sorted,survival", rows);
            }
            rwre::io::write_json(report, outdir / "report.json");
        } else if (cmd_homog->parsed()) {
            report["config"]["case"] = hcase;
            report["config"]["seeds"] = hseeds;
            rwre::experiments::HomogCase hc;
            if (hcase == "A")
                hc = rwre::experiments::HomogCase::A;
            else if (hcase == "B")
                hc = rwre::experiments::HomogCase::B;
            else if (hcase == "C")
                hc = rwre::experiments::HomogCase::C;
            else
                throw rwre::ConfigError("homog: case must be A, B or C");
            rwre::SolverConfig cfg;
            cfg.tol = htol;
            cfg.relaxation = hrelax;
            std::vector<std::vector<double>> rows;
            std::vector<std::pair<double, double>> pairs;
            for (double R : hR) {
                double acc = 0.0, mx = 0.0;
                for (int s = 0; s < hseeds; ++s) {
                    rwre::EnvironmentLaw lk = law;
                    lk.master_seed = rwre::rng::draw_u64(c.seed, 0xB0, static_cast<std::uint64_t>(s),
                                                         rwre::rng::STREAM_GENERIC);
                    const double e =
                        rwre::experiments::homogenization_error(rwre::Environment(lk), R, hc, cfg);
                    acc += e;
                    mx = std::max(mx, e);
                }
                const double mean = acc / hseeds;
                rows.push_back({R, mean, mx});
                pairs.emplace_back(R, mean);
            }
            write_csv(outdir / "homog.csv", "R,mean_err,max_err", rows);
            const auto fit = rwre::experiments::rate_fit(pairs);
            report["slope"] = fit.slope;
            report["intercept"] = fit.intercept;
            report["fit_residual"] = fit.residual;
            rwre::io::write_json(report, outdir / "report.json");
            rwre::io::emit_plot_script(outdir / "homog.csv", "rate", outdir / "homog.csv.gp", c.dim);
        } else if (cmd_testfn->parsed()) {
            report["config"]["which"] = which;
            rwre::testfn::VerifierConfig vcfg;
            auto envs_for = [&](int n) {
                std::vector<rwre::Environment> envs;
                for (int k = 0; k < n; ++k) {
                    rwre::EnvironmentLaw lk = law;
                    lk.master_seed = rwre::rng::draw_u64(c.seed, 0x7F, static_cast<std::uint64_t>(k),
                                                         rwre::rng::STREAM_GENERIC);
                    envs.emplace_back(lk);
                }
                return envs;
            };
            if (which == "radial") {
                if (tf_rgrid.empty())
                    for (double r = 10; r <= 100; r += 5) tf_rgrid.push_back(r);
                const auto rep = rwre::testfn::verify_radial_lemma(tf_delta, c.dim, tf_rgrid, vcfg);
                report["delta"] = tf_delta;
                report["all_pass"] = rep.all_pass;
                report["threshold_radius"] = rep.threshold_radius;
                ordered_json checks = ordered_json::array();
                for (const auto& ch : rep.checks) {
                    ordered_json cj;
                    cj["name"] = ch.name;
                    cj["holds_on_grid"] = ch.holds_on_grid;
                    cj["threshold_radius"] = ch.threshold_radius;
                    cj["found_lo"] = ch.found_lo;
                    cj["found_hi"] = ch.found_hi;
                    cj["witness_radius"] = ch.witness_radius;
                    checks.push_back(cj);
                }
                report["checks"] = checks;
            } else if (which == "exponential") {
                const auto rep = rwre::testfn::verify_exponential_lemma(envs_for(tf_nenv), tf_R, vcfg);
                report["R"] = tf_R;
                report["alpha_found"] = rep.alpha_found ? ordered_json(*rep.alpha_found) : ordered_json();
                report["A_found"] = rep.A_found ? ordered_json(*rep.A_found) : ordered_json();
                report["A3_found"] = rep.A3_found ? ordered_json(*rep.A3_found) : ordered_json();
                report["margin1"] = rep.margin1;
                report["margin2"] = rep.margin2;
                report["margin3"] = rep.margin3;
                report["origin_identity"] = rep.origin_identity;
                report["witness"] = rep.witness;
            } else if (which == "eta") {
                const auto rep = rwre::testfn::verify_eta_lemma(envs_for(tf_nenv), c.kappa, vcfg);
                report["theta"] = rep.theta;
                report["C0_found"] = rep.C0_found ? ordered_json(*rep.C0_found) : ordered_json();
                report["worst_outside"] = rep.worst_outside;
                report["worst_inside"] = rep.worst_inside;
                report["check_radius"] = rep.check_radius;
                report["witness"] = rep.witness;
            } else if (which == "assembly") {
                const double theta = 1.0 / (4.0 * c.kappa);
                const auto ha = rwre::testfn::assemble_h(env, tf_R, tf_R0, tf_alpha, tf_delta);
                const auto la = rwre::testfn::assemble_ell(env, tf_R, tf_R0, tf_gamma, theta, tf_delta);
                report["h_interface_rhalf"] = ha.interface_rhalf;
                report["h_interface_r0"] = ha.interface_r0;
                report["h_generator_identity"] = ha.generator_identity;
                report["ell_interface_rhalf"] = la.interface_rhalf;
                report["ell_interface_r0"] = la.interface_r0;
                report["ell_generator_identity"] = la.generator_identity;
                rwre::io::write_field_csv(ha.h, outdir / "h.csv");
                rwre::io::write_field_csv(la.ell, outdir / "ell.csv");
            } else if (which == "comparison") {
                const double theta = 1.0 / (4.0 * c.kappa);
                const auto rep = rwre::testfn::verify_comparison(env, tf_R, tf_R0, tf_delta, theta,
                                                                 theta * theta, vcfg);
                report["alpha_found"] = rep.alpha_found ? ordered_json(*rep.alpha_found) : ordered_json();
                report["min_margin_h"] = rep.min_margin_h;
                report["gamma_used"] = rep.gamma_used;
                report["c_fit"] = rep.c_fit;
                report["witness"] = rep.witness;
            } else {
                throw rwre::ConfigError("testfn: unknown verifier '" + which + "'");
            }
            rwre::io::write_json(report, outdir / "report.json");
        } else if (cmd_decay->parsed()) {
            report["config"]["L"] = dL;
            report["config"]["n_env"] = dnenv;
            report["config"]["t"] = dt;
            const auto zeta = rwre::Observable::weight_component(0);
            const auto curve = rwre::experiments::semigroup_decay(law, zeta, dt, dnenv, dL, c.seed, dktol);
            std::vector<std::vector<double>> rows;
            for (std::size_t j = 0; j < curve.t.size(); ++j)
                rows.push_back({curve.t[j], curve.var_q[j], curve.var_q_stderr[j], curve.l1[j],
                                curve.l1_stderr[j], static_cast<double>(curve.n_env)});
            write_csv(outdir / "decay.csv", "t,var_q,var_q_stderr,l1,l1_stderr,n", rows);
            report["var_slope"] = curve.var_slope;
            report["l1_slope"] = curve.l1_slope;
            report["var_slope_log1pt"] = curve.var_slope_1pt;
            report["l1_slope_log1pt"] = curve.l1_slope_1pt;
            report["eq_zeta"] = curve.eq_zeta;
            rwre::io::write_json(report, outdir / "report.json");
            rwre::io::emit_plot_script(outdir / "decay.csv", "decay", outdir / "decay.csv.gp", c.dim);
        } else if (cmd_fclt->parsed()) {
            report["config"]["t"] = ft;
            report["config"]["reps"] = freps;
            report["config"]["L"] = fL;
            const auto zeta = rwre::Observable::weight_component(0);
            double wsum = 0, wz = 0;
            for (long k = 0; k < fest; ++k) {
                rwre::EnvironmentLaw lk = law;
                lk.master_seed = rwre::rng::draw_u64(c.seed, 0xCE, static_cast<std::uint64_t>(k),
                                                     rwre::rng::STREAM_GENERIC);
                const rwre::Environment ek(lk);
                const auto inv = rwre::torus_invariant_measure(ek, fL, 1e-9);
                const auto eff = rwre::effective_matrix(ek, inv);
                wz += inv.rho(rwre::Site{}) * eff.a_bar[0];
                wsum += inv.rho(rwre::Site{});
            }
            const double eqz = wz / wsum;
            const auto res = rwre::fclt_sample(law, zeta, ft, freps, c.seed, eqz);
            std::vector<std::vector<double>> rows;
            for (std::size_t k = 0; k < res.samples.size(); ++k)
                rows.push_back({static_cast<double>(k), res.samples[k]});
            write_csv(outdir / "samples.csv", "replicate,value", rows);
            report["eq_zeta"] = eqz;
            report["ks_statistic"] = res.ks_statistic;
            report["sample_mean"] = res.sample_mean;
            report["sample_sd"] = res.sample_sd;
            rwre::io::write_json(report, outdir / "report.json");
        } else if (cmd_corr->parsed()) {
            report["config"]["mode"] = cmode;
            if (cmode == "growth") {
                if (cR.empty() || cL == 0) throw rwre::ConfigError("corrector growth: need --R and --L");
                const auto eff = rwre::effective_matrix(env, cL, 1e-10);
                const auto growth = rwre::experiments::corrector_growth(env, cR, eff.a_bar);
                std::vector<std::vector<double>> rows;
                for (std::size_t j = 0; j < growth.radii.size(); ++j)
                    rows.push_back({growth.radii[j], growth.max_abs[j]});
                write_csv(outdir / "corrector.csv", "R,max_abs_phi", rows);
                report["fitted_exponent"] = growth.fitted_exponent;
            } else if (cmode == "stationary") {
                if (cT.empty() || cL == 0)
                    throw rwre::ConfigError("corrector stationary: need --T and --L");
                const auto zeta = rwre::Observable::weight_component(0);
                ordered_json runs = ordered_json::array();
                for (double T : cT) {
                    const auto sc = rwre::experiments::stationary_corrector(env, zeta, T, cqtol, cL);
                    ordered_json r;
                    r["T"] = T;
                    r["residual"] = sc.residual;
                    r["residual_global"] = sc.residual_global;
                    runs.push_back(r);
                }
                report["runs"] = runs;
            } else {
                throw rwre::ConfigError("corrector: mode must be growth or stationary");
            }
            rwre::io::write_json(report, outdir / "report.json");
        } else if (cmd_envl->parsed()) {
            report["config"]["seeds"] = eseeds;
            rwre::SolverConfig cfg;
            cfg.tol = etol;
            cfg.relaxation = 1.5;
            std::vector<std::vector<double>> rows;
            for (int s = 0; s < eseeds; ++s) {
                rwre::EnvironmentLaw lk = law;
                lk.master_seed = rwre::rng::draw_u64(c.seed, 0xE1, static_cast<std::uint64_t>(s),
                                                     rwre::rng::STREAM_GENERIC);
                const rwre::Environment ek(lk);
                for (double R : eR) {
                    const rwre::Field G = rwre::green_ball(ek, R, {rwre::Site{}}, cfg);
                    const auto st = rwre::testfn::green_envelope_stats(ek, R, G, c.kappa);
                    rows.push_back({static_cast<double>(s), R, st.H_up, st.H_low, st.ratio_min,
                                    st.ratio_max});
                }
            }
            write_csv(outdir / "envelope.csv", "seed,R,H_up,H_low,ratio_min,ratio_max", rows);
            rwre::io::write_json(report, outdir / "report.json");
            rwre::io::emit_plot_script(outdir / "envelope.csv", "envelope-hist",
                                       outdir / "envelope.csv.gp", c.dim);
        }
    } catch (const rwre::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const rwre::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        if (!report.empty() && !outdir.empty()) {
            report["error"] = e.what();
            try {
                rwre::io::write_json(report, outdir / "report.json");
            } catch (...) {
            }
        }
        return 3;
    }

    const auto dt_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t_start)
                           .count();
    std::cout << "ok (" << dt_ms << " ms)\n";
    return 0;
}
