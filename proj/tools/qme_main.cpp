// qme_main.cpp — command-line front end: equivalence checks, ensembles,
// certification, single trajectories, and coefficient-scaling reports.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qme/certify.hpp"
#include "qme/dynamics.hpp"
#include "qme/ensemble.hpp"
#include "qme/generator.hpp"
#include "qme/rng.hpp"

using namespace qme;

namespace {

constexpr const char* kVersion = "qme 1.0.0 (config schema 1)";

struct BathFlags {
    std::string statistics = "fermionic";
    double beta = 5.0;
    double mu = 0.0;
    double omega_c = 10.0;
    double j_int = 0.2;
    bool include_eta = false;

    void attach(CLI::App* app) {
        app->add_option("--statistics", statistics, "fermionic|bosonic")
            ->check(CLI::IsMember({"fermionic", "bosonic"}));
        app->add_option("--beta", beta, "inverse temperature");
        app->add_option("--mu", mu, "chemical potential");
        app->add_option("--omega-c", omega_c, "ohmic cutoff");
        app->add_option("--j-int", j_int, "system-bath coupling");
        app->add_flag("--include-eta", include_eta, "evaluate Lamb-shift integrals");
    }
    SpectralModel model() const {
        return SpectralModel::ohmic(statistics_from_string(statistics), beta, mu, j_int, omega_c,
                                    include_eta);
    }
};

struct ModelFlags {
    std::string family = "gue";
    int size = 16;
    double J = 1.0;
    double W = 16.0;
    double onsite = 0.0;
    bool open_boundaries = false;

    void attach(CLI::App* app) {
        app->add_option("--model", family, "gue|anderson3d|chain")
            ->check(CLI::IsMember({"gue", "anderson3d", "chain"}));
        app->add_option("--size", size, "N for gue/chain, L for anderson3d");
        app->add_option("--J", J, "hopping / GUE scale");
        app->add_option("--W", W, "anderson disorder strength");
        app->add_option("--onsite", onsite, "chain on-site energy");
        app->add_flag("--open-boundaries", open_boundaries, "anderson: open boundaries");
    }
    QuadraticHamiltonian build(std::uint64_t seed) const {
        if (family == "gue") return build_gue(size, J, seed);
        if (family == "anderson3d") return build_anderson3d(size, W, J, seed, !open_boundaries);
        return build_chain(size, J, onsite);
    }
};

CouplingPattern parse_pattern(const std::string& text, int n, std::uint64_t seed) {
    if (text == "uniform") return CouplingPattern::uniform(n);
    if (text == "random") return CouplingPattern::random(n, seed);
    if (text.rfind("sublattice:", 0) == 0)
        return CouplingPattern::sublattice(n, std::stoi(text.substr(11)));
    throw CLI::ValidationError("--pattern", "expected uniform|sublattice:p|random");
}

int cmd_verify_equivalence(const ModelFlags& model, const BathFlags& bath, int samples,
                           double tol, const std::string& pattern_text, std::uint64_t seed) {
    const SpectralModel sm = bath.model();
    double worst = 0.0;
    bool any_verdict = false, all_pass = true;
    std::cout << "instance  n   pattern      residual/scale\n";
    for (int i = 0; i < samples; ++i) {
        const QuadraticHamiltonian ham = model.build(seed + i);
        const CouplingPattern pat = parse_pattern(pattern_text, ham.n(), seed + i);
        const auto red = build_redfield_linear(ham, sm, pat);
        const auto dav = build_davies_linear(ham, sm, pat);
        const double scale = std::max(dav.coefficient_scale(), 1e-300);
        const double r = coefficient_deviation(red, dav) / scale;
        worst = std::max(worst, r);
        std::ostringstream line;
        line.precision(3);
        line << std::scientific;
        line << i << "  " << ham.n() << "  " << pattern_text << "  " << r;
        if (pat.is_uniform(1e-15)) {
            any_verdict = true;
            const bool ok = r <= tol;
            all_pass = all_pass && ok;
            line << (ok ? "  pass" : "  FAIL");
        } else {
            line << "  (info)";
        }
        std::cout << line.str() << '\n';
    }
    std::cout << "max residual/scale: " << worst << '\n';
    if (!any_verdict) return 0;
    return all_pass ? 0 : 1;
}

int cmd_certify(const std::optional<std::string>& generator_path, const ModelFlags& model,
                const BathFlags& bath, const std::string& coupling, std::uint64_t seed,
                const std::optional<std::string>& json_out) {
    GeneratorCoefficients g;
    if (generator_path) {
        g = load_generator_json(*generator_path);
    } else {
        const QuadraticHamiltonian ham = model.build(seed);
        const SpectralModel sm = bath.model();
        if (coupling == "dephasing") {
            g = build_davies_dephasing(ham, sm);
        } else if (coupling.rfind("redfield-dephasing", 0) == 0) {
            g = build_redfield_dephasing(ham, sm);
        } else {
            const CouplingPattern pat = parse_pattern(coupling, ham.n(), seed);
            g = build_redfield_linear(ham, sm, pat);
        }
    }
    const CertificationReport rep = certify_generator(g);
    rep.print_table(std::cout);
    if (json_out) rep.write_json(*json_out);
    return rep.all_passed() ? 0 : 1;
}

int cmd_evolve(const ModelFlags& model, const BathFlags& bath, const std::string& coupling,
               const std::string& kind, double t_max, int points, const std::string& observable,
               const std::string& out, std::uint64_t seed) {
    const QuadraticHamiltonian ham = model.build(seed);
    const SpectralModel sm = bath.model();
    GeneratorCoefficients g;
    Matrix rho0;
    const int n = ham.n();
    if (coupling == "dephasing") {
        g = kind == "redfield" ? build_redfield_dephasing(ham, sm)
                               : build_davies_dephasing(ham, sm);
        rho0 = Matrix::Zero(n, n);
        rho0(0, 0) = 1.0;
    } else {
        const CouplingPattern pat = parse_pattern(coupling, n, seed);
        g = kind == "redfield" ? build_redfield_linear(ham, sm, pat)
                               : build_davies_linear(ham, sm, pat);
        Matrix site = Matrix::Zero(n, n);
        site(0, 0) = 1.0;
        rho0 = ham.to_eigenbasis(site);
    }
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) grid[i] = t_max * i / (points - 1);
    const Trajectory traj = evolve(g, rho0, grid);
    export_trajectory(traj, g, observable, out, out + ".json");
    std::cout << "wrote " << out << " (" << points << " points, step " << traj.step << ")\n";
    return 0;
}

int cmd_eth(const std::string& family, const std::string& sizes_text, int samples,
            std::uint64_t seed, double J, double W) {
    std::vector<int> sizes;
    std::istringstream ss(sizes_text);
    for (std::string tok; std::getline(ss, tok, ',');) sizes.push_back(std::stoi(tok));
    const auto rep = eth_scaling_report(family == "gue" ? EthFamily::gue : EthFamily::anderson,
                                        sizes, samples, seed, J, W);
    std::cout << "size  n     secular       non-secular   ratio\n";
    for (const auto& row : rep.rows) {
        std::ostringstream line;
        line.precision(4);
        line << std::scientific << row.size << "  " << row.n << "  " << row.secular << "  "
             << row.nonsecular << "  " << row.nonsecular / row.secular;
        std::cout << line.str() << '\n';
    }
    if (rep.has_slopes)
        std::cout << "log-log slopes: secular " << rep.secular_slope << ", non-secular "
                  << rep.nonsecular_slope << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Redfield/Davies generators for quadratic lattices with site-local baths"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(0, 1);
    app.fallthrough(); // global --seed may follow a subcommand

    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "base seed for every subcommand")->capture_default_str();

    // verify-equivalence
    auto* veq = app.add_subcommand("verify-equivalence",
                                   "Redfield-vs-Davies coefficient residuals on random instances");
    ModelFlags veq_model;
    BathFlags veq_bath;
    veq_model.attach(veq);
    veq_bath.attach(veq);
    int veq_samples = 50;
    double veq_tol = 1e-12;
    std::string veq_pattern = "uniform";
    veq->add_option("--samples", veq_samples, "number of random instances");
    veq->add_option("--tol", veq_tol, "pass threshold on residual/scale");
    veq->add_option("--pattern", veq_pattern, "uniform|sublattice:p|random");

    // ensemble
    auto* ens = app.add_subcommand("ensemble", "seeded disorder ensemble from a config file");
    std::string ens_config, ens_out = "ensemble_out";
    int ens_threads = 0;
    ens->add_option("--config", ens_config, "config JSON path")->required();
    ens->add_option("--out", ens_out, "output directory");
    ens->add_option("--threads", ens_threads, "worker threads (0 = QME_THREADS or hardware)");

    // certify
    auto* cert = app.add_subcommand("certify", "thermodynamic-consistency certification");
    ModelFlags cert_model;
    BathFlags cert_bath;
    cert_model.attach(cert);
    cert_bath.attach(cert);
    std::string cert_generator, cert_coupling = "uniform", cert_json;
    cert->add_option("--generator", cert_generator, "generator JSON produced by export");
    cert->add_option("--coupling", cert_coupling,
                     "uniform|sublattice:p|random|dephasing|redfield-dephasing");
    cert->add_option("--json", cert_json, "write the report as JSON here");

    // evolve
    auto* evo = app.add_subcommand("evolve", "single trajectory to CSV");
    ModelFlags evo_model;
    BathFlags evo_bath;
    evo_model.attach(evo);
    evo_bath.attach(evo);
    std::string evo_coupling = "dephasing", evo_kind = "redfield", evo_obs = "occupations",
                evo_out = "trajectory.csv";
    double evo_tmax = 40.0;
    int evo_points = 81;
    evo->add_option("--coupling", evo_coupling, "uniform|sublattice:p|random|dephasing");
    evo->add_option("--kind", evo_kind, "redfield|davies")
        ->check(CLI::IsMember({"redfield", "davies"}));
    evo->add_option("--observable", evo_obs, "occupations|full")
        ->check(CLI::IsMember({"occupations", "full"}));
    evo->add_option("--t-max", evo_tmax, "final time");
    evo->add_option("--points", evo_points, "grid points");
    evo->add_option("--out", evo_out, "output CSV path");

    // eth-scaling
    auto* eth = app.add_subcommand("eth-scaling", "secular/non-secular coefficient scaling");
    std::string eth_family = "gue", eth_sizes = "32,64,128";
    int eth_samples = 50;
    double eth_J = 1.0, eth_W = 16.0;
    eth->add_option("--family", eth_family, "gue|anderson")
        ->check(CLI::IsMember({"gue", "anderson"}));
    eth->add_option("--sizes", eth_sizes, "comma-separated sizes (N or L)");
    eth->add_option("--samples", eth_samples, "disorder samples per size");
    eth->add_option("--J", eth_J, "hopping / GUE scale");
    eth->add_option("--W", eth_W, "anderson disorder strength");

    if (argc <= 1) {
        std::cout << app.help() << '\n';
        return 2;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (veq->parsed())
            return cmd_verify_equivalence(veq_model, veq_bath, veq_samples, veq_tol, veq_pattern,
                                          seed);
        if (ens->parsed()) {
            if (ens_threads == 0)
                if (const char* env = std::getenv("QME_THREADS")) ens_threads = std::atoi(env);
            const auto cfg = EnsembleConfig::from_json_file(ens_config);
            const auto res = run_ensemble(cfg, ens_threads, &std::cerr);
            emit_report(res, ens_out);
            std::cout << "wrote " << ens_out << "/{curves.csv,summary.csv,config.json,*.svg}\n";
            return 0;
        }
        if (cert->parsed())
            return cmd_certify(cert_generator.empty() ? std::nullopt
                                                      : std::make_optional(cert_generator),
                               cert_model, cert_bath, cert_coupling, seed,
                               cert_json.empty() ? std::nullopt : std::make_optional(cert_json));
        if (evo->parsed())
            return cmd_evolve(evo_model, evo_bath, evo_coupling, evo_kind, evo_tmax, evo_points,
                              evo_obs, evo_out, seed);
        if (eth->parsed())
            return cmd_eth(eth_family, eth_sizes, eth_samples, seed, eth_J, eth_W);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::cout << app.help() << '\n';
    return 2;
}
