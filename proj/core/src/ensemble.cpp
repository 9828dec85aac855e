// ensemble.cpp — seeded disorder ensembles comparing Davies vs Redfield

#include "qme/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "qme/rng.hpp"
#include "qme/svg.hpp"

namespace qme {

namespace {

using nlohmann::json;

const char* family_str(EnsembleConfig::Family f) {
    switch (f) {
        case EnsembleConfig::Family::gue: return "gue";
        case EnsembleConfig::Family::anderson3d: return "anderson3d";
        case EnsembleConfig::Family::chain: return "chain";
    }
    return "?";
}

const char* mode_str(EnsembleConfig::CouplingMode m) {
    switch (m) {
        case EnsembleConfig::CouplingMode::linear_uniform: return "linear_uniform";
        case EnsembleConfig::CouplingMode::linear_pattern: return "linear_pattern";
        case EnsembleConfig::CouplingMode::dephasing: return "dephasing";
    }
    return "?";
}

const char* pattern_str(EnsembleConfig::PatternKind p) {
    switch (p) {
        case EnsembleConfig::PatternKind::uniform: return "uniform";
        case EnsembleConfig::PatternKind::sublattice: return "sublattice";
        case EnsembleConfig::PatternKind::random: return "random";
        case EnsembleConfig::PatternKind::explicit_weights: return "explicit";
    }
    return "?";
}

void check_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where,
                std::vector<std::string>& errs) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            errs.push_back(where + ": unknown key '" + it.key() + "'");
    }
}

} // namespace

EnsembleConfig EnsembleConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

EnsembleConfig EnsembleConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }

    std::vector<std::string> errs;
    check_keys(j,
               {"schema_version", "model", "bath", "coupling", "sizes", "samples_per_size",
                "base_seed", "time_grid", "integrator_step", "initial_state"},
               "config", errs);

    EnsembleConfig c;
    auto need = [&](const json& obj, const char* key, const std::string& where) -> const json* {
        if (!obj.contains(key)) {
            errs.push_back(where + ": missing key '" + key + "'");
            return nullptr;
        }
        return &obj.at(key);
    };

    if (const json* v = need(j, "schema_version", "config")) {
        if (v->get<int>() != kConfigSchemaVersion)
            errs.push_back("config: unsupported schema_version (expected " +
                           std::to_string(kConfigSchemaVersion) + ")");
    }

    if (const json* m = need(j, "model", "config")) {
        check_keys(*m, {"family", "J", "W", "onsite", "open_boundaries"}, "model", errs);
        if (const json* f = need(*m, "family", "model")) {
            const std::string s = f->get<std::string>();
            if (s == "gue") c.family = Family::gue;
            else if (s == "anderson3d") c.family = Family::anderson3d;
            else if (s == "chain") c.family = Family::chain;
            else errs.push_back("model.family: unknown value '" + s + "'");
        }
        c.J = m->value("J", 1.0);
        c.W = m->value("W", 0.0);
        c.onsite = m->value("onsite", 0.0);
        c.open_boundaries = m->value("open_boundaries", false);
    }

    if (const json* b = need(j, "bath", "config")) {
        check_keys(*b, {"statistics", "beta", "mu", "omega_c", "j_int", "include_eta"}, "bath",
                   errs);
        if (const json* s = need(*b, "statistics", "bath")) {
            try {
                c.statistics = statistics_from_string(s->get<std::string>());
            } catch (const std::exception& e) {
                errs.push_back(std::string("bath.statistics: ") + e.what());
            }
        }
        if (const json* v = need(*b, "beta", "bath")) c.beta = v->get<double>();
        c.mu = b->value("mu", 0.0);
        if (const json* v = need(*b, "omega_c", "bath")) c.omega_c = v->get<double>();
        if (const json* v = need(*b, "j_int", "bath")) c.j_int = v->get<double>();
        c.include_eta = b->value("include_eta", false);
    }

    if (const json* cp = need(j, "coupling", "config")) {
        check_keys(*cp, {"mode", "pattern", "p", "weights"}, "coupling", errs);
        if (const json* m = need(*cp, "mode", "coupling")) {
            const std::string s = m->get<std::string>();
            if (s == "linear_uniform") c.coupling = CouplingMode::linear_uniform;
            else if (s == "linear_pattern") c.coupling = CouplingMode::linear_pattern;
            else if (s == "dephasing") c.coupling = CouplingMode::dephasing;
            else errs.push_back("coupling.mode: unknown value '" + s + "'");
        }
        const std::string p = cp->value("pattern", "uniform");
        if (p == "uniform") c.pattern = PatternKind::uniform;
        else if (p == "sublattice") c.pattern = PatternKind::sublattice;
        else if (p == "random") c.pattern = PatternKind::random;
        else if (p == "explicit") c.pattern = PatternKind::explicit_weights;
        else errs.push_back("coupling.pattern: unknown value '" + p + "'");
        c.pattern_p = cp->value("p", 2);
        if (cp->contains("weights")) c.pattern_weights = cp->at("weights").get<std::vector<double>>();
    }

    if (const json* v = need(j, "sizes", "config")) c.sizes = v->get<std::vector<int>>();
    if (const json* v = need(j, "samples_per_size", "config")) c.samples_per_size = v->get<int>();
    if (const json* v = need(j, "base_seed", "config")) c.base_seed = v->get<std::uint64_t>();
    if (const json* t = need(j, "time_grid", "config")) {
        check_keys(*t, {"t_max", "n_points"}, "time_grid", errs);
        if (const json* v = need(*t, "t_max", "time_grid")) c.t_max = v->get<double>();
        if (const json* v = need(*t, "n_points", "time_grid")) c.n_points = v->get<int>();
    }
    c.integrator_step = j.value("integrator_step", 0.0);
    c.initial_state = j.value("initial_state", std::string("site_one"));

    for (const auto& e : c.validate()) errs.push_back(e);
    if (!errs.empty()) {
        std::string all = "invalid ensemble config:";
        for (const auto& e : errs) all += "\n  - " + e;
        throw std::invalid_argument(all);
    }
    return c;
}

std::string EnsembleConfig::to_json_text() const {
    json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["model"] = {{"family", family_str(family)},
                  {"J", J},
                  {"W", W},
                  {"onsite", onsite},
                  {"open_boundaries", open_boundaries}};
    j["bath"] = {{"statistics", to_string(statistics)}, {"beta", beta},      {"mu", mu},
                 {"omega_c", omega_c},                  {"j_int", j_int},    {"include_eta", include_eta}};
    json cp = {{"mode", mode_str(coupling)}, {"pattern", pattern_str(pattern)}, {"p", pattern_p}};
    if (!pattern_weights.empty()) cp["weights"] = pattern_weights;
    j["coupling"] = cp;
    j["sizes"] = sizes;
    j["samples_per_size"] = samples_per_size;
    j["base_seed"] = base_seed;
    j["time_grid"] = {{"t_max", t_max}, {"n_points", n_points}};
    j["integrator_step"] = integrator_step;
    j["initial_state"] = initial_state;
    return j.dump(2) + "\n";
}

std::vector<std::string> EnsembleConfig::validate() const {
    std::vector<std::string> errs;
    if (sizes.empty()) errs.push_back("sizes must be nonempty");
    for (int s : sizes) {
        if (family == Family::anderson3d && s < 2) errs.push_back("anderson sizes are L >= 2");
        if (family != Family::anderson3d && s < 1) errs.push_back("sizes must be >= 1");
    }
    if (samples_per_size < 1) errs.push_back("samples_per_size must be >= 1");
    if (!(t_max > 0.0)) errs.push_back("time_grid.t_max must be > 0");
    if (n_points < 2) errs.push_back("time_grid.n_points must be >= 2");
    if (!(beta > 0.0)) errs.push_back("bath.beta must be > 0");
    if (!(omega_c > 0.0)) errs.push_back("bath.omega_c must be > 0");
    if (j_int < 0.0) errs.push_back("bath.j_int must be >= 0");
    if (integrator_step < 0.0) errs.push_back("integrator_step must be >= 0");
    if (initial_state != "site_one") errs.push_back("initial_state: only 'site_one' is supported");
    if (coupling == CouplingMode::dephasing && statistics == Statistics::bosonic && mu > 0.0)
        errs.push_back("dephasing with a bosonic bath requires mu <= 0");
    if (coupling != CouplingMode::dephasing && statistics == Statistics::bosonic)
        errs.push_back("linear coupling modes are implemented for fermionic baths");
    if (pattern == PatternKind::explicit_weights) {
        if (sizes.size() != 1)
            errs.push_back("explicit pattern weights require a single entry in sizes");
        else if (static_cast<int>(pattern_weights.size()) !=
                 (family == Family::anderson3d ? sizes[0] * sizes[0] * sizes[0] : sizes[0]))
            errs.push_back("explicit pattern weights length must match the system dimension");
    }
    if (pattern == PatternKind::sublattice && pattern_p < 1)
        errs.push_back("sublattice pattern: p must be >= 1");
    return errs;
}

SpectralModel EnsembleConfig::bath_model() const {
    return SpectralModel::ohmic(statistics, beta, mu, j_int, omega_c, include_eta);
}

QuadraticHamiltonian EnsembleConfig::build_hamiltonian(int size, std::uint64_t sample_seed) const {
    switch (family) {
        case Family::gue: return build_gue(size, J, sample_seed);
        case Family::anderson3d: return build_anderson3d(size, W, J, sample_seed, !open_boundaries);
        case Family::chain: return build_chain(size, J, onsite);
    }
    throw std::logic_error("unreachable");
}

std::vector<double> EnsembleConfig::time_grid() const {
    std::vector<double> g(n_points);
    for (int i = 0; i < n_points; ++i) g[i] = t_max * i / (n_points - 1);
    return g;
}

std::uint64_t EnsembleConfig::hash() const {
    const std::string text = to_json_text();
    return fnv1a(text.data(), text.size());
}

namespace {

CouplingPattern make_pattern(const EnsembleConfig& cfg, int n, std::uint64_t sample_seed) {
    switch (cfg.pattern) {
        case EnsembleConfig::PatternKind::uniform: return CouplingPattern::uniform(n);
        case EnsembleConfig::PatternKind::sublattice: return CouplingPattern::sublattice(n, cfg.pattern_p);
        case EnsembleConfig::PatternKind::random: return CouplingPattern::random(n, sample_seed);
        case EnsembleConfig::PatternKind::explicit_weights: {
            CouplingPattern p;
            p.weights = Eigen::Map<const RealVector>(cfg.pattern_weights.data(),
                                                     static_cast<Eigen::Index>(cfg.pattern_weights.size()));
            p.validate(n);
            return p;
        }
    }
    throw std::logic_error("unreachable");
}

std::vector<double> run_sample(const EnsembleConfig& cfg, int size, int sample) {
    const std::uint64_t seed =
        ensemble_sample_seed(cfg.base_seed, static_cast<std::uint64_t>(size),
                             static_cast<std::uint64_t>(sample));
    const QuadraticHamiltonian ham = cfg.build_hamiltonian(size, seed);
    const SpectralModel model = cfg.bath_model();
    const std::vector<double> grid = cfg.time_grid();
    const int n = ham.n();

    GeneratorCoefficients g_red, g_dav;
    Matrix rho0;
    if (cfg.coupling == EnsembleConfig::CouplingMode::dephasing) {
        g_red = build_redfield_dephasing(ham, model);
        g_dav = build_davies_dephasing(ham, model);
        rho0 = Matrix::Zero(n, n);
        rho0(0, 0) = 1.0; // a_1† |0><0| a_1, site basis
    } else {
        const CouplingPattern pat = cfg.coupling == EnsembleConfig::CouplingMode::linear_uniform
                                        ? CouplingPattern::uniform(n)
                                        : make_pattern(cfg, n, seed);
        g_red = build_redfield_linear(ham, model, pat);
        g_dav = build_davies_linear(ham, model, pat);
        Matrix site = Matrix::Zero(n, n);
        site(0, 0) = 1.0;
        rho0 = ham.to_eigenbasis(site); // one-body correlation matrix, mode basis
    }

    EvolveOptions opts;
    double raw = cfg.integrator_step > 0.0 ? cfg.integrator_step
                                           : std::min(default_step(g_red), default_step(g_dav));
    // snap to the uniform grid spacing so both generators integrate identically
    const double dt = grid[1] - grid[0];
    opts.step = dt / std::ceil(dt / raw - 1e-12);

    const Trajectory tr = evolve(g_red, rho0, grid, opts);
    const Trajectory td = evolve(g_dav, rho0, grid, opts);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out[i] = trace_distance(td.states[i], tr.states[i]);
    return out;
}

} // namespace

EnsembleResult run_ensemble(const EnsembleConfig& cfg, int threads, std::ostream* log,
                            bool keep_samples) {
    {
        const auto errs = cfg.validate();
        if (!errs.empty()) {
            std::string all = "run_ensemble: invalid config:";
            for (const auto& e : errs) all += "\n  - " + e;
            throw std::invalid_argument(all);
        }
    }
    struct Task {
        int size_index;
        int sample;
    };
    std::vector<Task> tasks;
    for (int si = 0; si < static_cast<int>(cfg.sizes.size()); ++si)
        for (int s = 0; s < cfg.samples_per_size; ++s) tasks.push_back({si, s});

    struct Slot {
        std::vector<double> curve;
        bool failed = false;
        std::string error;
    };
    std::vector<Slot> slots(tasks.size());

    int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    n_threads = std::min<int>(n_threads, static_cast<int>(tasks.size()));

    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            try {
                slots[i].curve = run_sample(cfg, cfg.sizes[t.size_index], t.sample);
            } catch (const std::exception& e) {
                slots[i].failed = true;
                slots[i].error = e.what();
                if (log) {
                    std::lock_guard<std::mutex> lock(log_mutex);
                    *log << "warning: sample failed (size " << cfg.sizes[t.size_index]
                         << ", sample " << t.sample << "): " << e.what() << '\n';
                }
            }
        }
    };
    {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    const int total = static_cast<int>(tasks.size());
    int failures = 0;
    for (const auto& s : slots)
        if (s.failed) ++failures;
    if (failures * 10 > total)
        throw std::runtime_error("run_ensemble: more than 10% of samples failed (" +
                                 std::to_string(failures) + "/" + std::to_string(total) + ")");

    EnsembleResult res;
    res.config = cfg;
    res.times = cfg.time_grid();
    res.config_hash = cfg.hash();
    res.version = "qme 1.0.0";

    const std::size_t npts = res.times.size();
    for (int si = 0; si < static_cast<int>(cfg.sizes.size()); ++si) {
        EnsembleCurve curve;
        curve.size = cfg.sizes[si];
        curve.dimension = cfg.family == EnsembleConfig::Family::anderson3d
                              ? cfg.sizes[si] * cfg.sizes[si] * cfg.sizes[si]
                              : cfg.sizes[si];
        curve.mean.assign(npts, 0.0);
        curve.stddev.assign(npts, 0.0);

        // deterministic two-pass aggregation in sample order
        std::vector<const std::vector<double>*> ok;
        for (std::size_t i = 0; i < tasks.size(); ++i)
            if (tasks[i].size_index == si && !slots[i].failed) ok.push_back(&slots[i].curve);
        curve.failures = cfg.samples_per_size - static_cast<int>(ok.size());
        if (ok.empty())
            throw std::runtime_error("run_ensemble: every sample failed for size " +
                                     std::to_string(curve.size));
        const double inv = 1.0 / static_cast<double>(ok.size());
        for (std::size_t p = 0; p < npts; ++p) {
            double m = 0.0;
            for (const auto* c : ok) m += (*c)[p];
            m *= inv;
            double v = 0.0;
            for (const auto* c : ok) v += ((*c)[p] - m) * ((*c)[p] - m);
            curve.mean[p] = m;
            curve.stddev[p] = std::sqrt(v * inv);
        }
        std::size_t arg = 0;
        for (std::size_t p = 1; p < npts; ++p)
            if (curve.mean[p] > curve.mean[arg]) arg = p;
        curve.max_mean = curve.mean[arg];
        curve.std_at_max = curve.stddev[arg];
        res.curves.push_back(std::move(curve));

        if (keep_samples) {
            std::vector<std::vector<double>> rows;
            for (const auto* c : ok) rows.push_back(*c);
            res.per_sample.push_back(std::move(rows));
        }
    }
    return res;
}

void emit_report(const EnsembleResult& res, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    {
        std::ofstream csv(dir / "curves.csv");
        if (!csv) throw std::runtime_error("cannot write curves.csv");
        csv.precision(17);
        csv << "size,t,mean_td,std_td\n";
        for (const auto& c : res.curves)
            for (std::size_t p = 0; p < res.times.size(); ++p)
                csv << c.size << ',' << res.times[p] << ',' << c.mean[p] << ',' << c.stddev[p]
                    << '\n';
    }
    {
        std::ofstream csv(dir / "summary.csv");
        if (!csv) throw std::runtime_error("cannot write summary.csv");
        csv.precision(17);
        csv << "size,max_mean_td,std_at_max\n";
        for (const auto& c : res.curves)
            csv << c.size << ',' << c.max_mean << ',' << c.std_at_max << '\n';
    }
    {
        std::ofstream js(dir / "config.json");
        js << res.config.to_json_text();
    }

    {
        svg::Plot plot;
        plot.title = "trace distance between Davies and Redfield dynamics";
        plot.x_label = "t";
        plot.y_label = "mean ||rho_D - rho_R||_1";
        for (const auto& c : res.curves) {
            svg::Series s;
            s.label = "size " + std::to_string(c.size);
            s.x = res.times;
            s.y = c.mean;
            s.band = c.stddev;
            plot.series.push_back(std::move(s));
        }
        svg::write_svg(plot, (dir / "td_vs_t.svg").string());
    }
    {
        svg::Plot plot;
        plot.title = "maximum mean trace distance vs system size";
        plot.x_label = "dimension N";
        plot.y_label = "max_t mean ||rho_D - rho_R||_1";
        svg::Series s;
        s.label = "max over t";
        for (const auto& c : res.curves) {
            s.x.push_back(c.dimension);
            s.y.push_back(c.max_mean);
            s.yerr.push_back(c.std_at_max);
        }
        plot.series.push_back(std::move(s));
        svg::write_svg(plot, (dir / "max_vs_size.svg").string());
    }
}

} // namespace qme
