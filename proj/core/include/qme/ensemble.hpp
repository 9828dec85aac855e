// ensemble.hpp — config-driven disorder-ensemble experiments

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qme/dynamics.hpp"
#include "qme/generator.hpp"

namespace qme {

inline constexpr int kConfigSchemaVersion = 1;

// Seeded comparison of Redfield vs Davies dynamics over a disorder ensemble.
// Parsed from a JSON file with a schema_version field; unknown keys are errors
// and validation reports every failure at once.
struct EnsembleConfig {
    enum class Family { gue, anderson3d, chain };
    enum class CouplingMode { linear_uniform, linear_pattern, dephasing };
    enum class PatternKind { uniform, sublattice, random, explicit_weights };

    Family family = Family::gue;
    double J = 1.0;
    double W = 0.0;               // anderson disorder
    double onsite = 0.0;          // chain
    bool open_boundaries = false; // anderson

    Statistics statistics = Statistics::bosonic;
    double beta = 5.0;
    double mu = 0.0;
    double omega_c = 10.0;
    double j_int = 0.2;
    bool include_eta = false;

    CouplingMode coupling = CouplingMode::dephasing;
    PatternKind pattern = PatternKind::uniform;
    int pattern_p = 2;                   // sublattice spacing
    std::vector<double> pattern_weights; // explicit weights (single size only)

    std::vector<int> sizes; // N for gue/chain, L for anderson3d
    int samples_per_size = 20;
    std::uint64_t base_seed = 1;

    double t_max = 40.0;
    int n_points = 81;
    double integrator_step = 0.0; // 0 = default rule
    std::string initial_state = "site_one";

    static EnsembleConfig from_json_file(const std::string& path);
    static EnsembleConfig from_json_text(const std::string& text);
    std::string to_json_text() const;

    // Returns every violated constraint (empty = valid).
    std::vector<std::string> validate() const;

    SpectralModel bath_model() const;
    QuadraticHamiltonian build_hamiltonian(int size, std::uint64_t sample_seed) const;
    std::vector<double> time_grid() const;
    std::uint64_t hash() const;
};

struct EnsembleCurve {
    int size = 0;
    int dimension = 0;
    std::vector<double> mean; // trace distance vs time grid
    std::vector<double> stddev;
    double max_mean = 0.0;
    double std_at_max = 0.0;
    int failures = 0;
};

struct EnsembleResult {
    EnsembleConfig config;
    std::vector<double> times;
    std::vector<EnsembleCurve> curves;
    std::uint64_t config_hash = 0;
    std::string version;
    // per-curve sample data, kept only when requested: [size_index][sample][t]
    std::vector<std::vector<std::vector<double>>> per_sample;
};

// Runs the full (size, sample) grid on a bounded worker pool. Results are
// merged by sample index, so the output is byte-identical for any thread
// count. Per-sample failures are excluded with a warning; more than 10%
// failures aborts.
EnsembleResult run_ensemble(const EnsembleConfig& cfg, int threads = 0,
                            std::ostream* log = nullptr, bool keep_samples = false);

// Writes curves.csv, summary.csv, config.json, and static SVG plots.
void emit_report(const EnsembleResult& res, const std::string& out_dir);

} // namespace qme
