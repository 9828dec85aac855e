// bath.hpp — bath spectral functions, KMS structure, and the Ohmic model

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qme/types.hpp"

namespace qme {

// Tabulated density of states, piecewise-linear between nodes, zero outside.
struct DosTable {
    std::vector<double> omega; // strictly increasing
    std::vector<double> dos;   // >= 0
};

DosTable load_dos_csv(const std::string& path);

// Identical site-local thermal baths: statistics, (beta, mu), coupling J_int,
// and a density of states. Rates returned by this module carry the J_int^2
// factor, so generator assembly is coupling-agnostic (per-site weights are
// dimensionless multipliers handled by CouplingPattern).
struct SpectralModel {
    enum class DosKind { ohmic, custom };

    Statistics statistics = Statistics::fermionic;
    double beta = 1.0;     // inverse temperature, > 0
    double mu = 0.0;       // chemical potential
    double coupling = 1.0; // J_int >= 0
    DosKind dos_kind = DosKind::ohmic;
    double omega_c = 1.0;  // ohmic cutoff, > 0
    DosTable table;        // for DosKind::custom
    bool include_eta = false;

    static SpectralModel ohmic(Statistics stats, double beta, double mu, double j_int,
                               double omega_c, bool include_eta = false);
    static SpectralModel custom(Statistics stats, double beta, double mu, double j_int,
                                DosTable table, bool include_eta = false);

    // Throws std::invalid_argument listing every violated constraint.
    void validate() const;
};

// Fermi/Bose distribution 1/(e^{beta(omega-mu)} ± 1). Bosonic statistics
// require omega > mu (diverging occupation otherwise).
double distribution(const SpectralModel& model, double omega);

// Density of states at omega. Ohmic: |omega| e^{-|omega|/omega_c}.
double density_of_states(const SpectralModel& model, double omega);

// Power-spectrum pair at a mode frequency, J_int^2 folded in:
//   gamma11(omega) = (1 ∓ f(omega)) D(omega) J^2   (loss channel)
//   gamma22        = f(omega) D(omega) J^2          (gain channel; this is the
//                    spectral function gamma22 evaluated at -omega)
// Cross spectra gamma12 = gamma21 = 0 identically (never stored).
struct RatePair {
    double gamma11 = 0.0;
    double gamma22 = 0.0;
};
RatePair gamma_pair(const SpectralModel& model, double omega);

// Lamb-shift pair: principal-value Hilbert transforms of the two channels,
//   eta(omega) = (1/2pi) P∫ gamma(nu) / (omega - nu) dnu.
// Returns (0, 0) when include_eta is false.
struct ShiftPair {
    double eta11 = 0.0;
    double eta22 = 0.0;
};
ShiftPair eta_pair(const SpectralModel& model, double omega);

// One-sided kernels Γ = gamma/2 + i eta consumed by generator assembly.
Complex gamma_upper11(const SpectralModel& model, double omega);
Complex gamma_upper22(const SpectralModel& model, double omega);

// Scalar power spectrum of the Hermitian dephasing coupling (Ohmic form):
//   nu > 0: (1 + f(nu)) D(nu) J^2
//   nu < 0: f(-nu) D(-nu) J^2
//   nu = 0: continuous limit (J^2/beta for bosonic mu = 0).
// Works for either statistics; the bosonic Ohmic case is the paper's model.
double dephasing_gamma(const SpectralModel& model, double nu);
double dephasing_eta(const SpectralModel& model, double nu); // 0 when eta off
Complex dephasing_gamma_upper(const SpectralModel& model, double nu);

struct SpectralSample {
    double omega = 0.0;
    double gamma11 = 0.0;
    double gamma22 = 0.0;
    double eta11 = 0.0;
    double eta22 = 0.0;
};
std::vector<SpectralSample> sample_spectrum(const SpectralModel& model,
                                            const std::vector<double>& grid);

// |gamma11 - e^{beta(omega-mu)} gamma22| / max(gamma11, 1); exact zero in
// exact arithmetic by construction of gamma_pair.
double kms_residual(const SpectralModel& model, const SpectralSample& s);

// Principal-value Hilbert transform (1/2pi) P∫_{lo}^{hi} f(nu)/(omega-nu) dnu
// by singularity splitting plus adaptive Simpson quadrature. Throws
// std::runtime_error with the achieved error estimate on non-convergence.
double hilbert_pv(const std::function<double(double)>& f, double omega,
                  double lo, double hi, double abs_tol = 1e-8,
                  double* err_estimate = nullptr);

} // namespace qme
