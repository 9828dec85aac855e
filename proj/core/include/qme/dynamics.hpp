// dynamics.hpp — time evolution, trace distance, Gibbs and steady states

#pragma once

#include <string>
#include <vector>

#include "qme/generator.hpp"

namespace qme {

struct EvolveOptions {
    double step = 0.0;       // 0 selects min(0.05/|h|, 0.05/max rate)
    double trace_tol = 1e-6; // abort threshold on trace drift (single-particle)
    double psd_tol = 1e-6;   // abort threshold on negative eigenvalues
    bool monitor = true;
};

// Snapshots along a fixed time grid. States are stored in the public basis:
// site-basis density matrices for the single-particle sector, mode-basis
// correlation matrices for the mode-occupation sector. Output snapshots are
// re-Hermitized; the integrator's internal state is not.
struct Trajectory {
    std::vector<double> times;
    std::vector<Matrix> states;
    GeneratorKind kind = GeneratorKind::redfield;
    Sector sector = Sector::single_particle;
    double step = 0.0;
};

double default_step(const GeneratorCoefficients& g);

// Classical fixed-step RK4 on d rho/dt = L(rho). The step must divide every
// grid interval. Throws on trace drift or PSD violation beyond the options'
// thresholds (monitoring is sector-aware: correlation matrices are checked
// for occupation bounds instead of unit trace).
Trajectory evolve(const GeneratorCoefficients& g, const Matrix& rho0,
                  const std::vector<double>& grid, const EvolveOptions& opts = {});

// RK4 where every stage rebuilds the instantaneous Davies generator of the
// drive; the state is a site-basis correlation matrix.
Trajectory evolve_driven(const DriveProtocol& protocol, const SpectralModel& model,
                         const Matrix& c0_site, const std::vector<double>& grid,
                         const EvolveOptions& opts = {});

// Schatten-1 norm of (a - b), no 1/2 prefactor; computed from the eigenvalues
// of the Hermitian difference.
double trace_distance(const Matrix& a, const Matrix& b);

// mode_occupation: diag(f(omega_m)) in the mode basis (occupations).
// single_particle: normalized diag(e^{-beta(omega_m - mu)}) rotated to the
// site basis.
Matrix gibbs_state(const QuadraticHamiltonian& ham, const SpectralModel& model, Sector sector);

// Closed-form mode-occupation relaxation of a fermionic linear Davies
// generator: n_m(t) = n_inf + (n0 - n_inf) e^{-rate t}.
struct OccupationRelaxation {
    RealVector rate;  // rate1 + rate2 per mode
    RealVector n_inf; // rate2 / (rate1 + rate2); Fermi function under KMS
    RealVector n0;

    RealVector at(double t) const;
};
OccupationRelaxation occupation_relaxation(const GeneratorCoefficients& davies_linear,
                                           const RealVector& n0);

// CSV columns (t, observables...) plus a JSON sidecar with generator hash,
// step, and monitor tolerances. observable = "occupations" or "full".
void export_trajectory(const Trajectory& traj, const GeneratorCoefficients& g,
                       const std::string& observable, const std::string& csv_path,
                       const std::string& json_path);

// Validates Hermiticity / unit trace / numerical PSD of a density matrix;
// throws with the list of violations.
void validate_density_matrix(const Matrix& rho, double herm_tol = 1e-10,
                             double trace_tol = 1e-10, double psd_tol = 1e-8);

} // namespace qme
