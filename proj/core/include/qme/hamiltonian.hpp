// hamiltonian.hpp — quadratic Hamiltonians: builders, diagonalization, drives

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qme/types.hpp"

namespace qme {

// Hermitian hopping matrix with its eigendecomposition. Index convention
// follows a_j = sum_m V(m, j) c_m: rows of V are modes, columns are sites,
// so conj(V) h V^T = diag(omega). Immutable after construction.
struct QuadraticHamiltonian {
    Matrix hopping;    // N x N Hermitian, site basis
    RealVector omega;  // ascending eigenvalues
    Matrix V;          // V(m, j), unitary

    int n() const { return static_cast<int>(omega.size()); }
    double spectral_norm() const { return std::max(std::abs(omega(0)), std::abs(omega(n() - 1))); }

    // Basis maps for density matrices / correlation matrices.
    Matrix to_eigenbasis(const Matrix& site) const;  // conj(V) X V^T
    Matrix to_sitebasis(const Matrix& eig) const;    // V^T X conj(V)

    // Groups of equal eigenvalues within tol * max(1, |omega|_max);
    // each cluster is [first, last] index range into omega.
    std::vector<std::pair<int, int>> degenerate_clusters(double rel_tol = 1e-9) const;

    std::uint64_t hash() const { return hash_matrix(hopping); }
};

inline constexpr double kHermitianTol = 1e-12;

// Eigendecomposition with ascending eigenvalues. Throws on non-Hermitian
// input (max deviation above kHermitianTol * scale) or solver failure.
QuadraticHamiltonian diagonalize(const Matrix& h);

// Dirac-SYK2: GUE hopping with disorder average |h_ij|^2 = J^2/N
// (diagonal real Gaussian, off-diagonal complex Gaussian). Deterministic in seed.
QuadraticHamiltonian build_gue(int n, double J, std::uint64_t seed);

// 3D Anderson model on an L^3 cubic lattice: on-site disorder uniform on
// [-W, W], nearest-neighbor hopping J. Periodic boundaries by default (L = 2
// then carries doubled wrap bonds, keeping the cosine band exact).
QuadraticHamiltonian build_anderson3d(int L, double W, double J, std::uint64_t seed,
                                      bool periodic = true);

// Periodic nearest-neighbor chain with uniform hopping J and on-site energy.
QuadraticHamiltonian build_chain(int n, double J, double onsite = 0.0);

// Canonical DFT mode basis of the periodic chain, V(m, j) = e^{-2πi m j / N}/√N,
// paired with its (unsorted) band energies 2J cos(2π m / N) + onsite.
void chain_plane_wave_basis(int n, double J, double onsite, Matrix& V, RealVector& omega);

// Per-site coupling weights (dimensionless multipliers on J_int).
struct CouplingPattern {
    RealVector weights;

    static CouplingPattern uniform(int n, double w = 1.0);
    // 1 on sites j ≡ 0 (mod p) with 1-based site index, 0 elsewhere.
    static CouplingPattern sublattice(int n, int p);
    static CouplingPattern random(int n, std::uint64_t seed, double lo = 0.1, double hi = 1.5);

    bool is_uniform(double tol = 0.0) const;
    void validate(int n) const;
};

// Piecewise drive schedule for time-dependent Hamiltonians.
struct DriveProtocol {
    enum class Interp { piecewise_constant, linear };

    std::vector<double> times;  // strictly increasing, first is 0
    std::vector<Matrix> knots;  // Hermitian to kHermitianTol
    Interp interp = Interp::linear;

    double duration() const { return times.empty() ? 0.0 : times.back(); }
    void validate() const;
};

// Interpolated Hamiltonian at time t in [0, duration], diagonalized on demand.
QuadraticHamiltonian sample_drive(const DriveProtocol& p, double t);

// Hopping-matrix exchange format: CSV of (row, col, re, im) for the upper
// triangle plus a JSON header carrying N and a Hermiticity-checked hash.
void save_hopping(const Matrix& h, const std::string& csv_path, const std::string& json_path);
Matrix load_hopping(const std::string& csv_path, const std::string& json_path);

} // namespace qme
