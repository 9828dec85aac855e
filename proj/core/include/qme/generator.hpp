// generator.hpp — Redfield, Davies, and secular-truncated generators in
// mode-pair coefficient form, for linear (exchange) and single-particle-sector
// dephasing dissipation.

#pragma once

#include <string>
#include <vector>

#include "qme/bath.hpp"
#include "qme/fock.hpp"
#include "qme/hamiltonian.hpp"
#include "qme/types.hpp"

namespace qme {

// Relative tolerance for clustering equal frequencies / Bohr frequencies.
inline constexpr double kClusterTol = 1e-9;

// A generator stored as coefficient data plus an apply contract; dim^2 x dim^2
// superoperators are only materialized on demand for certification.
//
// Linear (mode_occupation) payload: one-sided coefficient matrices of the
// mode-form master equation,
//   K1(m,n) = S(m,n) Γ11(ω_m)   with (c_m ρ c_n† − ρ c_n† c_m) + H.c.
//   K2(m,n) = S*(m,n) Γ22(ω_m)  with (c_m† ρ c_n − ρ c_n c_m†) + H.c.
// where S is the coupling overlap matrix. The H.c. expansion is performed by
// every consumer, so the stored data defines a Hermiticity-preserving map.
//
// Dephasing (single_particle) payload: Bohr-frequency kernel
//   W(l,k) = Γ(E_k − E_l)
// over the site operators A^(j) = conj(V(·,j)) V(·,j)^T; Redfield applies the
// unsplit form Σ_j [G_j ρ A_j + A_j ρ G_j† − A_j G_j ρ − ρ G_j† A_j] with
// G_j = W ⊙ A_j (this contains the generic-form Lamb shift implicitly), and
// Davies/secular keep only Bohr-resonant quadruples.
class GeneratorCoefficients {
  public:
    GeneratorKind kind = GeneratorKind::redfield;
    Sector sector = Sector::mode_occupation;
    QuadraticHamiltonian ham;
    SpectralModel model;

    int n() const { return ham.n(); }

    // --- coefficient access -------------------------------------------------
    const Matrix& channel1() const; // K1 (linear sectors only)
    const Matrix& channel2() const; // K2
    const Matrix& bohr_weights() const; // W (dephasing sectors only)

    // Per-mode loss/gain rates 2 Re K_mm = S_mm γ(ω_m) (linear).
    RealVector rate1() const;
    RealVector rate2() const;
    double max_rate() const;
    double coefficient_scale() const; // max |stored coefficient|

    // Per-mode Lamb shift: S_mm (η22 − η11) for linear kinds, the diagonal of
    // the generic-form Lamb-shift Hamiltonian for dephasing Davies; zero when
    // the model has η off.
    RealVector lamb_shift() const;

    // --- action -------------------------------------------------------------
    // single_particle: d rho / dt for an N x N matrix in the energy eigenbasis.
    Matrix apply(const Matrix& rho_eig) const;

    // mode_occupation (fermionic): closed one-body correlation-matrix equation
    //   dC/dt = −i[diag(ω), C] − conj(K1) C − C K1ᵀ + (K2 + K2†) − K2 C − C K2†
    // in the mode basis.
    Matrix apply_correlation(const Matrix& c_mode) const;

    // Materialized superoperator for certification, column-major vectorization.
    // single_particle: N ≤ 64 (N² x N²); mode_occupation: Fock space, 2^N ≤ 64.
    Matrix superoperator() const;

    std::uint64_t metadata_hash() const;

    // Replaces stored linear coefficients (JSON round-trips).
    void install_channels(Matrix new_k1, Matrix new_k2);

    // Builder-filled payloads; read-only after construction.
    struct Dephasing {
        Matrix weight;       // W(l,k) = Γ(E_k − E_l)
        Matrix u;            // column j = conj(V(·, j)); A^(j) = u_j u_j†
        Matrix left_product; // Σ_j A_j G_j (Redfield unsplit form)
        bool generic = true; // all off-diagonal Bohr frequencies distinct & nonzero
        // generic Davies closed forms
        RealMatrix gram;     // M(l,k) = Σ_j |A^(j)_{lk}|²
        RealMatrix pop_rate; // R(l,k) = γ(E_k−E_l) M(l,k), zero diagonal
        RealVector escape;   // Σ_l R(l,k)
        RealMatrix dephase;  // γ(0) (M_ab − (M_aa+M_bb)/2)
        RealVector hls;      // Davies Lamb-shift diagonal (η on)
        // general clustered path (non-generic spectra)
        std::vector<std::vector<std::pair<int, int>>> clusters;
        Matrix anti;         // Σ_{c,j} (B† G + G† B), precomputed
    };

    Matrix k1, k2;
    Dephasing deph;
    bool has_linear = false;
    bool has_deph = false;

  private:
    Matrix apply_dephasing_redfield(const Matrix& rho) const;
    Matrix apply_dephasing_secular(const Matrix& rho) const;
};

// Coupling overlap matrix S(m,n) = Σ_j w_j² V(m,j) V*(n,j); Hermitian PSD,
// exactly (w²)·I for uniform weights by unitarity of V.
Matrix overlap_matrix(const QuadraticHamiltonian& ham, const CouplingPattern& pattern);

GeneratorCoefficients build_redfield_linear(const QuadraticHamiltonian& ham,
                                            const SpectralModel& model,
                                            const CouplingPattern& pattern);

GeneratorCoefficients build_davies_linear(const QuadraticHamiltonian& ham,
                                          const SpectralModel& model,
                                          const CouplingPattern& pattern);

// Zeroes coefficients outside degenerate-frequency clusters (linear) or
// outside Bohr-resonant quadruples (dephasing). Idempotent on diagonal input.
GeneratorCoefficients secular_truncate(const GeneratorCoefficients& g);

GeneratorCoefficients build_redfield_dephasing(const QuadraticHamiltonian& ham,
                                               const SpectralModel& model);

GeneratorCoefficients build_davies_dephasing(const QuadraticHamiltonian& ham,
                                             const SpectralModel& model);

// Davies generator of the instantaneous Hamiltonian at drive time t.
GeneratorCoefficients instantaneous_davies(const DriveProtocol& protocol,
                                           const SpectralModel& model, double t);

// Hermitian GKLS coefficient matrix; min eigenvalue ≥ −tol certifies complete
// positivity. Basis: mode jump operators {c_m} ∪ {c_m†} for linear kinds
// (block diagonal K1+K1†, K2+K2†), eigenprojector dyads {|l⟩⟨k|} for the
// single-particle sector.
Matrix kossakowski_matrix(const GeneratorCoefficients& g);

// Literal Fock-space master equation built from the stored coefficients;
// independent of apply_correlation. Fermionic models only.
Matrix fock_apply(const FockSpace& f, const GeneratorCoefficients& g, const Matrix& rho);

// JSON exchange for the certify CLI and cross-implementation diffing.
void export_generator_json(const GeneratorCoefficients& g, const std::string& path);
GeneratorCoefficients load_generator_json(const std::string& path);

} // namespace qme
