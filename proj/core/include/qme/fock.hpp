// fock.hpp — small-N fermionic Fock space (Jordan-Wigner) for certification

#pragma once

#include <vector>

#include "qme/types.hpp"

namespace qme {

// Dense 2^n representation of n fermionic modes. Intended for n <= 10;
// used to certify generator bookkeeping against literal master equations.
struct FockSpace {
    int n_modes = 0;
    std::vector<Matrix> c; // annihilation operators

    static FockSpace build(int n_modes);

    Eigen::Index dim() const { return Eigen::Index(1) << n_modes; }
    Matrix number(int m) const { return c[m].adjoint() * c[m]; }
    Matrix total_number() const;
    Matrix mode_hamiltonian(const RealVector& omega) const;
    // Grand-canonical Gibbs state exp(-beta (H - mu N)) / Z over mode energies.
    Matrix gibbs(const RealVector& omega, double beta, double mu) const;
};

} // namespace qme
