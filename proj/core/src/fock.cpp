// fock.cpp — Jordan-Wigner construction of fermionic mode operators

#include "qme/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace qme {

FockSpace FockSpace::build(int n_modes) {
    if (n_modes < 1 || n_modes > 10)
        throw std::invalid_argument("FockSpace: n_modes must be in [1, 10]");
    FockSpace f;
    f.n_modes = n_modes;
    const Eigen::Index dim = Eigen::Index(1) << n_modes;
    f.c.reserve(n_modes);
    // bit m of the basis index is the occupation of mode m;
    // c_m |...1_m...> = (-1)^{sum of occupations below m} |...0_m...>
    for (int m = 0; m < n_modes; ++m) {
        Matrix op = Matrix::Zero(dim, dim);
        for (Eigen::Index s = 0; s < dim; ++s) {
            if (!(s >> m & 1)) continue;
            int parity = 0;
            for (int q = 0; q < m; ++q) parity += static_cast<int>(s >> q & 1);
            op(s ^ (Eigen::Index(1) << m), s) = parity % 2 == 0 ? 1.0 : -1.0;
        }
        f.c.push_back(std::move(op));
    }
    return f;
}

Matrix FockSpace::total_number() const {
    Matrix n = Matrix::Zero(dim(), dim());
    for (int m = 0; m < n_modes; ++m) n += number(m);
    return n;
}

Matrix FockSpace::mode_hamiltonian(const RealVector& omega) const {
    if (omega.size() != n_modes)
        throw std::invalid_argument("mode_hamiltonian: omega length mismatch");
    Matrix h = Matrix::Zero(dim(), dim());
    for (int m = 0; m < n_modes; ++m) h += omega(m) * number(m);
    return h;
}

Matrix FockSpace::gibbs(const RealVector& omega, double beta, double mu) const {
    if (omega.size() != n_modes)
        throw std::invalid_argument("gibbs: omega length mismatch");
    const Eigen::Index d = dim();
    RealVector diag(d);
    for (Eigen::Index s = 0; s < d; ++s) {
        double e = 0.0;
        for (int m = 0; m < n_modes; ++m)
            if (s >> m & 1) e += omega(m) - mu;
        diag(s) = -beta * e;
    }
    const double shift = diag.maxCoeff();
    RealVector w = (diag.array() - shift).exp();
    w /= w.sum();
    Matrix rho = Matrix::Zero(d, d);
    rho.diagonal() = w.cast<Complex>();
    return rho;
}

} // namespace qme
