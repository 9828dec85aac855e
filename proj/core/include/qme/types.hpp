// types.hpp — shared aliases and enums for the qme library

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qme {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

enum class Statistics { fermionic, bosonic };

// State-space description a generator acts on.
//   mode_occupation: linear (exchange) dissipation; one-body correlation matrix
//                    and small-N Fock surfaces (see GeneratorCoefficients).
//   single_particle: dephasing (a†a) dissipation restricted to the N-dim
//                    single-particle sector; states are N x N density matrices.
enum class Sector { mode_occupation, single_particle };

enum class GeneratorKind { redfield, davies, secular_truncation };

inline const char* to_string(Statistics s) {
    return s == Statistics::fermionic ? "fermionic" : "bosonic";
}
inline const char* to_string(Sector s) {
    return s == Sector::mode_occupation ? "mode_occupation" : "single_particle";
}
inline const char* to_string(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::redfield: return "redfield";
        case GeneratorKind::davies: return "davies";
        case GeneratorKind::secular_truncation: return "secular_truncation";
    }
    return "?";
}

inline Statistics statistics_from_string(const std::string& s) {
    if (s == "fermionic") return Statistics::fermionic;
    if (s == "bosonic") return Statistics::bosonic;
    throw std::invalid_argument("unknown statistics: " + s);
}

inline GeneratorKind generator_kind_from_string(const std::string& s) {
    if (s == "redfield") return GeneratorKind::redfield;
    if (s == "davies") return GeneratorKind::davies;
    if (s == "secular_truncation") return GeneratorKind::secular_truncation;
    throw std::invalid_argument("unknown generator kind: " + s);
}

// FNV-1a, used for provenance hashes in exports and reports.
inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t hash_matrix(const Matrix& m, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const Complex z = m(i, j);
            const double re = z.real(), im = z.imag();
            h = fnv1a(&re, sizeof re, h);
            h = fnv1a(&im, sizeof im, h);
        }
    }
    return h;
}

} // namespace qme
