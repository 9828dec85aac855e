// oracles.hpp — independent reference implementations used only by tests.
// Everything here is written as a literal transcription of the defining
// formulas, deliberately ignoring the library's factored code paths.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qme/bath.hpp"
#include "qme/hamiltonian.hpp"
#include "qme/types.hpp"

namespace oracles {

using qme::Complex;
using qme::Matrix;
using qme::RealVector;

// Random Hermitian matrix from std::mt19937 (independent of the library RNG).
inline Matrix random_hermitian(int n, unsigned seed, double scale = 1.0) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, scale);
    Matrix h(n, n);
    for (int i = 0; i < n; ++i) {
        h(i, i) = Complex(dist(gen), 0.0);
        for (int j = i + 1; j < n; ++j) {
            const Complex z(dist(gen), dist(gen));
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    }
    return h;
}

inline Matrix random_density_matrix(int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(dist(gen), dist(gen));
    Matrix rho = a * a.adjoint();
    rho /= rho.trace();
    return rho;
}

// Periodic chain equipped with the canonical DFT eigenbasis (modes sorted by
// band energy). Used where the momentum-aliasing structure must be explicit.
inline qme::QuadraticHamiltonian plane_wave_chain(int n, double J = 1.0, double onsite = 0.0) {
    qme::QuadraticHamiltonian q = qme::build_chain(n, J, onsite);
    Matrix v;
    RealVector w;
    qme::chain_plane_wave_basis(n, J, onsite, v, w);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return w(a) < w(b); });
    Matrix vs(n, n);
    RealVector ws(n);
    for (int i = 0; i < n; ++i) {
        vs.row(i) = v.row(order[i]);
        ws(i) = w(order[i]);
    }
    q.V = vs;
    q.omega = ws;
    return q;
}

// Brute-force triple loop for the coupling overlap matrix.
inline Matrix overlap_brute_force(const qme::QuadraticHamiltonian& ham,
                                  const qme::CouplingPattern& pattern) {
    const int n = ham.n();
    Matrix s = Matrix::Zero(n, n);
    for (int m = 0; m < n; ++m)
        for (int nn = 0; nn < n; ++nn)
            for (int j = 0; j < n; ++j)
                s(m, nn) += pattern.weights(j) * pattern.weights(j) * ham.V(m, j) *
                            std::conj(ham.V(nn, j));
    return s;
}

// Literal quadruple-loop transcription of the generic-form master equation for
// dephasing coupling A_j = a_j† a_j restricted to the single-particle sector:
// dissipator with coefficients (Γ(E_k−E_l) + Γ*(E_m−E_n)) Σ_j A_lk A_mn plus
// the matching Lamb-shift commutator. Superoperator in column-major layout.
// When resonant_only is set, quadruples with |ν_lk − ν_mn| > tol are dropped
// and the Lamb shift keeps only its diagonal.
inline Matrix dephasing_superop_quad_loop(const qme::QuadraticHamiltonian& ham,
                                          const qme::SpectralModel& model, bool resonant_only,
                                          double cluster_tol) {
    const int n = ham.n();
    std::vector<Matrix> a;
    for (int j = 0; j < n; ++j) {
        Matrix aj(n, n);
        for (int m = 0; m < n; ++m)
            for (int nn = 0; nn < n; ++nn)
                aj(m, nn) = std::conj(ham.V(m, j)) * ham.V(nn, j);
        a.push_back(aj);
    }
    Matrix gamma_upper(n, n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            gamma_upper(l, k) = qme::dephasing_gamma_upper(model, ham.omega(k) - ham.omega(l));

    auto apply = [&](const Matrix& rho) {
        Matrix out(n, n);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                out(p, q) = Complex(0.0, -(ham.omega(p) - ham.omega(q))) * rho(p, q);

        Matrix hls = Matrix::Zero(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m)
                        for (int nn = 0; nn < n; ++nn) {
                            const double nu1 = ham.omega(k) - ham.omega(l);
                            const double nu2 = ham.omega(m) - ham.omega(nn);
                            const bool resonant = std::abs(nu1 - nu2) <= cluster_tol;
                            if (resonant_only && !resonant) continue;
                            const Complex coeff =
                                (gamma_upper(l, k) + std::conj(gamma_upper(nn, m))) * a[j](l, k) *
                                a[j](m, nn);
                            // |l><k| rho |m><n| − ½ {|m><n|l><k|, rho}
                            Matrix lk = Matrix::Zero(n, n);
                            lk(l, k) = 1.0;
                            Matrix mn = Matrix::Zero(n, n);
                            mn(m, nn) = 1.0;
                            out += coeff * (lk * rho * mn -
                                            0.5 * (mn * lk * rho + rho * mn * lk));
                        }
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m) {
                        const double nu1 = ham.omega(k) - ham.omega(l);
                        const double nu2 = ham.omega(m) - ham.omega(l);
                        if (resonant_only && std::abs(nu1 - nu2) > cluster_tol) continue;
                        hls(m, k) += (gamma_upper(l, k) - std::conj(gamma_upper(l, m))) /
                                     Complex(0.0, 2.0) * a[j](l, k) * a[j](m, l);
                    }
        out += Complex(0.0, -1.0) * (hls * rho - rho * hls);
        return out;
    };

    Matrix s(n * n, n * n);
    Matrix basis = Matrix::Zero(n, n);
    for (int b = 0; b < n; ++b)
        for (int aa = 0; aa < n; ++aa) {
            basis(aa, b) = 1.0;
            const Matrix col = apply(basis);
            basis(aa, b) = 0.0;
            s.col(aa + n * b) = Eigen::Map<const qme::Vector>(col.data(), n * n);
        }
    return s;
}

// Dense-trapezoid principal-value oracle:
//   P∫ f(nu)/(omega - nu) dnu = -∫_0^U [f(omega+u) - f(omega-u)]/u du
// evaluated at fixed resolution. Used to cross-check hilbert_pv.
inline double pv_trapezoid(const std::function<double(double)>& f, double omega, double span,
                           int points) {
    auto integrand = [&](double u) {
        if (u == 0.0) {
            const double h = 1e-7 * (1.0 + std::abs(omega));
            return -(f(omega + h) - f(omega - h)) / h;
        }
        return -(f(omega + u) - f(omega - u)) / u;
    };
    const double du = span / points;
    double acc = 0.5 * (integrand(0.0) + integrand(span));
    for (int i = 1; i < points; ++i) acc += integrand(i * du);
    return acc * du / (2.0 * std::numbers::pi);
}

// Exact unitary single-particle evolution in the eigenbasis.
inline Matrix unitary_evolution(const RealVector& omega, const Matrix& rho0_eig, double t) {
    const int n = static_cast<int>(omega.size());
    Matrix out(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            out(a, b) = rho0_eig(a, b) *
                        std::exp(Complex(0.0, -(omega(a) - omega(b)) * t));
    return out;
}

// Wigner semicircle CDF with radius r.
inline double semicircle_cdf(double x, double r) {
    if (x <= -r) return 0.0;
    if (x >= r) return 1.0;
    return 0.5 + x * std::sqrt(r * r - x * x) / (std::numbers::pi * r * r) +
           std::asin(x / r) / std::numbers::pi;
}

inline double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double c = cdf(values[i]);
        d = std::max(d, std::abs(c - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - c));
    }
    return d;
}

struct Welford {
    long long count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }
    double population_std() const { return count > 0 ? std::sqrt(m2 / count) : 0.0; }
};

// Minimal XML well-formedness check: prolog, matched/balanced tags, quoted
// attributes, no stray '<'. Enough to validate the emitted SVG files.
inline bool xml_well_formed(const std::string& text, std::string* why = nullptr) {
    auto fail = [&](const std::string& w) {
        if (why) *why = w;
        return false;
    };
    std::vector<std::string> stack;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        if (text[i] != '<') {
            if (text[i] == '>') return fail("stray '>'");
            ++i;
            continue;
        }
        std::size_t close = text.find('>', i);
        if (close == std::string::npos) return fail("unterminated tag");
        std::string tag = text.substr(i + 1, close - i - 1);
        i = close + 1;
        if (tag.empty()) return fail("empty tag");
        if (tag[0] == '?' || (tag.size() >= 3 && tag.substr(0, 3) == "!--")) continue;
        bool closing = tag[0] == '/';
        bool self_closing = tag.back() == '/';
        if (closing) tag = tag.substr(1);
        if (self_closing) tag.pop_back();
        // validate quotes balance
        int quotes = 0;
        for (char ch : tag)
            if (ch == '"') ++quotes;
        if (quotes % 2 != 0) return fail("unbalanced attribute quotes in <" + tag + ">");
        std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
        if (name.empty()) return fail("nameless tag");
        if (closing) {
            if (stack.empty() || stack.back() != name)
                return fail("mismatched closing tag </" + name + ">");
            stack.pop_back();
        } else if (!self_closing) {
            stack.push_back(name);
        }
    }
    if (!stack.empty()) return fail("unclosed tag <" + stack.back() + ">");
    return true;
}

} // namespace oracles
