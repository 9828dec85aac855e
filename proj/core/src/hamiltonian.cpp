// hamiltonian.cpp — builders and diagonalization of quadratic Hamiltonians

#include "qme/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qme/rng.hpp"

namespace qme {

namespace {

double hermiticity_defect(const Matrix& h) {
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace

Matrix QuadraticHamiltonian::to_eigenbasis(const Matrix& site) const {
    return V.conjugate() * site * V.transpose();
}

Matrix QuadraticHamiltonian::to_sitebasis(const Matrix& eig) const {
    return V.transpose() * eig * V.conjugate();
}

std::vector<std::pair<int, int>> QuadraticHamiltonian::degenerate_clusters(double rel_tol) const {
    const double tol = rel_tol * std::max(1.0, spectral_norm());
    std::vector<std::pair<int, int>> out;
    int first = 0;
    for (int m = 1; m <= n(); ++m) {
        if (m == n() || omega(m) - omega(m - 1) > tol) {
            out.emplace_back(first, m - 1);
            first = m;
        }
    }
    return out;
}

QuadraticHamiltonian diagonalize(const Matrix& h) {
    if (h.rows() != h.cols() || h.rows() == 0)
        throw std::invalid_argument("diagonalize: matrix must be square and non-empty");
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if (hermiticity_defect(h) > kHermitianTol * scale)
        throw std::invalid_argument("diagonalize: matrix is not Hermitian within tolerance");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: eigensolver failed to converge");

    QuadraticHamiltonian out;
    out.hopping = (h + h.adjoint()) / 2.0;
    out.omega = solver.eigenvalues();
    // solver gives h = U diag U^†, columns are eigenvectors; Eq.-(2) layout
    // V(m, j) = U(j, m) makes conj(V) h V^T = diag(omega).
    out.V = solver.eigenvectors().transpose();
    return out;
}

QuadraticHamiltonian build_gue(int n, double J, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("build_gue: n must be >= 1");
    if (!(J > 0.0)) throw std::invalid_argument("build_gue: J must be > 0");
    Philox rng = stream_for(seed, stream_tag::gue);
    Matrix h(n, n);
    const double sd_diag = J / std::sqrt(static_cast<double>(n));
    const double sd_off = J / std::sqrt(2.0 * n); // per component: total |h_ij|^2 = J^2/N
    for (int i = 0; i < n; ++i) {
        h(i, i) = Complex(sd_diag * rng.gaussian(), 0.0);
        for (int j = i + 1; j < n; ++j) {
            const Complex z(sd_off * rng.gaussian(), sd_off * rng.gaussian());
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    }
    return diagonalize(h);
}

QuadraticHamiltonian build_anderson3d(int L, double W, double J, std::uint64_t seed,
                                      bool periodic) {
    if (L < 2) throw std::invalid_argument("build_anderson3d: L must be >= 2");
    if (!(W >= 0.0)) throw std::invalid_argument("build_anderson3d: W must be >= 0");
    const int n = L * L * L;
    Philox rng = stream_for(seed, stream_tag::anderson);
    Matrix h = Matrix::Zero(n, n);
    auto idx = [L](int x, int y, int z) { return (x * L + y) * L + z; };
    for (int x = 0; x < L; ++x)
        for (int y = 0; y < L; ++y)
            for (int z = 0; z < L; ++z)
                h(idx(x, y, z), idx(x, y, z)) = Complex(W * (2.0 * rng.uniform() - 1.0), 0.0);
    // sum over directed offsets; for L = 2 the two wraps land on the same
    // neighbor and the bond doubles, matching the cosine band at every L
    for (int x = 0; x < L; ++x)
        for (int y = 0; y < L; ++y)
            for (int z = 0; z < L; ++z) {
                const int a = idx(x, y, z);
                const int dirs[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
                for (const auto& d : dirs) {
                    const int nx = x + d[0], ny = y + d[1], nz = z + d[2];
                    if (!periodic && (nx < 0 || nx >= L || ny < 0 || ny >= L || nz < 0 || nz >= L))
                        continue;
                    const int b = idx((nx + L) % L, (ny + L) % L, (nz + L) % L);
                    h(a, b) += J;
                }
            }
    return diagonalize(h);
}

QuadraticHamiltonian build_chain(int n, double J, double onsite) {
    if (n < 2) throw std::invalid_argument("build_chain: n must be >= 2");
    Matrix h = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        h(j, j) = onsite;
        h(j, (j + 1) % n) += J;
        h((j + 1) % n, j) += J;
    }
    return diagonalize(h);
}

void chain_plane_wave_basis(int n, double J, double onsite, Matrix& V, RealVector& omega) {
    V.resize(n, n);
    omega.resize(n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int m = 0; m < n; ++m) {
        omega(m) = 2.0 * J * std::cos(2.0 * std::numbers::pi * m / n) + onsite;
        for (int j = 0; j < n; ++j) {
            const double phase = -2.0 * std::numbers::pi * m * (j + 1) / n; // 1-based sites
            V(m, j) = Complex(std::cos(phase), std::sin(phase)) * norm;
        }
    }
}

CouplingPattern CouplingPattern::uniform(int n, double w) {
    CouplingPattern p;
    p.weights = RealVector::Constant(n, w);
    p.validate(n);
    return p;
}

CouplingPattern CouplingPattern::sublattice(int n, int p) {
    if (p < 1 || n % p != 0)
        throw std::invalid_argument("sublattice pattern: p must divide n");
    CouplingPattern out;
    out.weights = RealVector::Zero(n);
    for (int j = 1; j <= n; ++j)
        if (j % p == 0) out.weights(j - 1) = 1.0;
    return out;
}

CouplingPattern CouplingPattern::random(int n, std::uint64_t seed, double lo, double hi) {
    Philox rng = stream_for(seed, stream_tag::pattern);
    CouplingPattern out;
    out.weights = RealVector::Zero(n);
    for (int j = 0; j < n; ++j) out.weights(j) = lo + (hi - lo) * rng.uniform();
    out.validate(n);
    return out;
}

bool CouplingPattern::is_uniform(double tol) const {
    if (weights.size() == 0) return true;
    const double w0 = weights(0);
    return ((weights.array() - w0).abs() <= tol).all();
}

void CouplingPattern::validate(int n) const {
    if (weights.size() != n)
        throw std::invalid_argument("coupling pattern length does not match system size");
    if ((weights.array() < 0.0).any())
        throw std::invalid_argument("coupling pattern weights must be >= 0");
}

void DriveProtocol::validate() const {
    if (times.size() < 2 || times.size() != knots.size())
        throw std::invalid_argument("drive protocol needs >= 2 knots with matching times");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("drive protocol times must be strictly increasing");
    const Eigen::Index n = knots.front().rows();
    for (const auto& k : knots) {
        if (k.rows() != n || k.cols() != n)
            throw std::invalid_argument("drive protocol knots must share one dimension");
        if (hermiticity_defect(k) > kHermitianTol * std::max(1.0, k.cwiseAbs().maxCoeff()))
            throw std::invalid_argument("drive protocol knot is not Hermitian within tolerance");
    }
}

QuadraticHamiltonian sample_drive(const DriveProtocol& p, double t) {
    p.validate();
    const double t0 = p.times.front(), t1 = p.times.back();
    // integrator stage times may overshoot by accumulated rounding
    const double tol = 1e-9 * std::max(1.0, t1 - t0);
    if (t < t0 - tol || t > t1 + tol)
        throw std::out_of_range("sample_drive: t outside protocol duration");
    t = std::clamp(t, t0, t1);
    std::size_t k = 0;
    while (k + 2 < p.times.size() && t >= p.times[k + 1]) ++k;
    if (t >= p.times[k + 1] && k + 2 == p.times.size() && t == t1) {
        return diagonalize(p.knots.back());
    }
    if (p.interp == DriveProtocol::Interp::piecewise_constant) {
        // left-knot convention between knots
        return diagonalize(t == p.times[k + 1] ? p.knots[k + 1] : p.knots[k]);
    }
    const double s = (t - p.times[k]) / (p.times[k + 1] - p.times[k]);
    return diagonalize(((1.0 - s) * p.knots[k] + s * p.knots[k + 1]).eval());
}

void save_hopping(const Matrix& h, const std::string& csv_path, const std::string& json_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    csv << "row,col,re,im\n";
    csv.precision(17);
    for (Eigen::Index i = 0; i < h.rows(); ++i)
        for (Eigen::Index j = i; j < h.cols(); ++j)
            csv << i << ',' << j << ',' << h(i, j).real() << ',' << h(i, j).imag() << '\n';

    nlohmann::json header;
    header["n"] = h.rows();
    header["hash"] = hash_matrix(h);
    header["hermitian_defect"] = hermiticity_defect(h);
    std::ofstream js(json_path);
    if (!js) throw std::runtime_error("cannot write " + json_path);
    js << header.dump(2) << '\n';
}

Matrix load_hopping(const std::string& csv_path, const std::string& json_path) {
    std::ifstream js(json_path);
    if (!js) throw std::runtime_error("cannot open " + json_path);
    nlohmann::json header = nlohmann::json::parse(js);
    const Eigen::Index n = header.at("n").get<Eigen::Index>();

    std::ifstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open " + csv_path);
    Matrix h = Matrix::Zero(n, n);
    std::string line;
    std::getline(csv, line); // header
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        Eigen::Index i, j;
        double re, im;
        if (!(ss >> i >> j >> re >> im))
            throw std::runtime_error("malformed hopping row: " + line);
        h(i, j) = Complex(re, im);
        if (i != j) h(j, i) = std::conj(Complex(re, im));
    }
    if (header.contains("hash") && header.at("hash").get<std::uint64_t>() != hash_matrix(h))
        throw std::runtime_error("hopping matrix hash mismatch against JSON header");
    return h;
}

} // namespace qme
