// bath.cpp — spectral functions, KMS identities, principal-value transforms

#include "qme/bath.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qme {

namespace {

void append_errors(std::vector<std::string>& errs, const DosTable& t) {
    if (t.omega.size() != t.dos.size())
        errs.push_back("dos table: omega and dos column lengths differ");
    if (t.omega.size() < 2)
        errs.push_back("dos table: need at least two nodes");
    for (std::size_t i = 1; i < t.omega.size(); ++i)
        if (!(t.omega[i] > t.omega[i - 1])) {
            errs.push_back("dos table: omega values must be strictly increasing");
            break;
        }
    for (double d : t.dos)
        if (!(d >= 0.0)) {
            errs.push_back("dos table: density of states must be >= 0");
            break;
        }
}

// Stable Fermi/Bose evaluation.
double fermi(double x) {
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (std::exp(x) + 1.0);
}

double bose(double x) {
    // caller guarantees x > 0
    return 1.0 / std::expm1(x);
}

} // namespace

SpectralModel SpectralModel::ohmic(Statistics stats, double beta, double mu, double j_int,
                                   double omega_c, bool include_eta) {
    SpectralModel m;
    m.statistics = stats;
    m.beta = beta;
    m.mu = mu;
    m.coupling = j_int;
    m.dos_kind = DosKind::ohmic;
    m.omega_c = omega_c;
    m.include_eta = include_eta;
    m.validate();
    return m;
}

SpectralModel SpectralModel::custom(Statistics stats, double beta, double mu, double j_int,
                                    DosTable table, bool include_eta) {
    SpectralModel m;
    m.statistics = stats;
    m.beta = beta;
    m.mu = mu;
    m.coupling = j_int;
    m.dos_kind = DosKind::custom;
    m.table = std::move(table);
    m.include_eta = include_eta;
    m.validate();
    return m;
}

void SpectralModel::validate() const {
    std::vector<std::string> errs;
    if (!(beta > 0.0)) errs.push_back("beta must be > 0");
    if (!(coupling >= 0.0)) errs.push_back("coupling J_int must be >= 0");
    if (dos_kind == DosKind::ohmic) {
        if (!(omega_c > 0.0)) errs.push_back("ohmic cutoff omega_c must be > 0");
    } else {
        append_errors(errs, table);
    }
    if (!errs.empty()) {
        std::string all = "invalid SpectralModel:";
        for (const auto& e : errs) all += "\n  - " + e;
        throw std::invalid_argument(all);
    }
}

DosTable load_dos_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dos table: " + path);
    DosTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double w, d;
        if (!(ss >> w >> d)) {
            // allow a single header line
            if (lineno == 1) continue;
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'omega,dos'");
        }
        t.omega.push_back(w);
        t.dos.push_back(d);
    }
    std::vector<std::string> errs;
    append_errors(errs, t);
    if (!errs.empty()) throw std::runtime_error("invalid dos table " + path + ": " + errs.front());
    return t;
}

double distribution(const SpectralModel& model, double omega) {
    const double x = model.beta * (omega - model.mu);
    if (model.statistics == Statistics::fermionic) return fermi(x);
    if (!(omega > model.mu))
        throw std::domain_error("bosonic distribution requires omega > mu (diverging occupation)");
    return bose(x);
}

double density_of_states(const SpectralModel& model, double omega) {
    if (model.dos_kind == SpectralModel::DosKind::ohmic)
        return std::abs(omega) * std::exp(-std::abs(omega) / model.omega_c);
    const auto& w = model.table.omega;
    const auto& d = model.table.dos;
    if (omega <= w.front() || omega >= w.back()) {
        // zero outside the table, including exactly at the edges' outside
        if (omega == w.front()) return d.front();
        if (omega == w.back()) return d.back();
        return 0.0;
    }
    const auto it = std::upper_bound(w.begin(), w.end(), omega);
    const std::size_t i = static_cast<std::size_t>(it - w.begin());
    const double t = (omega - w[i - 1]) / (w[i] - w[i - 1]);
    return d[i - 1] + t * (d[i] - d[i - 1]);
}

RatePair gamma_pair(const SpectralModel& model, double omega) {
    const double j2 = model.coupling * model.coupling;
    const double dos = density_of_states(model, omega);
    if (dos == 0.0) return {0.0, 0.0};
    const double f = distribution(model, omega);
    const double hole = model.statistics == Statistics::fermionic ? 1.0 - f : 1.0 + f;
    return {hole * dos * j2, f * dos * j2};
}

namespace {

// Channel functions as plain callables over frequency, J^2 included.
double gamma11_fn(const SpectralModel& m, double nu) { return gamma_pair(m, nu).gamma11; }
double gamma22_fn(const SpectralModel& m, double nu) { return gamma_pair(m, nu).gamma22; }

struct Window {
    double lo, hi;
};

// Integration window outside which a channel is negligible.
Window support_window(const SpectralModel& m, const std::function<double(double)>& g) {
    if (m.dos_kind == SpectralModel::DosKind::custom) {
        double lo = m.table.omega.front();
        if (m.statistics == Statistics::bosonic) lo = std::max(lo, m.mu + 1e-12 * (1.0 + std::abs(m.mu)));
        return {lo, m.table.omega.back()};
    }
    // scan for the scale first
    double gmax = 0.0;
    const double start = m.statistics == Statistics::bosonic
                             ? m.mu + 1e-9 * (1.0 + std::abs(m.mu))
                             : -4.0 * m.omega_c;
    for (int i = 0; i <= 400; ++i) {
        const double nu = start + (4.0 * m.omega_c - start) * i / 400.0;
        gmax = std::max(gmax, std::abs(g(nu)));
    }
    const double floor = std::max(gmax, 1e-30) * 1e-15;
    double hi = 4.0 * m.omega_c;
    while (std::abs(g(hi)) > floor && hi < 1e6 * m.omega_c) hi *= 1.5;
    double lo;
    if (m.statistics == Statistics::bosonic) {
        lo = start;
    } else {
        lo = -4.0 * m.omega_c;
        while (std::abs(g(lo)) > floor && -lo < 1e6 * m.omega_c) lo *= 1.5;
    }
    return {lo, hi};
}

struct Quad {
    double value = 0.0;
    double error = 0.0;
};

void adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb, double whole, double tol,
                      int depth, Quad& acc) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = (left + right - whole) / 15.0;
    if (depth <= 0 || std::abs(err) <= tol) {
        if (depth <= 0 && std::abs(err) > tol) acc.error += std::abs(err);
        acc.value += left + right + err; // Richardson correction
        acc.error += std::abs(err) * 1e-2;
        return;
    }
    adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, acc);
    adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, acc);
}

Quad integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    Quad acc;
    if (!(b > a)) return acc;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 44, acc);
    return acc;
}

} // namespace

double hilbert_pv(const std::function<double(double)>& f, double omega,
                  double lo, double hi, double abs_tol, double* err_estimate) {
    if (!(hi > lo)) throw std::invalid_argument("hilbert_pv: empty window");
    const double span = hi - lo;
    const double fw = (omega >= lo && omega <= hi) ? f(omega) : 0.0;

    // derivative of f at omega for the removable point of the subtracted kernel
    double dfd = 0.0;
    if (omega > lo && omega < hi) {
        const double h = 1e-6 * (1.0 + std::abs(omega));
        const double wl = std::max(lo, omega - h), wr = std::min(hi, omega + h);
        dfd = (f(wr) - f(wl)) / (wr - wl);
    }
    const double tiny = 1e-13 * (1.0 + std::abs(omega) + span);
    auto g = [&](double nu) {
        if (std::abs(nu - omega) < tiny) return -dfd;
        return (f(nu) - fw) / (omega - nu);
    };

    // split at the singular point and at zero (ohmic kink)
    std::vector<double> pts{lo, hi};
    for (double p : {omega, 0.0})
        if (p > lo && p < hi) pts.push_back(p);
    std::sort(pts.begin(), pts.end());

    Quad total;
    const double seg_tol = abs_tol * 2.0 * std::numbers::pi / static_cast<double>(pts.size());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Quad q = integrate(g, pts[i], pts[i + 1], seg_tol);
        total.value += q.value;
        total.error += q.error;
    }
    double analytic = 0.0;
    if (fw != 0.0 && omega > lo && omega < hi)
        analytic = fw * std::log(std::abs((omega - lo) / (omega - hi)));

    const double result = (total.value + analytic) / (2.0 * std::numbers::pi);
    const double achieved = total.error / (2.0 * std::numbers::pi);
    if (err_estimate) *err_estimate = achieved;
    if (achieved > abs_tol * 10.0)
        throw std::runtime_error("hilbert_pv: quadrature did not converge, error estimate " +
                                 std::to_string(achieved));
    return result;
}

ShiftPair eta_pair(const SpectralModel& model, double omega) {
    if (!model.include_eta) return {0.0, 0.0};
    auto g11 = [&](double nu) { return gamma11_fn(model, nu); };
    auto g22 = [&](double nu) { return gamma22_fn(model, nu); };
    const Window w1 = support_window(model, g11);
    const Window w2 = support_window(model, g22);
    ShiftPair out;
    out.eta11 = hilbert_pv(g11, omega, w1.lo, w1.hi);
    out.eta22 = hilbert_pv(g22, omega, w2.lo, w2.hi);
    return out;
}

Complex gamma_upper11(const SpectralModel& model, double omega) {
    const double g = gamma_pair(model, omega).gamma11;
    if (!model.include_eta) return {0.5 * g, 0.0};
    return {0.5 * g, eta_pair(model, omega).eta11};
}

Complex gamma_upper22(const SpectralModel& model, double omega) {
    const double g = gamma_pair(model, omega).gamma22;
    if (!model.include_eta) return {0.5 * g, 0.0};
    return {0.5 * g, eta_pair(model, omega).eta22};
}

double dephasing_gamma(const SpectralModel& model, double nu) {
    const double j2 = model.coupling * model.coupling;
    if (nu == 0.0) {
        if (model.statistics == Statistics::bosonic && model.mu == 0.0) {
            // continuous limit of (1+f(nu)) D(nu): D'(0+)/beta
            double slope;
            if (model.dos_kind == SpectralModel::DosKind::ohmic) {
                slope = 1.0;
            } else {
                const double d0 = density_of_states(model, 0.0);
                if (d0 != 0.0)
                    throw std::domain_error("dephasing_gamma: bosonic mu=0 with D(0) != 0 diverges at nu=0");
                const double h = 1e-8;
                slope = density_of_states(model, h) / h;
            }
            return j2 * slope / model.beta;
        }
        const double dos = density_of_states(model, 0.0);
        if (dos == 0.0) return 0.0;
        const double f = distribution(model, 0.0);
        const double plus = model.statistics == Statistics::fermionic ? 1.0 - f : 1.0 + f;
        return j2 * plus * dos; // symmetric average is ill-defined only off KMS; D(0)=0 in the ohmic case
    }
    if (nu > 0.0) {
        const double dos = density_of_states(model, nu);
        if (dos == 0.0) return 0.0;
        const double f = distribution(model, nu);
        const double plus = model.statistics == Statistics::fermionic ? 1.0 - f : 1.0 + f;
        return j2 * plus * dos;
    }
    const double dos = density_of_states(model, -nu);
    if (dos == 0.0) return 0.0;
    return j2 * distribution(model, -nu) * dos;
}

double dephasing_eta(const SpectralModel& model, double nu) {
    if (!model.include_eta) return 0.0;
    auto g = [&](double x) { return dephasing_gamma(model, x); };
    double hi;
    if (model.dos_kind == SpectralModel::DosKind::custom) {
        hi = std::max(std::abs(model.table.omega.front()), std::abs(model.table.omega.back()));
    } else {
        double gmax = 0.0;
        for (int i = -200; i <= 200; ++i) gmax = std::max(gmax, std::abs(g(4.0 * model.omega_c * i / 200.0)));
        const double floor = std::max(gmax, 1e-30) * 1e-15;
        hi = 4.0 * model.omega_c;
        while ((std::abs(g(hi)) > floor || std::abs(g(-hi)) > floor) && hi < 1e6 * model.omega_c) hi *= 1.5;
    }
    return hilbert_pv(g, nu, -hi, hi);
}

Complex dephasing_gamma_upper(const SpectralModel& model, double nu) {
    return {0.5 * dephasing_gamma(model, nu), dephasing_eta(model, nu)};
}

std::vector<SpectralSample> sample_spectrum(const SpectralModel& model,
                                            const std::vector<double>& grid) {
    std::vector<SpectralSample> out;
    out.reserve(grid.size());
    for (double w : grid) {
        SpectralSample s;
        s.omega = w;
        const RatePair r = gamma_pair(model, w);
        s.gamma11 = r.gamma11;
        s.gamma22 = r.gamma22;
        const ShiftPair e = eta_pair(model, w);
        s.eta11 = e.eta11;
        s.eta22 = e.eta22;
        out.push_back(s);
    }
    return out;
}

double kms_residual(const SpectralModel& model, const SpectralSample& s) {
    const double lhs = s.gamma11;
    const double rhs = std::exp(model.beta * (s.omega - model.mu)) * s.gamma22;
    return std::abs(lhs - rhs) / std::max(s.gamma11, 1.0);
}

} // namespace qme
