// dynamics.cpp — RK4 propagation and state utilities

#include "qme/dynamics.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qme {

namespace {

using Rhs = std::function<Matrix(const Matrix&, double)>;

Matrix rk4_step(const Rhs& rhs, const Matrix& y, double t, double h) {
    const Matrix k1 = rhs(y, t);
    const Matrix k2 = rhs(y + 0.5 * h * k1, t + 0.5 * h);
    const Matrix k3 = rhs(y + 0.5 * h * k2, t + 0.5 * h);
    const Matrix k4 = rhs(y + h * k3, t + h);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_grid(const std::vector<double>& grid) {
    if (grid.size() < 2) throw std::invalid_argument("evolve: grid needs at least two points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("evolve: grid must be strictly increasing");
}

// Explicit steps must divide the grid spacing; auto-selected steps are
// rounded up per interval instead.
int substeps_for(double interval, double step, bool auto_step) {
    if (auto_step) return std::max(1, static_cast<int>(std::ceil(interval / step - 1e-12)));
    const double ratio = interval / step;
    const int n = std::max(1, static_cast<int>(std::lround(ratio)));
    if (std::abs(n * step - interval) > 1e-9 * interval)
        throw std::invalid_argument("evolve: step does not divide the grid spacing");
    return n;
}

void monitor_single_particle(const Matrix& rho, double trace0, const EvolveOptions& opts,
                             double psd_allowance, double t) {
    const double drift = std::abs(rho.trace().real() - trace0) + std::abs(rho.trace().imag());
    if (drift > opts.trace_tol) {
        std::ostringstream msg;
        msg << "evolve: trace drift " << drift << " exceeds " << opts.trace_tol << " at t=" << t;
        throw std::runtime_error(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es((rho + rho.adjoint()) / 2.0);
    if (es.eigenvalues().minCoeff() < -psd_allowance) {
        std::ostringstream msg;
        msg << "evolve: state eigenvalue " << es.eigenvalues().minCoeff()
            << " below -" << psd_allowance << " at t=" << t;
        throw std::runtime_error(msg.str());
    }
}

void monitor_correlation(const Matrix& c, const EvolveOptions& opts, double psd_allowance,
                         double t) {
    const double herm = (c - c.adjoint()).cwiseAbs().maxCoeff();
    if (herm > opts.trace_tol)
        throw std::runtime_error("evolve: correlation matrix lost Hermiticity at t=" +
                                 std::to_string(t));
    Eigen::SelfAdjointEigenSolver<Matrix> es((c + c.adjoint()) / 2.0);
    if (es.eigenvalues().minCoeff() < -psd_allowance ||
        es.eigenvalues().maxCoeff() > 1.0 + psd_allowance)
        throw std::runtime_error("evolve: mode occupations left [0, 1] at t=" + std::to_string(t));
}

Trajectory integrate(const Rhs& rhs, Sector sector, GeneratorKind kind, const Matrix& y0,
                     const std::vector<double>& grid, double step, bool auto_step,
                     double psd_allowance, const EvolveOptions& opts,
                     const std::function<Matrix(const Matrix&)>& to_public) {
    Trajectory traj;
    traj.kind = kind;
    traj.sector = sector;
    traj.step = step;
    traj.times = grid;
    traj.states.reserve(grid.size());

    const double trace0 = y0.trace().real();
    Matrix y = y0;
    auto emit = [&](const Matrix& state, double t) {
        Matrix pub = to_public(state);
        pub = (pub + pub.adjoint()) / 2.0; // snapshots only
        if (opts.monitor) {
            if (sector == Sector::single_particle)
                monitor_single_particle(pub, trace0, opts, psd_allowance, t);
            else
                monitor_correlation(pub, opts, psd_allowance, t);
        }
        traj.states.push_back(std::move(pub));
    };

    emit(y, grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const int n = substeps_for(grid[i] - grid[i - 1], step, auto_step);
        const double h = (grid[i] - grid[i - 1]) / n;
        double t = grid[i - 1];
        for (int s = 0; s < n; ++s, t += h) y = rk4_step(rhs, y, t, h);
        emit(y, grid[i]);
    }
    return traj;
}

} // namespace

double default_step(const GeneratorCoefficients& g) {
    const double hnorm = g.ham.spectral_norm();
    const double rate = g.max_rate();
    double step = 0.05;
    if (hnorm > 0.0) step = std::min(step, 0.05 / hnorm);
    if (rate > 0.0) step = std::min(step, 0.05 / rate);
    return step;
}

Trajectory evolve(const GeneratorCoefficients& g, const Matrix& rho0,
                  const std::vector<double>& grid, const EvolveOptions& opts) {
    check_grid(grid);
    const int n = g.n();
    if (rho0.rows() != n || rho0.cols() != n)
        throw std::invalid_argument("evolve: initial state dimension mismatch");
    const bool auto_step = !(opts.step > 0.0);
    const double step = auto_step ? default_step(g) : opts.step;
    // A Redfield generator is not completely positive: a pure initial state
    // develops genuine transient negativity at the dissipation scale, so the
    // abort threshold widens to the rate scale (blowups still trip it).
    const double psd_allowance = g.kind == GeneratorKind::redfield
                                     ? std::max(opts.psd_tol, g.max_rate())
                                     : opts.psd_tol;

    if (g.sector == Sector::single_particle) {
        const Matrix y0 = g.ham.to_eigenbasis(rho0);
        auto rhs = [&g](const Matrix& y, double) { return g.apply(y); };
        auto pub = [&g](const Matrix& y) { return g.ham.to_sitebasis(y); };
        return integrate(rhs, g.sector, g.kind, y0, grid, step, auto_step, psd_allowance, opts,
                         pub);
    }
    auto rhs = [&g](const Matrix& y, double) { return g.apply_correlation(y); };
    auto pub = [](const Matrix& y) { return y; };
    return integrate(rhs, g.sector, g.kind, rho0, grid, step, auto_step, psd_allowance, opts,
                     pub);
}

Trajectory evolve_driven(const DriveProtocol& protocol, const SpectralModel& model,
                         const Matrix& c0_site, const std::vector<double>& grid,
                         const EvolveOptions& opts) {
    check_grid(grid);
    protocol.validate();
    if (grid.back() > protocol.duration() || grid.front() < protocol.times.front())
        throw std::out_of_range("evolve_driven: grid not covered by the protocol");

    const bool auto_step = !(opts.step > 0.0);
    double step = opts.step;
    if (auto_step) {
        const GeneratorCoefficients g0 = instantaneous_davies(protocol, model, grid.front());
        const GeneratorCoefficients g1 = instantaneous_davies(protocol, model, grid.back());
        step = std::min(default_step(g0), default_step(g1));
    }

    auto rhs = [&](const Matrix& c_site, double t) {
        const GeneratorCoefficients g = instantaneous_davies(protocol, model, t);
        const Matrix c_mode = g.ham.to_eigenbasis(c_site);
        return g.ham.to_sitebasis(g.apply_correlation(c_mode)).eval();
    };
    auto pub = [](const Matrix& y) { return y; };
    return integrate(rhs, Sector::mode_occupation, GeneratorKind::davies, c0_site, grid, step,
                     auto_step, opts.psd_tol, opts, pub);
}

double trace_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    const Matrix d = a - b;
    const double defect = (d - d.adjoint()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
    if (defect > 1e-8 * scale)
        throw std::invalid_argument("trace_distance: inputs are not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es((d + d.adjoint()) / 2.0,
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

Matrix gibbs_state(const QuadraticHamiltonian& ham, const SpectralModel& model, Sector sector) {
    const int n = ham.n();
    if (sector == Sector::mode_occupation) {
        // bosonic occupations diverge at and below the chemical potential
        if (model.statistics == Statistics::bosonic && !(model.mu < ham.omega(0)))
            throw std::domain_error("gibbs_state: bosonic model requires mu < min omega");
        Matrix c = Matrix::Zero(n, n);
        for (int m = 0; m < n; ++m) c(m, m) = distribution(model, ham.omega(m));
        return c;
    }
    RealVector w(n);
    for (int m = 0; m < n; ++m) w(m) = -model.beta * (ham.omega(m) - model.mu);
    const double shift = w.maxCoeff();
    RealVector p = (w.array() - shift).exp();
    p /= p.sum();
    Matrix rho = Matrix::Zero(n, n);
    rho.diagonal() = p.cast<Complex>();
    return ham.to_sitebasis(rho);
}

RealVector OccupationRelaxation::at(double t) const {
    return n_inf.array() + (n0 - n_inf).array() * (-rate.array() * t).exp();
}

OccupationRelaxation occupation_relaxation(const GeneratorCoefficients& g, const RealVector& n0) {
    if (g.sector != Sector::mode_occupation ||
        (g.kind != GeneratorKind::davies && g.kind != GeneratorKind::secular_truncation))
        throw std::invalid_argument("occupation_relaxation: expects a linear Davies generator");
    if (g.model.statistics != Statistics::fermionic)
        throw std::invalid_argument("occupation_relaxation: fermionic models only");
    if (n0.size() != g.n()) throw std::invalid_argument("occupation_relaxation: n0 size mismatch");
    OccupationRelaxation out;
    out.rate = g.rate1() + g.rate2();
    out.n_inf = RealVector::Zero(g.n());
    for (int m = 0; m < g.n(); ++m)
        out.n_inf(m) = out.rate(m) > 0.0 ? g.rate2()(m) / out.rate(m)
                                         : n0(m); // decoupled mode keeps its occupation
    out.n0 = n0;
    return out;
}

void export_trajectory(const Trajectory& traj, const GeneratorCoefficients& g,
                       const std::string& observable, const std::string& csv_path,
                       const std::string& json_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    csv.precision(17);
    const int n = static_cast<int>(traj.states.front().rows());
    if (observable == "occupations") {
        csv << "t";
        for (int m = 0; m < n; ++m) csv << ",n" << m;
        csv << '\n';
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            // single-particle snapshots are site-basis; report eigenbasis occupations
            const Matrix st = traj.sector == Sector::single_particle
                                  ? g.ham.to_eigenbasis(traj.states[i])
                                  : traj.states[i];
            csv << traj.times[i];
            for (int m = 0; m < n; ++m) csv << ',' << st(m, m).real();
            csv << '\n';
        }
    } else if (observable == "full") {
        csv << "t";
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) csv << ",re_" << a << '_' << b << ",im_" << a << '_' << b;
        csv << '\n';
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            csv << traj.times[i];
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    csv << ',' << traj.states[i](a, b).real() << ',' << traj.states[i](a, b).imag();
            csv << '\n';
        }
    } else {
        throw std::invalid_argument("export_trajectory: observable must be 'occupations' or 'full'");
    }

    nlohmann::json side;
    side["generator_hash"] = g.metadata_hash();
    side["generator_kind"] = to_string(traj.kind);
    side["sector"] = to_string(traj.sector);
    side["step"] = traj.step;
    side["trace_tol"] = EvolveOptions{}.trace_tol;
    side["psd_tol"] = EvolveOptions{}.psd_tol;
    std::ofstream js(json_path);
    if (!js) throw std::runtime_error("cannot write " + json_path);
    js << side.dump(2) << '\n';
}

void validate_density_matrix(const Matrix& rho, double herm_tol, double trace_tol,
                             double psd_tol) {
    std::vector<std::string> errs;
    if (rho.rows() != rho.cols()) {
        throw std::invalid_argument("density matrix must be square");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
        errs.push_back("not Hermitian within " + std::to_string(herm_tol));
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > trace_tol)
        errs.push_back("trace differs from 1 beyond " + std::to_string(trace_tol));
    Eigen::SelfAdjointEigenSolver<Matrix> es((rho + rho.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -psd_tol)
        errs.push_back("negative eigenvalue beyond -" + std::to_string(psd_tol));
    if (!errs.empty()) {
        std::string all = "invalid density matrix:";
        for (const auto& e : errs) all += "\n  - " + e;
        throw std::invalid_argument(all);
    }
}

} // namespace qme
