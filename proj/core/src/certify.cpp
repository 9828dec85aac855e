// certify.cpp — residual computations behind the certification reports

#include "qme/certify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qme/rng.hpp"

namespace qme {

namespace {

constexpr double kEquivalenceTol = 1e-12;
constexpr double kBalanceTol = 1e-10;
constexpr double kCpTol = 1e-12;
constexpr double kStationarityTol = 1e-10;
constexpr double kKmsTol = 1e-12;

const char* verdict_str(CheckEntry::Verdict v) {
    switch (v) {
        case CheckEntry::Verdict::pass: return "pass";
        case CheckEntry::Verdict::fail: return "FAIL";
        case CheckEntry::Verdict::info: return "info";
    }
    return "?";
}

} // namespace

bool CertificationReport::all_passed() const {
    return std::none_of(checks.begin(), checks.end(),
                        [](const CheckEntry& c) { return c.hard_fail(); });
}

void CertificationReport::print_table(std::ostream& os) const {
    os << std::left << std::setw(34) << "check" << std::setw(8) << "verdict"
       << std::setw(14) << "residual" << std::setw(14) << "tolerance" << "note\n";
    for (const auto& c : checks) {
        os << std::left << std::setw(34) << c.name << std::setw(8) << verdict_str(c.verdict)
           << std::setw(14) << std::scientific << std::setprecision(3) << c.residual
           << std::setw(14) << c.tolerance << c.note << '\n';
    }
    os.unsetf(std::ios::scientific);
}

void CertificationReport::write_json(const std::string& path) const {
    nlohmann::json j;
    j["generator_hash"] = generator_hash;
    j["model"] = model_summary;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"verdict", verdict_str(c.verdict)},
                               {"residual", c.residual},
                               {"tolerance", c.tolerance},
                               {"note", c.note}});
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

double coefficient_deviation(const GeneratorCoefficients& a, const GeneratorCoefficients& b,
                             double factor) {
    const double d1 = (a.channel1() - factor * b.channel1()).cwiseAbs().maxCoeff();
    const double d2 = (a.channel2() - factor * b.channel2()).cwiseAbs().maxCoeff();
    return std::max(d1, d2);
}

CheckEntry check_equivalence(const QuadraticHamiltonian& ham, const SpectralModel& model,
                             const CouplingPattern& pattern) {
    const GeneratorCoefficients redfield = build_redfield_linear(ham, model, pattern);
    const GeneratorCoefficients davies = build_davies_linear(ham, model, pattern);
    const double scale = std::max(davies.coefficient_scale(), 1e-300);
    const double residual = coefficient_deviation(redfield, davies) / scale;

    CheckEntry e;
    e.name = "redfield-davies equivalence";
    e.residual = residual;
    e.tolerance = kEquivalenceTol;
    if (pattern.is_uniform(1e-15)) {
        e.verdict = residual <= e.tolerance ? CheckEntry::Verdict::pass : CheckEntry::Verdict::fail;
        e.note = "uniform coupling";
    } else {
        e.verdict = CheckEntry::Verdict::info;
        e.note = "nonuniform coupling: residual reported without verdict";
    }
    return e;
}

std::vector<CheckEntry> check_detailed_balance(const GeneratorCoefficients& g) {
    if (g.sector != Sector::mode_occupation ||
        (g.kind != GeneratorKind::davies && g.kind != GeneratorKind::secular_truncation))
        throw std::invalid_argument("check_detailed_balance: expects a linear Davies generator");

    const int n = g.n();
    const double beta = g.model.beta, mu = g.model.mu;
    const RealVector r1 = g.rate1(), r2 = g.rate2();
    const RealVector lamb = g.lamb_shift();

    // 0 ⊕ 1 particle representation: index 0 = vacuum, 1..n = modes
    RealVector boltz(n);
    for (int m = 0; m < n; ++m) boltz(m) = std::exp(-beta * (g.ham.omega(m) - mu));
    const double z = 1.0 + boltz.sum();
    Matrix rho_g = Matrix::Zero(n + 1, n + 1);
    rho_g(0, 0) = 1.0 / z;
    for (int m = 0; m < n; ++m) rho_g(m + 1, m + 1) = boltz(m) / z;

    std::vector<CheckEntry> out;

    {
        Matrix h = Matrix::Zero(n + 1, n + 1);
        for (int m = 0; m < n; ++m) h(m + 1, m + 1) = g.ham.omega(m) + lamb(m);
        const double resid = (rho_g * h - h * rho_g).cwiseAbs().maxCoeff() /
                             std::max(1.0, h.cwiseAbs().maxCoeff());
        CheckEntry e;
        e.name = "detailed balance (i) [rho_G, H+H_LS]";
        e.residual = resid;
        e.tolerance = kBalanceTol;
        e.verdict = resid <= e.tolerance ? CheckEntry::Verdict::pass : CheckEntry::Verdict::fail;
        out.push_back(e);
    }

    {
        double resid = 0.0;
        for (int m = 0; m < n; ++m) {
            Matrix l1 = Matrix::Zero(n + 1, n + 1);
            l1(0, m + 1) = std::sqrt(std::max(0.0, r1(m)));
            Matrix l2 = Matrix::Zero(n + 1, n + 1);
            l2(m + 1, 0) = std::sqrt(std::max(0.0, r2(m)));
            const double scale1 =
                std::max(1e-300, (rho_g * l1).cwiseAbs().maxCoeff());
            const double scale2 =
                std::max(1e-300, (rho_g * l2).cwiseAbs().maxCoeff());
            const double d1 = (rho_g * l1 - std::exp(beta * (g.ham.omega(m) - mu)) * l1 * rho_g)
                                  .cwiseAbs()
                                  .maxCoeff() /
                              scale1;
            const double d2 = (rho_g * l2 - std::exp(-beta * (g.ham.omega(m) - mu)) * l2 * rho_g)
                                  .cwiseAbs()
                                  .maxCoeff() /
                              scale2;
            resid = std::max({resid, r1(m) > 0.0 ? d1 : 0.0, r2(m) > 0.0 ? d2 : 0.0});
        }
        CheckEntry e;
        e.name = "detailed balance (ii) jump energy";
        e.residual = resid;
        e.tolerance = kBalanceTol;
        e.verdict = resid <= e.tolerance ? CheckEntry::Verdict::pass : CheckEntry::Verdict::fail;
        out.push_back(e);
    }

    {
        // KMS rate identity e^{-beta(omega-mu)/2} sqrt(rate1) = sqrt(rate2)
        double resid = 0.0;
        for (int m = 0; m < n; ++m) {
            const double lhs = std::exp(-0.5 * beta * (g.ham.omega(m) - mu)) *
                               std::sqrt(std::max(0.0, r1(m)));
            const double rhs = std::sqrt(std::max(0.0, r2(m)));
            const double scale = std::max({lhs, rhs, 1e-300});
            if (r1(m) == 0.0 && r2(m) == 0.0) continue; // vacuous: no jump operators
            resid = std::max(resid, std::abs(lhs - rhs) / scale);
        }
        CheckEntry e;
        e.name = "detailed balance (iii) reversibility";
        e.residual = resid;
        e.tolerance = kBalanceTol;
        e.verdict = resid <= e.tolerance ? CheckEntry::Verdict::pass : CheckEntry::Verdict::fail;
        out.push_back(e);
    }
    return out;
}

CheckEntry check_cp(const GeneratorCoefficients& g) {
    const Matrix k = kossakowski_matrix(g);
    Eigen::SelfAdjointEigenSolver<Matrix> es((k + k.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    CheckEntry e;
    e.name = "complete positivity (kossakowski)";
    e.residual = -std::min(0.0, min_eig) / scale;
    e.tolerance = kCpTol;
    e.verdict = e.residual <= e.tolerance ? CheckEntry::Verdict::pass : CheckEntry::Verdict::fail;
    std::ostringstream note;
    note << "min eigenvalue " << std::scientific << std::setprecision(3) << min_eig;
    e.note = note.str();
    return e;
}

CheckEntry check_gibbs_stationarity(const GeneratorCoefficients& g) {
    CheckEntry e;
    e.name = "gibbs stationarity";
    e.tolerance = kStationarityTol;
    const double rate = std::max(g.max_rate(), 1e-300);
    if (g.sector == Sector::mode_occupation) {
        if (g.model.statistics != Statistics::fermionic) {
            e.verdict = CheckEntry::Verdict::info;
            e.note = "bosonic linear stationarity not certified (one-body closure is fermionic)";
            return e;
        }
        const Matrix c_g = gibbs_state(g.ham, g.model, Sector::mode_occupation);
        e.residual = g.apply_correlation(c_g).cwiseAbs().maxCoeff() / rate;
    } else {
        const Matrix rho_site = gibbs_state(g.ham, g.model, Sector::single_particle);
        e.residual = g.apply(g.ham.to_eigenbasis(rho_site)).cwiseAbs().maxCoeff() / rate;
    }
    e.verdict = e.residual <= e.tolerance ? CheckEntry::Verdict::pass : CheckEntry::Verdict::fail;
    if (g.kind == GeneratorKind::redfield) e.note = "redfield generator";
    return e;
}

CheckEntry check_kms(const SpectralModel& model, const RealVector& omegas) {
    double resid = 0.0;
    for (Eigen::Index i = 0; i < omegas.size(); ++i) {
        SpectralSample s;
        s.omega = omegas(i);
        const RatePair r = gamma_pair(model, s.omega);
        s.gamma11 = r.gamma11;
        s.gamma22 = r.gamma22;
        resid = std::max(resid, kms_residual(model, s));
    }
    CheckEntry e;
    e.name = "kms condition";
    e.residual = resid;
    e.tolerance = kKmsTol;
    e.verdict = resid <= e.tolerance ? CheckEntry::Verdict::pass : CheckEntry::Verdict::fail;
    return e;
}

namespace {

// Scalar-spectrum KMS over the Bohr frequencies of a dephasing generator.
CheckEntry check_kms_scalar(const SpectralModel& model, const RealVector& omegas) {
    double resid = 0.0;
    for (Eigen::Index a = 0; a < omegas.size(); ++a)
        for (Eigen::Index b = 0; b < omegas.size(); ++b) {
            const double nu = omegas(b) - omegas(a);
            if (nu <= 0.0) continue;
            const double lhs = dephasing_gamma(model, nu);
            const double rhs =
                std::exp(model.beta * (nu - model.mu)) * dephasing_gamma(model, -nu);
            resid = std::max(resid, std::abs(lhs - rhs) / std::max(lhs, 1.0));
        }
    CheckEntry e;
    e.name = "kms condition";
    e.residual = resid;
    e.tolerance = kKmsTol;
    e.verdict = resid <= e.tolerance ? CheckEntry::Verdict::pass : CheckEntry::Verdict::fail;
    e.note = "scalar dephasing spectrum over Bohr frequencies";
    return e;
}

} // namespace

CertificationReport certify_generator(const GeneratorCoefficients& g) {
    CertificationReport rep;
    rep.generator_hash = g.metadata_hash();
    std::ostringstream ms;
    ms << to_string(g.kind) << " " << to_string(g.sector) << " n=" << g.n() << " "
       << to_string(g.model.statistics) << " beta=" << g.model.beta << " mu=" << g.model.mu
       << " J_int=" << g.model.coupling;
    rep.model_summary = ms.str();

    rep.checks.push_back(g.sector == Sector::single_particle
                             ? check_kms_scalar(g.model, g.ham.omega)
                             : check_kms(g.model, g.ham.omega));
    rep.checks.push_back(check_cp(g));
    rep.checks.push_back(check_gibbs_stationarity(g));
    if (g.sector == Sector::mode_occupation &&
        (g.kind == GeneratorKind::davies || g.kind == GeneratorKind::secular_truncation)) {
        for (auto& e : check_detailed_balance(g)) rep.checks.push_back(std::move(e));
    }
    return rep;
}

EthScalingReport eth_scaling_report(EthFamily family, const std::vector<int>& sizes, int samples,
                                    std::uint64_t seed, double J, double W) {
    if (sizes.empty()) throw std::invalid_argument("eth_scaling_report: sizes must be nonempty");
    if (!std::is_sorted(sizes.begin(), sizes.end()))
        throw std::invalid_argument("eth_scaling_report: sizes must be ascending");
    if (samples < 1) throw std::invalid_argument("eth_scaling_report: samples must be >= 1");

    EthScalingReport rep;
    for (int size : sizes) {
        double sec_acc = 0.0, nonsec_acc = 0.0;
        int n_dim = 0;
        for (int s = 0; s < samples; ++s) {
            const std::uint64_t sample_seed = ensemble_sample_seed(seed, size, s);
            const QuadraticHamiltonian ham =
                family == EthFamily::gue ? build_gue(size, J, sample_seed)
                                         : build_anderson3d(size, W, J, sample_seed);
            const int n = ham.n();
            n_dim = n;
            const double n2 = static_cast<double>(n) * n;
            const RealMatrix b = ham.V.cwiseAbs2(); // b(m, j) = |V(m,j)|^2
            const RealMatrix gram = b * b.transpose();

            // secular: mean over k != l of sum_j |A_{kl}|^2 = gram(k, l)
            double sec = (gram.sum() - gram.trace()) / (n2 - n);
            sec_acc += n2 * sec;

            // non-secular: RMS over sampled non-resonant quadruples
            Philox rng = stream_for(sample_seed, stream_tag::ensemble, 0xE7);
            const double tol = 1e-9 * std::max(1.0, ham.spectral_norm());
            const int target = 512;
            double sq = 0.0;
            int got = 0;
            while (got < target) {
                const int k = static_cast<int>(rng.next_u64() % n);
                const int l = static_cast<int>(rng.next_u64() % n);
                const int m = static_cast<int>(rng.next_u64() % n);
                const int nn = static_cast<int>(rng.next_u64() % n);
                if (std::abs((ham.omega(k) - ham.omega(l)) - (ham.omega(m) - ham.omega(nn))) <= tol)
                    continue; // resonant: belongs to the Davies part
                Complex acc = 0.0;
                for (int j = 0; j < n; ++j)
                    acc += std::conj(ham.V(l, j)) * ham.V(k, j) * std::conj(ham.V(m, j)) *
                           ham.V(nn, j);
                sq += std::norm(acc);
                ++got;
            }
            nonsec_acc += n2 * std::sqrt(sq / target);
        }
        EthScalingRow row;
        row.size = size;
        row.n = n_dim;
        row.secular = sec_acc / samples;
        row.nonsecular = nonsec_acc / samples;
        rep.rows.push_back(row);
    }

    if (rep.rows.size() >= 2) {
        auto slope = [&](auto field) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double n = static_cast<double>(rep.rows.size());
            for (const auto& r : rep.rows) {
                const double x = std::log(static_cast<double>(r.n));
                const double y = std::log(field(r));
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
            }
            return (n * sxy - sx * sy) / (n * sxx - sx * sx);
        };
        rep.secular_slope = slope([](const EthScalingRow& r) { return r.secular; });
        rep.nonsecular_slope = slope([](const EthScalingRow& r) { return r.nonsecular; });
        rep.has_slopes = true;
    }
    return rep;
}

} // namespace qme
