// generator.cpp — assembly and application of Redfield/Davies generators

#include "qme/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qme {

namespace {

double cluster_tolerance(const QuadraticHamiltonian& ham) {
    return kClusterTol * std::max(1.0, ham.spectral_norm());
}

// Frequency-cluster mask for the secular truncation of linear generators:
// 1 inside degenerate blocks (including the diagonal), 0 elsewhere.
RealMatrix secular_mask(const QuadraticHamiltonian& ham) {
    const int n = ham.n();
    RealMatrix mask = RealMatrix::Zero(n, n);
    for (const auto& [first, last] : ham.degenerate_clusters())
        for (int a = first; a <= last; ++a)
            for (int b = first; b <= last; ++b) mask(a, b) = 1.0;
    return mask;
}

void require_sector(const GeneratorCoefficients& g, Sector s, const char* what) {
    if (g.sector != s)
        throw std::invalid_argument(std::string(what) + ": generator is in the wrong sector");
}

} // namespace

Matrix overlap_matrix(const QuadraticHamiltonian& ham, const CouplingPattern& pattern) {
    pattern.validate(ham.n());
    const RealVector w2 = pattern.weights.array().square();
    return ham.V * w2.asDiagonal() * ham.V.adjoint();
}

// --- linear builders ---------------------------------------------------------

GeneratorCoefficients build_redfield_linear(const QuadraticHamiltonian& ham,
                                            const SpectralModel& model,
                                            const CouplingPattern& pattern) {
    model.validate();
    const int n = ham.n();
    const Matrix s = overlap_matrix(ham, pattern);
    Vector g1(n), g2(n);
    for (int m = 0; m < n; ++m) {
        g1(m) = gamma_upper11(model, ham.omega(m));
        g2(m) = gamma_upper22(model, ham.omega(m));
    }
    GeneratorCoefficients g;
    g.kind = GeneratorKind::redfield;
    g.sector = Sector::mode_occupation;
    g.ham = ham;
    g.model = model;
    g.k1 = g1.asDiagonal() * s;
    g.k2 = g2.asDiagonal() * s.conjugate();
    g.has_linear = true;
    return g;
}

GeneratorCoefficients build_davies_linear(const QuadraticHamiltonian& ham,
                                          const SpectralModel& model,
                                          const CouplingPattern& pattern) {
    GeneratorCoefficients g = secular_truncate(build_redfield_linear(ham, model, pattern));
    g.kind = GeneratorKind::davies;
    return g;
}

// --- dephasing builders --------------------------------------------------------

namespace {

Matrix bohr_kernel(const QuadraticHamiltonian& ham, const SpectralModel& model) {
    const int n = ham.n();
    Matrix w(n, n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            w(l, k) = dephasing_gamma_upper(model, ham.omega(k) - ham.omega(l));
    return w;
}

void fill_dephasing_common(GeneratorCoefficients& g) {
    const int n = g.n();
    g.deph.u = g.ham.V.conjugate(); // column j = u_j, A^(j) = u_j u_j†
    RealMatrix b = g.deph.u.cwiseAbs2();
    g.deph.gram = b * b.transpose();
}

std::vector<std::vector<std::pair<int, int>>> bohr_clusters(const QuadraticHamiltonian& ham,
                                                            bool* generic_out) {
    const int n = ham.n();
    const double tol = cluster_tolerance(ham);
    struct Entry {
        double nu;
        int l, k;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(n) * n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            entries.push_back({ham.omega(k) - ham.omega(l), l, k});
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.nu < b.nu; });

    std::vector<std::vector<std::pair<int, int>>> clusters;
    std::vector<std::pair<int, int>> cur{{entries[0].l, entries[0].k}};
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].nu - entries[i - 1].nu > tol) {
            clusters.push_back(std::move(cur));
            cur.clear();
        }
        cur.emplace_back(entries[i].l, entries[i].k);
    }
    clusters.push_back(std::move(cur));

    if (generic_out) {
        // generic: every off-diagonal pair sits in its own cluster and the
        // zero cluster holds exactly the n diagonal pairs
        bool generic = true;
        for (const auto& c : clusters) {
            const bool diag = c.front().first == c.front().second;
            if (diag && static_cast<int>(c.size()) != n) generic = false;
            if (!diag && c.size() != 1) generic = false;
            for (const auto& [l, k] : c)
                if ((l == k) != diag) generic = false;
        }
        *generic_out = generic;
    }
    return clusters;
}

} // namespace

GeneratorCoefficients build_redfield_dephasing(const QuadraticHamiltonian& ham,
                                               const SpectralModel& model) {
    model.validate();
    GeneratorCoefficients g;
    g.kind = GeneratorKind::redfield;
    g.sector = Sector::single_particle;
    g.ham = ham;
    g.model = model;
    g.has_deph = true;
    g.deph.weight = bohr_kernel(ham, model);
    fill_dephasing_common(g);

    const int n = ham.n();
    Matrix p = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        const Vector u = g.deph.u.col(j);
        const Matrix a = u * u.adjoint();
        const Matrix gj = g.deph.weight.cwiseProduct(a);
        p.noalias() += u * (u.adjoint() * gj);
    }
    g.deph.left_product = std::move(p);
    return g;
}

namespace {

void fill_davies_dephasing(GeneratorCoefficients& g) {
    const int n = g.n();
    bool generic = false;
    auto clusters = bohr_clusters(g.ham, &generic);
    g.deph.generic = generic;

    const RealMatrix gamma = 2.0 * g.deph.weight.real(); // γ(E_k − E_l)
    g.deph.pop_rate = gamma.cwiseProduct(g.deph.gram);
    g.deph.pop_rate.diagonal().setZero();
    g.deph.escape = g.deph.pop_rate.colwise().sum();

    const double g0 = dephasing_gamma(g.model, 0.0);
    const RealVector mdiag = g.deph.gram.diagonal();
    g.deph.dephase = g0 * (g.deph.gram -
                            0.5 * (mdiag.replicate(1, n) + mdiag.transpose().replicate(n, 1)));

    g.deph.hls = RealVector::Zero(n);
    if (g.model.include_eta) {
        const RealMatrix eta = g.deph.weight.imag();
        for (int m = 0; m < n; ++m) {
            double acc = 0.0;
            for (int l = 0; l < n; ++l) acc += eta(l, m) * g.deph.gram(l, m);
            g.deph.hls(m) = acc;
        }
    }

    if (!generic) {
        if (n > 24)
            throw std::invalid_argument(
                "davies dephasing: spectrum has degenerate Bohr frequencies and n > 24; "
                "the clustered path is meant for small certification cases");
        g.deph.clusters = std::move(clusters);
        Matrix anti = Matrix::Zero(n, n);
        for (const auto& c : g.deph.clusters) {
            for (int j = 0; j < n; ++j) {
                const Vector u = g.deph.u.col(j);
                Matrix b = Matrix::Zero(n, n);
                for (const auto& [l, k] : c) b(l, k) = u(l) * std::conj(u(k));
                const Matrix gj = g.deph.weight.cwiseProduct(b);
                anti.noalias() += b.adjoint() * gj + gj.adjoint() * b;
            }
        }
        g.deph.anti = std::move(anti);
    }
}

} // namespace

GeneratorCoefficients build_davies_dephasing(const QuadraticHamiltonian& ham,
                                             const SpectralModel& model) {
    model.validate();
    GeneratorCoefficients g;
    g.kind = GeneratorKind::davies;
    g.sector = Sector::single_particle;
    g.ham = ham;
    g.model = model;
    g.has_deph = true;
    g.deph.weight = bohr_kernel(ham, model);
    fill_dephasing_common(g);
    fill_davies_dephasing(g);
    return g;
}

GeneratorCoefficients secular_truncate(const GeneratorCoefficients& g) {
    if (g.kind != GeneratorKind::redfield)
        throw std::invalid_argument("secular_truncate expects a redfield generator");
    GeneratorCoefficients out = g;
    out.kind = GeneratorKind::secular_truncation;
    if (g.sector == Sector::mode_occupation) {
        const RealMatrix mask = secular_mask(g.ham);
        out.k1 = g.k1.cwiseProduct(mask.cast<Complex>());
        out.k2 = g.k2.cwiseProduct(mask.cast<Complex>());
        return out;
    }
    fill_davies_dephasing(out);
    out.deph.left_product.resize(0, 0);
    return out;
}

GeneratorCoefficients instantaneous_davies(const DriveProtocol& protocol,
                                           const SpectralModel& model, double t) {
    const QuadraticHamiltonian ham = sample_drive(protocol, t);
    return build_davies_linear(ham, model, CouplingPattern::uniform(ham.n()));
}

// --- accessors -----------------------------------------------------------------

const Matrix& GeneratorCoefficients::channel1() const {
    if (!has_linear) throw std::logic_error("channel1: not a linear generator");
    return k1;
}

const Matrix& GeneratorCoefficients::channel2() const {
    if (!has_linear) throw std::logic_error("channel2: not a linear generator");
    return k2;
}

const Matrix& GeneratorCoefficients::bohr_weights() const {
    if (!has_deph) throw std::logic_error("bohr_weights: not a dephasing generator");
    return deph.weight;
}

void GeneratorCoefficients::install_channels(Matrix new_k1, Matrix new_k2) {
    if (!has_linear) throw std::logic_error("install_channels: not a linear generator");
    if (new_k1.rows() != n() || new_k2.rows() != n())
        throw std::invalid_argument("install_channels: dimension mismatch");
    k1 = std::move(new_k1);
    k2 = std::move(new_k2);
}

RealVector GeneratorCoefficients::rate1() const {
    return 2.0 * channel1().diagonal().real();
}

RealVector GeneratorCoefficients::rate2() const {
    return 2.0 * channel2().diagonal().real();
}

double GeneratorCoefficients::max_rate() const {
    if (sector == Sector::mode_occupation)
        return std::max(rate1().maxCoeff(), rate2().maxCoeff());
    return 2.0 * deph.weight.real().maxCoeff();
}

double GeneratorCoefficients::coefficient_scale() const {
    if (sector == Sector::mode_occupation)
        return std::max(k1.cwiseAbs().maxCoeff(), k2.cwiseAbs().maxCoeff());
    return deph.weight.cwiseAbs().maxCoeff();
}

RealVector GeneratorCoefficients::lamb_shift() const {
    if (!model.include_eta) return RealVector::Zero(n());
    if (sector == Sector::mode_occupation)
        return k2.diagonal().imag() - k1.diagonal().imag();
    if (kind == GeneratorKind::redfield)
        throw std::logic_error("lamb_shift: the dephasing Redfield carries its Hamiltonian-like "
                               "corrections inside the coefficients");
    return deph.hls;
}

// --- action ----------------------------------------------------------------------

Matrix GeneratorCoefficients::apply(const Matrix& rho) const {
    require_sector(*this, Sector::single_particle, "apply");
    const int n = this->n();
    if (rho.rows() != n || rho.cols() != n)
        throw std::invalid_argument("apply: state dimension mismatch");
    if (kind == GeneratorKind::redfield) return apply_dephasing_redfield(rho);
    return apply_dephasing_secular(rho);
}

Matrix GeneratorCoefficients::apply_dephasing_redfield(const Matrix& rho) const {
    const int n = this->n();
    Matrix out(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            out(a, b) = Complex(0.0, -(ham.omega(a) - ham.omega(b))) * rho(a, b);

    // The per-site sums batch into dense products over the column stack
    // U = [u_1 ... u_N]:  Σ_j G_j ρ A_j = (U ⊙ W(Ū ⊙ ρU)) U†.
    const Matrix& w = deph.weight;
    const Matrix& u = deph.u;
    const Matrix uc = u.conjugate();
    const Matrix ru = rho * u;
    const Matrix t1 = u.cwiseProduct(w * uc.cwiseProduct(ru));
    const Matrix sandwich1 = t1 * u.adjoint();
    out += sandwich1;

    const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() <= 1e-13 * scale) {
        // Hermitian state: Σ_j A_j ρ G_j† is the adjoint of the first sandwich
        out += sandwich1.adjoint();
    } else {
        const Matrix xu = rho.adjoint() * u;
        const Matrix s = u.cwiseProduct(w * uc.cwiseProduct(xu));
        out.noalias() += u * s.adjoint();
    }
    out.noalias() -= deph.left_product * rho;
    out.noalias() -= rho * deph.left_product.adjoint();
    return out;
}

Matrix GeneratorCoefficients::apply_dephasing_secular(const Matrix& rho) const {
    const int n = this->n();
    Matrix out(n, n);
    const bool eta_on = model.include_eta;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double phase = ham.omega(a) - ham.omega(b);
            if (eta_on) phase += deph.hls(a) - deph.hls(b);
            out(a, b) = Complex(0.0, -phase) * rho(a, b);
        }

    if (deph.generic) {
        // population transfer, escape damping, and zero-frequency dephasing
        const Vector pop = rho.diagonal();
        const Vector gain = deph.pop_rate.cast<Complex>() * pop;
        for (int a = 0; a < n; ++a) out(a, a) += gain(a);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                out(a, b) += (-0.5 * (deph.escape(a) + deph.escape(b)) + deph.dephase(a, b)) *
                             rho(a, b);
        return out;
    }

    for (const auto& c : deph.clusters) {
        for (int j = 0; j < n; ++j) {
            const Vector u = deph.u.col(j);
            Matrix b = Matrix::Zero(n, n);
            for (const auto& [l, k] : c) b(l, k) = u(l) * std::conj(u(k));
            const Matrix gj = deph.weight.cwiseProduct(b);
            out.noalias() += gj * rho * b.adjoint();
            out.noalias() += b * rho * gj.adjoint();
        }
    }
    out.noalias() -= 0.5 * (deph.anti * rho + rho * deph.anti);
    return out;
}

Matrix GeneratorCoefficients::apply_correlation(const Matrix& c_mode) const {
    require_sector(*this, Sector::mode_occupation, "apply_correlation");
    if (model.statistics != Statistics::fermionic)
        throw std::invalid_argument("apply_correlation: closed one-body form is fermionic only");
    const int n = this->n();
    if (c_mode.rows() != n || c_mode.cols() != n)
        throw std::invalid_argument("apply_correlation: dimension mismatch");

    Matrix out(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            out(p, q) = Complex(0.0, -(ham.omega(p) - ham.omega(q))) * c_mode(p, q);
    out.noalias() -= k1.conjugate() * c_mode;
    out.noalias() -= c_mode * k1.transpose();
    out += k2 + k2.adjoint();
    out.noalias() -= k2 * c_mode;
    out.noalias() -= c_mode * k2.adjoint();
    return out;
}

Matrix fock_apply(const FockSpace& f, const GeneratorCoefficients& g, const Matrix& rho) {
    require_sector(g, Sector::mode_occupation, "fock_apply");
    if (g.model.statistics != Statistics::fermionic)
        throw std::invalid_argument("fock_apply: fermionic models only");
    const int n = g.n();
    if (f.n_modes != n) throw std::invalid_argument("fock_apply: mode count mismatch");
    const Matrix h = f.mode_hamiltonian(g.ham.omega);
    Matrix out = Complex(0.0, -1.0) * (h * rho - rho * h);
    const Matrix& k1 = g.k1;
    const Matrix& k2 = g.k2;
    for (int m = 0; m < n; ++m) {
        for (int nn = 0; nn < n; ++nn) {
            const Complex a1 = k1(m, nn), b1 = std::conj(k1(nn, m));
            if (a1 != 0.0 || b1 != 0.0) {
                const Matrix cm_rho = f.c[m] * rho;
                const Matrix cndag_cm = f.c[nn].adjoint() * f.c[m];
                out.noalias() += (a1 + b1) * (cm_rho * f.c[nn].adjoint());
                out.noalias() -= a1 * (rho * cndag_cm);
                out.noalias() -= b1 * (cndag_cm * rho);
            }
            const Complex a2 = k2(m, nn), b2 = std::conj(k2(nn, m));
            if (a2 != 0.0 || b2 != 0.0) {
                const Matrix cmdag_rho = f.c[m].adjoint() * rho;
                const Matrix cn_cmdag = f.c[nn] * f.c[m].adjoint();
                out.noalias() += (a2 + b2) * (cmdag_rho * f.c[nn]);
                out.noalias() -= a2 * (rho * cn_cmdag);
                out.noalias() -= b2 * (cn_cmdag * rho);
            }
        }
    }
    return out;
}

Matrix GeneratorCoefficients::superoperator() const {
    if (sector == Sector::single_particle) {
        const int n = this->n();
        if (n > 64)
            throw std::invalid_argument("superoperator: single-particle export limited to n <= 64");
        Matrix s(n * n, n * n);
        Matrix basis = Matrix::Zero(n, n);
        for (int b = 0; b < n; ++b)
            for (int a = 0; a < n; ++a) {
                basis(a, b) = 1.0;
                const Matrix col = apply(basis);
                basis(a, b) = 0.0;
                s.col(a + n * b) = Eigen::Map<const Vector>(col.data(), n * n);
            }
        return s;
    }
    const int n = this->n();
    if ((Eigen::Index(1) << n) > 64)
        throw std::invalid_argument("superoperator: Fock export limited to 2^n <= 64");
    const FockSpace f = FockSpace::build(n);
    const Eigen::Index d = f.dim();
    Matrix s(d * d, d * d);
    Matrix basis = Matrix::Zero(d, d);
    for (Eigen::Index b = 0; b < d; ++b)
        for (Eigen::Index a = 0; a < d; ++a) {
            basis(a, b) = 1.0;
            const Matrix col = fock_apply(f, *this, basis);
            basis(a, b) = 0.0;
            s.col(a + d * b) = Eigen::Map<const Vector>(col.data(), d * d);
        }
    return s;
}

// --- Kossakowski ------------------------------------------------------------------

Matrix kossakowski_matrix(const GeneratorCoefficients& g) {
    if (g.sector == Sector::mode_occupation) {
        const int n = g.n();
        Matrix k = Matrix::Zero(2 * n, 2 * n);
        k.topLeftCorner(n, n) = g.channel1() + g.channel1().adjoint();
        k.bottomRightCorner(n, n) = g.channel2() + g.channel2().adjoint();
        return k;
    }
    const int n = g.n();
    if (n > 32)
        throw std::invalid_argument("kossakowski_matrix: dyad basis limited to n <= 32");
    const double tol = cluster_tolerance(g.ham);
    const bool resonant_only = g.kind != GeneratorKind::redfield;

    // pair index alpha = l * n + k for the dyad |l><k|; A^(j)_{lk} = conj(V(l,j)) V(k,j)
    const Matrix& v = g.ham.V;
    const Matrix& w = g.bohr_weights();
    Matrix t(n * n, n);
    RealVector nu(n * n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k) {
            const int alpha = l * n + k;
            nu(alpha) = g.ham.omega(k) - g.ham.omega(l);
            for (int j = 0; j < n; ++j) t(alpha, j) = std::conj(v(l, j)) * v(k, j);
        }
    const Matrix gram = t * t.adjoint();
    Matrix kmat(n * n, n * n);
    for (int a = 0; a < n * n; ++a)
        for (int b = 0; b < n * n; ++b) {
            if (resonant_only && std::abs(nu(a) - nu(b)) > tol) {
                kmat(a, b) = 0.0;
                continue;
            }
            kmat(a, b) = (w(a / n, a % n) + std::conj(w(b / n, b % n))) * gram(a, b);
        }
    return kmat;
}

// --- provenance / JSON --------------------------------------------------------------

std::uint64_t GeneratorCoefficients::metadata_hash() const {
    std::uint64_t h = ham.hash();
    const int k = static_cast<int>(kind), s = static_cast<int>(sector),
              st = static_cast<int>(model.statistics);
    h = fnv1a(&k, sizeof k, h);
    h = fnv1a(&s, sizeof s, h);
    h = fnv1a(&st, sizeof st, h);
    for (double v : {model.beta, model.mu, model.coupling, model.omega_c})
        h = fnv1a(&v, sizeof v, h);
    return h;
}

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json rrow = nlohmann::json::array(), irow = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rrow.push_back(m(i, j).real());
            irow.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    return {{"re", re}, {"im", im}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    const Eigen::Index rows = static_cast<Eigen::Index>(re.size());
    const Eigen::Index cols = rows ? static_cast<Eigen::Index>(re[0].size()) : 0;
    Matrix m(rows, cols);
    for (Eigen::Index a = 0; a < rows; ++a)
        for (Eigen::Index b = 0; b < cols; ++b)
            m(a, b) = Complex(re[a][b].get<double>(), im[a][b].get<double>());
    return m;
}

nlohmann::json model_to_json(const SpectralModel& m) {
    nlohmann::json j;
    j["statistics"] = to_string(m.statistics);
    j["beta"] = m.beta;
    j["mu"] = m.mu;
    j["j_int"] = m.coupling;
    j["include_eta"] = m.include_eta;
    if (m.dos_kind == SpectralModel::DosKind::ohmic) {
        j["dos"] = "ohmic";
        j["omega_c"] = m.omega_c;
    } else {
        j["dos"] = "custom";
        j["dos_omega"] = m.table.omega;
        j["dos_values"] = m.table.dos;
    }
    return j;
}

SpectralModel model_from_json(const nlohmann::json& j) {
    const Statistics st = statistics_from_string(j.at("statistics").get<std::string>());
    if (j.at("dos").get<std::string>() == "ohmic")
        return SpectralModel::ohmic(st, j.at("beta"), j.at("mu"), j.at("j_int"),
                                    j.at("omega_c"), j.at("include_eta"));
    DosTable t;
    t.omega = j.at("dos_omega").get<std::vector<double>>();
    t.dos = j.at("dos_values").get<std::vector<double>>();
    return SpectralModel::custom(st, j.at("beta"), j.at("mu"), j.at("j_int"), std::move(t),
                                 j.at("include_eta"));
}

} // namespace

void export_generator_json(const GeneratorCoefficients& g, const std::string& path) {
    nlohmann::json j;
    j["kind"] = to_string(g.kind);
    j["sector"] = to_string(g.sector);
    j["model"] = model_to_json(g.model);
    j["frequencies"] = std::vector<double>(g.ham.omega.data(), g.ham.omega.data() + g.n());
    j["hopping"] = matrix_to_json(g.ham.hopping);
    j["metadata_hash"] = g.metadata_hash();
    if (g.sector == Sector::mode_occupation) {
        j["channel1"] = matrix_to_json(g.channel1());
        j["channel2"] = matrix_to_json(g.channel2());
    } else {
        j["bohr_weights"] = matrix_to_json(g.bohr_weights());
        j["eigenvectors"] = matrix_to_json(g.ham.V);
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

GeneratorCoefficients load_generator_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    const nlohmann::json j = nlohmann::json::parse(in);
    const SpectralModel model = model_from_json(j.at("model"));
    const QuadraticHamiltonian ham = diagonalize(matrix_from_json(j.at("hopping")));
    const GeneratorKind kind = generator_kind_from_string(j.at("kind").get<std::string>());
    const std::string sector = j.at("sector").get<std::string>();

    GeneratorCoefficients g;
    if (sector == "mode_occupation") {
        g = build_redfield_linear(ham, model, CouplingPattern::uniform(ham.n()));
        g.kind = kind;
        g.install_channels(matrix_from_json(j.at("channel1")), matrix_from_json(j.at("channel2")));
    } else {
        g = kind == GeneratorKind::redfield ? build_redfield_dephasing(ham, model)
                                            : build_davies_dephasing(ham, model);
        g.kind = kind;
    }
    if (j.contains("metadata_hash") &&
        j.at("metadata_hash").get<std::uint64_t>() != g.metadata_hash())
        throw std::runtime_error("generator JSON metadata hash mismatch");
    return g;
}

} // namespace qme
