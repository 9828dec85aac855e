// certify.hpp — structural certification: equivalence, detailed balance,
// complete positivity, Gibbs stationarity, and coefficient scaling reports

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qme/dynamics.hpp"
#include "qme/generator.hpp"

namespace qme {

struct CheckEntry {
    enum class Verdict { pass, fail, info };

    std::string name;
    Verdict verdict = Verdict::info;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string note;

    bool hard_fail() const { return verdict == Verdict::fail; }
};

struct CertificationReport {
    std::vector<CheckEntry> checks;
    std::uint64_t generator_hash = 0;
    std::string model_summary;

    bool all_passed() const;
    void print_table(std::ostream& os) const;
    void write_json(const std::string& path) const;
};

// Max |K_a − factor · K_b| over both channels (linear generators).
double coefficient_deviation(const GeneratorCoefficients& a, const GeneratorCoefficients& b,
                             double factor = 1.0);

// Redfield-vs-Davies coefficient residual for the given pattern. Uniform
// patterns get a pass/fail verdict at 1e-12 * coefficient scale; nonuniform
// patterns report the residual as info.
CheckEntry check_equivalence(const QuadraticHamiltonian& ham, const SpectralModel& model,
                             const CouplingPattern& pattern);

// Detailed-balance conditions of a linear Davies generator, certified on the
// 0⊕1-particle representation (c_m = |0><m|):
//   (i)   [rho_G, H_S + H_LS] = 0
//   (ii)  rho_G L = e^{±beta(omega_m - mu)} L rho_G per jump operator
//   (iii) e^{-beta(omega_m - mu)/2} L_m^(1)† = L_m^(2)  (KMS rate identity)
std::vector<CheckEntry> check_detailed_balance(const GeneratorCoefficients& g);

// Minimum Kossakowski eigenvalue; pass iff >= -1e-12 * scale.
CheckEntry check_cp(const GeneratorCoefficients& g);

// || L(rho_G) ||_max <= 1e-10 * max rate.
CheckEntry check_gibbs_stationarity(const GeneratorCoefficients& g);

// KMS residual over a frequency grid spanning the spectrum.
CheckEntry check_kms(const SpectralModel& model, const RealVector& omegas);

CertificationReport certify_generator(const GeneratorCoefficients& g);

// --- End-Matter coefficient scaling -------------------------------------------

enum class EthFamily { gue, anderson };

struct EthScalingRow {
    int size = 0;       // N for gue, L for anderson
    int n = 0;          // matrix dimension
    double secular = 0;     // N^2 * mean_{k != l} sum_j |A^(j)_{kl}|^2
    double nonsecular = 0;  // N^2 * RMS over non-resonant quadruples of |sum_j A_lk A_mn|
};

struct EthScalingReport {
    std::vector<EthScalingRow> rows;
    double secular_slope = 0.0;    // log-log fit vs n
    double nonsecular_slope = 0.0;
    bool has_slopes = false;
};

EthScalingReport eth_scaling_report(EthFamily family, const std::vector<int>& sizes, int samples,
                                    std::uint64_t seed, double J = 1.0, double W = 16.0);

} // namespace qme
