#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <set>
#include <vector>

#include "qme/hamiltonian.hpp"
#include "support/oracles.hpp"

using namespace qme;

TEST_CASE("single-site hamiltonian diagonalizes trivially") {
    Matrix h(1, 1);
    h(0, 0) = 0.7;
    const auto q = diagonalize(h);
    CHECK(q.omega(0) == doctest::Approx(0.7));
    CHECK(std::abs(q.V(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("diagonalize rejects non-hermitian input") {
    Matrix h(2, 2);
    h << 0.0, 1.0, 0.5, 0.0;
    CHECK_THROWS_AS((void)diagonalize(h), std::invalid_argument);
}

TEST_CASE("eigendecomposition residuals on random matrices") {
    for (unsigned seed : {1u, 2u, 3u}) {
        const Matrix h = oracles::random_hermitian(4, seed);
        const auto q = diagonalize(h);
        const double scale = h.cwiseAbs().maxCoeff();
        // Eq.(2) layout: conj(V) h V^T = diag(omega)
        Matrix d = q.V.conjugate() * h * q.V.transpose();
        for (int m = 0; m < 4; ++m) d(m, m) -= q.omega(m);
        CHECK(d.cwiseAbs().maxCoeff() <= 1e-10 * scale);
        CHECK((q.V * q.V.adjoint() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);
        // reconstruction: h = V^T diag conj(V)
        const Matrix rec = q.V.transpose() * q.omega.cast<Complex>().asDiagonal() * q.V.conjugate();
        CHECK((rec - h).cwiseAbs().maxCoeff() <= 1e-10 * scale);
        // ascending order
        for (int m = 1; m < 4; ++m) CHECK(q.omega(m) >= q.omega(m - 1));
    }
}

TEST_CASE("periodic chain matches the plane-wave band") {
    const int n = 8;
    const auto q = build_chain(n, 1.0, 0.0);
    Matrix v;
    RealVector w;
    chain_plane_wave_basis(n, 1.0, 0.0, v, w);
    std::vector<double> expected(w.data(), w.data() + n);
    std::sort(expected.begin(), expected.end());
    for (int m = 0; m < n; ++m) CHECK(q.omega(m) == doctest::Approx(expected[m]).epsilon(1e-12));
    // the canonical plane waves are eigenvectors of the hopping matrix
    for (int m = 0; m < n; ++m) {
        const Vector pw = v.row(m).transpose();
        CHECK((q.hopping * pw - w(m) * pw).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("gue builder is seed-deterministic") {
    const auto a = build_gue(16, 1.0, 77);
    const auto b = build_gue(16, 1.0, 77);
    const auto c = build_gue(16, 1.0, 78);
    CHECK((a.hopping - b.hopping).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.hopping - c.hopping).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("gue off-diagonal variance matches J^2/N") {
    const int n = 64, samples = 200;
    const double target = 1.0 / n;
    oracles::Welford acc;
    for (int s = 0; s < samples; ++s) {
        const auto q = build_gue(n, 1.0, 1000 + s);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) acc.add(std::norm(q.hopping(i, j)));
    }
    const double se = acc.population_std() / std::sqrt(static_cast<double>(acc.count));
    CHECK(std::abs(acc.mean - target) <= 3.0 * se);
}

TEST_CASE("gue spectrum approximates the semicircle") {
    const auto q = build_gue(256, 1.0, 5);
    std::vector<double> eigs(q.omega.data(), q.omega.data() + q.n());
    const double d =
        oracles::ks_statistic(eigs, [](double x) { return oracles::semicircle_cdf(x, 2.0); });
    CHECK(d < 0.05);
}

TEST_CASE("anderson at W=0 reproduces the cosine band") {
    for (int L : {2, 3}) {
        const auto q = build_anderson3d(L, 0.0, 1.0, 9);
        std::vector<double> band;
        for (int kx = 0; kx < L; ++kx)
            for (int ky = 0; ky < L; ++ky)
                for (int kz = 0; kz < L; ++kz)
                    band.push_back(2.0 * (std::cos(2.0 * std::numbers::pi * kx / L) +
                                          std::cos(2.0 * std::numbers::pi * ky / L) +
                                          std::cos(2.0 * std::numbers::pi * kz / L)));
        std::sort(band.begin(), band.end());
        for (int i = 0; i < q.n(); ++i) CHECK(q.omega(i) == doctest::Approx(band[i]).epsilon(1e-10));
    }
}

TEST_CASE("anderson disorder stays inside [-W, W]") {
    const double w = 3.5;
    const auto q = build_anderson3d(3, w, 1.0, 13);
    for (int i = 0; i < q.n(); ++i) {
        CHECK(q.hopping(i, i).real() <= w);
        CHECK(q.hopping(i, i).real() >= -w);
        CHECK(q.hopping(i, i).imag() == 0.0);
    }
}

TEST_CASE("anderson localization shows in inverse participation ratios") {
    auto mean_ipr = [](double w) {
        double acc = 0.0;
        int count = 0;
        for (int s = 0; s < 4; ++s) {
            const auto q = build_anderson3d(4, w, 1.0, 100 + s);
            for (int m = 0; m < q.n(); ++m) {
                double ipr = 0.0;
                for (int j = 0; j < q.n(); ++j) ipr += std::pow(std::abs(q.V(m, j)), 4.0);
                acc += ipr;
                ++count;
            }
        }
        return acc / count;
    };
    CHECK(mean_ipr(16.0) > mean_ipr(4.0));
}

TEST_CASE("open boundaries drop the wrap bonds") {
    const auto open = build_anderson3d(3, 0.0, 1.0, 1, false);
    const auto wrap = build_anderson3d(3, 0.0, 1.0, 1, true);
    auto degree = [](const Matrix& h, int row) {
        int d = 0;
        for (int j = 0; j < h.cols(); ++j)
            if (j != row && std::abs(h(row, j)) > 0.0) ++d;
        return d;
    };
    CHECK(degree(open.hopping, 0) == 3); // corner site
    CHECK(degree(wrap.hopping, 0) == 6);
}

TEST_CASE("drive sampling: knots, conventions, interpolation") {
    DriveProtocol p;
    p.times = {0.0, 1.0, 2.0};
    p.knots = {oracles::random_hermitian(3, 1), oracles::random_hermitian(3, 2),
               oracles::random_hermitian(3, 3)};
    p.interp = DriveProtocol::Interp::linear;

    CHECK((sample_drive(p, 1.0).hopping - p.knots[1]).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((sample_drive(p, 2.0).hopping - p.knots[2]).cwiseAbs().maxCoeff() < 1e-14);

    const Matrix mid = (p.knots[0] + p.knots[1]) / 2.0;
    const auto qm = sample_drive(p, 0.5);
    CHECK((qm.hopping - mid).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((qm.hopping - qm.hopping.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

    p.interp = DriveProtocol::Interp::piecewise_constant;
    CHECK((sample_drive(p, 0.5).hopping - p.knots[0]).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS((void)sample_drive(p, 2.5), std::out_of_range);
}

TEST_CASE("coupling patterns validate and derive deterministically") {
    const auto u = CouplingPattern::uniform(6);
    CHECK(u.is_uniform());
    const auto s = CouplingPattern::sublattice(6, 3);
    CHECK(s.weights.sum() == doctest::Approx(2.0));
    CHECK_THROWS_AS((void)CouplingPattern::sublattice(6, 4), std::invalid_argument);
    const auto r1 = CouplingPattern::random(6, 5);
    const auto r2 = CouplingPattern::random(6, 5);
    CHECK((r1.weights - r2.weights).cwiseAbs().maxCoeff() == 0.0);
    CHECK(!r1.is_uniform(1e-6));
}

TEST_CASE("hopping matrices round-trip through csv + json header") {
    const Matrix h = oracles::random_hermitian(5, 21);
    save_hopping(h, "tmp_hop.csv", "tmp_hop.json");
    const Matrix back = load_hopping("tmp_hop.csv", "tmp_hop.json");
    CHECK((h - back).cwiseAbs().maxCoeff() == 0.0);
    std::remove("tmp_hop.csv");
    std::remove("tmp_hop.json");
}

TEST_CASE("degenerate clusters group the chain band pairs") {
    const auto q = build_chain(6, 1.0, 0.0);
    const auto clusters = q.degenerate_clusters();
    // band 2 cos(2 pi m / 6): -2, -1, -1, 1, 1, 2
    REQUIRE(clusters.size() == 4);
    CHECK(clusters[1].second - clusters[1].first + 1 == 2);
    CHECK(clusters[2].second - clusters[2].first + 1 == 2);
}
