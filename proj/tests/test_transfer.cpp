#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "quadrature.hpp"
#include "stats.hpp"
#include "test_util.hpp"
#include "transfer.hpp"

using namespace corr1d;
using doctest::Approx;

namespace {

double matrix_distance(const TransferMatrix& a, const TransferMatrix& b) {
    return std::abs(a.m11 - b.m11) + std::abs(a.m12 - b.m12) + std::abs(a.m21 - b.m21) +
           std::abs(a.m22 - b.m22);
}

}  // namespace

TEST_CASE("atom matrix basics") {
    const WaveguideParams decoupled = WaveguideParams::from_ratio(0.0);
    CHECK(matrix_distance(atom_matrix(decoupled, 1.3), TransferMatrix::identity()) < 1e-15);

    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const WaveguideParams p = testutil::random_params(rng);
        const double delta = testutil::random_detuning(rng);
        const TransferMatrix m = atom_matrix(p, delta);
        CHECK(std::abs(m.det() - 1.0) < 1e-12);

        // extraction reproduces the single-atom amplitudes
        const ScatterResult via_matrix = extract_scatter(m);
        const ScatterResult direct = single_atom_scatter(p, delta);
        CHECK(std::abs(via_matrix.t - direct.t) < 1e-12);
        CHECK(std::abs(via_matrix.r - direct.r) < 1e-12);
    }

    // lossless resonant atom: no finite transfer matrix
    const WaveguideParams lossless = WaveguideParams::from_ratio(1.0);
    CHECK_THROWS_AS(atom_matrix(lossless, 0.0), SingularAtomMatrix);
}

TEST_CASE("propagation matrix group structure") {
    const WaveguideParams p = WaveguideParams::from_ratio(0.5);
    CHECK(matrix_distance(propagation_matrix(p, 1.7, 1.7), TransferMatrix::identity()) < 1e-15);

    const TransferMatrix half_turn = propagation_matrix(p, 0.0, std::numbers::pi);
    CHECK(std::abs(half_turn.m11 + 1.0) < 1e-12);
    CHECK(std::abs(half_turn.m22 + 1.0) < 1e-12);

    Rng rng(22);
    std::uniform_real_distribution<double> coord(-30.0, 30.0);
    for (int i = 0; i < 100; ++i) {
        const double a = coord(rng), b = coord(rng), c = coord(rng);
        const TransferMatrix composed = propagation_matrix(p, b, c) * propagation_matrix(p, a, b);
        CHECK(matrix_distance(composed, propagation_matrix(p, a, c)) < 1e-12);
    }
}

TEST_CASE("composite products") {
    const WaveguideParams p = WaveguideParams::from_ratio(0.6);

    SUBCASE("empty configuration is pure propagation") {
        const Configuration empty;
        CHECK(matrix_distance(composite(p, empty, -1.0, 4.0), propagation_matrix(p, -1.0, 4.0)) <
              1e-14);
        const ScatterResult s = composite_scatter(p, empty);
        CHECK(std::abs(s.t - 1.0) < 1e-15);
        CHECK(std::abs(s.r) < 1e-15);
    }

    SUBCASE("unit determinant for random chains") {
        Rng rng(33);
        std::uniform_int_distribution<int> n_dist(1, 64);
        int accepted = 0;
        while (accepted < 50) {
            const WaveguideParams q = testutil::random_params(rng);
            const Configuration c = testutil::random_configuration(rng, n_dist(rng));
            const TransferMatrix m =
                composite(q, c, c.positions().front() - 1.0, c.positions().back() + 1.0);

            // The determinant of the floating-point product drifts with the
            // square of the entry growth (~1/T), so the strict tolerance is
            // only meaningful away from deep extinction.
            const double entry_scale =
                std::max({std::abs(m.m11), std::abs(m.m12), std::abs(m.m21), std::abs(m.m22)});
            CHECK(std::abs(m.det() - 1.0) < 1e-11 * std::max(1.0, entry_scale * entry_scale));

            double mft_thickness = 0.0;
            for (double d : c.detunings()) {
                mft_thickness -= std::log(single_atom_power(q, d).first);
            }
            if (mft_thickness > 10.0) continue;
            ++accepted;
            CHECK(std::abs(m.det() - 1.0) < 1e-10);
        }
    }

    SUBCASE("bracket must enclose the atoms") {
        const Configuration c = Configuration::uniform_detuning({0.0, 1.0}, 0.3);
        CHECK_THROWS_AS(composite(p, c, 0.5, 2.0), InvalidParams);
    }

    SUBCASE("two-atom composite matches the closed form") {
        Rng rng(44);
        std::uniform_real_distribution<double> gap(0.05, 20.0);
        for (int i = 0; i < 100; ++i) {
            const WaveguideParams q = testutil::random_params(rng);
            const double d1 = testutil::random_detuning(rng);
            const double d2 = testutil::random_detuning(rng);
            const double x1 = testutil::random_detuning(rng, 5.0);
            const double x12 = gap(rng);
            const Configuration c({x1, x1 + x12}, {d1, d2});
            const ScatterResult s = composite_scatter(q, c);
            CHECK(std::abs(s.t - two_atom_amplitude(q, d1, d2, x12)) < 1e-12);
        }
    }
}

TEST_CASE("extract_scatter edge cases") {
    const ScatterResult s = extract_scatter(TransferMatrix::identity());
    CHECK(std::abs(s.t - 1.0) < 1e-15);
    CHECK(std::abs(s.r) < 1e-15);

    TransferMatrix degenerate{1.0, 1.0, 1.0, 0.0};
    CHECK_THROWS_AS(extract_scatter(degenerate), NoTransmissionSolution);
}

TEST_CASE("two-atom amplitude and recurrent-scattering series") {
    SUBCASE("lossless resonant pair transmits nothing") {
        const WaveguideParams p = WaveguideParams::from_ratio(1.0);
        CHECK(std::abs(two_atom_amplitude(p, 0.0, 0.0, 0.37)) < 1e-15);
    }

    SUBCASE("one term is the mean-field product") {
        Rng rng(55);
        for (int i = 0; i < 50; ++i) {
            const WaveguideParams p = testutil::random_params(rng);
            const double d1 = testutil::random_detuning(rng);
            const double d2 = testutil::random_detuning(rng);
            const Complex mft =
                single_atom_scatter(p, d1).t * single_atom_scatter(p, d2).t;
            CHECK(std::abs(two_atom_series(p, d1, d2, 3.1, 1) - mft) < 1e-14);
        }
    }

    SUBCASE("series converges to the closed form") {
        Rng rng(66);
        std::uniform_real_distribution<double> gap(0.0, 10.0);
        int accepted = 0;
        while (accepted < 50) {
            const WaveguideParams p = testutil::random_params(rng);
            const double d1 = testutil::random_detuning(rng);
            const double d2 = testutil::random_detuning(rng);
            const auto [T1, R1] = single_atom_power(p, d1);
            const auto [T2, R2] = single_atom_power(p, d2);
            if (std::sqrt(R1 * R2) > 0.6) continue;  // remainder bound 0.6^51
            ++accepted;
            const double x12 = gap(rng);
            CHECK(std::abs(two_atom_series(p, d1, d2, x12, 50) -
                           two_atom_amplitude(p, d1, d2, x12)) < 1e-10);
        }
    }

    SUBCASE("divergence at a closed lossless loop") {
        const WaveguideParams p = WaveguideParams::from_ratio(1.0);
        // eta(0)^2 = 1, so 2 k x12 = 2 pi closes the loop exactly.
        CHECK_THROWS_AS(two_atom_amplitude(p, 0.0, 0.0, std::numbers::pi), ResonantDivergence);
    }
}

TEST_CASE("hypergeometric factor: series and quadrature routes agree") {
    Rng rng(77);
    std::uniform_real_distribution<double> rho_dist(0.01, 5.0);
    for (int i = 0; i < 50; ++i) {
        const WaveguideParams p = testutil::random_params(rng);
        const double delta = testutil::random_detuning(rng);
        const Complex eta = eta_delta(p, delta);
        const Complex z = eta * eta;
        if (std::abs(z) > 0.9) continue;
        const Complex b = kI * (rho_dist(rng) / 2.0);
        const Complex series = hyp2f1_one_b_series(b, z);
        const Complex quad = hyp2f1_one_b_quadrature(b, z);
        CHECK(std::abs(series - quad) < 1e-8 * std::max(1.0, std::abs(series)));
    }
}

TEST_CASE("two-atom exponential-separation average") {
    SUBCASE("vanishing density gives the independent-atom product") {
        const WaveguideParams p = WaveguideParams::from_ratio(0.8);
        const Complex t1 = single_atom_scatter(p, 0.4).t;
        CHECK(std::abs(two_atom_average_analytic(p, 0.4, 1e-12) - t1 * t1) < 1e-10);
    }

    SUBCASE("Monte Carlo oracle at a fixed point") {
        const WaveguideParams p = WaveguideParams::from_ratio(0.85);
        const double delta = 0.9;
        const double rho = 0.3;
        const Complex analytic = two_atom_average_analytic(p, delta, rho);

        Rng rng(123456);
        std::exponential_distribution<double> separation(rho);
        ComplexMeanAccumulator acc;
        for (int i = 0; i < 1000000; ++i) {
            acc.add(two_atom_amplitude(p, delta, delta, separation(rng)));
        }
        CHECK(std::abs(acc.mean() - analytic) < 3.0 * acc.stderr_mean());
    }
}

TEST_CASE("uniform-phase averaging removes recurrent scattering") {
    const WaveguideParams p = WaveguideParams::from_ratio(0.8);
    const double delta = 0.7;
    const Complex t1 = single_atom_scatter(p, delta).t;
    const double lnT1 = std::log(std::norm(t1));

    Rng rng(2718);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    ComplexMeanAccumulator t_acc;
    MeanAccumulator lnT_acc;
    for (int i = 0; i < 200000; ++i) {
        const double x12 = phase(rng) / 2.0;  // k = 1
        const Complex t12 = two_atom_amplitude(p, delta, delta, x12);
        t_acc.add(t12);
        lnT_acc.add(std::log(std::norm(t12)));
    }
    // <t12> = t1 t2 and <D12> = D1 + D2 under uniform phase
    CHECK(std::abs(t_acc.mean() - t1 * t1) < 3.0 * t_acc.stderr_mean());
    CHECK(std::abs(lnT_acc.mean() - 2.0 * lnT1) < 3.0 * lnT_acc.stderr_mean());
}

TEST_CASE("Doppler-averaged two-atom amplitude") {
    const WaveguideParams p = WaveguideParams::from_ratio(0.9);

    SUBCASE("zero width degenerates to the fixed-detuning amplitude") {
        const Complex broadened = two_atom_average_doppler(p, 0.5, 0.0, 1.3);
        CHECK(std::abs(broadened - two_atom_amplitude(p, 0.5, 0.5, 1.3)) < 1e-15);
    }

    SUBCASE("narrow broadening moves the deviation only slightly") {
        const double delta = 0.5, x12 = 0.8;
        auto deviation = [&](double width) {
            const Complex exact = two_atom_average_doppler(p, delta, width, x12);
            const Complex mft = [&] {
                if (width == 0.0) {
                    const Complex t1 = single_atom_scatter(p, delta).t;
                    return t1 * t1;
                }
                const Complex t1 = gaussian_average(
                    [&](double d) { return single_atom_scatter(p, d).t; }, delta, width, 1e-9);
                return t1 * t1;
            }();
            return relative_deviation(exact, mft);
        };
        CHECK(std::abs(deviation(0.01) - deviation(0.0)) < 1e-3);
    }
}

TEST_CASE("strong-loss factorization bound") {
    // |T12 - T1 T2| <= C (gamma_w/gamma_t)^2 with C frozen from the loop
    // expansion: the first recurrent term contributes at most ~2 sqrt(R1 R2).
    const double C = 2.2;
    for (double ratio : {0.05, 0.025, 0.01}) {
        const WaveguideParams p = WaveguideParams::from_ratio(ratio);
        for (double delta = -3.0; delta <= 3.0; delta += 0.25) {
            for (double phase = 0.0; phase < 2.0 * std::numbers::pi; phase += 0.3) {
                const double x12 = 0.5 * phase;
                const double T12 = std::norm(two_atom_amplitude(p, delta, delta, x12));
                const auto [T1, R1] = single_atom_power(p, delta);
                CHECK(std::abs(T12 - T1 * T1) <= C * ratio * ratio);
            }
        }
    }
}

TEST_CASE("relative deviation diagnostic") {
    CHECK(relative_deviation({0.3, 0.1}, {0.3, 0.1}) == Approx(0.0));
    CHECK(relative_deviation({0.6, 0.2}, {0.3, 0.1}) == Approx(1.0));
    CHECK_THROWS_AS(relative_deviation({1.0, 0.0}, {0.0, 0.0}), MftVanishes);
}

TEST_CASE("Poisson-averaged mean-field optical thickness") {
    const WaveguideParams lossless = WaveguideParams::from_ratio(1.0);
    CHECK(poisson_mft_thickness(lossless, 0.7, 0.0) == Approx(0.0));
    CHECK(poisson_mft_thickness(lossless, 0.0, 1.0) == Approx(1.0));

    // Monte Carlo oracle: -ln <(T1)^N> over N ~ Poisson(nbar)
    const WaveguideParams p = WaveguideParams::from_ratio(0.6);
    const double delta = 0.5, nbar = 4.0;
    const auto [T1, R1] = single_atom_power(p, delta);
    Rng rng(31415);
    std::poisson_distribution<int> atom_number(nbar);
    MeanAccumulator acc;
    for (int i = 0; i < 400000; ++i) {
        acc.add(std::pow(T1, atom_number(rng)));
    }
    const double mc_thickness = -std::log(acc.mean());
    const double sigma = acc.stderr_mean() / acc.mean();  // propagated through -ln
    CHECK(std::abs(mc_thickness - poisson_mft_thickness(p, delta, nbar)) < 3.0 * sigma);
}
