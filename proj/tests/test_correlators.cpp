#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "cohsim/correlators.hpp"
#include "cohsim/ensemble.hpp"
#include "test_support.hpp"

using namespace cohsim;
using namespace cohsim::corr;
using test_support::kPi;
using test_support::rad;

TEST_CASE("projected intensities at the diagonal settings") {
    CHECK(intensity_port1(kPi / 4.0, 0.0, 0.0, 0.0) == 0.0);
    CHECK(intensity_port2(kPi / 4.0, 0.0, 0.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(intensity_port1(kPi / 4.0, 0.0, 0.0, kPi) == doctest::Approx(0.5).epsilon(1e-13));

    // Which-path setting: flat at I0/4.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        CHECK(intensity_port1(0.0, 20.0 * u(rng), u(rng), kPi * u(rng)) ==
              doctest::Approx(0.25).epsilon(1e-15));
        CHECK(intensity_port2(0.0, 20.0 * u(rng), u(rng), kPi * u(rng)) ==
              doctest::Approx(0.25).epsilon(1e-15));
    }
}

TEST_CASE("diagonal fringes are complementary and bounded") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double df = 20.0 * u(rng), tau = u(rng), phi = 2.0 * kPi * u(rng);
        const double i1 = intensity_port1(kPi / 4.0, df, tau, phi);
        const double i2 = intensity_port2(kPi / 4.0, df, tau, phi);
        CHECK(i1 + i2 == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(i1 >= 0.0);
        CHECK(i1 <= 0.5);

        const double any1 = intensity_port1(2.0 * kPi * u(rng), df, tau, phi);
        CHECK(any1 >= 0.0);
        CHECK(any1 <= 0.5);
    }
}

TEST_CASE("eraser means and visibility") {
    const auto [i1_diag, i2_diag] = eraser_means(kPi / 4.0, kPi / 4.0, 0.0);
    CHECK(i1_diag == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(i2_diag == doctest::Approx(0.5).epsilon(1e-15));

    CHECK(std::abs(eraser_visibility_port1(kPi / 4.0) - 1.0) <= 1e-12);
    CHECK(std::abs(eraser_visibility_port1(0.0) - 0.0) <= 1e-12);
    CHECK(std::abs(eraser_visibility_port1(kPi / 8.0) - std::sin(kPi / 4.0)) <= 1e-12);
    CHECK(eraser_visibility_port1(kPi / 8.0) == doctest::Approx(0.70711).epsilon(1e-4));
    CHECK(std::abs(eraser_visibility_port2(kPi / 8.0) - std::sin(kPi / 4.0)) <= 1e-12);
}

TEST_CASE("classical coincidence dip endpoints") {
    const ensemble::DetuningGrid grid = ensemble::default_grid();
    const double xi = kPi / 4.0, th = kPi / 4.0;

    CHECK(classical_coincidence(grid, xi, th, 0.0, 0.0) == 0.0);
    CHECK(std::abs(classical_coincidence(grid, xi, th, 0.0, 6.0 / 5.0) - 0.5) < 1e-3);
    CHECK(std::abs(classical_coincidence(grid, xi, th, 0.0, 0.29432 / 5.0) - 0.25) < 1e-3);

    ensemble::DetuningGrid broken;
    CHECK_THROWS_AS(classical_coincidence(broken, xi, th, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("classical coincidence matches the analytic dip across tau") {
    const ensemble::DetuningGrid grid = ensemble::default_grid();
    for (int i = 0; i <= 60; ++i) {
        const double tau = 1.2 * static_cast<double>(i) / 60.0;
        const double expected = 0.5 * (1.0 - std::exp(-8.0 * 25.0 * tau * tau));
        CHECK(std::abs(classical_coincidence(grid, kPi / 4.0, kPi / 4.0, 0.0, tau) - expected) < 1e-3);
    }
}

TEST_CASE("heterodyne pair follows the cos^2 joint law") {
    CHECK(heterodyne_pair(kPi / 4.0, kPi / 4.0, 0.0, 0.0, 0.0).value <= 1e-24);
    CHECK(heterodyne_pair(0.0, 0.0, 0.0, 0.0, 0.0).value == doctest::Approx(1.0 / 16.0).epsilon(1e-13));
    CHECK(heterodyne_pair(kPi / 6.0, kPi / 6.0, 0.0, 0.0, 0.0).value ==
          doctest::Approx(1.0 / 64.0).epsilon(1e-12));
}

TEST_CASE("heterodyne term bookkeeping: two kept, two dropped") {
    const HeterodyneResult r = heterodyne_pair(rad(30.0), rad(70.0), 1.3, 0.4, 0.9);
    // Kept pair carries the common beat phase; dropped pair carries DC and
    // the doubled phase. All four have the same product magnitude structure.
    CHECK(std::abs(std::abs(r.terms.kept_hh) - 0.25 * std::cos(rad(30.0)) * std::cos(rad(70.0))) <= 1e-12);
    CHECK(std::abs(std::abs(r.terms.kept_vv) - 0.25 * std::sin(rad(30.0)) * std::sin(rad(70.0))) <= 1e-12);
    CHECK(std::abs(std::abs(r.terms.dropped_hv) - 0.25 * std::cos(rad(30.0)) * std::sin(rad(70.0))) <=
          1e-12);
    CHECK(std::abs(std::abs(r.terms.dropped_vh) - 0.25 * std::sin(rad(30.0)) * std::cos(rad(70.0))) <=
          1e-12);
    CHECK(r.value == doctest::Approx(std::pow(std::cos(rad(100.0)), 2) / 16.0).epsilon(1e-12));
}

TEST_CASE("heterodyne value is phase-free across random draws") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double angle_sum_deg : {10.0, 60.0, 120.0}) {
        const double xi = rad(angle_sum_deg / 3.0);
        const double th = rad(2.0 * angle_sum_deg / 3.0);
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < 1000; ++i) {
            const double df = 40.0 * (u(rng) - 0.5);
            const double tau = 2.4 * (u(rng) - 0.5);
            const double phi = 2.0 * kPi * u(rng);
            const double v = heterodyne_pair(xi, th, df, tau, phi).value;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK((hi - lo) / (0.5 * (hi + lo)) < 1e-12);
    }
}

TEST_CASE("quantum g2 endpoints and classical agreement") {
    CHECK(quantum_g2(0.0, kPi / 4.0, kPi / 4.0, 5.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(quantum_g2(1.2, kPi / 4.0, kPi / 4.0, 5.0) - 0.5) < 1e-3);
    CHECK(std::abs(quantum_g2(1.2, rad(10.0), rad(25.0), 5.0) - 0.5) < 1e-3);

    // tau = 0 limit equals the normalized heterodyne rate for all angles.
    for (int d = 0; d <= 180; d += 5) {
        const double xi = rad(static_cast<double>(d) * 0.6);
        const double th = rad(static_cast<double>(d));
        const double direct = heterodyne_pair(xi, th, 0.0, 0.0, 0.0).value * 16.0;
        CHECK(std::abs(quantum_g2(0.0, xi, th, 5.0) - direct) <= 1e-12);
    }

    // Diagonal polarizers: same curve as the classical product.
    const ensemble::DetuningGrid grid = ensemble::default_grid();
    for (int i = 0; i <= 30; ++i) {
        const double tau = 1.2 * static_cast<double>(i) / 30.0;
        CHECK(std::abs(quantum_g2(tau, kPi / 4.0, kPi / 4.0, 5.0) -
                       classical_coincidence(grid, kPi / 4.0, kPi / 4.0, 0.0, tau)) < 1e-3);
    }
}

TEST_CASE("correlation E from the four-rate combination") {
    CHECK(std::abs(correlation_E(0.0, 0.0) - 1.0) <= 1e-12);
    CHECK(std::abs(correlation_E(0.0, kPi / 4.0) - 0.0) <= 1e-12);
    CHECK(std::abs(correlation_E(kPi / 4.0, kPi / 4.0) + 1.0) <= 1e-12);

    // Identity E = cos(2(xi+theta)) and the I0^2/8 rate sum, on a 1-degree grid.
    const double half = kPi / 2.0;
    for (int i = 0; i <= 180; i += 1) {
        const double xi = rad(static_cast<double>(i));
        const double th = rad(static_cast<double>(180 - i) * 0.35);
        CHECK(std::abs(correlation_E(xi, th) - std::cos(2.0 * (xi + th))) <= 1e-12);
        const double sum = heterodyne_pair(xi, th, 0, 0, 0).value +
                           heterodyne_pair(xi + half, th + half, 0, 0, 0).value +
                           heterodyne_pair(xi + half, th, 0, 0, 0).value +
                           heterodyne_pair(xi, th + half, 0, 0, 0).value;
        CHECK(std::abs(sum - 1.0 / 8.0) <= 1e-13);
    }
}

TEST_CASE("CHSH value at the canonical angles") {
    CHECK(std::abs(chsh_S(rad(0.0), rad(45.0), rad(-22.5), rad(-67.5)) - 2.0 * std::sqrt(2.0)) <= 1e-12);
    CHECK(std::abs(chsh_S(0.0, 0.0, 0.0, 0.0) - 2.0) <= 1e-12);
}

TEST_CASE("CHSH stays under the cosine-correlation bound") {
    const double bound = 2.0 * std::sqrt(2.0) + 1e-12;
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, kPi);
    for (int i = 0; i < 2000; ++i) {
        CHECK(std::abs(chsh_S(u(rng), u(rng), u(rng), u(rng))) <= bound);
    }
    const ChshSearchResult coarse = chsh_grid_search(3.0);
    CHECK(coarse.max_s <= bound);
    CHECK(coarse.max_s > 2.8);  // the grid contains maximizing quadruples
}

TEST_CASE("observables are pi-periodic in the polarizer angles") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double xi = 2.0 * kPi * u(rng), th = 2.0 * kPi * u(rng);
        const double df = 10.0 * u(rng), tau = u(rng), phi = 2.0 * kPi * u(rng);
        CHECK(std::abs(intensity_port1(xi + kPi, df, tau, phi) - intensity_port1(xi, df, tau, phi)) <=
              1e-12);
        CHECK(std::abs(intensity_port2(th + kPi, df, tau, phi) - intensity_port2(th, df, tau, phi)) <=
              1e-12);
        CHECK(std::abs(heterodyne_pair(xi + kPi, th, df, tau, phi).value -
                       heterodyne_pair(xi, th, df, tau, phi).value) <= 1e-12);
        CHECK(std::abs(heterodyne_pair(xi, th + kPi, df, tau, phi).value -
                       heterodyne_pair(xi, th, df, tau, phi).value) <= 1e-12);
        CHECK(std::abs(correlation_E(xi + kPi, th) - correlation_E(xi, th)) <= 1e-12);
    }
}

TEST_CASE("parallel curve kernels match the serial reference bitwise") {
    const ensemble::DetuningGrid grid = ensemble::default_grid();
    const CurveParams params{kPi / 4.0, kPi / 4.0, 0.0};
    std::vector<double> taus;
    for (int i = 0; i <= 400; ++i) taus.push_back(-1.2 + 2.4 * static_cast<double>(i) / 400.0);

    const CorrelationCurve par = classical_dip_curve(grid, params, taus);
    const CorrelationCurve ser = classical_dip_curve_serial(grid, params, taus);
    REQUIRE(par.values.size() == ser.values.size());
    for (std::size_t i = 0; i < par.values.size(); ++i) CHECK(par.values[i] == ser.values[i]);

    std::vector<double> angles;
    for (int i = 0; i < 120; ++i) angles.push_back(rad(1.5 * static_cast<double>(i)));
    const std::vector<double> map_par = correlation_map(angles, angles);
    const std::vector<double> map_ser = correlation_map_serial(angles, angles);
    REQUIRE(map_par.size() == map_ser.size());
    for (std::size_t i = 0; i < map_par.size(); ++i) CHECK(map_par[i] == map_ser[i]);
}

TEST_CASE("dip curve is symmetric in tau") {
    const ensemble::DetuningGrid grid = ensemble::default_grid();
    for (double tau : {0.05, 0.2, 0.61, 1.0}) {
        CHECK(classical_coincidence(grid, kPi / 4.0, kPi / 4.0, 0.0, tau) ==
              doctest::Approx(classical_coincidence(grid, kPi / 4.0, kPi / 4.0, 0.0, -tau))
                  .epsilon(1e-13));
    }
}
