#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <doctest.h>

#include "cohsim/correlators.hpp"
#include "cohsim/ensemble.hpp"
#include "cohsim/errors.hpp"
#include "cohsim/montecarlo.hpp"
#include "test_support.hpp"

using namespace cohsim;
using namespace cohsim::mc;
using test_support::kPi;

namespace {

optics::OpticsParams diag_params(double tau) {
    optics::OpticsParams p;
    p.xi = kPi / 4.0;
    p.theta = kPi / 4.0;
    p.phi = 0.0;
    p.tau = tau;
    return p;
}

optics::OpticsParams which_path_params() {
    optics::OpticsParams p;  // xi = theta = 0: click probability 1/4 per detector
    return p;
}

bool streams_equal(const TagStream& a, const TagStream& b) {
    return a.tags == b.tags && a.n_events == b.n_events && a.n_pairs == b.n_pairs &&
           a.n_photons == b.n_photons;
}

}  // namespace

TEST_CASE("source config validation") {
    SourceConfig bad;
    bad.singles_rate = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    bad = SourceConfig{};
    bad.pair_fraction = 1.5;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    bad = SourceConfig{};
    bad.laser_linewidth = 1.0;  // sigma / linewidth = 5, far below the required 100x
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    SourceConfig ok;
    ok.laser_linewidth = 0.01;
    CHECK_NOTHROW(validate(ok));
}

TEST_CASE("click probabilities never exceed unity") {
    // Whatever the knobs, the polarizer loss keeps P(D1) + P(D2) <= 1.
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double xi = 2.0 * kPi * u(rng), th = 2.0 * kPi * u(rng);
        const double df = 40.0 * (u(rng) - 0.5), tau = 2.4 * (u(rng) - 0.5);
        const double phi = 2.0 * kPi * u(rng);
        const double p1 = corr::intensity_port1(xi, df, tau, phi);
        const double p2 = corr::intensity_port2(th, df, tau, phi);
        CHECK(p1 >= 0.0);
        CHECK(p2 >= 0.0);
        CHECK(p1 + p2 <= 1.0 + 1e-15);
    }
}

TEST_CASE("zero duration gives an empty stream") {
    SourceConfig cfg;
    cfg.duration = 0.0;
    const TagStream s = generate_events(cfg, diag_params(0.0));
    CHECK(s.tags.empty());
    CHECK(s.n_events == 0);
}

TEST_CASE("pairs at tau = 0 never reach D1 and reach D2 half the time") {
    SourceConfig cfg;
    cfg.singles_rate = 1e5;
    cfg.pair_fraction = 1.0;
    cfg.duration = 1.0;  // ~1e5 pairs
    cfg.seed = 777;
    const TagStream s = generate_events(cfg, diag_params(0.0));
    REQUIRE(s.n_pairs > 90000);

    std::uint64_t d1 = 0, d2 = 0;
    for (const Tag& t : s.tags) (t.detector == Detector::D1 ? d1 : d2)++;
    CHECK(d1 == 0);  // I1 vanishes identically at tau = 0, phi = 0

    const double n = static_cast<double>(s.n_photons);
    const double frac = static_cast<double>(d2) / n;
    const double sigma3 = 3.0 * std::sqrt(0.25 / n);
    CHECK(std::abs(frac - 0.5) < sigma3);
}

TEST_CASE("generation is deterministic across runs and worker counts") {
    SourceConfig cfg;
    cfg.singles_rate = 5e4;
    cfg.pair_fraction = 0.3;
    cfg.duration = 0.4;
    cfg.seed = 20240917;
    const optics::OpticsParams p = diag_params(0.13);

    const TagStream reference = generate_events_serial(cfg, p);
    CHECK(streams_equal(reference, generate_events_serial(cfg, p)));

#ifdef _OPENMP
    for (int workers : {1, 2, 8}) {
        omp_set_num_threads(workers);
        CHECK(streams_equal(reference, generate_events(cfg, p)));
    }
    omp_set_num_threads(omp_get_num_procs());
#else
    CHECK(streams_equal(reference, generate_events(cfg, p)));
#endif

    bool sorted = true;
    for (std::size_t i = 1; i < reference.tags.size(); ++i) {
        sorted = sorted && reference.tags[i - 1].time <= reference.tags[i].time;
    }
    CHECK(sorted);
}

TEST_CASE("coincidence counting pairs clicks within the window") {
    TagStream s;
    s.duration = 1.0;
    const double w = 1e-6;
    s.tags = {{0.1, Detector::D1, Origin::Single, 0}, {0.1 + w / 2.0, Detector::D2, Origin::Single, 0}};
    CHECK(count_coincidences(s, w).coincidences == 1);

    s.tags = {{0.1, Detector::D1, Origin::Single, 0}, {0.1 + 2.0 * w, Detector::D2, Origin::Single, 0}};
    const CoincidenceHistogram h = count_coincidences(s, w);
    CHECK(h.coincidences == 0);
    CHECK(h.singles_d1 == 1);
    CHECK(h.singles_d2 == 1);

    s.tags = {{0.2, Detector::D1, Origin::Single, 0}, {0.1, Detector::D2, Origin::Single, 0}};
    CHECK_THROWS_AS(count_coincidences(s, w), StructureError);

    CHECK_THROWS_AS(count_coincidences(TagStream{}, 0.0), std::invalid_argument);
}

TEST_CASE("each click is used at most once") {
    TagStream s;
    s.duration = 1.0;
    const double w = 1e-3;
    // One D1 click inside the window of two D2 clicks: only one match.
    s.tags = {{0.5, Detector::D2, Origin::Single, 0},
              {0.5001, Detector::D1, Origin::Single, 0},
              {0.5002, Detector::D2, Origin::Single, 0}};
    CHECK(count_coincidences(s, w).coincidences == 1);
}

TEST_CASE("accidental coincidence rate of independent Poisson streams") {
    // Synthetic streams built right here, independent of generate_events.
    const double r1 = 2.0e4, r2 = 3.0e4, w = 1e-7, duration = 10.0;
    std::mt19937_64 rng(4242);
    std::exponential_distribution<double> gap1(r1), gap2(r2);

    TagStream s;
    s.duration = duration;
    for (double t = gap1(rng); t < duration; t += gap1(rng)) {
        s.tags.push_back({t, Detector::D1, Origin::Single, 0});
    }
    for (double t = gap2(rng); t < duration; t += gap2(rng)) {
        s.tags.push_back({t, Detector::D2, Origin::Single, 0});
    }
    std::sort(s.tags.begin(), s.tags.end(),
              [](const Tag& a, const Tag& b) { return a.time < b.time || (a.time == b.time && a.detector < b.detector); });

    const CoincidenceHistogram h = count_coincidences(s, w);
    const double expected = 2.0 * r1 * r2 * w * duration;
    CHECK(std::abs(static_cast<double>(h.coincidences) - expected) < 5.0 * std::sqrt(expected));
}

TEST_CASE("accidental-normalized estimator is unity for independent singles") {
    SourceConfig cfg;
    cfg.singles_rate = 1e5;
    cfg.pair_fraction = 0.0;
    cfg.duration = 10.0;
    cfg.seed = 8;
    const TagStream s = generate_events(cfg, which_path_params());
    const CoincidenceHistogram h = count_coincidences(s, 1e-7);
    const G2Estimate est = estimate_g2(h, G2Norm::Accidental);
    CHECK(std::abs(est.value - 1.0) < 3.0 * est.std_error);

    CoincidenceHistogram empty;
    empty.duration = 1.0;
    empty.window = 1e-7;
    CHECK_THROWS_AS(estimate_g2(empty, G2Norm::Accidental), std::domain_error);
    CHECK_THROWS_AS(estimate_g2(empty, G2Norm::PairProduct), std::domain_error);
}

TEST_CASE("pair-normalized estimator vanishes at the dip center") {
    SourceConfig cfg;
    cfg.singles_rate = 1e5;
    cfg.pair_fraction = 1.0;
    cfg.duration = 0.3;
    cfg.seed = 11;
    const TagStream s = generate_events(cfg, diag_params(0.0));
    const CoincidenceHistogram h = count_coincidences(s, 1e-9);
    const G2Estimate est = estimate_g2(h, G2Norm::PairProduct);
    CHECK(est.value <= 3.0 * est.std_error + 1e-12);
    CHECK(est.value == 0.0);  // no D1 clicks exist at all here
}

TEST_CASE("standard error shrinks like one over sqrt duration") {
    SourceConfig cfg;
    cfg.singles_rate = 1e5;
    cfg.pair_fraction = 0.0;
    cfg.duration = 5.0;
    cfg.seed = 15;
    const TagStream s1 = generate_events(cfg, which_path_params());
    const G2Estimate e1 = estimate_g2(count_coincidences(s1, 1e-7), G2Norm::Accidental);

    cfg.duration = 20.0;
    const TagStream s4 = generate_events(cfg, which_path_params());
    const G2Estimate e4 = estimate_g2(count_coincidences(s4, 1e-7), G2Norm::Accidental);

    const double ratio = e1.std_error / e4.std_error;
    CHECK(ratio > 1.7);
    CHECK(ratio < 2.3);
}

TEST_CASE("tau scan reproduces the analytic classical curve") {
    SourceConfig cfg;
    cfg.singles_rate = 1e5;
    cfg.pair_fraction = 1.0;
    cfg.duration = 0.2;  // ~20k pairs per point
    cfg.seed = 31415;

    std::vector<double> taus;
    for (int i = 0; i < 7; ++i) taus.push_back(1.2 * static_cast<double>(i) / 6.0);
    const TauScanResult scan = scan_tau(cfg, diag_params(0.0), taus, 1e-9);

    const ensemble::DetuningGrid grid = ensemble::default_grid();
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double analytic = corr::classical_coincidence(grid, kPi / 4.0, kPi / 4.0, 0.0, taus[i]);
        const double tol = 5.0 * scan.curve.std_errors[i] + 1e-9;
        CHECK(std::abs(scan.curve.values[i] - analytic) < tol);
    }

    CHECK_THROWS_AS(scan_tau(cfg, diag_params(0.0), {}, 1e-9), std::invalid_argument);
}

TEST_CASE("tau scan is symmetric in the delay sign") {
    SourceConfig cfg;
    cfg.singles_rate = 1e5;
    cfg.pair_fraction = 1.0;
    cfg.duration = 0.2;
    cfg.seed = 6174;

    const std::vector<double> taus{-0.6, 0.6};
    const TauScanResult scan = scan_tau(cfg, diag_params(0.0), taus, 1e-9);
    const double combined = std::hypot(scan.curve.std_errors[0], scan.curve.std_errors[1]);
    CHECK(std::abs(scan.curve.values[0] - scan.curve.values[1]) < 5.0 * combined);
}
