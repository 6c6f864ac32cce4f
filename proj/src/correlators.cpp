#include "cohsim/correlators.hpp"

#include <cmath>
#include <stdexcept>

namespace cohsim::corr {

namespace {

constexpr double kPi = 3.14159265358979323846;

double deg2rad(double d) { return d * kPi / 180.0; }

void check_finite(std::initializer_list<double> vals, const char* what) {
    for (double v : vals) {
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite input");
    }
}

}  // namespace

double intensity_port1(double xi, double delta_f, double tau, double phi, double i0) {
    check_finite({xi, delta_f, tau, phi, i0}, "intensity_port1");
    return 0.25 * i0 * (1.0 - std::sin(2.0 * xi) * std::cos(2.0 * delta_f * tau + phi));
}

double intensity_port2(double theta, double delta_f, double tau, double phi, double i0) {
    check_finite({theta, delta_f, tau, phi, i0}, "intensity_port2");
    return 0.25 * i0 * (1.0 + std::sin(2.0 * theta) * std::cos(2.0 * delta_f * tau + phi));
}

std::pair<double, double> eraser_means(double xi, double theta, double phi, double i0) {
    check_finite({xi, theta, phi, i0}, "eraser_means");
    return {0.25 * i0 * (1.0 - std::sin(2.0 * xi) * std::cos(phi)),
            0.25 * i0 * (1.0 + std::sin(2.0 * theta) * std::cos(phi))};
}

namespace {

double scan_visibility(double angle, int n_phi, bool port1) {
    if (n_phi < 4) throw std::invalid_argument("eraser visibility: phi scan too coarse");
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < n_phi; ++i) {
        const double phi = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n_phi);
        const auto [i1, i2] = eraser_means(angle, angle, phi);
        const double v = port1 ? i1 : i2;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return (hi - lo) / (hi + lo);
}

}  // namespace

double eraser_visibility_port1(double xi, int n_phi) { return scan_visibility(xi, n_phi, true); }
double eraser_visibility_port2(double theta, int n_phi) { return scan_visibility(theta, n_phi, false); }

double classical_coincidence_raw(const ensemble::DetuningGrid& grid, double xi, double theta, double phi,
                                 double tau) {
    if (grid.points.empty() || grid.points.size() != grid.weights.size()) {
        throw std::invalid_argument("classical_coincidence: invalid detuning grid");
    }
    check_finite({xi, theta, phi, tau}, "classical_coincidence");
    const double s1 = std::sin(2.0 * xi);
    const double s2 = std::sin(2.0 * theta);
    double acc = 0.0;
    for (std::size_t j = 0; j < grid.points.size(); ++j) {
        const double c = std::cos(2.0 * grid.points[j] * tau + phi);
        acc += grid.weights[j] * (0.25 * (1.0 - s1 * c)) * (0.25 * (1.0 + s2 * c));
    }
    return acc;
}

double classical_coincidence(const ensemble::DetuningGrid& grid, double xi, double theta, double phi,
                             double tau) {
    return classical_coincidence_raw(grid, xi, theta, phi, tau) * 16.0;
}

HeterodyneResult heterodyne_pair(double xi, double theta, double delta_f, double tau, double phi,
                                 Complex e0) {
    check_finite({xi, theta, delta_f, tau, phi}, "heterodyne_pair");
    optics::OpticsParams p;
    p.xi = xi;
    p.theta = theta;
    p.phi = phi;
    p.tau = tau;
    p.delta_f = delta_f;
    const auto [field_a, field_b] = optics::mzi_output_fields(p, e0);
    const optics::ProjectedField d1 = optics::polarizer_project(xi, field_a);
    const optics::ProjectedField d2 = optics::polarizer_project(theta, field_b);

    HeterodyneResult r;
    // Joint products, grouped by detuning pairing. Opposite signs beat at
    // 2 df tau + phi and are kept; equal-sign products carry the DC and the
    // doubled phase and are dropped.
    r.terms.kept_hh = d1.coeff_minus * d2.coeff_plus;
    r.terms.kept_vv = d1.coeff_plus * d2.coeff_minus;
    r.terms.dropped_hv = d1.coeff_minus * d2.coeff_minus;
    r.terms.dropped_vh = d1.coeff_plus * d2.coeff_plus;
    r.value = std::norm(r.terms.kept_hh + r.terms.kept_vv);
    return r;
}

double quantum_g2(double tau, double xi, double theta, double sigma) {
    check_finite({tau, xi, theta}, "quantum_g2");
    return 0.5 * (1.0 + ensemble::envelope(tau, sigma, 4.0) * std::cos(2.0 * (xi + theta)));
}

double correlation_E(double xi, double theta) {
    check_finite({xi, theta}, "correlation_E");
    const double half = 0.5 * kPi;
    const double r00 = heterodyne_pair(xi, theta, 0.0, 0.0, 0.0).value;
    const double r11 = heterodyne_pair(xi + half, theta + half, 0.0, 0.0, 0.0).value;
    const double r10 = heterodyne_pair(xi + half, theta, 0.0, 0.0, 0.0).value;
    const double r01 = heterodyne_pair(xi, theta + half, 0.0, 0.0, 0.0).value;
    return (r00 + r11 - r10 - r01) / (r00 + r11 + r10 + r01);
}

double chsh_S(double a, double a_prime, double b, double b_prime) {
    check_finite({a, a_prime, b, b_prime}, "chsh_S");
    return correlation_E(a, b) - correlation_E(a, b_prime) + correlation_E(a_prime, b) +
           correlation_E(a_prime, b_prime);
}

ChshSearchResult chsh_grid_search(double step_deg) {
    if (!(step_deg > 0.0)) throw std::invalid_argument("chsh_grid_search: step must be positive");
    const int n = static_cast<int>(std::lround(180.0 / step_deg));
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) angles[static_cast<std::size_t>(i)] = deg2rad(step_deg * i);

    // E(x, y) depends only on x + y mod pi.
    std::vector<double> e(static_cast<std::size_t>(2 * n));
    for (int k = 0; k < 2 * n; ++k) {
        e[static_cast<std::size_t>(k)] = std::cos(2.0 * deg2rad(step_deg * k));
    }
    const auto e_at = [&](int ia, int ib) { return e[static_cast<std::size_t>((ia + ib) % (2 * n))]; };

    ChshSearchResult best;
    best.max_s = -1e300;
#pragma omp parallel
    {
        ChshSearchResult local = best;
#pragma omp for schedule(static) nowait
        for (int ib = 0; ib < n; ++ib) {
            for (int ibp = 0; ibp < n; ++ibp) {
                double diff_best = -1e300, sum_best = -1e300;
                int ia_best = 0, iap_best = 0;
                for (int ia = 0; ia < n; ++ia) {
                    const double diff = e_at(ia, ib) - e_at(ia, ibp);
                    if (diff > diff_best) {
                        diff_best = diff;
                        ia_best = ia;
                    }
                    const double sum = e_at(ia, ib) + e_at(ia, ibp);
                    if (sum > sum_best) {
                        sum_best = sum;
                        iap_best = ia;
                    }
                }
                const double s = diff_best + sum_best;
                if (s > local.max_s) {
                    local.max_s = s;
                    local.angles = {angles[static_cast<std::size_t>(ia_best)],
                                    angles[static_cast<std::size_t>(iap_best)],
                                    angles[static_cast<std::size_t>(ib)],
                                    angles[static_cast<std::size_t>(ibp)]};
                }
            }
        }
#pragma omp critical
        {
            if (local.max_s > best.max_s) best = local;
        }
    }
    return best;
}

CorrelationCurve classical_dip_curve(const ensemble::DetuningGrid& grid, const CurveParams& p,
                                     std::span<const double> taus) {
    CorrelationCurve curve;
    curve.mode = CurveMode::ClassicalProduct;
    curve.normalization = Normalization::SinglesNormalized;
    curve.params = p;
    curve.tau_grid.assign(taus.begin(), taus.end());
    curve.values.resize(taus.size());
    const std::int64_t n = static_cast<std::int64_t>(taus.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        curve.values[static_cast<std::size_t>(i)] =
            classical_coincidence(grid, p.xi, p.theta, p.phi, taus[static_cast<std::size_t>(i)]);
    }
    return curve;
}

CorrelationCurve classical_dip_curve_serial(const ensemble::DetuningGrid& grid, const CurveParams& p,
                                            std::span<const double> taus) {
    CorrelationCurve curve;
    curve.mode = CurveMode::ClassicalProduct;
    curve.normalization = Normalization::SinglesNormalized;
    curve.params = p;
    curve.tau_grid.assign(taus.begin(), taus.end());
    curve.values.resize(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        curve.values[i] = classical_coincidence(grid, p.xi, p.theta, p.phi, taus[i]);
    }
    return curve;
}

CorrelationCurve quantum_g2_curve(const CurveParams& p, double sigma, std::span<const double> taus) {
    CorrelationCurve curve;
    curve.mode = CurveMode::Heterodyne;
    curve.normalization = Normalization::SinglesNormalized;
    curve.params = p;
    curve.tau_grid.assign(taus.begin(), taus.end());
    curve.values.resize(taus.size());
    const std::int64_t n = static_cast<std::int64_t>(taus.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        curve.values[static_cast<std::size_t>(i)] =
            quantum_g2(taus[static_cast<std::size_t>(i)], p.xi, p.theta, sigma);
    }
    return curve;
}

namespace {

double corrmap_value(double xi, double theta) {
    return heterodyne_pair(xi, theta, 0.0, 0.0, 0.0).value * 16.0;
}

}  // namespace

std::vector<double> correlation_map(std::span<const double> xis, std::span<const double> thetas) {
    std::vector<double> out(xis.size() * thetas.size());
    const std::int64_t nx = static_cast<std::int64_t>(xis.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < thetas.size(); ++j) {
            out[static_cast<std::size_t>(i) * thetas.size() + j] =
                corrmap_value(xis[static_cast<std::size_t>(i)], thetas[j]);
        }
    }
    return out;
}

std::vector<double> correlation_map_serial(std::span<const double> xis, std::span<const double> thetas) {
    std::vector<double> out(xis.size() * thetas.size());
    for (std::size_t i = 0; i < xis.size(); ++i) {
        for (std::size_t j = 0; j < thetas.size(); ++j) {
            out[i * thetas.size() + j] = corrmap_value(xis[i], thetas[j]);
        }
    }
    return out;
}

}  // namespace cohsim::corr
