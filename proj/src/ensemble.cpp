#include "cohsim/ensemble.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cohsim::ensemble {

double gaussian_weight(const GaussianSpec& spec, double delta_f) {
    const double z = (spec.a * delta_f - spec.b) / (spec.c * std::sqrt(2.0));
    return std::exp(-z * z);
}

DetuningGrid make_grid(const GaussianSpec& spec, double span_sigmas, int n_points) {
    if (!(spec.c > 0.0)) throw std::invalid_argument("ensemble: width parameter c must be positive");
    if (spec.a == 0.0) throw std::invalid_argument("ensemble: scale parameter a must be nonzero");
    if (!(span_sigmas > 0.0)) throw std::invalid_argument("ensemble: span_sigmas must be positive");
    if (n_points < 3) throw std::invalid_argument("ensemble: n_points must be at least 3");
    if (n_points % 2 == 0) throw std::invalid_argument("ensemble: n_points must be odd");

    DetuningGrid grid;
    grid.spec = spec;
    grid.span_sigmas = span_sigmas;
    grid.n_points = n_points;
    grid.points.resize(static_cast<std::size_t>(n_points));
    grid.weights.resize(static_cast<std::size_t>(n_points));

    const double half_span = span_sigmas * spec.c;
    const double step = 2.0 * half_span / static_cast<double>(n_points - 1);
    double total = 0.0;
    for (int i = 0; i < n_points; ++i) {
        // Mirror around the center index so the grid is exactly symmetric.
        const int k = i - (n_points - 1) / 2;
        const double df = spec.b + static_cast<double>(k) * step;
        const double w = gaussian_weight(spec, df);
        grid.points[static_cast<std::size_t>(i)] = df;
        grid.weights[static_cast<std::size_t>(i)] = w;
        total += w;
    }
    for (double& w : grid.weights) w /= total;
    return grid;
}

DetuningGrid default_grid() { return make_grid(GaussianSpec{}, 4.0, 161); }

double envelope(double tau, double sigma, double k) {
    if (!(sigma > 0.0)) throw std::invalid_argument("envelope: sigma must be positive");
    const double kst = k * sigma * tau;
    return std::exp(-0.5 * kst * kst);
}

double grid_cosine_average(const DetuningGrid& grid, double k, double tau) {
    double s = 0.0;
    for (std::size_t j = 0; j < grid.points.size(); ++j) {
        s += grid.weights[j] * std::cos(k * grid.points[j] * tau);
    }
    return s;
}

}  // namespace cohsim::ensemble
