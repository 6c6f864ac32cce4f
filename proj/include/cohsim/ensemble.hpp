#pragma once

#include <vector>

namespace cohsim::ensemble {

// Gaussian weight exp(-((a*df - b) / (c*sqrt2))^2); with a=1 the standard
// deviation is c and the peak sits at df = b.
struct GaussianSpec {
    double a = 1.0;
    double b = 0.0;
    double c = 5.0;

    friend bool operator==(const GaussianSpec&, const GaussianSpec&) = default;
};

double gaussian_weight(const GaussianSpec& spec, double delta_f);

// Discretized detuning ensemble: uniform odd-count grid over
// [b - span*sigma, b + span*sigma], weights normalized to sum 1.
struct DetuningGrid {
    std::vector<double> points;
    std::vector<double> weights;
    GaussianSpec spec;
    double span_sigmas = 4.0;
    int n_points = 161;

    double sigma() const { return spec.c; }
};

DetuningGrid make_grid(const GaussianSpec& spec, double span_sigmas, int n_points);

DetuningGrid default_grid();

// Gaussian-average fringe envelope <cos(k df tau)> = exp(-k^2 sigma^2 tau^2 / 2).
// k = 2 for a singles fringe, k = 4 for the product of two fringes.
double envelope(double tau, double sigma, double k);

// Quadrature counterpart of envelope on a concrete grid: sum_j w_j cos(k df_j tau).
double grid_cosine_average(const DetuningGrid& grid, double k, double tau);

}  // namespace cohsim::ensemble
