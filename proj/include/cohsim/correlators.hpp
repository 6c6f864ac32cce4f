#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cohsim/ensemble.hpp"
#include "cohsim/optics.hpp"

namespace cohsim::corr {

using optics::Complex;

// --- single-pair observables ----------------------------------------------

// Projected detector intensities for one photon pair,
//   I1 = (I0/4)(1 - sin2xi   cos(2 df tau + phi))
//   I2 = (I0/4)(1 + sin2theta cos(2 df tau + phi))
double intensity_port1(double xi, double delta_f, double tau, double phi, double i0 = 1.0);
double intensity_port2(double theta, double delta_f, double tau, double phi, double i0 = 1.0);

// Ensemble means at tau = 0; bandwidth independent, so no grid is involved.
std::pair<double, double> eraser_means(double xi, double theta, double phi, double i0 = 1.0);

// Fringe visibility (max-min)/(max+min) of the port-1 or port-2 mean over a
// phi scan with n_phi equally spaced settings starting at phi = 0.
double eraser_visibility_port1(double xi, int n_phi = 360);
double eraser_visibility_port2(double theta, int n_phi = 360);

// Ensemble-averaged intensity product sum_j w_j I1^j I2^j, divided by the
// phi-averaged singles level (I0/4)^2. Zero at tau = 0 for the diagonal
// polarizers, 0.5 on the plateau.
double classical_coincidence(const ensemble::DetuningGrid& grid, double xi, double theta, double phi,
                             double tau);
// Same sum in raw intensity units (I0 = 1).
double classical_coincidence_raw(const ensemble::DetuningGrid& grid, double xi, double theta, double phi,
                                 double tau);

// The四 joint amplitudes of E1 E2 grouped by the term selection: the two
// opposite-detuning beat terms are kept, the zero-beat and double-beat
// products are dropped (the 50% measurement-event loss).
struct HeterodyneTerms {
    Complex kept_hh;     // H- H+  coefficient
    Complex kept_vv;     // V+ V-  coefficient
    Complex dropped_hv;  // H- V-  zero-beat coefficient
    Complex dropped_vh;  // V+ H+  double-beat coefficient
};

struct HeterodyneResult {
    double value = 0.0;  // |kept_hh + kept_vv|^2 = (I0^2/16) cos^2(xi+theta)
    HeterodyneTerms terms;
};

// Coincident heterodyne correlator for one pair. The phase 2 df tau + phi
// self-cancels in the kept pair, so the value depends only on the polarizer
// angles.
HeterodyneResult heterodyne_pair(double xi, double theta, double delta_f, double tau, double phi,
                                 Complex e0 = 1.0);

// Normalized heterodyne correlation with the Gaussian ensemble envelope:
//   g2(tau) = 1/2 (1 + exp(-8 sigma^2 tau^2) cos(2(xi+theta)))
// equals cos^2(xi+theta) at tau = 0 and 1/2 for tau beyond the ensemble
// coherence time.
double quantum_g2(double tau, double xi, double theta, double sigma);

// Polarizer-angle correlation from the four coincidence-rate combinations
// (xi,theta), (xi+90,theta+90), (xi+90,theta), (xi,theta+90); equals
// cos(2(xi+theta)).
double correlation_E(double xi, double theta);

// CHSH combination S = E(a,b) - E(a,b') + E(a',b) + E(a',b').
double chsh_S(double a, double a_prime, double b, double b_prime);

// Exhaustive 1-degree-style grid search over quadruples. The combination
// decomposes as max_a [E(a,b)-E(a,b')] + max_a' [E(a',b)+E(a',b')] per
// (b,b'), so the search over the full quadruple grid is exact without
// enumerating n^4 tuples.
struct ChshSearchResult {
    double max_s = 0.0;
    std::array<double, 4> angles{};  // radians: a, a', b, b'
};
ChshSearchResult chsh_grid_search(double step_deg = 1.0);

// --- sampled curves and maps ----------------------------------------------

enum class CurveMode : std::uint8_t { ClassicalProduct, Heterodyne };
enum class Normalization : std::uint8_t { Raw, SinglesNormalized };

struct CurveParams {
    double xi = 0.0;
    double theta = 0.0;
    double phi = 0.0;

    friend bool operator==(const CurveParams&, const CurveParams&) = default;
};

struct CorrelationCurve {
    CurveMode mode = CurveMode::ClassicalProduct;
    Normalization normalization = Normalization::SinglesNormalized;
    CurveParams params;
    std::vector<double> tau_grid;
    std::vector<double> values;
    std::vector<double> std_errors;  // empty for analytic curves
    std::uint64_t seed = 0;          // 0 for analytic curves
};

// tau sweeps of the classical product; the parallel kernel and its serial
// reference produce bit-identical curves.
CorrelationCurve classical_dip_curve(const ensemble::DetuningGrid& grid, const CurveParams& p,
                                     std::span<const double> taus);
CorrelationCurve classical_dip_curve_serial(const ensemble::DetuningGrid& grid, const CurveParams& p,
                                            std::span<const double> taus);

CorrelationCurve quantum_g2_curve(const CurveParams& p, double sigma, std::span<const double> taus);

// Normalized heterodyne rate cos^2(xi+theta) over an angle grid, values in
// row-major [xi][theta] order.
std::vector<double> correlation_map(std::span<const double> xis, std::span<const double> thetas);
std::vector<double> correlation_map_serial(std::span<const double> xis, std::span<const double> thetas);

}  // namespace cohsim::corr
