#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

namespace cohsim::optics {

using Complex = std::complex<double>;

enum class Polarization : std::uint8_t { H, V };
enum class DetuningSign : std::uint8_t { Minus, Plus };
enum class Port : std::uint8_t { A, B };

// One of the four single-photon basis modes: polarization x detuning sign.
struct ModeLabel {
    Polarization pol;
    DetuningSign sign;

    friend constexpr bool operator==(ModeLabel a, ModeLabel b) = default;
};

inline constexpr ModeLabel kHMinus{Polarization::H, DetuningSign::Minus};
inline constexpr ModeLabel kHPlus{Polarization::H, DetuningSign::Plus};
inline constexpr ModeLabel kVMinus{Polarization::V, DetuningSign::Minus};
inline constexpr ModeLabel kVPlus{Polarization::V, DetuningSign::Plus};

inline constexpr std::array<ModeLabel, 4> kModeBasis{kHMinus, kHPlus, kVMinus, kVPlus};

constexpr int mode_index(ModeLabel m) {
    return (m.pol == Polarization::V ? 2 : 0) + (m.sign == DetuningSign::Plus ? 1 : 0);
}

const char* mode_name(ModeLabel m);

// Complex amplitudes over the four basis modes at one spatial output port.
// Units are sqrt(intensity): total_intensity() of a full source field is I0.
struct ModeAmplitudes {
    Port port = Port::A;
    std::array<Complex, 4> amps{};

    Complex& at(ModeLabel m) { return amps[static_cast<std::size_t>(mode_index(m))]; }
    const Complex& at(ModeLabel m) const { return amps[static_cast<std::size_t>(mode_index(m))]; }

    double total_intensity() const;
};

// The experiment knobs. Angles in radians; tau in inverse frequency units
// (delta_f and the ensemble width share one arbitrary frequency unit, so
// observables depend only on the products delta_f * tau).
struct OpticsParams {
    double xi = 0.0;       // polarizer angle, output port A
    double theta = 0.0;    // polarizer angle, output port B
    double phi = 0.0;      // PZT phase
    double tau = 0.0;      // MZI delay
    double delta_f = 0.0;  // AOM detuning of this photon pair

    bool finite() const;

    friend bool operator==(const OpticsParams&, const OpticsParams&) = default;
};

// --- element-chain propagation -------------------------------------------
//
// Chain state lives on two spatial rails. Before the PBS the rails are the
// interferometer arms; the PBS reroutes polarizations so that afterwards
// rail 0 is output port A and rail 1 is output port B. Each rail carries
// amplitudes for polarization x detuning, where detuning has a third
// "unshifted" slot for light that has not passed an AOM yet.

enum class Detuning : std::uint8_t { Unshifted, Minus, Plus };

struct ChainState {
    // [rail][pol][detuning] flattened; rail in {0,1}.
    std::array<Complex, 12> a{};

    static constexpr int index(int rail, Polarization pol, Detuning det) {
        return rail * 6 + (pol == Polarization::V ? 3 : 0) + static_cast<int>(det);
    }
    Complex& at(int rail, Polarization pol, Detuning det) { return a[static_cast<std::size_t>(index(rail, pol, det))]; }
    const Complex& at(int rail, Polarization pol, Detuning det) const {
        return a[static_cast<std::size_t>(index(rail, pol, det))];
    }

    double total_intensity() const;
};

struct BeamSplitter {
    bool inverse = false;  // adjoint of the splitter, for undo-style chains
};
struct HalfWavePlate {
    int rail = 0;
    double alpha = 0.0;  // fast-axis rotation
};
struct AomShift {
    int rail = 0;
    DetuningSign sign = DetuningSign::Minus;
};
// Common time shift: every mode advances by exp(i * detuning * tau) in the
// carrier rotating frame. Opposite detunings therefore pick up opposite
// phases, which is where the 2*delta_f*tau beat comes from.
struct DelayLine {
    double tau = 0.0;
    double delta_f = 0.0;
};
struct PhaseShift {
    int rail = 0;
    double phi = 0.0;
};
struct PolarizingBeamSplitter {};  // H stays on its rail, V crosses with -i
struct PolarizerElement {
    int rail = 0;
    double angle = 0.0;
};

using Element = std::variant<BeamSplitter, HalfWavePlate, AomShift, DelayLine, PhaseShift,
                             PolarizingBeamSplitter, PolarizerElement>;
using ElementChain = std::vector<Element>;

// --- operations -----------------------------------------------------------

// Nonpolarizing 50:50 splitter, symmetric convention (1/sqrt2)[[1, i],[i, 1]].
std::pair<Complex, Complex> bs_apply(const std::pair<Complex, Complex>& in, bool inverse = false);

// Half-wave plate at fast-axis angle alpha: [[cos2a, sin2a],[sin2a, -cos2a]]
// acting on an (H, V) amplitude pair.
std::pair<Complex, Complex> hwp_apply(double alpha, const std::pair<Complex, Complex>& in);

// Closed-form MZI output fields for one photon pair:
//   E_A = (E0/2) e^{-i df tau} (H-  -  V+ e^{i(2 df tau + phi)})
//   E_B = (iE0/2) e^{-i df tau} (V-  +  H+ e^{i(2 df tau + phi)})
// Each port carries exactly I0/2.
std::pair<ModeAmplitudes, ModeAmplitudes> mzi_output_fields(const OpticsParams& p, Complex e0);

// Element list that reproduces mzi_output_fields when propagated.
ElementChain canonical_chain(const OpticsParams& p);

// V-polarized, unshifted source of amplitude e0 entering rail 0.
ChainState source_state(Complex e0);

// Sequential application of element transfer matrices. Throws StructureError
// for elements addressed to a nonexistent rail or an AOM hitting already
// shifted light.
ChainState propagate_chain_state(const ElementChain& chain, ChainState state);

// Propagate the canonical source and split the final state into port fields.
// Requires the chain to consume the unshifted carrier (i.e. contain AOMs).
std::pair<ModeAmplitudes, ModeAmplitudes> propagate_chain(const ElementChain& chain, Complex e0);

// Projection of a port field onto the polarizer axis p = (cos x, sin x).
// The two coefficients multiplying p are kept per detuning sign, so the
// beat structure survives the projection.
struct ProjectedField {
    double angle = 0.0;
    Complex coeff_minus;
    Complex coeff_plus;

    // Detected intensity |c- + c+|^2 (the beat term is what interferes).
    double intensity() const;
    // Projected field embedded back into the four-mode basis.
    ModeAmplitudes to_field(Port port) const;
};

ProjectedField polarizer_project(double angle, const ModeAmplitudes& field);

}  // namespace cohsim::optics
