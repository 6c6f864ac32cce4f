#include "cohsim/optics.hpp"

#include <cmath>
#include <string>

#include "cohsim/errors.hpp"

namespace cohsim::optics {

namespace {

constexpr Complex kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

void check_rail(int rail, const char* what) {
    if (rail != 0 && rail != 1) {
        throw StructureError(std::string(what) + " addressed to nonexistent rail " + std::to_string(rail));
    }
}

}  // namespace

const char* mode_name(ModeLabel m) {
    switch (mode_index(m)) {
        case 0: return "H-";
        case 1: return "H+";
        case 2: return "V-";
        default: return "V+";
    }
}

double ModeAmplitudes::total_intensity() const {
    double s = 0.0;
    for (const Complex& c : amps) s += std::norm(c);
    return s;
}

double ChainState::total_intensity() const {
    double s = 0.0;
    for (const Complex& c : a) s += std::norm(c);
    return s;
}

bool OpticsParams::finite() const {
    return std::isfinite(xi) && std::isfinite(theta) && std::isfinite(phi) && std::isfinite(tau) &&
           std::isfinite(delta_f);
}

std::pair<Complex, Complex> bs_apply(const std::pair<Complex, Complex>& in, bool inverse) {
    if (!finite(in.first) || !finite(in.second)) {
        throw std::invalid_argument("bs_apply: non-finite input amplitude");
    }
    const Complex r = inverse ? -kI : kI;
    return {kInvSqrt2 * (in.first + r * in.second), kInvSqrt2 * (r * in.first + in.second)};
}

std::pair<Complex, Complex> hwp_apply(double alpha, const std::pair<Complex, Complex>& in) {
    if (!std::isfinite(alpha) || !finite(in.first) || !finite(in.second)) {
        throw std::invalid_argument("hwp_apply: non-finite input");
    }
    const double c = std::cos(2.0 * alpha);
    const double s = std::sin(2.0 * alpha);
    return {c * in.first + s * in.second, s * in.first - c * in.second};
}

std::pair<ModeAmplitudes, ModeAmplitudes> mzi_output_fields(const OpticsParams& p, Complex e0) {
    if (!p.finite() || !finite(e0)) {
        throw std::invalid_argument("mzi_output_fields: non-finite input");
    }
    // Written exactly as the closed forms: common prefactor e^{-i df tau},
    // relative beat phase e^{i(2 df tau + phi)}.
    const Complex pref = 0.5 * e0 * std::exp(Complex(0.0, -p.delta_f * p.tau));
    const Complex beat = std::exp(Complex(0.0, 2.0 * p.delta_f * p.tau + p.phi));

    ModeAmplitudes out_a;
    out_a.port = Port::A;
    out_a.at(kHMinus) = pref;
    out_a.at(kVPlus) = -pref * beat;

    ModeAmplitudes out_b;
    out_b.port = Port::B;
    out_b.at(kVMinus) = kI * pref;
    out_b.at(kHPlus) = kI * pref * beat;

    return {out_a, out_b};
}

ElementChain canonical_chain(const OpticsParams& p) {
    // Source -> BS; rail 0 is the "-" arm, rail 1 the "+" arm. The HWPs at
    // 22.5 degrees rotate V into (H - V)/sqrt2, the PZT sits in the "+" arm,
    // and the delay acts on both arms (opposite detunings, opposite phases).
    constexpr double kHwpAngle = M_PI / 8.0;
    return ElementChain{
        BeamSplitter{},
        AomShift{0, DetuningSign::Minus},
        AomShift{1, DetuningSign::Plus},
        HalfWavePlate{0, kHwpAngle},
        HalfWavePlate{1, kHwpAngle},
        PhaseShift{1, p.phi},
        DelayLine{p.tau, p.delta_f},
        PolarizingBeamSplitter{},
    };
}

ChainState source_state(Complex e0) {
    ChainState s;
    s.at(0, Polarization::V, Detuning::Unshifted) = e0;
    return s;
}

namespace {

struct ElementVisitor {
    ChainState& st;

    void operator()(const BeamSplitter& bs) const {
        for (Polarization pol : {Polarization::H, Polarization::V}) {
            for (Detuning det : {Detuning::Unshifted, Detuning::Minus, Detuning::Plus}) {
                auto out = bs_apply({st.at(0, pol, det), st.at(1, pol, det)}, bs.inverse);
                st.at(0, pol, det) = out.first;
                st.at(1, pol, det) = out.second;
            }
        }
    }

    void operator()(const HalfWavePlate& h) const {
        check_rail(h.rail, "half-wave plate");
        for (Detuning det : {Detuning::Unshifted, Detuning::Minus, Detuning::Plus}) {
            auto out = hwp_apply(h.alpha, {st.at(h.rail, Polarization::H, det), st.at(h.rail, Polarization::V, det)});
            st.at(h.rail, Polarization::H, det) = out.first;
            st.at(h.rail, Polarization::V, det) = out.second;
        }
    }

    void operator()(const AomShift& a) const {
        check_rail(a.rail, "AOM");
        const Detuning target = a.sign == DetuningSign::Minus ? Detuning::Minus : Detuning::Plus;
        for (Polarization pol : {Polarization::H, Polarization::V}) {
            if (std::norm(st.at(a.rail, pol, Detuning::Minus)) > 0.0 ||
                std::norm(st.at(a.rail, pol, Detuning::Plus)) > 0.0) {
                throw StructureError("AOM applied to already frequency-shifted light");
            }
            st.at(a.rail, pol, target) = st.at(a.rail, pol, Detuning::Unshifted);
            st.at(a.rail, pol, Detuning::Unshifted) = 0.0;
        }
    }

    void operator()(const DelayLine& d) const {
        const Complex minus_ph = std::exp(Complex(0.0, -d.delta_f * d.tau));
        const Complex plus_ph = std::exp(Complex(0.0, d.delta_f * d.tau));
        for (int rail : {0, 1}) {
            for (Polarization pol : {Polarization::H, Polarization::V}) {
                st.at(rail, pol, Detuning::Minus) *= minus_ph;
                st.at(rail, pol, Detuning::Plus) *= plus_ph;
            }
        }
    }

    void operator()(const PhaseShift& ps) const {
        check_rail(ps.rail, "phase shifter");
        const Complex ph = std::exp(Complex(0.0, ps.phi));
        for (Polarization pol : {Polarization::H, Polarization::V}) {
            for (Detuning det : {Detuning::Unshifted, Detuning::Minus, Detuning::Plus}) {
                st.at(ps.rail, pol, det) *= ph;
            }
        }
    }

    void operator()(const PolarizingBeamSplitter&) const {
        // H transmits, V crosses rails with a -i reflection phase; this is
        // the convention that lands on the closed forms with no extra
        // global phase.
        for (Detuning det : {Detuning::Unshifted, Detuning::Minus, Detuning::Plus}) {
            const Complex v0 = st.at(0, Polarization::V, det);
            const Complex v1 = st.at(1, Polarization::V, det);
            st.at(0, Polarization::V, det) = -kI * v1;
            st.at(1, Polarization::V, det) = -kI * v0;
        }
    }

    void operator()(const PolarizerElement& pe) const {
        check_rail(pe.rail, "polarizer");
        const double c = std::cos(pe.angle);
        const double s = std::sin(pe.angle);
        for (Detuning det : {Detuning::Unshifted, Detuning::Minus, Detuning::Plus}) {
            const Complex along = c * st.at(pe.rail, Polarization::H, det) + s * st.at(pe.rail, Polarization::V, det);
            st.at(pe.rail, Polarization::H, det) = c * along;
            st.at(pe.rail, Polarization::V, det) = s * along;
        }
    }
};

}  // namespace

ChainState propagate_chain_state(const ElementChain& chain, ChainState state) {
    ElementVisitor v{state};
    for (const Element& e : chain) std::visit(v, e);
    return state;
}

std::pair<ModeAmplitudes, ModeAmplitudes> propagate_chain(const ElementChain& chain, Complex e0) {
    const ChainState final_state = propagate_chain_state(chain, source_state(e0));

    const double scale = std::norm(e0);
    for (int rail : {0, 1}) {
        for (Polarization pol : {Polarization::H, Polarization::V}) {
            if (std::norm(final_state.at(rail, pol, Detuning::Unshifted)) > 1e-24 * scale) {
                throw StructureError("chain leaves unshifted carrier amplitude; AOMs missing");
            }
        }
    }

    std::pair<ModeAmplitudes, ModeAmplitudes> out;
    out.first.port = Port::A;
    out.second.port = Port::B;
    for (ModeLabel m : kModeBasis) {
        const Detuning det = m.sign == DetuningSign::Minus ? Detuning::Minus : Detuning::Plus;
        out.first.at(m) = final_state.at(0, m.pol, det);
        out.second.at(m) = final_state.at(1, m.pol, det);
    }
    return out;
}

double ProjectedField::intensity() const { return std::norm(coeff_minus + coeff_plus); }

ModeAmplitudes ProjectedField::to_field(Port port) const {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    ModeAmplitudes f;
    f.port = port;
    f.at({Polarization::H, DetuningSign::Minus}) = c * coeff_minus;
    f.at({Polarization::V, DetuningSign::Minus}) = s * coeff_minus;
    f.at({Polarization::H, DetuningSign::Plus}) = c * coeff_plus;
    f.at({Polarization::V, DetuningSign::Plus}) = s * coeff_plus;
    return f;
}

ProjectedField polarizer_project(double angle, const ModeAmplitudes& field) {
    if (!std::isfinite(angle)) throw std::invalid_argument("polarizer_project: non-finite angle");
    for (const Complex& c : field.amps) {
        if (!finite(c)) throw std::invalid_argument("polarizer_project: non-finite amplitude");
    }
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    ProjectedField out;
    out.angle = angle;
    out.coeff_minus = c * field.at(kHMinus) + s * field.at(kVMinus);
    out.coeff_plus = c * field.at(kHPlus) + s * field.at(kVPlus);
    return out;
}

}  // namespace cohsim::optics
