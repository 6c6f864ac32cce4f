#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cohsim/correlators.hpp"
#include "cohsim/optics.hpp"

namespace cohsim::mc {

// Attenuated-laser source: Poisson event arrivals at singles_rate, each
// event doubly bunched with probability pair_fraction. Generation is split
// into n_chunks lab-time slices with independent seeded substreams, so the
// stream is reproducible for any worker count.
struct SourceConfig {
    double singles_rate = 1e5;
    double pair_fraction = 0.01;
    double duration = 1.0;
    std::uint64_t seed = 12345;
    double sigma = 5.0;              // detuning spread of the photon ensemble
    double mean_photon_number = 0.0; // documentation only; 0 = unset
    double laser_linewidth = 0.0;    // 0 = unset; must be << sigma otherwise
    int n_chunks = 256;

    friend bool operator==(const SourceConfig&, const SourceConfig&) = default;
};

void validate(const SourceConfig& cfg);

enum class Detector : std::uint8_t { D1, D2 };
enum class Origin : std::uint8_t { Single, PairMember };

struct Tag {
    double time = 0.0;
    Detector detector = Detector::D1;
    Origin origin = Origin::Single;
    std::uint64_t pair_id = 0;  // 0 for singles

    friend bool operator==(const Tag&, const Tag&) = default;
};

struct TagStream {
    std::vector<Tag> tags;  // time-ordered detector clicks
    double duration = 0.0;
    std::uint64_t n_events = 0;
    std::uint64_t n_pairs = 0;
    std::uint64_t n_photons = 0;
};

// Parallel chunked generation and its serial reference; both are pure
// functions of (cfg, params) and produce identical streams.
TagStream generate_events(const SourceConfig& cfg, const optics::OpticsParams& params);
TagStream generate_events_serial(const SourceConfig& cfg, const optics::OpticsParams& params);

struct CoincidenceHistogram {
    double window = 0.0;
    double duration = 0.0;
    std::uint64_t singles_d1 = 0;
    std::uint64_t singles_d2 = 0;
    std::uint64_t coincidences = 0;
    // Source totals carried along for pair normalization.
    std::uint64_t n_pairs_emitted = 0;
    std::uint64_t n_photons_emitted = 0;
};

// Greedy earliest-match pairing of D1/D2 clicks with |t1 - t2| <= window;
// each click is used at most once, ties resolved toward D1.
CoincidenceHistogram count_coincidences(const TagStream& stream, double window);

enum class G2Norm : std::uint8_t {
    // C T / (2 N1 N2 w): coincidences relative to the accidental rate of the
    // measured singles. Unity for independent Poisson streams.
    Accidental,
    // Coincidences per pair relative to the phi-averaged singles level
    // (click probability 1/4 per photon per detector): 8 C / n_pairs.
    // Matches the singles-normalized classical product curve.
    PairProduct,
};

struct G2Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

G2Estimate estimate_g2(const CoincidenceHistogram& h, G2Norm norm);

struct TauScanPoint {
    double tau = 0.0;
    std::uint64_t seed = 0;
    CoincidenceHistogram histogram;
    G2Estimate g2;
};

struct TauScanResult {
    corr::CorrelationCurve curve;  // mode ClassicalProduct, with std errors
    std::vector<TauScanPoint> points;
};

// One generate/count/estimate pass per tau; cfg.duration applies per point
// and each point derives its own substream from cfg.seed.
TauScanResult scan_tau(const SourceConfig& cfg, const optics::OpticsParams& base,
                       std::span<const double> taus, double window);

}  // namespace cohsim::mc
