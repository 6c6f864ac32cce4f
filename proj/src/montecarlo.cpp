#include "cohsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

#include "cohsim/errors.hpp"
#include "cohsim/rng.hpp"

namespace cohsim::mc {

void validate(const SourceConfig& cfg) {
    if (!(cfg.singles_rate > 0.0)) throw std::invalid_argument("source: singles_rate must be positive");
    if (!(cfg.duration >= 0.0)) throw std::invalid_argument("source: duration must be non-negative");
    if (!(cfg.pair_fraction >= 0.0 && cfg.pair_fraction <= 1.0)) {
        throw std::invalid_argument("source: pair_fraction must be in [0, 1]");
    }
    if (!(cfg.sigma > 0.0)) throw std::invalid_argument("source: sigma must be positive");
    if (cfg.n_chunks < 1) throw std::invalid_argument("source: n_chunks must be at least 1");
    if (cfg.laser_linewidth > 0.0 && cfg.sigma / cfg.laser_linewidth <= 100.0) {
        throw std::invalid_argument("source: ensemble bandwidth must exceed laser linewidth by > 100x");
    }
    if (cfg.mean_photon_number < 0.0) {
        throw std::invalid_argument("source: mean_photon_number must be non-negative");
    }
}

namespace {

struct ChunkResult {
    std::vector<Tag> tags;
    std::uint64_t n_events = 0;
    std::uint64_t n_pairs = 0;
    std::uint64_t n_photons = 0;
};

// Memorylessness lets each chunk restart the exponential clock at its start
// time without changing the statistics of the merged process.
ChunkResult generate_chunk(const SourceConfig& cfg, const optics::OpticsParams& params, int chunk) {
    ChunkResult out;
    const double chunk_len = cfg.duration / static_cast<double>(cfg.n_chunks);
    const double t_begin = chunk_len * static_cast<double>(chunk);
    const double t_end = (chunk == cfg.n_chunks - 1) ? cfg.duration : t_begin + chunk_len;

    std::mt19937_64 engine(rng::substream_seed(cfg.seed, static_cast<std::uint64_t>(chunk)));
    std::exponential_distribution<double> gap(cfg.singles_rate);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> detuning(0.0, cfg.sigma);

    double t = t_begin;
    for (;;) {
        t += gap(engine);
        if (!(t < t_end)) break;
        const bool is_pair = uniform(engine) < cfg.pair_fraction;
        const double df = detuning(engine);
        const double p1 = corr::intensity_port1(params.xi, df, params.tau, params.phi);
        const double p2 = corr::intensity_port2(params.theta, df, params.tau, params.phi);

        ++out.n_events;
        const int photons = is_pair ? 2 : 1;
        out.n_photons += static_cast<std::uint64_t>(photons);
        std::uint64_t pair_id = 0;
        Origin origin = Origin::Single;
        if (is_pair) {
            ++out.n_pairs;
            pair_id = (static_cast<std::uint64_t>(chunk) << 32) | out.n_events;
            origin = Origin::PairMember;
        }

        int d1_clicks = 0, d2_clicks = 0;
        for (int k = 0; k < photons; ++k) {
            const double u = uniform(engine);
            if (u < p1) {
                ++d1_clicks;
            } else if (u < p1 + p2) {
                ++d2_clicks;
            }
        }
        for (int k = 0; k < d1_clicks; ++k) out.tags.push_back({t, Detector::D1, origin, pair_id});
        for (int k = 0; k < d2_clicks; ++k) out.tags.push_back({t, Detector::D2, origin, pair_id});
    }
    return out;
}

TagStream merge_chunks(const SourceConfig& cfg, std::vector<ChunkResult>&& chunks) {
    TagStream stream;
    stream.duration = cfg.duration;
    std::size_t total = 0;
    for (const ChunkResult& c : chunks) total += c.tags.size();
    stream.tags.reserve(total);
    for (ChunkResult& c : chunks) {
        stream.tags.insert(stream.tags.end(), c.tags.begin(), c.tags.end());
        stream.n_events += c.n_events;
        stream.n_pairs += c.n_pairs;
        stream.n_photons += c.n_photons;
    }
    return stream;
}

}  // namespace

TagStream generate_events(const SourceConfig& cfg, const optics::OpticsParams& params) {
    validate(cfg);
    if (!params.finite()) throw std::invalid_argument("generate_events: non-finite optics params");
    std::vector<ChunkResult> chunks(static_cast<std::size_t>(cfg.n_chunks));
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < cfg.n_chunks; ++c) {
        chunks[static_cast<std::size_t>(c)] = generate_chunk(cfg, params, c);
    }
    return merge_chunks(cfg, std::move(chunks));
}

TagStream generate_events_serial(const SourceConfig& cfg, const optics::OpticsParams& params) {
    validate(cfg);
    if (!params.finite()) throw std::invalid_argument("generate_events: non-finite optics params");
    std::vector<ChunkResult> chunks(static_cast<std::size_t>(cfg.n_chunks));
    for (int c = 0; c < cfg.n_chunks; ++c) {
        chunks[static_cast<std::size_t>(c)] = generate_chunk(cfg, params, c);
    }
    return merge_chunks(cfg, std::move(chunks));
}

CoincidenceHistogram count_coincidences(const TagStream& stream, double window) {
    if (!(window > 0.0)) throw std::invalid_argument("count_coincidences: window must be positive");
    CoincidenceHistogram h;
    h.window = window;
    h.duration = stream.duration;
    h.n_pairs_emitted = stream.n_pairs;
    h.n_photons_emitted = stream.n_photons;

    std::deque<double> pending_d1, pending_d2;
    double prev_time = -1e300;
    for (const Tag& tag : stream.tags) {
        if (tag.time < prev_time) throw StructureError("count_coincidences: tag stream not time-sorted");
        prev_time = tag.time;

        const bool is_d1 = tag.detector == Detector::D1;
        (is_d1 ? h.singles_d1 : h.singles_d2)++;
        std::deque<double>& other = is_d1 ? pending_d2 : pending_d1;
        std::deque<double>& own = is_d1 ? pending_d1 : pending_d2;
        while (!other.empty() && tag.time - other.front() > window) other.pop_front();
        if (!other.empty()) {
            ++h.coincidences;
            other.pop_front();
        } else {
            own.push_back(tag.time);
        }
    }
    return h;
}

G2Estimate estimate_g2(const CoincidenceHistogram& h, G2Norm norm) {
    G2Estimate est;
    const double c = static_cast<double>(h.coincidences);
    switch (norm) {
        case G2Norm::Accidental: {
            if (h.singles_d1 == 0 || h.singles_d2 == 0) {
                throw std::domain_error("estimate_g2: zero singles, estimate undefined");
            }
            const double denom = 2.0 * static_cast<double>(h.singles_d1) *
                                 static_cast<double>(h.singles_d2) * h.window / h.duration;
            est.value = c / denom;
            est.std_error = std::sqrt(c) / denom;
            break;
        }
        case G2Norm::PairProduct: {
            if (h.n_pairs_emitted == 0) {
                throw std::domain_error("estimate_g2: no pairs emitted, estimate undefined");
            }
            const double n_pairs = static_cast<double>(h.n_pairs_emitted);
            est.value = 8.0 * c / n_pairs;
            est.std_error = 8.0 * std::sqrt(c) / n_pairs;
            break;
        }
    }
    return est;
}

TauScanResult scan_tau(const SourceConfig& cfg, const optics::OpticsParams& base,
                       std::span<const double> taus, double window) {
    if (taus.empty()) throw std::invalid_argument("scan_tau: empty tau list");
    validate(cfg);

    TauScanResult result;
    result.curve.mode = corr::CurveMode::ClassicalProduct;
    result.curve.normalization = corr::Normalization::SinglesNormalized;
    result.curve.params = {base.xi, base.theta, base.phi};
    result.curve.seed = cfg.seed;
    result.points.reserve(taus.size());

    for (std::size_t i = 0; i < taus.size(); ++i) {
        SourceConfig point_cfg = cfg;
        point_cfg.seed = rng::substream_seed(cfg.seed, 0xC01DC0FFEEULL + i);
        optics::OpticsParams p = base;
        p.tau = taus[i];

        TauScanPoint point;
        point.tau = taus[i];
        point.seed = point_cfg.seed;
        const TagStream stream = generate_events(point_cfg, p);
        point.histogram = count_coincidences(stream, window);
        point.g2 = estimate_g2(point.histogram, G2Norm::PairProduct);

        result.curve.tau_grid.push_back(point.tau);
        result.curve.values.push_back(point.g2.value);
        result.curve.std_errors.push_back(point.g2.std_error);
        result.points.push_back(point);
    }
    return result;
}

}  // namespace cohsim::mc
