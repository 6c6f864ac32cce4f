#include "cohsim/scenario.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "cohsim/csv.hpp"
#include "cohsim/errors.hpp"
#include "cohsim/version.hpp"

namespace cohsim::io {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

double rad2deg(double r) { return r * 180.0 / kPi; }
double deg2rad(double d) { return d * kPi / 180.0; }

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct Emitter {
    const ScenarioConfig& cfg;
    fs::path dir;
    std::vector<OutputRecord> records;

    void write(const std::string& name, const std::string& bytes) {
        const fs::path path = dir / name;
        write_file(path.string(), bytes);
        records.push_back({name, bytes.size(), hex64(fnv1a64(bytes))});
    }

    void write_table(const std::string& base_name, const Table& table) {
        if (cfg.output.format == OutputFormat::Csv) {
            write(base_name + ".csv", emit_csv(table));
        } else {
            write(base_name + ".json", emit_json(table));
        }
    }
};

void run_fields(const ScenarioConfig& cfg, Emitter& em) {
    const auto [field_a, field_b] = optics::mzi_output_fields(cfg.optics, 1.0);
    // Mixed text/number table, assembled directly.
    std::string out = "port,mode,re,im,intensity\n";
    for (const auto* field : {&field_a, &field_b}) {
        const char* port = field->port == optics::Port::A ? "A" : "B";
        for (optics::ModeLabel m : optics::kModeBasis) {
            const optics::Complex c = field->at(m);
            out += port;
            out += ',';
            out += optics::mode_name(m);
            out += ',';
            out += format_number(c.real());
            out += ',';
            out += format_number(c.imag());
            out += ',';
            out += format_number(std::norm(c));
            out += '\n';
        }
    }
    em.write("fields.csv", out);
}

void run_eraser(const ScenarioConfig& cfg, Emitter& em) {
    Table scan;
    scan.columns = {"phi_deg", "i1_mean", "i2_mean"};
    for (int i = 0; i < 360; ++i) {
        const double phi = deg2rad(static_cast<double>(i));
        const auto [i1, i2] = corr::eraser_means(cfg.optics.xi, cfg.optics.theta, phi);
        scan.rows.push_back({static_cast<double>(i), i1, i2});
    }
    em.write_table("eraser_scan", scan);

    Table vis;
    vis.columns = {"visibility_d1", "visibility_d2"};
    vis.rows.push_back({corr::eraser_visibility_port1(cfg.optics.xi),
                        corr::eraser_visibility_port2(cfg.optics.theta)});
    em.write_table("eraser_visibility", vis);
}

void run_hom_classical(const ScenarioConfig& cfg, Emitter& em) {
    const ensemble::DetuningGrid grid =
        ensemble::make_grid(cfg.ensemble.spec, cfg.ensemble.span_sigmas, cfg.ensemble.n_points);
    const std::vector<double> taus = scan_tau_grid(cfg);
    const corr::CurveParams params{cfg.optics.xi, cfg.optics.theta, cfg.optics.phi};

    const corr::CorrelationCurve dip = corr::classical_dip_curve(grid, params, taus);
    Table dip_table;
    dip_table.columns = {"tau", "value"};
    for (std::size_t i = 0; i < dip.tau_grid.size(); ++i) {
        dip_table.rows.push_back({dip.tau_grid[i], dip.values[i]});
    }
    em.write_table("dip", dip_table);

    // Per-pair normalized products on the (tau, detuning) lattice.
    Table matrix;
    matrix.columns.push_back("tau");
    for (double df : grid.points) matrix.columns.push_back("df_" + format_number(df));
    for (double tau : taus) {
        std::vector<double> row;
        row.reserve(grid.points.size() + 1);
        row.push_back(tau);
        for (double df : grid.points) {
            const double i1 = corr::intensity_port1(params.xi, df, tau, params.phi);
            const double i2 = corr::intensity_port2(params.theta, df, tau, params.phi);
            row.push_back(16.0 * i1 * i2);
        }
        matrix.rows.push_back(std::move(row));
    }
    em.write_table("product_matrix", matrix);

    Table weights;
    weights.columns = {"delta_f", "weight"};
    for (std::size_t j = 0; j < grid.points.size(); ++j) {
        weights.rows.push_back({grid.points[j], grid.weights[j]});
    }
    em.write_table("ensemble_weights", weights);

    // Weighted spectral slices at tau = {0, 2, 4, 6}/sigma; each column sums
    // to the dip value at that tau.
    const double sigma = grid.sigma();
    const std::vector<double> slice_taus{0.0, 2.0 / sigma, 4.0 / sigma, 6.0 / sigma};
    Table slices;
    slices.columns.push_back("delta_f");
    for (double tau : slice_taus) slices.columns.push_back("tau_" + format_number(tau));
    for (std::size_t j = 0; j < grid.points.size(); ++j) {
        std::vector<double> row;
        row.push_back(grid.points[j]);
        for (double tau : slice_taus) {
            const double i1 = corr::intensity_port1(params.xi, grid.points[j], tau, params.phi);
            const double i2 = corr::intensity_port2(params.theta, grid.points[j], tau, params.phi);
            row.push_back(grid.weights[j] * 16.0 * i1 * i2);
        }
        slices.rows.push_back(std::move(row));
    }
    em.write_table("spectral_slices", slices);
}

void run_hom_heterodyne(const ScenarioConfig& cfg, Emitter& em) {
    const std::vector<double> taus = scan_tau_grid(cfg);
    const corr::CurveParams params{cfg.optics.xi, cfg.optics.theta, cfg.optics.phi};
    const corr::CorrelationCurve curve = corr::quantum_g2_curve(params, cfg.ensemble.spec.c, taus);

    Table g2;
    g2.columns = {"tau", "value"};
    for (std::size_t i = 0; i < curve.tau_grid.size(); ++i) {
        g2.rows.push_back({curve.tau_grid[i], curve.values[i]});
    }
    em.write_table("heterodyne_g2", g2);

    // Phase self-cancellation check over random (delta_f, tau, phi) draws.
    std::mt19937_64 engine(cfg.source.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n_draws = 1000;
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < n_draws; ++i) {
        const double df = (2.0 * u(engine) - 1.0) * 4.0 * cfg.ensemble.spec.c;
        const double tau = (2.0 * u(engine) - 1.0) * 6.0 / cfg.ensemble.spec.c;
        const double phi = 2.0 * kPi * u(engine);
        const double v = corr::heterodyne_pair(cfg.optics.xi, cfg.optics.theta, df, tau, phi).value;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    Table inv;
    inv.columns = {"n_draws", "value_min", "value_max", "spread_over_fullscale"};
    // Spread relative to the full scale I0^2/16, well defined even where the
    // joint law is exactly zero.
    inv.rows.push_back({static_cast<double>(n_draws), lo, hi, (hi - lo) * 16.0});
    em.write_table("heterodyne_invariance", inv);
}

void run_corrmap(const ScenarioConfig& cfg, Emitter& em) {
    const int n = static_cast<int>(std::lround(180.0 / cfg.corrmap_step_deg));
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) angles[static_cast<std::size_t>(i)] = deg2rad(cfg.corrmap_step_deg * i);
    const std::vector<double> values = corr::correlation_map(angles, angles);

    Table map;
    map.columns.push_back("xi_deg");
    for (int j = 0; j < n; ++j) {
        map.columns.push_back("theta_" + format_number(cfg.corrmap_step_deg * j));
    }
    for (int i = 0; i < n; ++i) {
        std::vector<double> row;
        row.reserve(static_cast<std::size_t>(n) + 1);
        row.push_back(cfg.corrmap_step_deg * i);
        for (int j = 0; j < n; ++j) {
            row.push_back(values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                                 static_cast<std::size_t>(j)]);
        }
        map.rows.push_back(std::move(row));
    }
    em.write_table("corrmap", map);
}

void run_chsh(const ScenarioConfig& cfg, Emitter& em) {
    const double a = deg2rad(cfg.chsh_angles_deg[0]);
    const double ap = deg2rad(cfg.chsh_angles_deg[1]);
    const double b = deg2rad(cfg.chsh_angles_deg[2]);
    const double bp = deg2rad(cfg.chsh_angles_deg[3]);

    Table e_table;
    e_table.columns = {"a_deg", "b_deg", "E"};
    e_table.rows.push_back({cfg.chsh_angles_deg[0], cfg.chsh_angles_deg[2], corr::correlation_E(a, b)});
    e_table.rows.push_back({cfg.chsh_angles_deg[0], cfg.chsh_angles_deg[3], corr::correlation_E(a, bp)});
    e_table.rows.push_back({cfg.chsh_angles_deg[1], cfg.chsh_angles_deg[2], corr::correlation_E(ap, b)});
    e_table.rows.push_back({cfg.chsh_angles_deg[1], cfg.chsh_angles_deg[3], corr::correlation_E(ap, bp)});
    em.write_table("chsh_E", e_table);

    Table s_table;
    s_table.columns = {"S"};
    s_table.rows.push_back({corr::chsh_S(a, ap, b, bp)});
    em.write_table("chsh_S", s_table);
}

void run_montecarlo(const ScenarioConfig& cfg, Emitter& em) {
    const std::vector<double> taus = scan_tau_grid(cfg);
    const mc::TauScanResult scan = mc::scan_tau(cfg.source, cfg.optics, taus, cfg.coincidence_window);

    Table g2;
    g2.columns = {"tau", "value", "stderr"};
    for (std::size_t i = 0; i < scan.curve.tau_grid.size(); ++i) {
        g2.rows.push_back({scan.curve.tau_grid[i], scan.curve.values[i], scan.curve.std_errors[i]});
    }
    em.write_table("mc_g2", g2);

    Table hist;
    hist.columns = {"tau", "coincidences", "singles_d1", "singles_d2", "n_pairs", "n_photons"};
    std::uint64_t total_pairs = 0, total_photons = 0;
    for (const mc::TauScanPoint& p : scan.points) {
        hist.rows.push_back({p.tau, static_cast<double>(p.histogram.coincidences),
                             static_cast<double>(p.histogram.singles_d1),
                             static_cast<double>(p.histogram.singles_d2),
                             static_cast<double>(p.histogram.n_pairs_emitted),
                             static_cast<double>(p.histogram.n_photons_emitted)});
        total_pairs += p.histogram.n_pairs_emitted;
        total_photons += p.histogram.n_photons_emitted;
    }
    em.write_table("mc_histogram", hist);

    Json summary;
    summary["n_tau_points"] = taus.size();
    summary["duration_per_point"] = cfg.source.duration;
    summary["window"] = cfg.coincidence_window;
    summary["total_pairs"] = total_pairs;
    summary["total_photons"] = total_photons;
    em.write("mc_summary.json", summary.dump(2) + "\n");
}

}  // namespace

std::string manifest_to_json(const RunManifest& m) {
    Json doc;
    doc["tool"] = kToolName;
    doc["version"] = kVersion;
    doc["scenario"] = m.scenario;
    doc["timestamp_utc"] = m.timestamp_utc;
    doc["master_seed"] = m.master_seed;
    doc["config"] = Json::parse(emit_config(m.config));
    Json outs = Json::array();
    for (const OutputRecord& r : m.outputs) {
        outs.push_back(Json{{"file", r.file}, {"bytes", r.bytes}, {"fnv1a64", r.fnv1a64_hex}});
    }
    doc["outputs"] = outs;
    return doc.dump(2) + "\n";
}

RunManifest run_scenario(const ScenarioConfig& cfg) {
#ifdef _OPENMP
    if (cfg.workers > 0) omp_set_num_threads(cfg.workers);
#endif

    Emitter em{cfg, fs::path(cfg.output.dir), {}};
    std::error_code ec;
    fs::create_directories(em.dir, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.output.dir + ": " + ec.message());

    switch (cfg.scenario) {
        case Scenario::Fields: run_fields(cfg, em); break;
        case Scenario::Eraser: run_eraser(cfg, em); break;
        case Scenario::HomClassical: run_hom_classical(cfg, em); break;
        case Scenario::HomHeterodyne: run_hom_heterodyne(cfg, em); break;
        case Scenario::Corrmap: run_corrmap(cfg, em); break;
        case Scenario::Chsh: run_chsh(cfg, em); break;
        case Scenario::Montecarlo: run_montecarlo(cfg, em); break;
    }

    RunManifest manifest;
    manifest.scenario = scenario_name(cfg.scenario);
    manifest.timestamp_utc = utc_timestamp();
    manifest.master_seed = cfg.source.seed;
    manifest.config = cfg;
    manifest.outputs = em.records;
    write_file((em.dir / "manifest.json").string(), manifest_to_json(manifest));
    return manifest;
}

}  // namespace cohsim::io
