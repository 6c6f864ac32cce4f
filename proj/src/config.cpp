#include "cohsim/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "cohsim/errors.hpp"

namespace cohsim::io {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

double deg2rad(double d) { return d * kPi / 180.0; }
double rad2deg(double r) { return r * 180.0 / kPi; }

void reject_unknown_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!allowed.contains(item.key())) {
            throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
        }
    }
}

double get_number(const Json& obj, const char* key, double fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("key \"" + std::string(key) + "\" in " + where + " must be a number");
    return v.get<double>();
}

int get_int(const Json& obj, const char* key, int fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError("key \"" + std::string(key) + "\" in " + where + " must be an integer");
    }
    return v.get<int>();
}

}  // namespace

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Fields: return "fields";
        case Scenario::Eraser: return "eraser";
        case Scenario::HomClassical: return "hom_classical";
        case Scenario::HomHeterodyne: return "hom_heterodyne";
        case Scenario::Corrmap: return "corrmap";
        case Scenario::Chsh: return "chsh";
        case Scenario::Montecarlo: return "montecarlo";
    }
    return "unknown";
}

Scenario scenario_from_name(const std::string& name) {
    for (Scenario s : {Scenario::Fields, Scenario::Eraser, Scenario::HomClassical, Scenario::HomHeterodyne,
                       Scenario::Corrmap, Scenario::Chsh, Scenario::Montecarlo}) {
        if (name == scenario_name(s)) return s;
    }
    throw ConfigError("unknown scenario \"" + name + "\"");
}

ScenarioConfig parse_config(const std::string& json_text) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");

    reject_unknown_keys(doc,
                        {"scenario", "seed", "workers", "optics", "ensemble", "scan", "source",
                         "coincidence_window", "angles_deg", "corrmap", "output"},
                        "config root");

    if (!doc.contains("scenario")) throw ConfigError("missing required key \"scenario\"");
    if (!doc.at("scenario").is_string()) throw ConfigError("key \"scenario\" must be a string");

    ScenarioConfig cfg;
    cfg.scenario = scenario_from_name(doc.at("scenario").get<std::string>());
    // Reference settings are the defaults: diagonal polarizers, sigma = 5.
    cfg.optics.xi = deg2rad(45.0);
    cfg.optics.theta = deg2rad(45.0);

    if (doc.contains("optics")) {
        const Json& o = doc.at("optics");
        if (!o.is_object()) throw ConfigError("\"optics\" must be an object");
        reject_unknown_keys(o, {"xi_deg", "theta_deg", "phi_deg", "tau", "delta_f"}, "optics");
        cfg.optics.xi = deg2rad(get_number(o, "xi_deg", 45.0, "optics"));
        cfg.optics.theta = deg2rad(get_number(o, "theta_deg", 45.0, "optics"));
        cfg.optics.phi = deg2rad(get_number(o, "phi_deg", 0.0, "optics"));
        cfg.optics.tau = get_number(o, "tau", 0.0, "optics");
        cfg.optics.delta_f = get_number(o, "delta_f", 0.0, "optics");
    }
    if (!cfg.optics.finite()) throw ConfigError("optics parameters must be finite");

    if (doc.contains("ensemble")) {
        const Json& e = doc.at("ensemble");
        if (!e.is_object()) throw ConfigError("\"ensemble\" must be an object");
        reject_unknown_keys(e, {"a", "b", "c", "span_sigmas", "n_points"}, "ensemble");
        cfg.ensemble.spec.a = get_number(e, "a", 1.0, "ensemble");
        cfg.ensemble.spec.b = get_number(e, "b", 0.0, "ensemble");
        cfg.ensemble.spec.c = get_number(e, "c", 5.0, "ensemble");
        cfg.ensemble.span_sigmas = get_number(e, "span_sigmas", 4.0, "ensemble");
        cfg.ensemble.n_points = get_int(e, "n_points", 161, "ensemble");
    }
    if (!(cfg.ensemble.spec.c > 0.0)) throw ConfigError("ensemble: c must be positive");
    if (cfg.ensemble.spec.a == 0.0) throw ConfigError("ensemble: a must be nonzero");
    if (!(cfg.ensemble.span_sigmas > 0.0)) throw ConfigError("ensemble: span_sigmas must be positive");
    if (cfg.ensemble.n_points < 3) throw ConfigError("ensemble: n_points must be at least 3");
    if (cfg.ensemble.n_points % 2 == 0) throw ConfigError("ensemble: n_points must be odd");

    if (doc.contains("scan")) {
        const Json& s = doc.at("scan");
        if (!s.is_object()) throw ConfigError("\"scan\" must be an object");
        reject_unknown_keys(s, {"tau_min", "tau_max", "n_tau"}, "scan");
        cfg.scan.tau_min = get_number(s, "tau_min", 0.0, "scan");
        cfg.scan.tau_max = get_number(s, "tau_max", 0.0, "scan");
        cfg.scan.n_tau = get_int(s, "n_tau", 0, "scan");
        if (cfg.scan.n_tau < 0) throw ConfigError("scan: n_tau must be non-negative");
        if (cfg.scan.n_tau > 0 && !(cfg.scan.tau_max >= cfg.scan.tau_min)) {
            throw ConfigError("scan: tau_max must be >= tau_min");
        }
    }

    cfg.source.sigma = cfg.ensemble.spec.c;
    if (doc.contains("source")) {
        const Json& s = doc.at("source");
        if (!s.is_object()) throw ConfigError("\"source\" must be an object");
        reject_unknown_keys(s,
                            {"singles_rate", "pair_fraction", "duration", "seed", "n_chunks",
                             "mean_photon_number", "laser_linewidth"},
                            "source");
        cfg.source.singles_rate = get_number(s, "singles_rate", 1e5, "source");
        cfg.source.pair_fraction = get_number(s, "pair_fraction", 0.01, "source");
        cfg.source.duration = get_number(s, "duration", 1.0, "source");
        if (s.contains("seed")) {
            if (!s.at("seed").is_number_integer()) throw ConfigError("source: seed must be an integer");
            cfg.source.seed = s.at("seed").get<std::uint64_t>();
        }
        cfg.source.n_chunks = get_int(s, "n_chunks", 256, "source");
        cfg.source.mean_photon_number = get_number(s, "mean_photon_number", 0.0, "source");
        cfg.source.laser_linewidth = get_number(s, "laser_linewidth", 0.0, "source");
    }
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_integer()) throw ConfigError("key \"seed\" must be an integer");
        cfg.source.seed = doc.at("seed").get<std::uint64_t>();
    }
    try {
        mc::validate(cfg.source);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    cfg.coincidence_window = get_number(doc, "coincidence_window", 1e-9, "config root");
    if (!(cfg.coincidence_window > 0.0)) throw ConfigError("coincidence_window must be positive");

    if (doc.contains("angles_deg")) {
        const Json& a = doc.at("angles_deg");
        if (!a.is_array() || a.size() != 4) throw ConfigError("\"angles_deg\" must be an array of 4 numbers");
        for (std::size_t i = 0; i < 4; ++i) {
            if (!a.at(i).is_number()) throw ConfigError("\"angles_deg\" must be an array of 4 numbers");
            cfg.chsh_angles_deg[i] = a.at(i).get<double>();
        }
    }

    if (doc.contains("corrmap")) {
        const Json& c = doc.at("corrmap");
        if (!c.is_object()) throw ConfigError("\"corrmap\" must be an object");
        reject_unknown_keys(c, {"step_deg"}, "corrmap");
        cfg.corrmap_step_deg = get_number(c, "step_deg", 1.0, "corrmap");
        if (!(cfg.corrmap_step_deg > 0.0 && cfg.corrmap_step_deg <= 90.0)) {
            throw ConfigError("corrmap: step_deg must be in (0, 90]");
        }
    }

    cfg.workers = get_int(doc, "workers", 0, "config root");
    if (cfg.workers < 0) throw ConfigError("workers must be non-negative");

    if (doc.contains("output")) {
        const Json& o = doc.at("output");
        if (!o.is_object()) throw ConfigError("\"output\" must be an object");
        reject_unknown_keys(o, {"dir", "format"}, "output");
        if (o.contains("dir")) {
            if (!o.at("dir").is_string()) throw ConfigError("output: dir must be a string");
            cfg.output.dir = o.at("dir").get<std::string>();
        }
        if (o.contains("format")) {
            if (!o.at("format").is_string()) throw ConfigError("output: format must be a string");
            const std::string f = o.at("format").get<std::string>();
            if (f == "csv") {
                cfg.output.format = OutputFormat::Csv;
            } else if (f == "json") {
                cfg.output.format = OutputFormat::Json;
            } else {
                throw ConfigError("output: format must be \"csv\" or \"json\"");
            }
        }
    }

    if (cfg.scenario == Scenario::Montecarlo) {
        if (cfg.ensemble.spec.a != 1.0 || cfg.ensemble.spec.b != 0.0) {
            throw ConfigError("montecarlo requires ensemble a = 1 and b = 0");
        }
    }
    return cfg;
}

std::string emit_config(const ScenarioConfig& cfg) {
    Json doc;
    doc["scenario"] = scenario_name(cfg.scenario);
    doc["optics"] = {{"xi_deg", rad2deg(cfg.optics.xi)},
                     {"theta_deg", rad2deg(cfg.optics.theta)},
                     {"phi_deg", rad2deg(cfg.optics.phi)},
                     {"tau", cfg.optics.tau},
                     {"delta_f", cfg.optics.delta_f}};
    doc["ensemble"] = {{"a", cfg.ensemble.spec.a},
                       {"b", cfg.ensemble.spec.b},
                       {"c", cfg.ensemble.spec.c},
                       {"span_sigmas", cfg.ensemble.span_sigmas},
                       {"n_points", cfg.ensemble.n_points}};
    doc["scan"] = {{"tau_min", cfg.scan.tau_min}, {"tau_max", cfg.scan.tau_max}, {"n_tau", cfg.scan.n_tau}};
    doc["source"] = {{"singles_rate", cfg.source.singles_rate},
                     {"pair_fraction", cfg.source.pair_fraction},
                     {"duration", cfg.source.duration},
                     {"seed", cfg.source.seed},
                     {"n_chunks", cfg.source.n_chunks},
                     {"mean_photon_number", cfg.source.mean_photon_number},
                     {"laser_linewidth", cfg.source.laser_linewidth}};
    doc["coincidence_window"] = cfg.coincidence_window;
    doc["angles_deg"] = cfg.chsh_angles_deg;
    doc["corrmap"] = {{"step_deg", cfg.corrmap_step_deg}};
    doc["workers"] = cfg.workers;
    doc["output"] = {{"dir", cfg.output.dir},
                     {"format", cfg.output.format == OutputFormat::Csv ? "csv" : "json"}};
    return doc.dump(2) + "\n";
}

std::vector<double> scan_tau_grid(const ScenarioConfig& cfg) {
    const double sigma = cfg.ensemble.spec.c;
    double lo = cfg.scan.tau_min;
    double hi = cfg.scan.tau_max;
    int n = cfg.scan.n_tau;
    if (n == 0) {
        if (cfg.scenario == Scenario::Montecarlo) {
            lo = 0.0;
            hi = 6.0 / sigma;
            n = 13;
        } else {
            lo = -6.0 / sigma;
            hi = 6.0 / sigma;
            n = 241;
        }
    }
    std::vector<double> taus(static_cast<std::size_t>(n));
    if (n == 1) {
        taus[0] = lo;
        return taus;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i) taus[static_cast<std::size_t>(i)] = lo + step * static_cast<double>(i);
    return taus;
}

}  // namespace cohsim::io
