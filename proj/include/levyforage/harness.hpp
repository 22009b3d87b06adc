#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include "json.hpp"

#include "levyforage/errors.hpp"
#include "levyforage/metrics.hpp"
#include "levyforage/runner.hpp"
#include "levyforage/scenario.hpp"
#include "levyforage/sweep.hpp"
#include "levyforage/trace.hpp"

namespace levyforage {

namespace detail {

inline json optional_to(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

inline std::optional<double> optional_from(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("metrics: missing key '" + key + "'");
    const json& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    if (!v.is_number()) throw ConfigError("metrics: key '" + key + "' must be a number or null");
    return v.get<double>();
}

inline double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ConfigError("metrics: missing numeric key '" + key + "'");
    return j.at(key).get<double>();
}

} // namespace detail

inline std::string metrics_to_json(const RunMetrics& m) {
    using json = detail::json;
    json j;
    j["eta"] = m.eta;
    j["mean_flight_length"] = m.mean_flight_length;
    j["flight_count"] = m.flight_count;
    j["flights_per_site"] = m.flights_per_site;
    j["sites_visited"] = m.sites_visited;
    j["unique_collected"] = m.unique_collected;
    j["encounters"] = m.encounters;
    j["inter_encounter_jumps"] = detail::optional_to(m.inter_encounter_jumps);
    j["lambda_measured"] = detail::optional_to(m.lambda_measured);
    j["lambda_configured"] = detail::optional_to(m.lambda_configured);
    j["first_arrival_distance"] = detail::optional_to(m.first_arrival_distance);
    j["no_arrival"] = m.no_arrival;
    j["total_distance"] = m.total_distance;
    j["t_a"] = json::array();
    for (const ClusterArrival& a : m.t_a)
        j["t_a"].push_back({{"cluster", a.cluster}, {"distance", a.distance}});
    j["collection_rate"] = m.collection_rate;
    j["msd"] = m.msd;
    return j.dump(2) + "\n";
}

inline RunMetrics metrics_from_json(const std::string& text) {
    using json = detail::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("metrics: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("metrics: expected a JSON object");
    RunMetrics m;
    m.eta = detail::require_number(j, "eta");
    m.mean_flight_length = detail::require_number(j, "mean_flight_length");
    m.flight_count = static_cast<long>(detail::require_number(j, "flight_count"));
    m.flights_per_site = detail::require_number(j, "flights_per_site");
    m.sites_visited = static_cast<long>(detail::require_number(j, "sites_visited"));
    m.unique_collected = static_cast<long>(detail::require_number(j, "unique_collected"));
    m.encounters = static_cast<long>(detail::require_number(j, "encounters"));
    m.inter_encounter_jumps = detail::optional_from(j, "inter_encounter_jumps");
    m.lambda_measured = detail::optional_from(j, "lambda_measured");
    m.lambda_configured = detail::optional_from(j, "lambda_configured");
    m.first_arrival_distance = detail::optional_from(j, "first_arrival_distance");
    if (!j.contains("no_arrival") || !j.at("no_arrival").is_boolean())
        throw ConfigError("metrics: missing boolean key 'no_arrival'");
    m.no_arrival = j.at("no_arrival").get<bool>();
    m.total_distance = detail::require_number(j, "total_distance");
    if (!j.contains("t_a") || !j.at("t_a").is_array())
        throw ConfigError("metrics: missing array key 't_a'");
    for (const auto& a : j.at("t_a"))
        m.t_a.push_back(ClusterArrival{a.at("cluster").get<int>(), a.at("distance").get<double>()});
    for (const auto& p : j.at("collection_rate"))
        m.collection_rate.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    for (const auto& p : j.at("msd"))
        m.msd.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return m;
}

struct RunArtifacts {
    std::filesystem::path trace_path;
    std::filesystem::path metrics_path;
    std::filesystem::path scenario_path;
    RunResult result;
};

// Execute one run and write trace.tsv, metrics.json and the resolved
// scenario.json under out_dir. File contents depend only on scenario and seed.
inline RunArtifacts write_run(const ScenarioSpec& spec, std::uint64_t seed,
                              const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    RunArtifacts art;
    art.result = run(spec, seed);
    art.trace_path = out_dir / "trace.tsv";
    art.metrics_path = out_dir / "metrics.json";
    art.scenario_path = out_dir / "scenario.json";

    {
        std::ofstream os(art.trace_path, std::ios::binary);
        if (!os) throw ConfigError("cannot write " + art.trace_path.string());
        write_trace(os, art.result.trace);
    }
    {
        std::ofstream os(art.metrics_path, std::ios::binary);
        if (!os) throw ConfigError("cannot write " + art.metrics_path.string());
        os << metrics_to_json(art.result.metrics);
    }
    {
        std::ofstream os(art.scenario_path, std::ios::binary);
        if (!os) throw ConfigError("cannot write " + art.scenario_path.string());
        os << save_spec(spec);
    }
    return art;
}

inline std::filesystem::path write_sweep_table(const std::string& table,
                                               const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path path = out_dir / "sweep.tsv";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path.string());
    os << table;
    return path;
}

inline std::string run_summary(const ScenarioSpec& spec, const RunResult& r) {
    std::ostringstream os;
    os << "scenario: " << (spec.name.empty() ? "(config)" : spec.name) << "  seed: " << r.seed
       << "\n";
    os << "collections: " << r.metrics.sites_visited << " (unique " << r.metrics.unique_collected
       << " of " << r.field.total() << ")\n";
    os << "total distance: " << fmt_double(r.metrics.total_distance) << "\n";
    os << "eta: " << fmt_double(r.metrics.eta) << "\n";
    if (r.metrics.t_a.empty()) {
        os << "t_a: no arrival\n";
    } else {
        os << "t_a per cluster:";
        for (const ClusterArrival& a : r.metrics.t_a)
            os << "  [" << a.cluster << "] " << fmt_double(a.distance);
        os << "\n";
    }
    return os.str();
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace levyforage
