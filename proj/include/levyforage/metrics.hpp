#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "levyforage/errors.hpp"
#include "levyforage/scenario.hpp"
#include "levyforage/stats.hpp"
#include "levyforage/trace.hpp"
#include "levyforage/world.hpp"

namespace levyforage {

struct ClusterArrival {
    int cluster = 0;
    double distance = 0.0;
};

// Summary statistics of one run.
//
// Conventions: `sites_visited` counts collection events (destructive mode
// collects each reward once; non-destructive mode counts every visit).
// `mean_flight_length` amortizes the total path length, including local
// collection legs, over the flights, so
//     eta = 1 / (mean_flight_length * flights_per_site) = sites / distance
// holds exactly. `encounters` counts entries into detection range (Search to
// Collect switches); the inter-encounter gap statistics feed the jump-count
// scaling law.
struct RunMetrics {
    double eta = 0.0;
    double mean_flight_length = 0.0;
    long flight_count = 0;
    double flights_per_site = 0.0;
    long sites_visited = 0;
    long unique_collected = 0;
    long encounters = 0;
    std::optional<double> inter_encounter_jumps;
    std::optional<double> lambda_measured;
    std::optional<double> lambda_configured;
    std::optional<double> first_arrival_distance;
    bool no_arrival = true;
    double total_distance = 0.0;
    std::vector<ClusterArrival> t_a;
    std::vector<std::array<double, 2>> collection_rate;
    std::vector<std::array<double, 2>> msd;
};

inline double efficiency_from(double mean_flight_length, double flights_per_site) {
    if (!(mean_flight_length > 0.0) || !(flights_per_site > 0.0)) return 0.0;
    return 1.0 / (mean_flight_length * flights_per_site);
}

// Search efficiency of a trace: sites visited per unit distance traversed.
inline double efficiency(const Trajectory& trace) {
    long flights = 0, sites = 0;
    for (const TraceEvent& e : trace.events) {
        if (e.kind == EventKind::Jump) ++flights;
        else if (e.kind == EventKind::Collection) ++sites;
    }
    if (flights < 1) throw InsufficientDataError("efficiency: trace contains no flights");
    if (sites == 0) return 0.0;
    const double total = trace.events.back().distance;
    const double mean_flight = total / static_cast<double>(flights);
    const double flights_per_site = static_cast<double>(flights) / static_cast<double>(sites);
    return efficiency_from(mean_flight, flights_per_site);
}

// Optimal exponent for sparse search: 2 - 1/ln(lambda/r_d).
inline double mu_opt(double lambda, double r_d) {
    if (!(lambda > 0.0) || !(r_d > 0.0))
        throw ParameterError("mu_opt: lambda and r_d must be positive");
    const double ratio = lambda / r_d;
    if (!(ratio > 1.0))
        throw ParameterError("mu_opt: requires lambda/r_d > 1 (sparse-target regime)");
    return 2.0 - 1.0 / std::log(ratio);
}

// Predicted mean jump count between target regions at sparsity lambda/r_d.
inline double predicted_jump_count(double lambda_over_rd, double mu) {
    return std::pow(lambda_over_rd, mu - 1.0);
}

struct ScalingSample {
    double lambda_over_rd = 0.0;
    double inter_encounter_jumps = 0.0;
};

struct ScalingGroup {
    double lambda_over_rd = 0.0;
    double mean_jumps = 0.0;
    long replicates = 0;
};

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<ScalingGroup> groups;
};

// Log-log regression of mean inter-encounter jump count against lambda/r_d;
// the slope estimates mu - 1.
inline ScalingFit jump_count_scaling(const std::vector<ScalingSample>& samples) {
    std::map<double, std::vector<double>> by_ratio;
    for (const ScalingSample& s : samples) by_ratio[s.lambda_over_rd].push_back(s.inter_encounter_jumps);
    if (by_ratio.size() < 3)
        throw InsufficientDataError("jump-count scaling: need at least 3 distinct lambda/r_d ratios");
    ScalingFit fit;
    std::vector<double> lx, ly;
    for (const auto& [ratio, values] : by_ratio) {
        const double m = mean(values);
        fit.groups.push_back(ScalingGroup{ratio, m, static_cast<long>(values.size())});
        lx.push_back(std::log(ratio));
        ly.push_back(std::log(m));
    }
    const LineFit lf = line_fit(lx, ly);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.r_squared = lf.r_squared;
    return fit;
}

// Cumulative distance at the first collection in each cluster, ascending by
// cluster id; clusters never reached are absent.
inline std::vector<ClusterArrival> first_arrival_times(const Trajectory& trace,
                                                       const RewardField& field) {
    std::map<int, double> first;
    for (const TraceEvent& e : trace.events) {
        if (e.kind != EventKind::Collection) continue;
        const int cluster = field.point(e.reward).cluster;
        first.emplace(cluster, e.distance);
    }
    std::vector<ClusterArrival> out;
    out.reserve(first.size());
    for (const auto& [cluster, d] : first) out.push_back(ClusterArrival{cluster, d});
    return out;
}

// Step curve of cumulative collections against distance.
inline std::vector<std::array<double, 2>> collection_rate_curve(const Trajectory& trace) {
    std::vector<std::array<double, 2>> curve{{0.0, 0.0}};
    double collected = 0.0;
    for (const TraceEvent& e : trace.events) {
        if (e.kind != EventKind::Collection) continue;
        curve.push_back({e.distance, ++collected});
    }
    if (!trace.events.empty()) {
        const double total = trace.events.back().distance;
        if (total > curve.back()[0]) curve.push_back({total, collected});
    }
    return curve;
}

// Expected free path between target shadows, from the configured geometry.
inline std::optional<double> configured_lambda(const ScenarioSpec& spec, int total_points) {
    if (total_points <= 0) return std::nullopt;
    const Domain& d = spec.domain;
    double volume = 1.0;
    for (int i = 0; i < d.dimension; ++i) volume *= d.extent(i);
    double cross_section = 1.0;
    if (d.dimension == 2) cross_section = 2.0 * spec.r_d;
    else if (d.dimension == 3) cross_section = std::numbers::pi * spec.r_d * spec.r_d;
    return volume / (cross_section * static_cast<double>(total_points));
}

inline RunMetrics compute_run_metrics(const Trajectory& trace, const RewardField& field,
                                      const ScenarioSpec& spec) {
    RunMetrics m;
    m.total_distance = trace.events.empty() ? 0.0 : trace.events.back().distance;

    std::vector<double> gap_jumps, gap_distances;
    long jumps_since_encounter = 0;
    double distance_at_last_encounter = 0.0;
    std::vector<std::array<double, 2>> jump_sq_displacement;

    for (const TraceEvent& e : trace.events) {
        switch (e.kind) {
        case EventKind::Jump:
            ++m.flight_count;
            ++jumps_since_encounter;
            jump_sq_displacement.push_back(
                {static_cast<double>(m.flight_count), dist2(e.position, spec.start)});
            break;
        case EventKind::Detection:
            ++m.encounters;
            gap_jumps.push_back(static_cast<double>(jumps_since_encounter));
            gap_distances.push_back(e.distance - distance_at_last_encounter);
            jumps_since_encounter = 0;
            distance_at_last_encounter = e.distance;
            break;
        case EventKind::Collection:
            ++m.sites_visited;
            if (!m.first_arrival_distance) m.first_arrival_distance = e.distance;
            break;
        default:
            break;
        }
    }

    m.no_arrival = m.sites_visited == 0;
    m.unique_collected = field.unique_collected();
    if (m.flight_count > 0)
        m.mean_flight_length = m.total_distance / static_cast<double>(m.flight_count);
    if (m.sites_visited > 0)
        m.flights_per_site =
            static_cast<double>(m.flight_count) / static_cast<double>(m.sites_visited);
    m.eta = efficiency_from(m.mean_flight_length, m.flights_per_site);

    if (!gap_jumps.empty()) {
        m.inter_encounter_jumps = mean(gap_jumps);
        m.lambda_measured = mean(gap_distances);
    }
    m.lambda_configured = configured_lambda(spec, field.total());
    m.t_a = first_arrival_times(trace, field);
    m.collection_rate = collection_rate_curve(trace);

    // Downsample squared displacements to keep metrics files bounded.
    const std::size_t stride =
        std::max<std::size_t>(1, jump_sq_displacement.size() / 2048);
    for (std::size_t i = 0; i < jump_sq_displacement.size(); i += stride)
        m.msd.push_back(jump_sq_displacement[i]);
    return m;
}

} // namespace levyforage
