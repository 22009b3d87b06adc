#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "levyforage/errors.hpp"
#include "levyforage/harness.hpp"
#include "levyforage/rng.hpp"
#include "levyforage/scenario.hpp"
#include "levyforage/trace.hpp"

using namespace levyforage;

namespace {

Trajectory random_trajectory(int dimension, std::uint64_t seed) {
    SeededRng rng(seed);
    Trajectory t;
    t.dimension = dimension;
    double distance = 0.0;
    const int n = 50 + static_cast<int>(rng.uniform_below(100));
    for (int i = 0; i < n; ++i) {
        distance += rng.uniform(0.0, 10.0);
        Vec pos = Vec::zero(dimension);
        for (int k = 0; k < dimension; ++k) pos[k] = rng.uniform(-50.0, 50.0);
        switch (rng.uniform_below(5)) {
        case 0: t.events.push_back(TraceEvent::jump(distance, pos, rng.uniform(0.1, 30.0))); break;
        case 1:
            t.events.push_back(
                TraceEvent::detection(distance, pos, static_cast<int>(rng.uniform_below(100))));
            break;
        case 2:
            t.events.push_back(
                TraceEvent::collection(distance, pos, static_cast<int>(rng.uniform_below(100))));
            break;
        case 3:
            t.events.push_back(
                TraceEvent::mode_switch(distance, pos, rng.uniform_below(2) == 0 ? 'A' : 'B'));
            break;
        default:
            t.events.push_back(TraceEvent::clip(distance, pos, rng.uniform(0.0, 5.0)));
            break;
        }
    }
    return t;
}

bool events_equal(const TraceEvent& a, const TraceEvent& b) {
    return a.kind == b.kind && a.distance == b.distance && a.position == b.position &&
           a.value == b.value && a.reward == b.reward && a.mode == b.mode;
}

} // namespace

TEST_CASE("trajectories survive a write-read round trip exactly") {
    for (int dim : {1, 2, 3}) {
        const Trajectory t = random_trajectory(dim, 100 + static_cast<std::uint64_t>(dim));
        std::ostringstream os;
        write_trace(os, t);
        std::istringstream is(os.str());
        const Trajectory back = read_trace(is);
        REQUIRE(back.dimension == t.dimension);
        REQUIRE(back.events.size() == t.events.size());
        for (std::size_t i = 0; i < t.events.size(); ++i) {
            INFO("event " << i);
            REQUIRE(events_equal(t.events[i], back.events[i]));
        }
    }
}

TEST_CASE("malformed traces are rejected") {
    const auto parse = [](const std::string& text) {
        std::istringstream is(text);
        return read_trace(is);
    };
    REQUIRE_THROWS_AS(parse(""), ConfigError);
    REQUIRE_THROWS_AS(parse("bogus header\n"), ConfigError);
    REQUIRE_THROWS_AS(parse("event\tdist\tx\ty\tpayload\njump\t1\t2\n"), ConfigError);
    REQUIRE_THROWS_AS(parse("event\tdist\tx\ty\tpayload\njump\tx\t0\t0\t1\n"), ConfigError);
    REQUIRE_THROWS_AS(parse("event\tdist\tx\ty\tpayload\nwarp\t1\t0\t0\t1\n"), ConfigError);
    REQUIRE_THROWS_AS(parse("event\tdist\tx\ty\tpayload\nmode-switch\t1\t0\t0\tQ\n"), ConfigError);
    REQUIRE_THROWS_AS(parse("event\tdist\tx\ty\tpayload\ncollection\t1\t0\t0\tabc\n"), ConfigError);
}

TEST_CASE("emitted run files parse back through the metrics module") {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "levyforage_trace_io_test";
    std::filesystem::remove_all(dir);

    ScenarioSpec spec = builtin("BIASED1D");
    spec.budget = 300.0;
    const RunArtifacts art = write_run(spec, 5, dir);

    std::ifstream is(art.trace_path);
    const Trajectory parsed = read_trace(is);
    REQUIRE(parsed.dimension == 1);
    REQUIRE(parsed.events.size() == art.result.trace.events.size());

    const RunMetrics metrics = metrics_from_json(read_file(art.metrics_path));
    REQUIRE(metrics.eta == art.result.metrics.eta);
    REQUIRE(metrics.total_distance == art.result.metrics.total_distance);

    const ScenarioSpec reloaded = load_spec(read_file(art.scenario_path));
    REQUIRE(reloaded == spec);

    std::filesystem::remove_all(dir);
}
