#pragma once

#include <cstdint>
#include <iterator>
#include <utility>

#include "levyforage/forager.hpp"
#include "levyforage/metrics.hpp"
#include "levyforage/rng.hpp"
#include "levyforage/scenario.hpp"
#include "levyforage/trace.hpp"
#include "levyforage/world.hpp"

namespace levyforage {

struct RunResult {
    Trajectory trace;
    RunMetrics metrics;
    RewardField field;
    std::uint64_t seed = 0;
};

// Execute one seeded run: build the world from the world stream, then step the
// automaton on the agent stream until depletion or budget exhaustion. Equal
// scenario and seed give identical traces; world and agent randomness are
// separate streams, so the reward layout does not depend on agent decisions.
inline RunResult run(const ScenarioSpec& spec, std::uint64_t seed) {
    validate(spec);
    SeededRng world_rng(derive_stream(seed, kWorldStreamTag));
    SeededRng agent_rng(derive_stream(seed, kAgentStreamTag));

    const double release_radius = spec.ndf_release_factor * spec.r_d;
    RewardField field =
        spec.clusters.empty()
            ? RewardField(spec.domain, spec.mode, spec.r_d, {}, release_radius)
            : generate_rewards(spec.domain, spec.clusters, spec.mode, spec.r_d, world_rng,
                               release_radius);

    const JumpPolicy policy = make_jump_policy(spec);
    const double budget = effective_budget(spec);

    ForagerState st;
    st.position = spec.start;
    st.drift = spec.drift;

    Trajectory trace;
    trace.dimension = spec.domain.dimension;
    for (;;) {
        StepOutcome out = step(st, field, policy, agent_rng, spec.boundary);
        trace.events.insert(trace.events.end(), std::make_move_iterator(out.events.begin()),
                            std::make_move_iterator(out.events.end()));
        if (out.terminal) break;
        if (st.distance_traveled >= budget) break;
    }

    RunMetrics metrics = compute_run_metrics(trace, field, spec);
    return RunResult{std::move(trace), std::move(metrics), std::move(field), seed};
}

} // namespace levyforage
