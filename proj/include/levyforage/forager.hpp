#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "levyforage/errors.hpp"
#include "levyforage/levy.hpp"
#include "levyforage/rng.hpp"
#include "levyforage/trace.hpp"
#include "levyforage/vec.hpp"
#include "levyforage/world.hpp"

namespace levyforage {

// Mode A searches with heavy-tailed flights and in-flight detection; Mode B
// collects rewards locally until none remain in range.
enum class Mode : char { Search = 'A', Collect = 'B' };

enum class WalkerKind { Levy, Brownian, UniformRandom };

// Jump-length policy: the heavy-tailed law or one of the comparison walkers.
// All three drive the same automaton.
struct JumpPolicy {
    WalkerKind kind = WalkerKind::Levy;
    JumpLaw law;

    double sample_length(SeededRng& rng) const {
        switch (kind) {
        case WalkerKind::Levy:
            return sample_jump_length(law, rng);
        case WalkerKind::Brownian: {
            // |gaussian| with mean ell_min: E|N(0,s)| = s*sqrt(2/pi).
            const double s = law.ell_min * std::sqrt(std::numbers::pi / 2.0);
            return std::abs(rng.normal(0.0, s));
        }
        case WalkerKind::UniformRandom:
            return rng.uniform(law.ell_min,
                               law.bounded() ? law.ell_max : law.ell_min);
        }
        return law.ell_min;
    }
};

struct PendingJump {
    Vec direction;
    double commanded = 0.0;
    double remaining = 0.0;
};

struct ForagerState {
    Vec position;
    Mode mode = Mode::Search;
    long jumps_taken = 0;
    double distance_traveled = 0.0;
    Vec drift; // displacement per unit path length; zero vector disables it
    std::optional<PendingJump> pending;
};

struct StepOutcome {
    std::vector<TraceEvent> events;
    bool terminal = false;
};

struct DriftedSegment {
    Vec direction;
    double length = 0.0;
};

// Perturb a commanded jump by a constant drift: realized displacement is
// (direction + drift) * length, renormalized into a direction and a path
// length. Requires |drift| < 1 so motion keeps making forward progress.
inline DriftedSegment apply_drift(const Vec& direction, double length, const Vec& drift) {
    if (is_zero(drift)) return DriftedSegment{direction, length};
    if (!(norm(drift) < 1.0))
        throw ParameterError("drift magnitude must be strictly below 1");
    const Vec raw = direction + drift;
    const double n = norm(raw);
    return DriftedSegment{raw * (1.0 / n), length * n};
}

namespace detail {

inline Vec step_direction(int dimension, SeededRng& rng) {
    if (dimension == 1) return Vec(static_cast<double>(rng.rademacher()));
    return sample_direction(dimension, rng);
}

// Stop point for an in-flight detection: the ball entry point, pulled a hair
// toward the reward center so the closed-ball guard holds under rounding.
inline Vec detection_stop(const Vec& from, const Vec& to, double t, const Vec& center,
                          double r_d) {
    Vec p = lerp(from, to, t);
    const double d2 = dist2(p, center);
    const double margin = 1e-9 * r_d;
    if (d2 > (r_d - margin) * (r_d - margin)) {
        const double d = std::sqrt(d2);
        if (d > 0.0) p = p + (center - p) * ((d - r_d + margin) / d);
    }
    return p;
}

} // namespace detail

// One automaton transition. Exactly one of:
//   A1  no target en route: fly the whole (drift-displaced, boundary-adjusted)
//       jump and finish in Search mode;
//   A2  target detected: stop at the ball entry point and switch to Collect;
//   B1  rewards in range: move to one chosen uniformly and collect it;
//   B2  nothing in range: switch back to Search without moving.
inline StepOutcome step(ForagerState& st, RewardField& field, const JumpPolicy& policy,
                        SeededRng& rng, BoundaryPolicy boundary) {
    StepOutcome out;
    const Domain& dom = field.domain();
    if (st.position.dim != dom.dimension || dom.distance_to(st.position) > 1e-9)
        throw std::logic_error("step: forager state inconsistent with the field's domain");
    field.refresh_visited(st.position);

    if (st.mode == Mode::Search) {
        const std::vector<int> here = field.detect(st.position);
        if (!here.empty()) {
            out.events.push_back(
                TraceEvent::detection(st.distance_traveled, st.position, here.front()));
            st.mode = Mode::Collect;
            out.events.push_back(TraceEvent::mode_switch(st.distance_traveled, st.position, 'B'));
            return out;
        }

        const Vec dir = detail::step_direction(dom.dimension, rng);
        const double commanded = policy.sample_length(rng);
        const DriftedSegment eff = apply_drift(dir, commanded, st.drift);
        st.pending = PendingJump{eff.direction, commanded, eff.length};
        ++st.jumps_taken;

        const FlightPath path = trace_flight(dom, boundary, st.position, eff.direction, eff.length);
        for (const FlightLeg& leg : path.legs) {
            const auto hit = field.first_detection_on_segment(leg.from, leg.to);
            if (hit) {
                const Vec stop =
                    detail::detection_stop(leg.from, leg.to, hit->t,
                                           field.point(hit->id).position,
                                           field.detection_radius());
                st.distance_traveled += dist(leg.from, stop);
                st.position = stop;
                st.pending.reset();
                out.events.push_back(TraceEvent::jump(st.distance_traveled, st.position, commanded));
                out.events.push_back(
                    TraceEvent::detection(st.distance_traveled, st.position, hit->id));
                st.mode = Mode::Collect;
                out.events.push_back(
                    TraceEvent::mode_switch(st.distance_traveled, st.position, 'B'));
                return out;
            }
            st.distance_traveled += leg.length;
            st.position = leg.to;
        }
        st.position = path.end;
        st.pending.reset();
        if (path.leftover > 0.0)
            out.events.push_back(TraceEvent::clip(st.distance_traveled, st.position, path.leftover));
        out.events.push_back(TraceEvent::jump(st.distance_traveled, st.position, commanded));
        return out;
    }

    const std::vector<int> ids = field.detect(st.position);
    if (ids.empty()) {
        st.mode = Mode::Search;
        out.events.push_back(TraceEvent::mode_switch(st.distance_traveled, st.position, 'A'));
        return out;
    }
    const int pick = ids[rng.uniform_below(ids.size())];
    const Vec target = field.point(pick).position;
    st.distance_traveled += dist(st.position, target);
    st.position = target;
    field.collect(pick);
    out.events.push_back(TraceEvent::collection(st.distance_traveled, st.position, pick));
    out.terminal = field.depleted();
    return out;
}

} // namespace levyforage
