// Acceptance suite. Each criterion prints one [PASS]/[FAIL] line (with
// supporting detail indented below it) and the binary exits nonzero if any
// criterion fails. Statistical checks run at pinned sample sizes, seeds and
// tolerances.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "levyforage/forager.hpp"
#include "levyforage/harness.hpp"
#include "levyforage/levy.hpp"
#include "levyforage/metrics.hpp"
#include "levyforage/rng.hpp"
#include "levyforage/runner.hpp"
#include "levyforage/scenario.hpp"
#include "levyforage/stats.hpp"
#include "levyforage/sweep.hpp"
#include "levyforage/verify.hpp"

using namespace levyforage;

namespace {

int g_failures = 0;

int worker_jobs() {
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& note) {
        pass = pass && ok;
        notes.push_back(std::string(ok ? "ok   " : "FAIL ") + note);
    }

    void absorb(const CheckReport& report) {
        pass = pass && report.pass;
        for (const CheckLine& l : report.lines)
            notes.push_back(std::string(l.pass ? "ok   " : "FAIL ") + l.text);
    }
};

void run_criterion(int id, const std::string& name, double time_limit_s,
                   const std::function<void(Outcome&)>& body) {
    Outcome outcome;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(outcome);
    } catch (const std::exception& e) {
        outcome.check(false, std::string("unexpected exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_limit_s > 0.0) {
        std::ostringstream os;
        os << "runtime " << seconds << " s (limit " << time_limit_s << " s)";
        outcome.check(seconds < time_limit_s, os.str());
    }
    if (!outcome.pass) ++g_failures;
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << id << " (" << name
              << ")\n";
    for (const std::string& n : outcome.notes) std::cout << "       " << n << "\n";
    std::cout.flush();
}

// ---- criterion 7 helpers ----------------------------------------------

ScenarioSpec random_scenario(SeededRng& meta) {
    ScenarioSpec s;
    const int dim = 1 + static_cast<int>(meta.uniform_below(3));
    const double half = meta.uniform(20.0, 100.0);
    s.domain.dimension = dim;
    s.domain.lower = Vec::zero(dim);
    s.domain.upper = Vec::zero(dim);
    for (int i = 0; i < dim; ++i) {
        s.domain.lower[i] = -half;
        s.domain.upper[i] = half;
    }
    s.name = "random";
    s.r_d = meta.uniform(0.5, 5.0);
    s.law = JumpLaw{meta.uniform(1.2, 3.0), s.r_d, s.domain.diagonal()};
    s.mode = meta.uniform_below(2) == 0 ? ForagingMode::Destructive
                                        : ForagingMode::NonDestructive;
    const std::uint64_t b = meta.uniform_below(3);
    s.boundary = b == 0 ? BoundaryPolicy::Clip
                        : (b == 1 ? BoundaryPolicy::Reflect : BoundaryPolicy::Wrap);
    s.budget = 20.0 * s.domain.diagonal();
    s.start = Vec::zero(dim);
    for (int i = 0; i < dim; ++i) s.start[i] = meta.uniform(-half, half);
    s.drift = Vec::zero(dim);
    if (meta.uniform_below(2) == 0) {
        double n2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            s.drift[i] = meta.uniform(-1.0, 1.0);
            n2 += s.drift[i] * s.drift[i];
        }
        const double mag = meta.uniform(0.0, 0.5);
        if (n2 > 0.0) s.drift = s.drift * (mag / std::sqrt(n2));
    }
    const int n_clusters = 1 + static_cast<int>(meta.uniform_below(3));
    for (int c = 0; c < n_clusters; ++c) {
        RewardCluster cl;
        cl.center = Vec::zero(dim);
        for (int i = 0; i < dim; ++i) cl.center[i] = meta.uniform(-half, half);
        cl.radius = meta.uniform(0.5, half / 4.0);
        cl.count = 1 + static_cast<int>(meta.uniform_below(100));
        s.clusters.push_back(cl);
    }
    validate(s);
    return s;
}

struct InvariantViolations {
    long count = 0;
    std::string first;

    void record(bool ok, const std::string& what, std::uint64_t seed) {
        if (ok) return;
        ++count;
        if (first.empty()) first = what + " (seed " + std::to_string(seed) + ")";
    }
};

void check_invariants_on_run(const ScenarioSpec& spec, std::uint64_t seed,
                             InvariantViolations& v) {
    SeededRng world_rng(derive_stream(seed, kWorldStreamTag));
    SeededRng agent_rng(derive_stream(seed, kAgentStreamTag));
    RewardField field =
        generate_rewards(spec.domain, spec.clusters, spec.mode, spec.r_d, world_rng);
    const JumpPolicy policy = make_jump_policy(spec);
    const int total = field.total();

    ForagerState st;
    st.position = spec.start;
    st.drift = spec.drift;

    std::set<int> collected_ids;
    double last_distance = 0.0;
    const double budget = effective_budget(spec);

    for (long iter = 0; iter < 2000000; ++iter) {
        const Mode mode_before = st.mode;
        const StepOutcome out = step(st, field, policy, agent_rng, spec.boundary);

        for (const TraceEvent& e : out.events) {
            v.record(e.distance >= last_distance, "nonmonotone distance stamp", seed);
            last_distance = std::max(last_distance, e.distance);
            switch (e.kind) {
            case EventKind::Collection:
                v.record(mode_before == Mode::Collect, "collection outside mode B", seed);
                if (spec.mode == ForagingMode::Destructive)
                    v.record(collected_ids.insert(e.reward).second,
                             "destructive reward collected twice", seed);
                break;
            case EventKind::Jump:
            case EventKind::Clip:
                v.record(mode_before == Mode::Search, "flight event outside mode A", seed);
                break;
            case EventKind::ModeSwitch:
                if (e.mode == 'B') {
                    v.record(mode_before == Mode::Search, "switch to B while not in A", seed);
                    v.record(!field.detect(st.position).empty(),
                             "A->B switch with empty detection", seed);
                } else {
                    v.record(mode_before == Mode::Collect, "switch to A while not in B", seed);
                    v.record(field.detect(st.position).empty(),
                             "B->A switch with nonempty detection", seed);
                }
                break;
            default:
                break;
            }
        }

        if (spec.mode == ForagingMode::Destructive)
            v.record(field.unique_collected() + field.remaining_detectable() == total,
                     "reward conservation broken", seed);
        v.record(spec.domain.contains(spec.domain.clamp(st.position)) &&
                     spec.domain.distance_to(st.position) <= 1e-9,
                 "agent left the domain", seed);

        if (out.terminal) break;
        if (st.distance_traveled >= budget) break;
    }

    if (spec.mode == ForagingMode::Destructive)
        v.record(static_cast<long>(collected_ids.size()) ==
                     static_cast<long>(field.unique_collected()),
                 "collection events disagree with distinct collected rewards", seed);
}

// ---- criterion 9 helpers ----------------------------------------------

std::vector<int> brute_detect(const RewardField& f, const Vec& pos) {
    std::vector<int> out;
    const double r2 = f.detection_radius() * f.detection_radius();
    for (int id = 0; id < f.total(); ++id) {
        const RewardPoint& p = f.point(id);
        const bool detectable =
            f.mode() == ForagingMode::Destructive ? !p.collected : !p.suppressed;
        if (detectable && dist2(pos, p.position) <= r2) out.push_back(id);
    }
    return out;
}

std::optional<SegmentHit> brute_segment(const RewardField& f, const Vec& a, const Vec& b) {
    const double len2 = dist2(a, b);
    if (len2 == 0.0) {
        auto ids = brute_detect(f, a);
        if (ids.empty()) return std::nullopt;
        return SegmentHit{ids.front(), 0.0};
    }
    const double len = std::sqrt(len2);
    const Vec dir = (b - a) * (1.0 / len);
    const double r2 = f.detection_radius() * f.detection_radius();
    std::optional<SegmentHit> best;
    for (int id = 0; id < f.total(); ++id) {
        const RewardPoint& p = f.point(id);
        const bool detectable =
            f.mode() == ForagingMode::Destructive ? !p.collected : !p.suppressed;
        if (!detectable) continue;
        const Vec oc = a - p.position;
        const double c0 = norm2(oc) - r2;
        double t;
        if (c0 <= 0.0) {
            t = 0.0;
        } else {
            const double bq = dot(oc, dir);
            const double disc = bq * bq - c0;
            if (disc < 0.0) continue;
            const double s = -bq - std::sqrt(disc);
            if (s < 0.0 || s > len) continue;
            t = s / len;
        }
        if (!best || t < best->t || (t == best->t && id < best->id)) best = SegmentHit{id, t};
    }
    return best;
}

} // namespace

int main() {
    const int jobs = worker_jobs();
    std::cout << "acceptance suite (jobs=" << jobs << ")\n";

    // 1. Tail law: CCDF log-log slope 1-mu within 0.1 over the central decade.
    run_criterion(1, "jump-length tail law", 10.0, [&](Outcome& o) { o.absorb(verify_tail()); });

    // 2. Optimal exponent formula.
    run_criterion(2, "mu_opt closed form", 0.0, [&](Outcome& o) {
        o.check(mu_opt(std::exp(1.0), 1.0) == 1.0, "mu_opt(e) == 1.0 exactly");
        o.check(mu_opt(std::exp(2.0), 1.0) == 1.5, "mu_opt(e^2) == 1.5 exactly");
        bool monotone = true, bounded = true;
        double prev = -std::numeric_limits<double>::infinity();
        for (double ratio = 1.01; ratio < 1e12; ratio *= 1.7) {
            const double m = mu_opt(ratio, 1.0);
            monotone = monotone && m > prev;
            bounded = bounded && m < 2.0;
            prev = m;
        }
        o.check(monotone, "monotone increasing in lambda/r_d");
        o.check(bounded, "bounded above by 2");
        const double near_limit = mu_opt(1e9, 1.0);
        o.check(2.0 - near_limit < 0.05, "mu_opt(1e9) within 0.05 of 2");
    });

    // 3. Jump-count scaling at mu = 2 over lambda/r_d in {10, 30, 100}.
    run_criterion(3, "jump-count scaling", 300.0,
                  [&](Outcome& o) { o.absorb(verify_scaling(2000, jobs)); });

    // 4. Efficiency peak over the exponent grid.
    run_criterion(4, "efficiency peak near mu = 2", 600.0,
                  [&](Outcome& o) { o.absorb(verify_efficiency_peak(500, jobs)); });

    // 5. Scenario reproduction with unlimited budget.
    run_criterion(5, "scenario reproduction", 0.0, [&](Outcome& o) {
        struct Case {
            const char* name;
            long expected;
        };
        for (const Case c : {Case{"A2D", 1000}, Case{"B2D", 1500}, Case{"C3D", 3500}}) {
            ScenarioSpec spec = builtin(c.name);
            spec.budget = 0.0;
            const auto t0 = std::chrono::steady_clock::now();
            const RunResult r = run(spec, 42);
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::ostringstream os;
            os << c.name << ": collections=" << r.metrics.sites_visited << " (expected "
               << c.expected << "), runtime " << seconds << " s (limit 30 s)";
            o.check(r.metrics.sites_visited == c.expected &&
                        r.metrics.unique_collected == c.expected && seconds < 30.0,
                    os.str());
            bool monotone = true;
            const auto& curve = r.metrics.collection_rate;
            for (std::size_t i = 1; i < curve.size(); ++i)
                monotone = monotone && curve[i][0] >= curve[i - 1][0] &&
                           curve[i][1] >= curve[i - 1][1];
            o.check(monotone && curve.back()[1] == static_cast<double>(c.expected),
                    std::string(c.name) + ": collection-rate curve monotone, final value " +
                        fmt_double(curve.back()[1]));
        }
    });

    // 6. Drift away from the target degrades first arrival.
    run_criterion(6, "drift degradation", 0.0,
                  [&](Outcome& o) { o.absorb(verify_drift(1000, jobs)); });

    // 7. Automaton invariants over randomized runs.
    run_criterion(7, "automaton invariants", 0.0, [&](Outcome& o) {
        SeededRng meta(20240101);
        InvariantViolations v;
        for (int i = 0; i < 100; ++i) {
            const ScenarioSpec spec = random_scenario(meta);
            check_invariants_on_run(spec, 5000 + static_cast<std::uint64_t>(i), v);
        }
        std::ostringstream os;
        os << "100 randomized runs, " << v.count << " violations";
        if (v.count > 0) os << " (first: " << v.first << ")";
        o.check(v.count == 0, os.str());
    });

    // 8. Determinism: byte-identical artifacts and scheduler independence.
    run_criterion(8, "determinism", 0.0, [&](Outcome& o) {
        namespace fs = std::filesystem;
        const fs::path base = fs::temp_directory_path() / "levyforage_acceptance";
        fs::remove_all(base);

        const ScenarioSpec spec = builtin("A2D");
        const RunArtifacts first = write_run(spec, 42, base / "run1");
        const RunArtifacts second = write_run(spec, 42, base / "run2");
        o.check(read_file(first.trace_path) == read_file(second.trace_path),
                "trace files byte-identical across repeated runs");
        o.check(read_file(first.metrics_path) == read_file(second.metrics_path),
                "metrics files byte-identical across repeated runs");

        ScenarioSpec sweep_spec = builtin("BIASED1D");
        sweep_spec.budget = 400.0;
        SweepPlan plan;
        plan.scenario = sweep_spec;
        plan.mu_values = {1.5, 2.0, 2.5};
        plan.drift_values = {0.0, 0.3};
        plan.replicates = 8;
        plan.base_seed = 2024;
        plan.jobs = 1;
        const std::string serial = format_sweep_table(run_sweep(plan));
        plan.jobs = 8;
        const std::string parallel = format_sweep_table(run_sweep(plan));
        o.check(serial == parallel, "sweep table byte-identical with 1 and 8 jobs");
        fs::remove_all(base);
    });

    // 9. Spatial queries match brute-force scans.
    run_criterion(9, "detection oracle equivalence", 0.0, [&](Outcome& o) {
        SeededRng rng(424242);
        long detect_mismatches = 0, segment_mismatches = 0;
        double worst_t = 0.0;
        const int queries = 10000;
        for (int q = 0; q < queries; ++q) {
            const int dim = q % 2 == 0 ? 2 : 3;
            Domain dom;
            dom.dimension = dim;
            dom.lower = Vec::zero(dim);
            dom.upper = Vec::zero(dim);
            const double half = rng.uniform(10.0, 60.0);
            for (int i = 0; i < dim; ++i) {
                dom.lower[i] = -half;
                dom.upper[i] = half;
            }
            const double r_d = rng.uniform(0.5, 10.0);
            const int n = 1 + static_cast<int>(rng.uniform_below(60));
            std::vector<RewardPoint> pts;
            for (int i = 0; i < n; ++i) {
                Vec p = Vec::zero(dim);
                for (int k = 0; k < dim; ++k) p[k] = rng.uniform(-half, half);
                pts.push_back(RewardPoint{p, 0});
            }
            const RewardField field(dom, ForagingMode::Destructive, r_d, std::move(pts));

            Vec pos = Vec::zero(dim), to = Vec::zero(dim);
            for (int k = 0; k < dim; ++k) {
                pos[k] = rng.uniform(-half, half);
                to[k] = rng.uniform(-half, half);
            }
            if (field.detect(pos) != brute_detect(field, pos)) ++detect_mismatches;

            const auto fast = field.first_detection_on_segment(pos, to);
            const auto slow = brute_segment(field, pos, to);
            if (fast.has_value() != slow.has_value()) {
                ++segment_mismatches;
            } else if (fast) {
                if (fast->id != slow->id) ++segment_mismatches;
                worst_t = std::max(worst_t, std::abs(fast->t - slow->t));
            }
        }
        std::ostringstream os;
        os << queries << " detect queries, " << detect_mismatches << " id-set mismatches";
        o.check(detect_mismatches == 0, os.str());
        std::ostringstream os2;
        os2 << queries << " segment queries, " << segment_mismatches
            << " winner mismatches, max |dt| = " << worst_t << " (tol 1e-6)";
        o.check(segment_mismatches == 0 && worst_t <= 1e-6, os2.str());
    });

    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT") << " ("
              << (9 - g_failures) << "/9)\n";
    return g_failures == 0 ? 0 : 1;
}
