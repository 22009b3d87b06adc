#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include "levyforage/errors.hpp"
#include "levyforage/metrics.hpp"
#include "levyforage/rng.hpp"
#include "levyforage/runner.hpp"
#include "levyforage/scenario.hpp"
#include "levyforage/stats.hpp"
#include "levyforage/trace.hpp"

namespace levyforage {

// Runs fn(0..count) across jobs threads. Work items are independent; callers
// that need deterministic output must write into preassigned slots.
template <typename Fn>
inline void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(jobs), count));
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Monte Carlo grid over (mu, r_d, drift magnitude, walker), replicated with
// derived seeds. Empty value lists fall back to the base scenario's value.
struct SweepPlan {
    ScenarioSpec scenario;
    std::vector<double> mu_values;
    std::vector<double> rd_values;
    std::vector<double> drift_values;
    std::vector<WalkerKind> walker_values;
    int replicates = 1;
    std::uint64_t base_seed = 0;
    int jobs = 1;
};

struct SummaryStats {
    long count = 0;
    double mean = std::numeric_limits<double>::quiet_NaN();
    double median = std::numeric_limits<double>::quiet_NaN();
    double p10 = std::numeric_limits<double>::quiet_NaN();
    double p90 = std::numeric_limits<double>::quiet_NaN();
};

inline SummaryStats summarize(std::vector<double> values) {
    SummaryStats s;
    s.count = static_cast<long>(values.size());
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    s.mean = mean(values);
    s.median = quantile_sorted(values, 0.5);
    s.p10 = quantile_sorted(values, 0.1);
    s.p90 = quantile_sorted(values, 0.9);
    return s;
}

struct CellSummary {
    double mu = 0.0;
    double r_d = 0.0;
    double drift = 0.0;
    WalkerKind walker = WalkerKind::Levy;
    long replicates = 0;
    long failed = 0;
    long arrivals = 0;
    double mean_collections = 0.0;
    SummaryStats eta;
    SummaryStats t_a;
    SummaryStats n_d;
};

struct SweepResult {
    std::vector<CellSummary> cells;
    std::vector<std::string> errors;
    long failed_replicates = 0;
};

// Grid cells in deterministic order: mu, then r_d, then drift, then walker.
inline std::vector<ScenarioSpec> expand_cells(const SweepPlan& plan) {
    const ScenarioSpec& base = plan.scenario;
    const std::vector<double> mus =
        plan.mu_values.empty() ? std::vector<double>{base.law.mu} : plan.mu_values;
    const std::vector<double> rds =
        plan.rd_values.empty() ? std::vector<double>{base.r_d} : plan.rd_values;
    const std::vector<double> drifts =
        plan.drift_values.empty() ? std::vector<double>{norm(base.drift)} : plan.drift_values;
    const std::vector<WalkerKind> walkers =
        plan.walker_values.empty() ? std::vector<WalkerKind>{base.walker} : plan.walker_values;

    // Drift magnitudes scale the base drift direction; -x when the base has none.
    Vec drift_unit = base.drift;
    if (is_zero(drift_unit)) {
        drift_unit = Vec::zero(base.domain.dimension);
        drift_unit[0] = -1.0;
    } else {
        drift_unit = drift_unit * (1.0 / norm(drift_unit));
    }

    std::vector<ScenarioSpec> cells;
    for (double mu : mus)
        for (double rd : rds)
            for (double drift : drifts)
                for (WalkerKind walker : walkers) {
                    ScenarioSpec cell = base;
                    cell.law.mu = mu;
                    if (rd != base.r_d) {
                        // ell_min defaults to r_d; keep the convention in sync
                        if (cell.law.ell_min == base.r_d) cell.law.ell_min = rd;
                        cell.r_d = rd;
                    }
                    cell.drift = drift_unit * drift;
                    cell.walker = walker;
                    validate(cell);
                    cells.push_back(std::move(cell));
                }
    return cells;
}

inline SweepResult run_sweep(const SweepPlan& plan) {
    if (plan.replicates < 1) throw ConfigError("sweep: replicates must be at least 1");
    if (plan.jobs < 1) throw ConfigError("sweep: jobs must be at least 1");
    const std::vector<ScenarioSpec> cells = expand_cells(plan);
    if (cells.size() > 0xFFFFFFFFull)
        throw ConfigError("sweep: grid too large for seed derivation");

    const std::size_t reps = static_cast<std::size_t>(plan.replicates);
    struct Slot {
        bool ok = false;
        std::string error;
        RunMetrics metrics;
    };
    std::vector<Slot> slots(cells.size() * reps);

    parallel_for(slots.size(), plan.jobs, [&](std::size_t i) {
        const std::size_t cell = i / reps;
        const std::size_t rep = i % reps;
        const std::uint64_t seed = replicate_seed(plan.base_seed, static_cast<std::uint32_t>(cell),
                                                  static_cast<std::uint32_t>(rep));
        Slot& slot = slots[i];
        try {
            slot.metrics = run(cells[cell], seed).metrics;
            slot.ok = true;
        } catch (const std::exception& e) {
            slot.error = e.what();
        }
    });

    SweepResult result;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const ScenarioSpec& spec = cells[c];
        CellSummary cell;
        cell.mu = spec.law.mu;
        cell.r_d = spec.r_d;
        cell.drift = norm(spec.drift);
        cell.walker = spec.walker;
        cell.replicates = plan.replicates;

        std::vector<double> etas, t_as, n_ds;
        double collections = 0.0;
        long ok_count = 0;
        for (std::size_t r = 0; r < reps; ++r) {
            const Slot& slot = slots[c * reps + r];
            if (!slot.ok) {
                ++cell.failed;
                ++result.failed_replicates;
                if (result.errors.size() < 16)
                    result.errors.push_back("cell " + std::to_string(c) + " replicate " +
                                            std::to_string(r) + ": " + slot.error);
                continue;
            }
            ++ok_count;
            etas.push_back(slot.metrics.eta);
            collections += static_cast<double>(slot.metrics.sites_visited);
            if (slot.metrics.first_arrival_distance) {
                ++cell.arrivals;
                t_as.push_back(*slot.metrics.first_arrival_distance);
            }
            if (slot.metrics.inter_encounter_jumps)
                n_ds.push_back(*slot.metrics.inter_encounter_jumps);
        }
        cell.mean_collections = ok_count > 0 ? collections / static_cast<double>(ok_count) : 0.0;
        cell.eta = summarize(std::move(etas));
        cell.t_a = summarize(std::move(t_as));
        cell.n_d = summarize(std::move(n_ds));
        result.cells.push_back(std::move(cell));
    }
    return result;
}

inline constexpr const char* kSweepTableHeader =
    "mu\tr_d\tdrift\twalker\treplicates\tfailed\tarrivals\tcollections_mean"
    "\teta_mean\teta_median\teta_p10\teta_p90"
    "\tt_a_mean\tt_a_median\tt_a_p10\tt_a_p90"
    "\tn_d_mean\tn_d_median\tn_d_p10\tn_d_p90";

inline std::string format_sweep_table(const SweepResult& result) {
    std::ostringstream os;
    os << kSweepTableHeader << '\n';
    const auto stats = [&](const SummaryStats& s) {
        os << '\t' << fmt_double(s.mean) << '\t' << fmt_double(s.median) << '\t'
           << fmt_double(s.p10) << '\t' << fmt_double(s.p90);
    };
    for (const CellSummary& c : result.cells) {
        os << fmt_double(c.mu) << '\t' << fmt_double(c.r_d) << '\t' << fmt_double(c.drift) << '\t'
           << walker_name(c.walker) << '\t' << c.replicates << '\t' << c.failed << '\t'
           << c.arrivals << '\t' << fmt_double(c.mean_collections);
        stats(c.eta);
        stats(c.t_a);
        stats(c.n_d);
        os << '\n';
    }
    return os.str();
}

// Parses a table produced by format_sweep_table; counts are recomputed from
// the aggregate columns, so quantile stats round-trip exactly.
inline std::vector<CellSummary> parse_sweep_table(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != kSweepTableHeader)
        throw ConfigError("sweep table: unrecognized header");
    const auto number = [](const std::string& tok, int line_no) {
        double v = 0.0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            throw ConfigError("sweep table line " + std::to_string(line_no) + ": bad number '" +
                              tok + "'");
        return v;
    };
    std::vector<CellSummary> cells;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::size_t start = 0;
        for (;;) {
            const std::size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                cols.push_back(line.substr(start));
                break;
            }
            cols.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (cols.size() != 20)
            throw ConfigError("sweep table line " + std::to_string(line_no) +
                              ": wrong column count");
        CellSummary c;
        c.mu = number(cols[0], line_no);
        c.r_d = number(cols[1], line_no);
        c.drift = number(cols[2], line_no);
        c.walker = walker_from_name(cols[3]);
        c.replicates = static_cast<long>(number(cols[4], line_no));
        c.failed = static_cast<long>(number(cols[5], line_no));
        c.arrivals = static_cast<long>(number(cols[6], line_no));
        c.mean_collections = number(cols[7], line_no);
        const auto stats = [&](std::size_t base) {
            SummaryStats s;
            s.mean = number(cols[base], line_no);
            s.median = number(cols[base + 1], line_no);
            s.p10 = number(cols[base + 2], line_no);
            s.p90 = number(cols[base + 3], line_no);
            return s;
        };
        c.eta = stats(8);
        c.t_a = stats(12);
        c.n_d = stats(16);
        cells.push_back(std::move(c));
    }
    return cells;
}

} // namespace levyforage
