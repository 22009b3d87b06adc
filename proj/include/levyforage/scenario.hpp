#pragma once

#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "levyforage/errors.hpp"
#include "levyforage/forager.hpp"
#include "levyforage/levy.hpp"
#include "levyforage/vec.hpp"
#include "levyforage/world.hpp"

namespace levyforage {

// A fully specified experiment: where the agent starts, what the world holds,
// how it jumps, and when the run stops.
struct ScenarioSpec {
    std::string name;
    Domain domain;
    Vec start;
    double r_d = 1.0;
    JumpLaw law;
    ForagingMode mode = ForagingMode::Destructive;
    Vec drift;
    double budget = 0.0; // total path length; 0 selects the default policy
    WalkerKind walker = WalkerKind::Levy;
    BoundaryPolicy boundary = BoundaryPolicy::Clip;
    // Non-destructive recovery scale: a visited reward stays depleted until the
    // agent is farther than ndf_release_factor * r_d away from it.
    double ndf_release_factor = 1.0;
    std::vector<RewardCluster> clusters;

    bool operator==(const ScenarioSpec& o) const {
        return name == o.name && domain == o.domain && start == o.start && r_d == o.r_d &&
               law == o.law && mode == o.mode && drift == o.drift && budget == o.budget &&
               walker == o.walker && boundary == o.boundary &&
               ndf_release_factor == o.ndf_release_factor && clusters == o.clusters;
    }
};

inline void validate(const ScenarioSpec& s) {
    validate(s.domain);
    if (s.start.dim != s.domain.dimension)
        throw ConfigError("scenario: start dimension does not match the domain");
    if (!s.domain.contains(s.start)) throw ConfigError("scenario: start lies outside the domain");
    if (!(s.r_d > 0.0)) throw ConfigError("scenario: r_d must be positive");
    try {
        validate(s.law);
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("scenario law: ") + e.what());
    }
    if (s.drift.dim != s.domain.dimension)
        throw ConfigError("scenario: drift dimension does not match the domain");
    if (!(norm(s.drift) < 1.0)) throw ConfigError("scenario: drift magnitude must be below 1");
    if (!(s.budget >= 0.0) || !std::isfinite(s.budget))
        throw ConfigError("scenario: budget must be a finite non-negative length");
    if (s.boundary != BoundaryPolicy::Clip && !s.law.bounded())
        throw ConfigError("scenario: reflect/wrap boundaries require a finite ell_max");
    if (s.walker == WalkerKind::UniformRandom && !s.law.bounded())
        throw ConfigError("scenario: the uniform-random walker requires a finite ell_max");
    if (!(s.ndf_release_factor >= 1.0))
        throw ConfigError("scenario: ndf_release_factor must be at least 1");
    for (std::size_t i = 0; i < s.clusters.size(); ++i) {
        const RewardCluster& c = s.clusters[i];
        if (c.center.dim != s.domain.dimension)
            throw ConfigError("cluster " + std::to_string(i) + ": center dimension mismatch");
        if (!(c.radius > 0.0))
            throw ConfigError("cluster " + std::to_string(i) + ": radius must be positive");
        if (c.count < 1) throw ConfigError("cluster " + std::to_string(i) + ": count must be >= 1");
        if (!s.domain.contains(c.center))
            throw ConfigError("cluster " + std::to_string(i) + ": center outside the domain");
    }
}

inline JumpPolicy make_jump_policy(const ScenarioSpec& s) { return JumpPolicy{s.walker, s.law}; }

// Comparison walkers share the automaton with the heavy-tailed one; the law
// only supplies the length scales.
inline JumpPolicy baseline_walker(WalkerKind kind, const JumpLaw& law) {
    validate(law);
    return JumpPolicy{kind, law};
}

// Run length when the scenario does not pin one: destructive runs go until
// depletion, but non-destructive and target-free runs never deplete, so they
// default to 100 domain diagonals.
inline double effective_budget(const ScenarioSpec& s) {
    if (s.budget > 0.0) return s.budget;
    if (s.mode == ForagingMode::NonDestructive || s.clusters.empty())
        return 100.0 * s.domain.diagonal();
    return std::numeric_limits<double>::infinity();
}

inline const char* walker_name(WalkerKind k) {
    switch (k) {
    case WalkerKind::Levy: return "levy";
    case WalkerKind::Brownian: return "brownian";
    case WalkerKind::UniformRandom: return "uniform-random";
    }
    return "?";
}

inline WalkerKind walker_from_name(const std::string& s) {
    if (s == "levy") return WalkerKind::Levy;
    if (s == "brownian") return WalkerKind::Brownian;
    if (s == "uniform-random") return WalkerKind::UniformRandom;
    throw ConfigError("unknown walker '" + s + "' (expected levy, brownian or uniform-random)");
}

inline const char* mode_name(ForagingMode m) {
    return m == ForagingMode::Destructive ? "df" : "ndf";
}

inline ForagingMode mode_from_name(const std::string& s) {
    if (s == "df") return ForagingMode::Destructive;
    if (s == "ndf") return ForagingMode::NonDestructive;
    throw ConfigError("unknown foraging mode '" + s + "' (expected df or ndf)");
}

inline const char* boundary_name(BoundaryPolicy b) {
    switch (b) {
    case BoundaryPolicy::Clip: return "clip";
    case BoundaryPolicy::Reflect: return "reflect";
    case BoundaryPolicy::Wrap: return "wrap";
    }
    return "?";
}

inline BoundaryPolicy boundary_from_name(const std::string& s) {
    if (s == "clip") return BoundaryPolicy::Clip;
    if (s == "reflect") return BoundaryPolicy::Reflect;
    if (s == "wrap") return BoundaryPolicy::Wrap;
    throw ConfigError("unknown boundary policy '" + s + "' (expected clip, reflect or wrap)");
}

namespace detail {

using json = nlohmann::ordered_json;

inline void expect_keys(const json& j, std::initializer_list<const char*> allowed,
                        const std::string& where) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok) throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

inline double number_at(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError("key '" + key + "' in " + where + " must be a number");
    return v.get<double>();
}

inline Vec vec_from(const json& v, int dim, const std::string& where) {
    if (!v.is_array() || v.size() != static_cast<std::size_t>(dim))
        throw ConfigError(where + " must be an array of " + std::to_string(dim) + " numbers");
    Vec out = Vec::zero(dim);
    for (int i = 0; i < dim; ++i) {
        const json& x = v.at(static_cast<std::size_t>(i));
        if (!x.is_number()) throw ConfigError(where + " must contain only numbers");
        out[i] = x.get<double>();
    }
    return out;
}

inline json vec_to(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.dim; ++i) a.push_back(v[i]);
    return a;
}

} // namespace detail

inline ScenarioSpec load_spec(const std::string& text) {
    using detail::expect_keys;
    using detail::number_at;
    using detail::vec_from;
    using json = detail::json;

    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scenario config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("scenario config must be a JSON object");
    expect_keys(j,
                {"name", "domain", "start", "r_d", "law", "mode", "drift", "budget", "walker",
                 "boundary", "ndf_release_factor", "clusters"},
                "scenario");

    ScenarioSpec s;
    if (j.contains("name")) {
        if (!j.at("name").is_string()) throw ConfigError("key 'name' must be a string");
        s.name = j.at("name").get<std::string>();
    }

    if (!j.contains("domain")) throw ConfigError("missing key 'domain'");
    const json& jd = j.at("domain");
    if (!jd.is_object()) throw ConfigError("key 'domain' must be an object");
    expect_keys(jd, {"dimension", "min", "max"}, "domain");
    if (!jd.contains("dimension") || !jd.at("dimension").is_number_integer())
        throw ConfigError("domain.dimension must be an integer");
    s.domain.dimension = jd.at("dimension").get<int>();
    if (s.domain.dimension < 1 || s.domain.dimension > 3)
        throw ConfigError("domain.dimension must be 1, 2 or 3");
    if (!jd.contains("min") || !jd.contains("max"))
        throw ConfigError("domain requires 'min' and 'max' corners");
    s.domain.lower = vec_from(jd.at("min"), s.domain.dimension, "domain.min");
    s.domain.upper = vec_from(jd.at("max"), s.domain.dimension, "domain.max");

    if (!j.contains("start")) throw ConfigError("missing key 'start'");
    s.start = vec_from(j.at("start"), s.domain.dimension, "start");

    s.r_d = number_at(j, "r_d", "scenario");

    if (!j.contains("law")) throw ConfigError("missing key 'law'");
    const json& jl = j.at("law");
    if (!jl.is_object()) throw ConfigError("key 'law' must be an object");
    expect_keys(jl, {"mu", "ell_min", "ell_max"}, "law");
    s.law.mu = number_at(jl, "mu", "law");
    s.law.ell_min = jl.contains("ell_min") ? number_at(jl, "ell_min", "law") : s.r_d;
    if (!jl.contains("ell_max")) {
        s.law.ell_max = s.domain.diagonal();
    } else if (jl.at("ell_max").is_null()) {
        s.law.ell_max = std::numeric_limits<double>::infinity();
    } else {
        s.law.ell_max = number_at(jl, "ell_max", "law");
    }

    if (j.contains("mode")) {
        if (!j.at("mode").is_string()) throw ConfigError("key 'mode' must be a string");
        s.mode = mode_from_name(j.at("mode").get<std::string>());
    }
    s.drift = j.contains("drift") ? vec_from(j.at("drift"), s.domain.dimension, "drift")
                                  : Vec::zero(s.domain.dimension);
    if (j.contains("budget")) s.budget = number_at(j, "budget", "scenario");
    if (j.contains("walker")) {
        if (!j.at("walker").is_string()) throw ConfigError("key 'walker' must be a string");
        s.walker = walker_from_name(j.at("walker").get<std::string>());
    }
    if (j.contains("boundary")) {
        if (!j.at("boundary").is_string()) throw ConfigError("key 'boundary' must be a string");
        s.boundary = boundary_from_name(j.at("boundary").get<std::string>());
    }
    if (j.contains("ndf_release_factor"))
        s.ndf_release_factor = number_at(j, "ndf_release_factor", "scenario");

    if (!j.contains("clusters")) throw ConfigError("missing key 'clusters'");
    const json& jc = j.at("clusters");
    if (!jc.is_array()) throw ConfigError("key 'clusters' must be an array");
    for (std::size_t i = 0; i < jc.size(); ++i) {
        const json& c = jc.at(i);
        const std::string where = "clusters[" + std::to_string(i) + "]";
        if (!c.is_object()) throw ConfigError(where + " must be an object");
        expect_keys(c, {"center", "radius", "count"}, where);
        RewardCluster rc;
        if (!c.contains("center")) throw ConfigError("missing key 'center' in " + where);
        rc.center = vec_from(c.at("center"), s.domain.dimension, where + ".center");
        rc.radius = number_at(c, "radius", where);
        if (!c.contains("count") || !c.at("count").is_number_integer())
            throw ConfigError(where + ".count must be an integer");
        rc.count = c.at("count").get<int>();
        s.clusters.push_back(rc);
    }

    validate(s);
    return s;
}

inline std::string save_spec(const ScenarioSpec& s) {
    using detail::vec_to;
    using json = detail::json;

    json j;
    if (!s.name.empty()) j["name"] = s.name;
    j["domain"] = {{"dimension", s.domain.dimension},
                   {"min", vec_to(s.domain.lower)},
                   {"max", vec_to(s.domain.upper)}};
    j["start"] = vec_to(s.start);
    j["r_d"] = s.r_d;
    j["law"] = {{"mu", s.law.mu}, {"ell_min", s.law.ell_min}};
    if (s.law.bounded()) j["law"]["ell_max"] = s.law.ell_max;
    else j["law"]["ell_max"] = nullptr;
    j["mode"] = mode_name(s.mode);
    j["drift"] = vec_to(s.drift);
    j["budget"] = s.budget;
    j["walker"] = walker_name(s.walker);
    j["boundary"] = boundary_name(s.boundary);
    j["ndf_release_factor"] = s.ndf_release_factor;
    j["clusters"] = json::array();
    for (const RewardCluster& c : s.clusters)
        j["clusters"].push_back(
            {{"center", vec_to(c.center)}, {"radius", c.radius}, {"count", c.count}});
    return j.dump(2) + "\n";
}

// The four registered experiments. Start positions for the planar ones sit at
// the corner the plots enter from; the 1D scenario exists for drift studies.
inline ScenarioSpec builtin(const std::string& name) {
    ScenarioSpec s;
    s.name = name;
    if (name == "A2D") {
        s.domain = Domain{2, Vec(-100.0, -100.0), Vec(100.0, 100.0)};
        s.start = Vec(-100.0, -100.0);
        s.r_d = 5.0;
        s.law = JumpLaw{2.0, 5.0, s.domain.diagonal()};
        s.clusters = {RewardCluster{Vec(0.0, 0.0), 20.0, 1000}};
    } else if (name == "B2D") {
        s.domain = Domain{2, Vec(-100.0, -100.0), Vec(100.0, 100.0)};
        s.start = Vec(-100.0, -100.0);
        s.r_d = 10.0;
        s.law = JumpLaw{2.0, 10.0, s.domain.diagonal()};
        s.clusters = {RewardCluster{Vec(-50.0, -10.0), 20.0, 500},
                      RewardCluster{Vec(40.0, 50.0), 10.0, 1000}};
    } else if (name == "C3D") {
        s.domain = Domain{3, Vec(-100.0, -100.0, -100.0), Vec(100.0, 100.0, 100.0)};
        s.start = Vec(0.0, 0.0, 0.0);
        s.r_d = 10.0;
        s.law = JumpLaw{2.0, 10.0, s.domain.diagonal()};
        s.clusters = {RewardCluster{Vec(30.0, 30.0, 0.0), 20.0, 500},
                      RewardCluster{Vec(-20.0, -20.0, 0.0), 10.0, 1000},
                      RewardCluster{Vec(-50.0, -50.0, 30.0), 35.0, 1500},
                      RewardCluster{Vec(65.0, -65.0, 0.0), 10.0, 500}};
    } else if (name == "BIASED1D") {
        s.domain = Domain{1, Vec(-100.0), Vec(100.0)};
        s.start = Vec(0.0);
        s.r_d = 1.0;
        s.law = JumpLaw{2.0, 1.0, s.domain.diagonal()};
        s.clusters = {RewardCluster{Vec(50.0), 0.5, 1}};
        s.budget = 100000.0;
    } else {
        throw ConfigError("unknown builtin scenario '" + name + "'");
    }
    s.drift = Vec::zero(s.domain.dimension);
    validate(s);
    return s;
}

inline std::vector<std::string> builtin_names() { return {"A2D", "B2D", "C3D", "BIASED1D"}; }

inline std::string builtin_summary(const std::string& name) {
    if (name == "A2D") return "2D, one cluster of 1000 rewards at the origin, r_d = 5";
    if (name == "B2D") return "2D, clusters of 500 and 1000 rewards, r_d = 10";
    if (name == "C3D") return "3D, four clusters totalling 3500 rewards, r_d = 10";
    if (name == "BIASED1D") return "1D single target at +50, for drift experiments";
    return "";
}

} // namespace levyforage
