#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "levyforage/errors.hpp"
#include "levyforage/rng.hpp"
#include "levyforage/stats.hpp"
#include "levyforage/vec.hpp"

namespace levyforage {

// Power-law jump-length distribution p(x) ~ x^-mu on [ell_min, ell_max].
// ell_max may be +inf for the untruncated law.
struct JumpLaw {
    double mu = 2.0;
    double ell_min = 1.0;
    double ell_max = std::numeric_limits<double>::infinity();

    bool bounded() const { return std::isfinite(ell_max); }

    bool operator==(const JumpLaw& o) const {
        return mu == o.mu && ell_min == o.ell_min && ell_max == o.ell_max;
    }
};

inline void validate(const JumpLaw& law) {
    if (!(law.mu > 1.0 && law.mu <= 3.0))
        throw ParameterError("jump law: mu must satisfy 1 < mu <= 3, got " + std::to_string(law.mu));
    if (!(law.ell_min > 0.0))
        throw ParameterError("jump law: ell_min must be positive");
    if (std::isnan(law.ell_max) || law.ell_max < law.ell_min)
        throw ParameterError("jump law: ell_max must be >= ell_min");
}

// Closed-form quantile of the truncated power law, parameterized by the tail
// probability u = P(X > x) in (0, 1]. For the unbounded law this reduces to
// x = ell_min * u^(-1/(mu-1)).
inline double jump_length_from_tail_prob(const JumpLaw& law, double u) {
    validate(law);
    if (!(u > 0.0 && u <= 1.0))
        throw ParameterError("tail probability must lie in (0, 1]");
    if (law.ell_min == law.ell_max) return law.ell_min;
    const double k = 1.0 - law.mu; // in [-2, 0)
    double x;
    if (law.bounded()) {
        const double a = std::pow(law.ell_min, k);
        const double b = std::pow(law.ell_max, k);
        x = std::pow(u * a + (1.0 - u) * b, 1.0 / k);
    } else {
        x = law.ell_min * std::pow(u, 1.0 / k);
    }
    return std::clamp(x, law.ell_min, law.ell_max);
}

inline double sample_jump_length(const JumpLaw& law, SeededRng& rng) {
    // 1 - uniform01() lies in (0, 1], keeping the quantile finite.
    return jump_length_from_tail_prob(law, 1.0 - rng.uniform01());
}

// Uniform direction on the unit circle or sphere by rejection from the disk;
// only arithmetic and sqrt, so results are reproducible bit for bit.
inline Vec sample_direction(int dimension, SeededRng& rng) {
    if (dimension == 2) {
        for (;;) {
            const double x = 2.0 * rng.uniform01() - 1.0;
            const double y = 2.0 * rng.uniform01() - 1.0;
            const double s = x * x + y * y;
            if (s > 0.0 && s <= 1.0) {
                const double inv = 1.0 / std::sqrt(s);
                return Vec(x * inv, y * inv);
            }
        }
    }
    if (dimension == 3) {
        // Marsaglia (1972)
        for (;;) {
            const double a = 2.0 * rng.uniform01() - 1.0;
            const double b = 2.0 * rng.uniform01() - 1.0;
            const double s = a * a + b * b;
            if (s < 1.0) {
                const double r = 2.0 * std::sqrt(1.0 - s);
                return Vec(a * r, b * r, 1.0 - 2.0 * s);
            }
        }
    }
    throw ParameterError("direction sampling supports dimensions 2 and 3, got " +
                         std::to_string(dimension));
}

// Least-squares slope of the empirical log CCDF against log x over
// [x_lo, x_hi]. For samples drawn from JumpLaw(mu) this recovers 1 - mu.
inline double tail_exponent_estimate(std::vector<double> samples, double x_lo, double x_hi) {
    if (!(x_lo > 0.0) || !(x_hi > x_lo))
        throw ParameterError("tail estimate: need 0 < x_lo < x_hi");
    if (samples.size() < 10000)
        throw InsufficientDataError("tail estimate: need at least 10^4 samples");
    std::sort(samples.begin(), samples.end());

    constexpr int kGridPoints = 25;
    const double log_lo = std::log(x_lo), log_hi = std::log(x_hi);
    std::vector<double> log_x, log_ccdf;
    log_x.reserve(kGridPoints);
    log_ccdf.reserve(kGridPoints);
    const double n = static_cast<double>(samples.size());
    std::size_t first_count = 0, last_count = 0;
    for (int i = 0; i < kGridPoints; ++i) {
        const double lx = log_lo + (log_hi - log_lo) * static_cast<double>(i) /
                                       static_cast<double>(kGridPoints - 1);
        const double x = std::exp(lx);
        const std::size_t count = static_cast<std::size_t>(
            samples.end() - std::upper_bound(samples.begin(), samples.end(), x));
        if (i == 0) first_count = count;
        last_count = count;
        if (count == 0) break;
        log_x.push_back(lx);
        log_ccdf.push_back(std::log(static_cast<double>(count) / n));
    }
    if (last_count < 10)
        throw InsufficientDataError("tail estimate: fewer than 10 samples beyond x_hi");
    if (first_count == last_count)
        throw InsufficientDataError("tail estimate: no decay across the fit window");
    return line_fit(log_x, log_ccdf).slope;
}

} // namespace levyforage
