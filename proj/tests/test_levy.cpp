#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "levyforage/errors.hpp"
#include "levyforage/levy.hpp"
#include "levyforage/rng.hpp"

using namespace levyforage;

namespace {

// Independent oracle: invert the analytic CCDF of the truncated power law by
// bisection instead of the closed-form quantile.
double quantile_by_bisection(const JumpLaw& law, double u) {
    const double k = 1.0 - law.mu;
    const double a = std::pow(law.ell_min, k);
    const double b = std::pow(law.ell_max, k);
    const auto ccdf = [&](double x) { return (std::pow(x, k) - b) / (a - b); };
    double lo = law.ell_min, hi = law.ell_max;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (ccdf(mid) > u) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> draw_lengths(const JumpLaw& law, int n, std::uint64_t seed) {
    SeededRng rng(seed);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(sample_jump_length(law, rng));
    return out;
}

} // namespace

TEST_CASE("closed-form quantile matches hand values") {
    // mu=2, unbounded: x = ell_min / u
    REQUIRE(jump_length_from_tail_prob(JumpLaw{2.0, 1.0}, 0.5) == 2.0);
    // mu=3, unbounded: x = ell_min * u^(-1/2)
    REQUIRE(jump_length_from_tail_prob(JumpLaw{3.0, 1.0}, 0.25) == 2.0);
}

TEST_CASE("degenerate support always returns ell_min") {
    const JumpLaw law{2.0, 1.0, 1.0};
    SeededRng rng(3);
    for (int i = 0; i < 100; ++i) REQUIRE(sample_jump_length(law, rng) == 1.0);
}

TEST_CASE("quantile agrees with numerical CDF inversion") {
    for (double mu : {1.3, 1.5, 2.0, 2.5, 3.0}) {
        const JumpLaw law{mu, 2.0, 500.0};
        for (double u : {1e-6, 1e-3, 0.1, 0.25, 0.5, 0.75, 0.99, 1.0}) {
            const double x = jump_length_from_tail_prob(law, u);
            const double y = quantile_by_bisection(law, u);
            REQUIRE(x == Catch::Approx(y).epsilon(1e-9));
        }
    }
}

TEST_CASE("sampled lengths respect the support bounds") {
    const JumpLaw law{1.7, 2.0, 50.0};
    SeededRng rng(19);
    for (int i = 0; i < 100000; ++i) {
        const double x = sample_jump_length(law, rng);
        REQUIRE(x >= 2.0);
        REQUIRE(x <= 50.0);
    }
}

TEST_CASE("length and direction streams are seed-deterministic") {
    const JumpLaw law{2.0, 1.0, 100.0};
    SeededRng a(77), b(77);
    for (int i = 0; i < 1000; ++i)
        REQUIRE(sample_jump_length(law, a) == sample_jump_length(law, b));
    SeededRng c(78), d(78);
    for (int i = 0; i < 1000; ++i) {
        const Vec u = sample_direction(3, c);
        const Vec v = sample_direction(3, d);
        REQUIRE(u == v);
    }
}

TEST_CASE("invalid law parameters are rejected") {
    SeededRng rng(1);
    REQUIRE_THROWS_AS(sample_jump_length(JumpLaw{1.0, 1.0}, rng), ParameterError);
    REQUIRE_THROWS_AS(sample_jump_length(JumpLaw{3.5, 1.0}, rng), ParameterError);
    REQUIRE_THROWS_AS(sample_jump_length(JumpLaw{2.0, 0.0}, rng), ParameterError);
    REQUIRE_THROWS_AS(sample_jump_length(JumpLaw{2.0, 2.0, 1.0}, rng), ParameterError);
}

TEST_CASE("directions are unit vectors") {
    SeededRng rng(23);
    for (int dim : {2, 3})
        for (int i = 0; i < 1000; ++i)
            REQUIRE(std::abs(norm(sample_direction(dim, rng)) - 1.0) < 1e-12);
}

TEST_CASE("unsupported direction dimensions are rejected") {
    SeededRng rng(1);
    REQUIRE_THROWS_AS(sample_direction(1, rng), ParameterError);
    REQUIRE_THROWS_AS(sample_direction(4, rng), ParameterError);
}

TEST_CASE("sphere directions have zero mean components") {
    SeededRng rng(29);
    const int n = 1000000;
    double mx = 0, my = 0, mz = 0;
    for (int i = 0; i < n; ++i) {
        const Vec v = sample_direction(3, rng);
        mx += v[0];
        my += v[1];
        mz += v[2];
    }
    REQUIRE(std::abs(mx / n) < 0.01);
    REQUIRE(std::abs(my / n) < 0.01);
    REQUIRE(std::abs(mz / n) < 0.01);
}

TEST_CASE("circle directions pass a uniform-angle chi-square test") {
    SeededRng rng(31);
    const int n = 1000000;
    const int bins = 36;
    std::vector<long> counts(bins, 0);
    for (int i = 0; i < n; ++i) {
        const Vec v = sample_direction(2, rng);
        const double angle = std::atan2(v[1], v[0]); // [-pi, pi]
        int b = static_cast<int>((angle + std::numbers::pi) / (2.0 * std::numbers::pi) * bins);
        b = std::clamp(b, 0, bins - 1);
        ++counts[static_cast<std::size_t>(b)];
    }
    const double expected = static_cast<double>(n) / bins;
    double chi2 = 0.0;
    for (long c : counts) {
        const double d = static_cast<double>(c) - expected;
        chi2 += d * d / expected;
    }
    // 0.999 quantile of chi-square with 35 dof
    REQUIRE(chi2 < 66.6188);
}

TEST_CASE("tail exponent estimate recovers 1 - mu") {
    struct Cfg {
        double mu, ell_max, x_lo, x_hi;
    };
    // Per-law windows: the central decade of log support, with ell_max picked
    // so the top of the window keeps enough exceedances.
    const Cfg cfgs[] = {
        {1.5, 1e6, std::pow(10.0, 2.5), std::pow(10.0, 3.5)},
        {2.0, 1e4, std::pow(10.0, 1.5), std::pow(10.0, 2.5)},
        {2.5, 1e3, 10.0, 100.0},
        {3.0, 1e2, std::pow(10.0, 0.5), std::pow(10.0, 1.5)},
    };
    for (const Cfg& c : cfgs) {
        const auto samples = draw_lengths(JumpLaw{c.mu, 1.0, c.ell_max}, 1000000, 4242);
        const double slope = tail_exponent_estimate(samples, c.x_lo, c.x_hi);
        REQUIRE(std::abs(slope - (1.0 - c.mu)) < 0.1);
    }
}

TEST_CASE("tail estimate rejects degenerate input") {
    REQUIRE_THROWS_AS(tail_exponent_estimate(std::vector<double>(20000, 3.0), 1.0, 10.0),
                      InsufficientDataError);
    REQUIRE_THROWS_AS(tail_exponent_estimate(std::vector<double>(100, 3.0), 1.0, 10.0),
                      InsufficientDataError);
    REQUIRE_THROWS_AS(tail_exponent_estimate(std::vector<double>(20000, 3.0), 10.0, 1.0),
                      ParameterError);
}
