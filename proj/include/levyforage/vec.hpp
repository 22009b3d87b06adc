#pragma once

#include <array>
#include <cassert>
#include <cmath>

namespace levyforage {

// Euclidean vector with runtime dimension (1, 2 or 3). Components beyond
// the dimension stay zero so arithmetic never has to branch on dim.
struct Vec {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    int dim = 0;

    Vec() = default;
    explicit Vec(double x) : c{x, 0.0, 0.0}, dim(1) {}
    Vec(double x, double y) : c{x, y, 0.0}, dim(2) {}
    Vec(double x, double y, double z) : c{x, y, z}, dim(3) {}

    static Vec zero(int dimension) {
        Vec v;
        v.dim = dimension;
        return v;
    }

    double& operator[](int i) {
        assert(i >= 0 && i < dim);
        return c[static_cast<std::size_t>(i)];
    }
    double operator[](int i) const {
        assert(i >= 0 && i < dim);
        return c[static_cast<std::size_t>(i)];
    }

    bool operator==(const Vec& o) const { return dim == o.dim && c == o.c; }
    bool operator!=(const Vec& o) const { return !(*this == o); }
};

inline Vec operator+(Vec a, const Vec& b) {
    assert(a.dim == b.dim);
    for (int i = 0; i < a.dim; ++i) a.c[static_cast<std::size_t>(i)] += b.c[static_cast<std::size_t>(i)];
    return a;
}

inline Vec operator-(Vec a, const Vec& b) {
    assert(a.dim == b.dim);
    for (int i = 0; i < a.dim; ++i) a.c[static_cast<std::size_t>(i)] -= b.c[static_cast<std::size_t>(i)];
    return a;
}

inline Vec operator*(Vec a, double s) {
    for (int i = 0; i < a.dim; ++i) a.c[static_cast<std::size_t>(i)] *= s;
    return a;
}

inline Vec operator*(double s, Vec a) { return a * s; }

inline double dot(const Vec& a, const Vec& b) {
    assert(a.dim == b.dim);
    double s = 0.0;
    for (int i = 0; i < a.dim; ++i) s += a.c[static_cast<std::size_t>(i)] * b.c[static_cast<std::size_t>(i)];
    return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline double dist2(const Vec& a, const Vec& b) { return norm2(a - b); }
inline double dist(const Vec& a, const Vec& b) { return std::sqrt(dist2(a, b)); }

inline bool is_zero(const Vec& a) {
    for (int i = 0; i < a.dim; ++i)
        if (a.c[static_cast<std::size_t>(i)] != 0.0) return false;
    return true;
}

inline Vec lerp(const Vec& a, const Vec& b, double t) { return a + (b - a) * t; }

} // namespace levyforage
