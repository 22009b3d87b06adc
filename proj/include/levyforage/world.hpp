#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "levyforage/errors.hpp"
#include "levyforage/rng.hpp"
#include "levyforage/vec.hpp"

namespace levyforage {

enum class ForagingMode { Destructive, NonDestructive };
enum class BoundaryPolicy { Clip, Reflect, Wrap };

// Axis-aligned box configuration space.
struct Domain {
    int dimension = 2;
    Vec lower;
    Vec upper;

    bool contains(const Vec& p) const {
        if (p.dim != dimension) return false;
        for (int i = 0; i < dimension; ++i)
            if (p[i] < lower[i] || p[i] > upper[i]) return false;
        return true;
    }

    double extent(int axis) const { return upper[axis] - lower[axis]; }

    double diagonal() const {
        double s = 0.0;
        for (int i = 0; i < dimension; ++i) s += extent(i) * extent(i);
        return std::sqrt(s);
    }

    Vec center() const {
        Vec c = Vec::zero(dimension);
        for (int i = 0; i < dimension; ++i) c[i] = 0.5 * (lower[i] + upper[i]);
        return c;
    }

    Vec clamp(Vec p) const {
        for (int i = 0; i < dimension; ++i) p[i] = std::clamp(p[i], lower[i], upper[i]);
        return p;
    }

    // Euclidean distance from a point to the box, zero inside.
    double distance_to(const Vec& p) const {
        double s = 0.0;
        for (int i = 0; i < dimension; ++i) {
            const double d = std::max({lower[i] - p[i], 0.0, p[i] - upper[i]});
            s += d * d;
        }
        return std::sqrt(s);
    }

    bool operator==(const Domain& o) const {
        return dimension == o.dimension && lower == o.lower && upper == o.upper;
    }
};

inline void validate(const Domain& d) {
    if (d.dimension < 1 || d.dimension > 3)
        throw ConfigError("domain: dimension must be 1, 2 or 3");
    if (d.lower.dim != d.dimension || d.upper.dim != d.dimension)
        throw ConfigError("domain: corner dimensions do not match");
    for (int i = 0; i < d.dimension; ++i)
        if (!(d.upper[i] > d.lower[i]))
            throw ConfigError("domain: upper corner must exceed lower corner componentwise");
}

struct RewardCluster {
    Vec center;
    double radius = 0.0;
    int count = 0;

    bool operator==(const RewardCluster& o) const {
        return center == o.center && radius == o.radius && count == o.count;
    }
};

struct RewardPoint {
    Vec position;
    int cluster = 0;
    bool collected = false;  // destructive mode
    bool visited = false;    // non-destructive mode: seen at least once
    bool suppressed = false; // non-destructive mode: depleted until the agent leaves its ball
};

struct SegmentHit {
    int id = -1;
    double t = 0.0; // entry parameter along the segment, in [0, 1]
};

// Reward points with a uniform-grid index over their bounding box. Cell edges
// are at least r_d long (or a single slab per axis), so any ball of radius
// r_d is covered by the 3^dim block around its center cell.
class RewardField {
public:
    RewardField() = default;

    RewardField(Domain domain, ForagingMode mode, double r_d, std::vector<RewardPoint> points,
                double release_radius = 0.0)
        : domain_(std::move(domain)), mode_(mode), r_d_(r_d),
          release_radius_(release_radius > 0.0 ? release_radius : r_d),
          points_(std::move(points)) {
        if (!(r_d_ > 0.0)) throw ParameterError("detection radius must be positive");
        if (release_radius_ < r_d_)
            throw ParameterError("release radius must be at least the detection radius");
        build_grid();
        stamps_.assign(points_.size(), 0);
    }

    const Domain& domain() const { return domain_; }
    ForagingMode mode() const { return mode_; }
    double detection_radius() const { return r_d_; }
    double release_radius() const { return release_radius_; }
    int total() const { return static_cast<int>(points_.size()); }
    const RewardPoint& point(int id) const { return points_[static_cast<std::size_t>(id)]; }
    const std::vector<RewardPoint>& points() const { return points_; }

    long collection_events() const { return collection_events_; }
    int unique_collected() const { return unique_collected_; }

    int remaining_detectable() const {
        if (mode_ == ForagingMode::Destructive) return total() - unique_collected_;
        return total() - static_cast<int>(suppressed_ids_.size());
    }

    bool depleted() const {
        return mode_ == ForagingMode::Destructive && unique_collected_ == total();
    }

    // Ids of detectable points within the closed ball of radius r_d, ascending.
    std::vector<int> detect(const Vec& pos) const {
        std::vector<int> out;
        if (points_.empty()) return out;
        const double r2 = r_d_ * r_d_;
        scan_block(cell_coords(pos), [&](int id) {
            const RewardPoint& p = points_[static_cast<std::size_t>(id)];
            if (detectable(p) && dist2(pos, p.position) <= r2) out.push_back(id);
        });
        std::sort(out.begin(), out.end());
        return out;
    }

    // First detectable point whose r_d-ball the segment enters, by entry
    // parameter; ties broken by lowest id. A zero-length segment degrades to
    // a point query.
    std::optional<SegmentHit> first_detection_on_segment(const Vec& a, const Vec& b) const {
        if (points_.empty()) return std::nullopt;
        const double len2 = dist2(a, b);
        if (len2 == 0.0) {
            auto ids = detect(a);
            if (ids.empty()) return std::nullopt;
            return SegmentHit{ids.front(), 0.0};
        }
        const double len = std::sqrt(len2);
        const Vec dir = (b - a) * (1.0 / len);
        const double r2 = r_d_ * r_d_;

        ++query_stamp_;
        std::optional<SegmentHit> best;
        const double reach = r_d_ + 2.0 * cell_diag_;
        walk_cells(a, b, len, [&](const std::array<int, 3>& cell, double t_cell) {
            if (best && best->t * len + reach < t_cell * len) return false; // done
            scan_block(cell, [&](int id) {
                auto& stamp = stamps_[static_cast<std::size_t>(id)];
                if (stamp == query_stamp_) return;
                stamp = query_stamp_;
                const RewardPoint& p = points_[static_cast<std::size_t>(id)];
                if (!detectable(p)) return;
                double t_entry;
                const Vec oc = a - p.position;
                const double c0 = norm2(oc) - r2;
                if (c0 <= 0.0) {
                    t_entry = 0.0;
                } else {
                    const double bq = dot(oc, dir);
                    const double disc = bq * bq - c0;
                    if (disc < 0.0) return;
                    const double s_in = -bq - std::sqrt(disc);
                    if (s_in < 0.0 || s_in > len) return;
                    t_entry = s_in / len;
                }
                if (!best || t_entry < best->t || (t_entry == best->t && id < best->id))
                    best = SegmentHit{id, t_entry};
            });
            return true;
        });
        return best;
    }

    // Mark a reward collected. Destructive mode removes it for good;
    // non-destructive mode suppresses it until the agent leaves its ball.
    void collect(int id) {
        RewardPoint& p = points_.at(static_cast<std::size_t>(id));
        if (!detectable(p))
            throw std::logic_error("collect: reward " + std::to_string(id) +
                                   " is not currently detectable");
        if (mode_ == ForagingMode::Destructive) {
            p.collected = true;
            ++unique_collected_;
        } else {
            p.suppressed = true;
            suppressed_ids_.push_back(id);
            if (!p.visited) {
                p.visited = true;
                ++unique_collected_;
            }
        }
        ++collection_events_;
    }

    // Non-destructive bookkeeping: a suppressed point becomes detectable again
    // once the agent is farther than the release radius from it.
    void refresh_visited(const Vec& pos) {
        if (mode_ != ForagingMode::NonDestructive || suppressed_ids_.empty()) return;
        const double r2 = release_radius_ * release_radius_;
        std::size_t keep = 0;
        for (std::size_t i = 0; i < suppressed_ids_.size(); ++i) {
            const int id = suppressed_ids_[i];
            RewardPoint& p = points_[static_cast<std::size_t>(id)];
            if (dist2(pos, p.position) > r2) {
                p.suppressed = false;
            } else {
                suppressed_ids_[keep++] = id;
            }
        }
        suppressed_ids_.resize(keep);
    }

private:
    bool detectable(const RewardPoint& p) const {
        return mode_ == ForagingMode::Destructive ? !p.collected : !p.suppressed;
    }

    std::array<int, 3> cell_coords(const Vec& p) const {
        std::array<int, 3> c{0, 0, 0};
        for (int i = 0; i < domain_.dimension; ++i) {
            const double w = cell_size_[static_cast<std::size_t>(i)];
            c[static_cast<std::size_t>(i)] =
                w > 0.0 ? static_cast<int>(std::floor((p[i] - origin_[i]) / w)) : 0;
        }
        return c;
    }

    int cell_index(int ix, int iy, int iz) const {
        return (iz * n_[1] + iy) * n_[0] + ix;
    }

    // Applies fn to every point id in the 3^dim block around the given cell.
    template <typename Fn>
    void scan_block(const std::array<int, 3>& c, Fn&& fn) const {
        const int dim = domain_.dimension;
        const int zlo = dim > 2 ? std::max(0, c[2] - 1) : 0;
        const int zhi = dim > 2 ? std::min(n_[2] - 1, c[2] + 1) : 0;
        const int ylo = dim > 1 ? std::max(0, c[1] - 1) : 0;
        const int yhi = dim > 1 ? std::min(n_[1] - 1, c[1] + 1) : 0;
        const int xlo = std::max(0, c[0] - 1);
        const int xhi = std::min(n_[0] - 1, c[0] + 1);
        if (xlo > xhi || ylo > yhi || zlo > zhi) return;
        for (int z = zlo; z <= zhi; ++z)
            for (int y = ylo; y <= yhi; ++y)
                for (int x = xlo; x <= xhi; ++x) {
                    const int cell = cell_index(x, y, z);
                    for (int k = cell_begin_[static_cast<std::size_t>(cell)];
                         k < cell_begin_[static_cast<std::size_t>(cell) + 1]; ++k)
                        fn(cell_points_[static_cast<std::size_t>(k)]);
                }
    }

    // Visits grid cells along the segment in order of entry parameter.
    // fn returns false to stop early.
    template <typename Fn>
    void walk_cells(const Vec& a, const Vec& b, double len, Fn&& fn) const {
        const int dim = domain_.dimension;
        std::array<int, 3> cell = cell_coords(a);
        const std::array<int, 3> goal = cell_coords(b);
        std::array<double, 3> t_next{std::numeric_limits<double>::infinity(),
                                     std::numeric_limits<double>::infinity(),
                                     std::numeric_limits<double>::infinity()};
        std::array<double, 3> t_step{0, 0, 0};
        std::array<int, 3> dstep{0, 0, 0};
        for (int i = 0; i < dim; ++i) {
            const double d = (b[i] - a[i]) / len;
            const double w = cell_size_[static_cast<std::size_t>(i)];
            if (d == 0.0 || w <= 0.0) continue;
            dstep[static_cast<std::size_t>(i)] = d > 0.0 ? 1 : -1;
            t_step[static_cast<std::size_t>(i)] = std::abs(w / d) / len;
            const double edge =
                origin_[i] +
                (static_cast<double>(cell[static_cast<std::size_t>(i)]) + (d > 0.0 ? 1.0 : 0.0)) * w;
            t_next[static_cast<std::size_t>(i)] = (edge - a[i]) / (d * len);
        }
        double t_cell = 0.0;
        for (;;) {
            if (!fn(cell, t_cell)) return;
            if (cell == goal) return;
            int axis = 0;
            for (int i = 1; i < dim; ++i)
                if (t_next[static_cast<std::size_t>(i)] < t_next[static_cast<std::size_t>(axis)])
                    axis = i;
            t_cell = t_next[static_cast<std::size_t>(axis)];
            if (!(t_cell <= 1.0)) return;
            cell[static_cast<std::size_t>(axis)] += dstep[static_cast<std::size_t>(axis)];
            t_next[static_cast<std::size_t>(axis)] += t_step[static_cast<std::size_t>(axis)];
        }
    }

    void build_grid() {
        const int dim = domain_.dimension;
        n_ = {1, 1, 1};
        cell_diag_ = 0.0;
        if (points_.empty()) {
            cell_begin_.assign(2, 0);
            return;
        }
        Vec lo = points_.front().position, hi = points_.front().position;
        for (const RewardPoint& p : points_)
            for (int i = 0; i < dim; ++i) {
                lo[i] = std::min(lo[i], p.position[i]);
                hi[i] = std::max(hi[i], p.position[i]);
            }
        origin_ = lo;
        const int cap = dim == 3 ? 64 : 512;
        for (int i = 0; i < dim; ++i) {
            const double extent = hi[i] - lo[i];
            const int cells =
                std::clamp(static_cast<int>(std::floor(extent / r_d_)), 1, cap);
            n_[static_cast<std::size_t>(i)] = cells;
            // cells are never narrower than r_d, so a ball around any query
            // point fits in the 3^dim block around its cell
            cell_size_[static_cast<std::size_t>(i)] = std::max(r_d_, extent / cells);
            cell_diag_ += cell_size_[static_cast<std::size_t>(i)] *
                          cell_size_[static_cast<std::size_t>(i)];
        }
        cell_diag_ = std::sqrt(cell_diag_);

        const int ncells = n_[0] * n_[1] * n_[2];
        std::vector<int> counts(static_cast<std::size_t>(ncells), 0);
        std::vector<int> cell_of(points_.size());
        for (std::size_t i = 0; i < points_.size(); ++i) {
            std::array<int, 3> c = cell_coords(points_[i].position);
            for (int k = 0; k < dim; ++k)
                c[static_cast<std::size_t>(k)] =
                    std::clamp(c[static_cast<std::size_t>(k)], 0, n_[static_cast<std::size_t>(k)] - 1);
            cell_of[i] = cell_index(c[0], c[1], c[2]);
            ++counts[static_cast<std::size_t>(cell_of[i])];
        }
        cell_begin_.assign(static_cast<std::size_t>(ncells) + 1, 0);
        for (int c = 0; c < ncells; ++c)
            cell_begin_[static_cast<std::size_t>(c) + 1] =
                cell_begin_[static_cast<std::size_t>(c)] + counts[static_cast<std::size_t>(c)];
        cell_points_.resize(points_.size());
        std::vector<int> cursor(cell_begin_.begin(), cell_begin_.end() - 1);
        for (std::size_t i = 0; i < points_.size(); ++i)
            cell_points_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(cell_of[i])]++)] =
                static_cast<int>(i);
    }

    Domain domain_;
    ForagingMode mode_ = ForagingMode::Destructive;
    double r_d_ = 1.0;
    double release_radius_ = 1.0;
    std::vector<RewardPoint> points_;

    Vec origin_;
    std::array<double, 3> cell_size_{0, 0, 0};
    std::array<int, 3> n_{1, 1, 1};
    double cell_diag_ = 0.0;
    std::vector<int> cell_begin_;
    std::vector<int> cell_points_;

    std::vector<int> suppressed_ids_;
    long collection_events_ = 0;
    int unique_collected_ = 0;

    mutable std::vector<std::uint32_t> stamps_;
    mutable std::uint32_t query_stamp_ = 0;
};

// Draws cluster points uniformly within each cluster ball, rejection-resampled
// to stay inside the domain. Point ids run cluster by cluster in order.
inline RewardField generate_rewards(const Domain& domain,
                                    const std::vector<RewardCluster>& clusters,
                                    ForagingMode mode, double r_d, SeededRng& rng,
                                    double release_radius = 0.0) {
    validate(domain);
    if (!(r_d > 0.0)) throw ParameterError("detection radius must be positive");
    if (clusters.empty()) throw ConfigError("reward generation requires at least one cluster");
    std::vector<RewardPoint> points;
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
        const RewardCluster& cl = clusters[ci];
        if (cl.center.dim != domain.dimension)
            throw ConfigError("cluster " + std::to_string(ci) + ": center dimension mismatch");
        if (!(cl.radius > 0.0))
            throw ConfigError("cluster " + std::to_string(ci) + ": radius must be positive");
        if (cl.count < 1)
            throw ConfigError("cluster " + std::to_string(ci) + ": count must be at least 1");
        if (!domain.contains(cl.center)) {
            if (domain.distance_to(cl.center) > cl.radius)
                throw ConfigError("cluster " + std::to_string(ci) +
                                  ": ball lies entirely outside the domain");
            throw ConfigError("cluster " + std::to_string(ci) + ": center outside the domain");
        }
        for (int j = 0; j < cl.count; ++j) {
            Vec p;
            bool ok = false;
            for (int attempt = 0; attempt < 100000; ++attempt) {
                Vec off = Vec::zero(domain.dimension);
                for (int k = 0; k < domain.dimension; ++k)
                    off[k] = rng.uniform(-cl.radius, cl.radius);
                if (norm2(off) > cl.radius * cl.radius) continue;
                p = cl.center + off;
                if (domain.contains(p)) {
                    ok = true;
                    break;
                }
            }
            if (!ok)
                throw ConfigError("cluster " + std::to_string(ci) +
                                  ": could not place points inside the domain");
            points.push_back(RewardPoint{p, static_cast<int>(ci)});
        }
    }
    return RewardField(domain, mode, r_d, std::move(points), release_radius);
}

struct ClipResult {
    Vec end;
    double flown = 0.0;
};

// Advance from a point inside the domain along a unit direction, stopping at
// the boundary. Returns the endpoint (clamped into the closed domain) and the
// length actually flown.
inline ClipResult clip_to_domain(const Domain& domain, const Vec& from, const Vec& dir,
                                 double length) {
    double t_exit = std::numeric_limits<double>::infinity();
    for (int i = 0; i < domain.dimension; ++i) {
        if (dir[i] > 0.0)
            t_exit = std::min(t_exit, (domain.upper[i] - from[i]) / dir[i]);
        else if (dir[i] < 0.0)
            t_exit = std::min(t_exit, (domain.lower[i] - from[i]) / dir[i]);
    }
    const double flown = std::max(0.0, std::min(length, t_exit));
    return ClipResult{domain.clamp(from + dir * flown), flown};
}

struct FlightLeg {
    Vec from;
    Vec to;
    double length = 0.0;
};

struct FlightPath {
    std::vector<FlightLeg> legs;
    Vec end;
    double flown = 0.0;
    double leftover = 0.0; // commanded length lost to a clipping boundary
};

// Straight-line pieces of one flight under the boundary policy. Clip ends the
// flight at the wall; Reflect bounces the direction; Wrap re-enters from the
// opposite face. Every leg lies inside the closed domain.
inline FlightPath trace_flight(const Domain& domain, BoundaryPolicy policy, Vec from, Vec dir,
                               double length) {
    FlightPath path;
    path.end = from;
    double remaining = length;
    for (int iter = 0; iter < 1000000; ++iter) {
        const ClipResult c = clip_to_domain(domain, from, dir, remaining);
        if (c.flown > 0.0) {
            path.legs.push_back(FlightLeg{from, c.end, c.flown});
            path.flown += c.flown;
            remaining -= c.flown;
            from = c.end;
            path.end = c.end;
        }
        if (remaining <= 0.0) return path;
        switch (policy) {
        case BoundaryPolicy::Clip:
            path.leftover = remaining;
            return path;
        case BoundaryPolicy::Reflect:
            for (int i = 0; i < domain.dimension; ++i) {
                if (dir[i] > 0.0 && from[i] >= domain.upper[i]) dir[i] = -dir[i];
                else if (dir[i] < 0.0 && from[i] <= domain.lower[i]) dir[i] = -dir[i];
            }
            break;
        case BoundaryPolicy::Wrap:
            for (int i = 0; i < domain.dimension; ++i) {
                if (dir[i] > 0.0 && from[i] >= domain.upper[i]) from[i] = domain.lower[i];
                else if (dir[i] < 0.0 && from[i] <= domain.lower[i]) from[i] = domain.upper[i];
            }
            path.end = from;
            break;
        }
    }
    throw std::logic_error("trace_flight: boundary iteration did not terminate");
}

} // namespace levyforage
