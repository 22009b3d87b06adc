#pragma once

#include <charconv>
#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "levyforage/errors.hpp"
#include "levyforage/vec.hpp"

namespace levyforage {

enum class EventKind { Jump, Detection, Collection, ModeSwitch, Clip };

// One timestamped record of the run. `distance` is the cumulative path length
// at the event; the payload column depends on the kind:
//   jump        -> commanded flight length
//   clip        -> commanded length lost at the boundary
//   detection   -> reward id
//   collection  -> reward id
//   mode-switch -> new mode, A or B
struct TraceEvent {
    EventKind kind = EventKind::Jump;
    double distance = 0.0;
    Vec position;
    double value = 0.0;
    int reward = -1;
    char mode = 0;

    static TraceEvent jump(double distance, const Vec& pos, double commanded) {
        return TraceEvent{EventKind::Jump, distance, pos, commanded, -1, 0};
    }
    static TraceEvent detection(double distance, const Vec& pos, int reward) {
        return TraceEvent{EventKind::Detection, distance, pos, 0.0, reward, 0};
    }
    static TraceEvent collection(double distance, const Vec& pos, int reward) {
        return TraceEvent{EventKind::Collection, distance, pos, 0.0, reward, 0};
    }
    static TraceEvent mode_switch(double distance, const Vec& pos, char mode) {
        return TraceEvent{EventKind::ModeSwitch, distance, pos, 0.0, -1, mode};
    }
    static TraceEvent clip(double distance, const Vec& pos, double lost) {
        return TraceEvent{EventKind::Clip, distance, pos, lost, -1, 0};
    }
};

struct Trajectory {
    int dimension = 2;
    std::vector<TraceEvent> events;
};

// Shortest round-trip decimal form; stable bytes for identical doubles.
inline std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, int line_no) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("trace line " + std::to_string(line_no) + ": bad number '" +
                          std::string(s) + "'");
    return v;
}

inline std::string_view event_kind_name(EventKind k) {
    switch (k) {
    case EventKind::Jump: return "jump";
    case EventKind::Detection: return "detection";
    case EventKind::Collection: return "collection";
    case EventKind::ModeSwitch: return "mode-switch";
    case EventKind::Clip: return "clip";
    }
    return "?";
}

inline void write_trace(std::ostream& os, const Trajectory& t) {
    os << "event\tdist\tx";
    if (t.dimension > 1) os << "\ty";
    if (t.dimension > 2) os << "\tz";
    os << "\tpayload\n";
    for (const TraceEvent& e : t.events) {
        os << event_kind_name(e.kind) << '\t' << fmt_double(e.distance);
        for (int i = 0; i < t.dimension; ++i) os << '\t' << fmt_double(e.position[i]);
        os << '\t';
        switch (e.kind) {
        case EventKind::Jump:
        case EventKind::Clip:
            os << fmt_double(e.value);
            break;
        case EventKind::Detection:
        case EventKind::Collection:
            os << e.reward;
            break;
        case EventKind::ModeSwitch:
            os << e.mode;
            break;
        }
        os << '\n';
    }
}

inline Trajectory read_trace(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("trace: missing header");
    int dimension;
    if (line == "event\tdist\tx\tpayload") dimension = 1;
    else if (line == "event\tdist\tx\ty\tpayload") dimension = 2;
    else if (line == "event\tdist\tx\ty\tz\tpayload") dimension = 3;
    else throw ConfigError("trace: unrecognized header '" + line + "'");

    Trajectory t;
    t.dimension = dimension;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string_view> cols;
        std::string_view rest = line;
        for (;;) {
            const std::size_t tab = rest.find('\t');
            if (tab == std::string_view::npos) {
                cols.push_back(rest);
                break;
            }
            cols.push_back(rest.substr(0, tab));
            rest.remove_prefix(tab + 1);
        }
        if (cols.size() != static_cast<std::size_t>(dimension) + 3)
            throw ConfigError("trace line " + std::to_string(line_no) + ": wrong column count");

        TraceEvent e;
        const std::string_view kind = cols[0];
        if (kind == "jump") e.kind = EventKind::Jump;
        else if (kind == "detection") e.kind = EventKind::Detection;
        else if (kind == "collection") e.kind = EventKind::Collection;
        else if (kind == "mode-switch") e.kind = EventKind::ModeSwitch;
        else if (kind == "clip") e.kind = EventKind::Clip;
        else
            throw ConfigError("trace line " + std::to_string(line_no) + ": unknown event kind '" +
                              std::string(kind) + "'");

        e.distance = parse_double(cols[1], line_no);
        e.position = Vec::zero(dimension);
        for (int i = 0; i < dimension; ++i)
            e.position[i] = parse_double(cols[static_cast<std::size_t>(i) + 2], line_no);

        const std::string_view payload = cols[static_cast<std::size_t>(dimension) + 2];
        switch (e.kind) {
        case EventKind::Jump:
        case EventKind::Clip:
            e.value = parse_double(payload, line_no);
            break;
        case EventKind::Detection:
        case EventKind::Collection: {
            int id = -1;
            const auto res = std::from_chars(payload.data(), payload.data() + payload.size(), id);
            if (res.ec != std::errc{} || res.ptr != payload.data() + payload.size())
                throw ConfigError("trace line " + std::to_string(line_no) + ": bad reward id");
            e.reward = id;
            break;
        }
        case EventKind::ModeSwitch:
            if (payload != "A" && payload != "B")
                throw ConfigError("trace line " + std::to_string(line_no) + ": bad mode payload");
            e.mode = payload[0];
            break;
        }
        t.events.push_back(e);
    }
    return t;
}

} // namespace levyforage
