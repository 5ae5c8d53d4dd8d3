#pragma once

// Legendrian attributes: front diagrams for knots in S^3 with exact tb/r
// computation, zig-zag stabilization, Stein condition checking and
// Stein-ification by zig-zags.
//
// Fronts are event sequences sweeping left to right over a stack of strands
// (position 0 on top): LC i inserts two strands at i, RCu/RCd i closes the
// strands at i and i+1 (annotated with the traversal direction through the
// cusp), X+/X- i crosses them (annotated with the crossing sign). The engine
// recovers connectivity and orientation, computes tb = writhe - #right cusps
// and r = (#down cusps - #up cusps)/2, and cross-checks every annotation.

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nf/errors.hpp"
#include "nf/handlebody.hpp"

namespace nf {

struct FrontEvent {
    enum class Kind { left_cusp, right_cusp, crossing };
    Kind kind = Kind::left_cusp;
    int pos = 0;
    int declared = 0;  // right_cusp: +1 up / -1 down; crossing: +-1 sign

    friend bool operator==(const FrontEvent&, const FrontEvent&) = default;
};

struct FrontDiagram {
    std::vector<FrontEvent> events;
};

inline FrontDiagram parse_front(const std::string& text) {
    FrontDiagram f;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok))
            continue;
        int pos = -1;
        require(static_cast<bool>(ls >> pos) && pos >= 0, "MalformedFront",
                "event '" + tok + "' needs a strand index");
        FrontEvent e;
        e.pos = pos;
        if (tok == "LC") {
            e.kind = FrontEvent::Kind::left_cusp;
        } else if (tok == "RCu" || tok == "RCd") {
            e.kind = FrontEvent::Kind::right_cusp;
            e.declared = tok == "RCu" ? 1 : -1;
        } else if (tok == "X+" || tok == "X-") {
            e.kind = FrontEvent::Kind::crossing;
            e.declared = tok == "X+" ? 1 : -1;
        } else {
            fail("MalformedFront", "unknown event token '" + tok + "'");
        }
        f.events.push_back(e);
    }
    return f;
}

inline std::string front_to_text(const FrontDiagram& f) {
    std::ostringstream os;
    for (const FrontEvent& e : f.events) {
        switch (e.kind) {
            case FrontEvent::Kind::left_cusp: os << "LC"; break;
            case FrontEvent::Kind::right_cusp: os << (e.declared > 0 ? "RCu" : "RCd"); break;
            case FrontEvent::Kind::crossing: os << (e.declared > 0 ? "X+" : "X-"); break;
        }
        os << " " << e.pos << "\n";
    }
    return os.str();
}

namespace detail {

struct FrontAnalysis {
    long long tb = 0;
    long long r = 0;
    long long writhe = 0;
    long long right_cusps = 0;
};

// Core engine. `wrap_strands` > 0 treats the sweep as cyclic with that many
// strands crossing the seam; the public entry point uses 0 (plane fronts).
inline FrontAnalysis analyze_front(const std::vector<FrontEvent>& events, int wrap_strands) {
    struct Conn {
        int arc = -1;
        int side = 0;  // 0 = left end, 1 = right end
    };
    struct Cusp {
        bool left = false;
        int upper = 0, lower = 0;
        int declared = 0;  // right cusps only
    };
    struct Crossing {
        int over_in = 0, under_in = 0;
        int declared = 0;
    };

    int arcs = 0;
    auto new_arc = [&arcs]() { return arcs++; };

    std::vector<int> stack;
    std::vector<int> seam;  // initial arcs, for cyclic analysis
    for (int i = 0; i < wrap_strands; ++i) {
        int a = new_arc();
        stack.push_back(a);
        seam.push_back(a);
    }

    std::vector<std::pair<Conn, Conn>> links;  // end identifications
    std::vector<Cusp> cusps;
    std::vector<Crossing> crossings;

    for (const FrontEvent& e : events) {
        const int i = e.pos;
        switch (e.kind) {
            case FrontEvent::Kind::left_cusp: {
                require(i >= 0 && i <= static_cast<int>(stack.size()), "MalformedFront",
                        "left cusp position out of range");
                int a = new_arc(), b = new_arc();
                stack.insert(stack.begin() + i, {a, b});
                links.push_back({{a, 0}, {b, 0}});
                cusps.push_back({true, a, b, 0});
                break;
            }
            case FrontEvent::Kind::right_cusp: {
                require(i >= 0 && i + 1 < static_cast<int>(stack.size()), "MalformedFront",
                        "right cusp position out of range");
                int u = stack[i], v = stack[i + 1];
                stack.erase(stack.begin() + i, stack.begin() + i + 2);
                links.push_back({{u, 1}, {v, 1}});
                cusps.push_back({false, u, v, e.declared});
                break;
            }
            case FrontEvent::Kind::crossing: {
                require(i >= 0 && i + 1 < static_cast<int>(stack.size()), "MalformedFront",
                        "crossing position out of range");
                int u = stack[i], v = stack[i + 1];
                int u2 = new_arc(), v2 = new_arc();
                links.push_back({{u, 1}, {u2, 0}});
                links.push_back({{v, 1}, {v2, 0}});
                // the strand moving down (u -> position i+1) is in front
                crossings.push_back({u, v, e.declared});
                stack[i] = v2;
                stack[i + 1] = u2;
                break;
            }
        }
    }

    if (wrap_strands == 0) {
        require(stack.empty(), "OpenFront", "strands left unterminated at the right edge");
    } else {
        require(static_cast<int>(stack.size()) == wrap_strands, "OpenFront",
                "cyclic front does not return to its seam width");
        for (int i = 0; i < wrap_strands; ++i)
            links.push_back({{stack[i], 1}, {seam[i], 0}});
    }
    require(arcs > 0, "OpenFront", "empty front");

    // peer lookup per arc end
    std::vector<std::array<Conn, 2>> peer(arcs);
    for (const auto& [a, b] : links) {
        peer[a.arc][a.side] = b;
        peer[b.arc][b.side] = a;
    }
    for (int a = 0; a < arcs; ++a)
        for (int s = 0; s < 2; ++s)
            require(peer[a][s].arc >= 0, "OpenFront", "dangling strand end");

    // orient by traversal from arc 0 heading right
    std::vector<int> dir(arcs, 0);
    {
        int a = 0, d = 1;
        for (int step = 0; step < arcs; ++step) {
            require(dir[a] == 0, "MultiComponent", "traversal revisited a strand");
            dir[a] = d;
            Conn nxt = peer[a][d > 0 ? 1 : 0];
            a = nxt.arc;
            d = nxt.side == 0 ? 1 : -1;
        }
        require(a == 0 && d == 1, "MultiComponent", "traversal did not close");
        for (int x = 0; x < arcs; ++x)
            require(dir[x] != 0, "MultiComponent", "front has more than one component");
    }

    auto cusp_down = [&dir](const Cusp& c) {
        // Arriving along the upper strand and leaving along the lower one is a
        // downward pass through the cusp. At a right cusp the upper strand
        // arrives when it points right; at a left cusp, when it points left.
        return c.left ? dir[c.upper] < 0 : dir[c.upper] > 0;
    };

    // crossing signs do not depend on the global orientation
    long long writhe = 0;
    for (const Crossing& c : crossings) {
        int sign = dir[c.over_in] == dir[c.under_in] ? 1 : -1;
        require(sign == c.declared, "FrontAnnotationMismatch",
                "declared crossing sign disagrees with the oriented diagram");
        writhe += sign;
    }

    // cusp directions flip with the global orientation; pin it by the first
    // annotated right cusp
    bool flip = false;
    for (const Cusp& c : cusps)
        if (!c.left) {
            flip = (cusp_down(c) ? -1 : 1) != c.declared;
            break;
        }
    long long down = 0, up = 0, right_cusps = 0;
    for (const Cusp& c : cusps) {
        bool d = cusp_down(c) != flip;
        (d ? down : up) += 1;
        if (!c.left) {
            ++right_cusps;
            require((d ? -1 : 1) == c.declared, "FrontAnnotationMismatch",
                    "declared cusp orientations are inconsistent");
        }
    }
    require((down - up) % 2 == 0, "MalformedFront", "odd cusp direction imbalance");

    FrontAnalysis out;
    out.writhe = writhe;
    out.right_cusps = right_cusps;
    out.tb = writhe - right_cusps;
    out.r = (down - up) / 2;
    return out;
}

}  // namespace detail

// tb = writhe - #right cusps, r = (#down - #up)/2 over all cusps, with every
// declared annotation cross-checked against the recovered orientation.
inline LegendrianData tb_rotation(const FrontDiagram& f) {
    detail::FrontAnalysis a = detail::analyze_front(f.events, 0);
    return {a.tb, a.r};
}

enum class ZigzagDirection { up, down };

// Legendrian stabilization: tb drops by one, r moves by +-1. The framing is
// untouched; a stored front no longer describes the stabilized knot and is
// dropped.
inline TwoHandle add_zigzag(const TwoHandle& h, ZigzagDirection dir) {
    require(h.legendrian.has_value(), "NoLegendrianData",
            "handle '" + h.name + "' carries no Legendrian data");
    TwoHandle out = h;
    out.legendrian->tb -= 1;
    out.legendrian->r += dir == ZigzagDirection::up ? 1 : -1;
    out.front.reset();
    return out;
}

// A stored front must describe the declared (tb, r) pair exactly.
inline void validate_fronts(const Handlebody& x) {
    for (const auto& h : x.two_handles) {
        if (!h.front)
            continue;
        require(h.legendrian.has_value(), "NoLegendrianData",
                "handle '" + h.name + "' has a front but no declared Legendrian data");
        LegendrianData computed = tb_rotation(parse_front(*h.front));
        require(computed == *h.legendrian, "FrontMismatch",
                "front of '" + h.name + "' computes (tb, r) = (" +
                    std::to_string(computed.tb) + ", " + std::to_string(computed.r) +
                    "), declared (" + std::to_string(h.legendrian->tb) + ", " +
                    std::to_string(h.legendrian->r) + ")");
    }
}

struct SteinViolation {
    std::string handle;
    long long framing = 0;
    long long tb = 0;
};

struct SteinCheckResult {
    std::vector<SteinViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Eliashberg/Gompf criterion: every 2-handle framed at tb - 1.
inline SteinCheckResult stein_check(const Handlebody& x) {
    validate_fronts(x);
    std::vector<std::string> missing;
    for (const auto& h : x.two_handles)
        if (!h.legendrian)
            missing.push_back(h.name);
    if (!missing.empty()) {
        std::string names;
        for (const auto& n : missing)
            names += (names.empty() ? "" : ", ") + n;
        fail("MissingLegendrianData", "handles without Legendrian data: " + names);
    }
    SteinCheckResult res;
    for (const auto& h : x.two_handles)
        if (h.framing != h.legendrian->tb - 1)
            res.violations.push_back({h.name, h.framing, h.legendrian->tb});
    return res;
}

struct SteinifyDeficit {
    std::string handle;
    long long required_p = 0;  // framing - tb + 1
};

struct SteinifyPlan {
    std::vector<std::pair<std::string, long long>> zigzags;  // handle -> count
    std::vector<SteinifyDeficit> deficits;                   // need a W+ first
};

inline SteinifyPlan plan_steinify(const Handlebody& x) {
    SteinifyPlan plan;
    for (const auto& h : x.two_handles) {
        require(h.legendrian.has_value(), "MissingLegendrianData",
                "handle '" + h.name + "' carries no Legendrian data");
        long long slack = h.legendrian->tb - 1 - h.framing;
        if (slack < 0)
            plan.deficits.push_back({h.name, -slack});
        else if (slack > 0)
            plan.zigzags.emplace_back(h.name, slack);
    }
    return plan;
}

// Adds zig-zags (alternating, starting "down") until every framing equals
// tb - 1. Idempotent. Handles that would need their tb raised instead report
// the W+ coefficient that would fix them.
inline Handlebody steinify(const Handlebody& x) {
    SteinifyPlan plan = plan_steinify(x);
    if (!plan.deficits.empty()) {
        std::string msg = "framing exceeds tb - 1";
        for (const auto& d : plan.deficits)
            msg += "; handle '" + d.handle + "' needs a W+(p) with p = " +
                   std::to_string(d.required_p);
        fail("FramingTooHigh", msg);
    }
    Handlebody out = x;
    for (const auto& [name, count] : plan.zigzags) {
        TwoHandle h = out.two(name);
        for (long long i = 0; i < count; ++i)
            h = add_zigzag(h, i % 2 == 0 ? ZigzagDirection::down : ZigzagDirection::up);
        out.two_handles[out.two_index(name)] = std::move(h);
        out.log("add_zigzag", {{"handle", name}, {"count", std::to_string(count)},
                               {"policy", "alternate-start-down"}});
    }
    return out;
}

}  // namespace nf
