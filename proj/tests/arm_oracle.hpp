#pragma once
// Exhaustive vertex-disjoint path-system oracle for arm events, independent
// of the library detector; shared by the unit tests and the acceptance suite.

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "arms/arm_events.hpp"

namespace arm_oracle {

using namespace arms;

constexpr double kPi = 3.14159265358979323846;

// ---------- exhaustive disjoint-path-system oracle (independent) ----------

struct Landing {
    // same geometric conventions as the library: clockwise arc-length on the
    // square of radius inner+1 (inner) / outer (outer), padded by one lattice
    // unit, boxes rounded outward
    const LandingSequence* in = nullptr;
    const LandingSequence* out = nullptr;
};

struct Oracle {
    const SpinConfig& c;
    AnnulusSpec spec;
    ArmPattern pat;
    Landing landing;

    std::vector<Point> ring; // endpoint candidates, clockwise
    std::set<std::pair<int, int>> used;

    int linf(const Point& p) const {
        return std::max(std::abs(p.x - spec.center.x), std::abs(p.y - spec.center.y));
    }
    bool in_half(const Point& p) const { return !spec.half || p.y >= spec.center.y; }
    bool in_annulus(const Point& p) const {
        return in_half(p) && linf(p) > spec.inner && linf(p) <= spec.outer;
    }
    bool hole_adjacent(const Point& p) const {
        for (auto [nx, ny] : {std::pair{p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y - 1},
                              {p.x, p.y + 1}})
            if (in_half({nx, ny}) && linf({nx, ny}) <= spec.inner) return true;
        return false;
    }
    bool outer_touch(const Point& p) const {
        for (auto [nx, ny] : {std::pair{p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y - 1},
                              {p.x, p.y + 1}})
            if (in_half({nx, ny}) && linf({nx, ny}) > spec.outer) return true;
        return false;
    }

    double clockwise_key(const Point& p) const {
        double dx = p.x - spec.center.x, dy = p.y - spec.center.y;
        if (spec.half) return kPi - std::atan2(dy, dx);
        double a = std::atan2(dx, dy); // clockwise from north
        return a < 0 ? a + 2 * kPi : a;
    }

    double param_of(const Point& p, double r) const {
        double qx = (p.x - spec.center.x) / r, qy = (p.y - spec.center.y) / r;
        double m = std::max(std::abs(qx), std::abs(qy));
        if (m > 0) { qx /= m; qy /= m; }
        if (spec.half) {
            if (qx <= -0.999999) return std::clamp(qy, 0.0, 1.0);
            if (qy >= 0.999999) return 1 + (qx + 1);
            return 3 + (1 - std::clamp(qy, 0.0, 1.0));
        }
        if (qy >= 0.999999) return qx + 1;
        if (qx >= 0.999999) return 2 + (1 - qy);
        if (qy <= -0.999999) return 4 + (1 - qx);
        return 6 + (qy + 1);
    }
    bool in_interval(double t, const LandingSequence::Interval& iv, double pad) const {
        if (spec.half) return t >= iv.lo - pad && t <= iv.hi + pad;
        double tt = std::fmod(std::fmod(t, 8.0) + 8.0, 8.0);
        for (double s : {-8.0, 0.0, 8.0})
            if (tt >= iv.lo - pad + s && tt <= iv.hi + pad + s) return true;
        return false;
    }

    bool color_reach(Point box_center, int box_radius, int8_t color, Point seed,
                     bool inward, int target) const {
        const auto& dom = c.domain;
        auto inside = [&](const Point& p) {
            return std::abs(p.x - box_center.x) <= box_radius &&
                   std::abs(p.y - box_center.y) <= box_radius && in_half(p);
        };
        if (!inside(seed) || !dom.contains(seed.x, seed.y) || c.at(seed.x, seed.y) != color)
            return false;
        std::set<std::pair<int, int>> seen{{seed.x, seed.y}};
        std::vector<Point> stack{seed};
        while (!stack.empty()) {
            Point p = stack.back();
            stack.pop_back();
            if (inward ? linf(p) <= target : linf(p) >= target) return true;
            for (auto [nx, ny] : {std::pair{p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y - 1},
                                  {p.x, p.y + 1}}) {
                Point q{nx, ny};
                if (!inside(q) || !dom.contains(q.x, q.y) || seen.count({q.x, q.y})) continue;
                if (c.at(q.x, q.y) != color) continue;
                seen.insert({q.x, q.y});
                stack.push_back(q);
            }
        }
        return false;
    }

    bool extensions_ok(int slot, const Point& e, const Point& o) const {
        if (!landing.in) return true;
        double rin = spec.inner + 1.0, rout = spec.outer;
        double dn = landing.in->delta, dN = landing.out->delta;
        auto [zx, zy] = landing.in->center_of(slot);
        Point ibox{spec.center.x + (int)std::lround(zx * rin),
                   spec.center.y + (int)std::lround(zy * rin)};
        if (!color_reach(ibox, (int)std::ceil(dn * rin), pat.signs[slot], e, true,
                         (int)std::floor(rin - dn * rin + 1e-9)))
            return false;
        auto [wx, wy] = landing.out->center_of(slot);
        Point obox{spec.center.x + (int)std::lround(wx * rout),
                   spec.center.y + (int)std::lround(wy * rout)};
        return color_reach(obox, (int)std::ceil(dN * rout), pat.signs[slot], o, false,
                           (int)std::ceil(rout + dN * rout - 1e-9));
    }

    bool arm_done_here(int slot, const Point& p) const {
        if (!outer_touch(p)) return false;
        if (!landing.out) return true;
        return in_interval(param_of(p, (double)spec.outer), landing.out->intervals[slot],
                           1.0 / spec.outer);
    }

    bool dfs_path(int slot, const Point& p, const Point& e,
                  const std::vector<Point>& endpoints) {
        used.insert({p.x, p.y});
        bool ok = false;
        if (arm_done_here(slot, p))
            ok = extensions_ok(slot, e, p) && place_arm(slot + 1, endpoints);
        // without landing constraints, stopping at the first outer cell is WLOG
        // (a longer path only uses more cells); with them, the arm may need to
        // continue past a failed landing toward another admissible outer cell
        if (!ok && (landing.in || !arm_done_here(slot, p))) {
            for (auto [nx, ny] : {std::pair{p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y - 1},
                                  {p.x, p.y + 1}}) {
                Point q{nx, ny};
                if (!in_annulus(q) || used.count({q.x, q.y})) continue;
                if (c.at(q.x, q.y) != pat.signs[slot]) continue;
                if (dfs_path(slot, q, e, endpoints)) {
                    ok = true;
                    break;
                }
            }
        }
        if (!ok) used.erase({p.x, p.y});
        return ok;
    }

    bool place_arm(int slot, const std::vector<Point>& endpoints) {
        if (slot == (int)endpoints.size()) return true;
        const Point& e = endpoints[slot];
        if (used.count({e.x, e.y}) || c.at(e.x, e.y) != pat.signs[slot]) return false;
        if (landing.in &&
            !in_interval(param_of(e, spec.inner + 1.0), landing.in->intervals[slot],
                         1.0 / (spec.inner + 1.0)))
            return false;
        return dfs_path(slot, e, e, endpoints);
    }

    bool tuple_search(std::vector<int>& pick, int slot, size_t pos, size_t limit) {
        int j = pat.arm_count();
        if (slot == j) {
            std::vector<Point> endpoints;
            for (int k = 0; k < j; ++k) endpoints.push_back(ring[pick[k] % ring.size()]);
            used.clear();
            return place_arm(0, endpoints);
        }
        for (size_t i = pos; i < limit; ++i) {
            pick[slot] = (int)i;
            if (tuple_search(pick, slot + 1, i + 1, limit)) return true;
        }
        return false;
    }

    bool run() {
        ring.clear();
        const auto& dom = c.domain;
        for (int y = dom.y0; y < dom.y0 + dom.h; ++y)
            for (int x = dom.x0; x < dom.x0 + dom.w; ++x) {
                Point p{x, y};
                if (in_annulus(p) && hole_adjacent(p)) ring.push_back(p);
            }
        std::sort(ring.begin(), ring.end(), [&](const Point& a, const Point& b) {
            return clockwise_key(a) < clockwise_key(b);
        });
        if (ring.empty()) return false;
        std::vector<int> pick(pat.arm_count());
        if (pat.half_plane) return tuple_search(pick, 0, 0, ring.size());
        for (size_t a = 0; a < ring.size(); ++a) {
            pick[0] = (int)a;
            if (tuple_search(pick, 1, a + 1, a + ring.size())) return true;
        }
        return false;
    }
};

inline bool oracle_detect(const SpinConfig& c, const AnnulusSpec& spec, const ArmPattern& pat) {
    Oracle o{c, spec, pat, {}};
    return o.run();
}

inline bool oracle_detect_separated(const SpinConfig& c, const AnnulusSpec& spec, const ArmPattern& pat,
                             const LandingSequence& in, const LandingSequence& out) {
    Oracle o{c, spec, pat, {&in, &out}};
    return o.run();
}

} // namespace arm_oracle
