#include "arms/arm_events.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace arms {

namespace {

void check_alternating(const ArmPattern& p) {
    if (p.signs.empty()) throw std::invalid_argument("empty arm pattern");
    for (auto s : p.signs)
        if (s != 1 && s != -1) throw std::invalid_argument("pattern signs must be +-1");
    int j = p.arm_count();
    if (j == 1) return;
    for (int k = 0; k + 1 < j; ++k)
        if (p.signs[k] == p.signs[k + 1])
            throw std::invalid_argument("only alternating arm patterns are supported");
    if (!p.half_plane && p.signs.back() == p.signs.front())
        throw std::invalid_argument("full-plane alternating patterns need even length");
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct AnnulusGeometry {
    AnnulusSpec spec;

    int linf(const Point& p) const {
        int dx = std::abs(p.x - spec.center.x);
        int dy = std::abs(p.y - spec.center.y);
        return std::max(dx, dy);
    }
    bool in_half(const Point& p) const { return !spec.half || p.y >= spec.center.y; }
    bool in_annulus(const Point& p) const {
        if (!in_half(p)) return false;
        int d = linf(p);
        return d > spec.inner && d <= spec.outer;
    }
    bool inner_touch(const Point& p) const {
        for (auto [nx, ny] : {std::pair{p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y - 1},
                              {p.x, p.y + 1}}) {
            Point q{nx, ny};
            if (in_half(q) && linf(q) <= spec.inner) return true;
        }
        return false;
    }
    bool outer_touch(const Point& p) const {
        for (auto [nx, ny] : {std::pair{p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y - 1},
                              {p.x, p.y + 1}}) {
            Point q{nx, ny};
            if (in_half(q) && linf(q) > spec.outer) return true;
        }
        return false;
    }
};

// flat index over the annulus bounding box, -1 outside the annulus
struct AnnulusIndex {
    AnnulusGeometry geo;
    int N, side;
    std::vector<int> idx;            // bounding box -> cell id
    std::vector<Point> cells;        // cell id -> point

    explicit AnnulusIndex(const AnnulusSpec& spec) : geo{spec}, N(spec.outer) {
        side = 2 * N + 1;
        idx.assign(side * side, -1);
        for (int dy = spec.half ? 0 : -N; dy <= N; ++dy) {
            for (int dx = -N; dx <= N; ++dx) {
                Point p{spec.center.x + dx, spec.center.y + dy};
                if (!geo.in_annulus(p)) continue;
                idx[(dy + N) * side + (dx + N)] = (int)cells.size();
                cells.push_back(p);
            }
        }
    }
    int id(const Point& p) const {
        int dx = p.x - geo.spec.center.x, dy = p.y - geo.spec.center.y;
        if (dx < -N || dx > N || dy < -N || dy > N) return -1;
        return idx[(dy + N) * side + (dx + N)];
    }
};

struct ColoredArm {
    int cluster = -1;
    int8_t color = 0;
    int position = -1; // index into the clockwise inner ring enumeration
};

// clusters (crossing only) met along the clockwise inner ring
struct ArmScan {
    std::vector<ColoredArm> seq;
    std::vector<int> roots;                      // per annulus cell
    std::vector<uint8_t> crossing;               // per annulus cell root flag
};

ArmScan scan_annulus(const SpinConfig& config, const AnnulusSpec& spec) {
    const auto& dom = config.domain;
    AnnulusIndex ai(spec);
    if (ai.cells.empty()) throw std::invalid_argument("annulus is empty");
    for (const auto& p : ai.cells)
        if (!dom.contains(p.x, p.y))
            throw std::invalid_argument("annulus exceeds the configuration domain");

    UnionFind uf((int)ai.cells.size());
    for (int i = 0; i < (int)ai.cells.size(); ++i) {
        Point p = ai.cells[i];
        for (auto [nx, ny] : {std::pair{p.x + 1, p.y}, {p.x, p.y + 1}}) {
            int j = ai.id(Point{nx, ny});
            if (j >= 0 && config.at(nx, ny) == config.at(p.x, p.y)) uf.unite(i, j);
        }
    }
    std::vector<uint8_t> touch_in(ai.cells.size(), 0), touch_out(ai.cells.size(), 0);
    for (int i = 0; i < (int)ai.cells.size(); ++i) {
        if (ai.geo.inner_touch(ai.cells[i])) touch_in[uf.find(i)] = 1;
        if (ai.geo.outer_touch(ai.cells[i])) touch_out[uf.find(i)] = 1;
    }
    ArmScan scan;
    scan.roots.resize(ai.cells.size());
    scan.crossing.assign(ai.cells.size(), 0);
    for (int i = 0; i < (int)ai.cells.size(); ++i) {
        scan.roots[i] = uf.find(i);
        if (touch_in[scan.roots[i]] && touch_out[scan.roots[i]]) scan.crossing[i] = 1;
    }
    auto ring = inner_ring_cells(spec);
    for (int pos = 0; pos < (int)ring.size(); ++pos) {
        int i = ai.id(ring[pos]);
        if (i < 0 || !scan.crossing[i]) continue;
        scan.seq.push_back(ColoredArm{scan.roots[i], config.at(ring[pos].x, ring[pos].y), pos});
    }
    return scan;
}

// backtracking matcher over the inner-ring sequence; an optional per-slot
// admissibility predicate supports the landing-constrained variant
using SlotCheck = std::function<bool(int slot, const ColoredArm&)>;

bool match_from(const std::vector<ColoredArm>& seq, const std::vector<int8_t>& signs, int slot,
                size_t pos, size_t limit, std::vector<int>& picked, const SlotCheck& admit) {
    if (slot == (int)signs.size()) return true;
    for (size_t i = pos; i < limit; ++i) {
        const auto& arm = seq[i % seq.size()];
        if (arm.color != signs[slot]) continue;
        bool dup = false;
        for (int c = 0; c < slot; ++c)
            if (signs[c] == signs[slot] && picked[c] == arm.cluster) dup = true;
        if (dup) continue;
        if (admit && !admit(slot, arm)) continue;
        picked[slot] = arm.cluster;
        if (match_from(seq, signs, slot + 1, i + 1, limit, picked, admit)) return true;
    }
    return false;
}

bool match_pattern(const std::vector<ColoredArm>& seq, const ArmPattern& pattern,
                   const SlotCheck& admit) {
    if (seq.empty()) return false;
    std::vector<int> picked(pattern.signs.size(), -1);
    if (pattern.half_plane)
        return match_from(seq, pattern.signs, 0, 0, seq.size(), picked, admit);
    // cyclic: anchor the first slot at every position, remaining slots wrap
    for (size_t a = 0; a < seq.size(); ++a) {
        if (seq[a].color != pattern.signs[0]) continue;
        if (admit && !admit(0, seq[a])) continue;
        picked[0] = seq[a].cluster;
        if (match_from(seq, pattern.signs, 1, a + 1, a + seq.size(), picked, admit)) return true;
    }
    return false;
}

} // namespace

ArmPattern ArmPattern::full(std::vector<int8_t> signs) {
    ArmPattern p{std::move(signs), false};
    check_alternating(p);
    return p;
}

ArmPattern ArmPattern::half(std::vector<int8_t> signs) {
    ArmPattern p{std::move(signs), true};
    check_alternating(p);
    return p;
}

ArmPattern ArmPattern::alternating(int length, int8_t first, bool half_plane) {
    std::vector<int8_t> s(length);
    for (int i = 0; i < length; ++i) s[i] = (i % 2 == 0) ? first : (int8_t)-first;
    return half_plane ? half(std::move(s)) : full(std::move(s));
}

std::vector<Point> inner_ring_cells(const AnnulusSpec& a) {
    std::vector<Point> out;
    int n = a.inner, cx = a.center.x, cy = a.center.y;
    auto push = [&](int dx, int dy) { out.push_back(Point{cx + dx, cy + dy}); };
    if (a.half) {
        for (int dy = 0; dy <= n; ++dy) push(-(n + 1), dy);       // left, upward
        for (int dx = -n; dx <= n; ++dx) push(dx, n + 1);         // top, left->right
        for (int dy = n; dy >= 0; --dy) push(n + 1, dy);          // right, downward
    } else {
        for (int dx = -n; dx <= n; ++dx) push(dx, n + 1);         // top, left->right
        for (int dy = n; dy >= -n; --dy) push(n + 1, dy);         // right, downward
        for (int dx = n; dx >= -n; --dx) push(dx, -(n + 1));      // bottom, right->left
        for (int dy = -n; dy <= n; ++dy) push(-(n + 1), dy);      // left, upward
    }
    return out;
}

bool detect_arms(const SpinConfig& config, const AnnulusSpec& annulus, const ArmPattern& pattern) {
    check_alternating(pattern);
    if (pattern.half_plane != annulus.half)
        throw std::invalid_argument("pattern/annulus half-plane mismatch");
    if (annulus.inner < 0 || annulus.inner >= annulus.outer)
        throw std::invalid_argument("annulus needs 0 <= inner < outer");
    auto scan = scan_annulus(config, annulus);
    return match_pattern(scan.seq, pattern, nullptr);
}

void LandingSequence::validate() const {
    double L = half_plane ? 4.0 : 8.0;
    if (delta <= 0 || intervals.empty())
        throw std::invalid_argument("landing sequence needs delta > 0 and intervals");
    std::vector<double> corners = half_plane ? std::vector<double>{0, 1, 3, 4}
                                             : std::vector<double>{0, 2, 4, 6};
    for (size_t k = 0; k < intervals.size(); ++k) {
        const auto& iv = intervals[k];
        if (!(iv.lo < iv.hi) || iv.lo < 0 || iv.hi > L)
            throw std::invalid_argument("landing interval out of range");
        if (iv.hi - iv.lo < 2 * delta)
            throw std::invalid_argument("landing interval shorter than 2 delta");
        for (double c : corners) {
            double d = std::min(std::abs(iv.lo - c), std::abs(iv.hi - c));
            if (iv.lo <= c && c <= iv.hi) d = 0;
            if (!half_plane) d = std::min(d, L - std::max(std::abs(iv.lo - c), std::abs(iv.hi - c)));
            if (d < 2 * delta) throw std::invalid_argument("landing interval too close to a corner");
        }
        if (k > 0 && intervals[k].lo - intervals[k - 1].hi < 2 * delta)
            throw std::invalid_argument("landing intervals not 2 delta separated");
    }
    if (!half_plane && intervals.size() > 1) {
        double wrap = intervals.front().lo + L - intervals.back().hi;
        if (wrap < 2 * delta)
            throw std::invalid_argument("landing intervals not 2 delta separated (wrap)");
    }
}

namespace {

// clockwise arc-length parameter of a point on the square boundary
double square_param(double qx, double qy, bool half) {
    double m = std::max(std::abs(qx), std::abs(qy));
    if (m > 0) { qx /= m; qy /= m; }
    if (half) {
        if (qx <= -0.999999) return std::clamp(qy, 0.0, 1.0);
        if (qy >= 0.999999) return 1 + (qx + 1);
        return 3 + (1 - std::clamp(qy, 0.0, 1.0));
    }
    if (qy >= 0.999999) return qx + 1;
    if (qx >= 0.999999) return 2 + (1 - qy);
    if (qy <= -0.999999) return 4 + (1 - qx);
    return 6 + (qy + 1);
}

std::pair<double, double> square_point(double t, bool half) {
    if (half) {
        if (t <= 1) return {-1.0, t};
        if (t <= 3) return {t - 2, 1.0};
        return {1.0, 4 - t};
    }
    t = std::fmod(std::fmod(t, 8.0) + 8.0, 8.0);
    if (t <= 2) return {t - 1, 1.0};
    if (t <= 4) return {1.0, 3 - t};
    if (t <= 6) return {5 - t, -1.0};
    return {-1.0, t - 7};
}

bool param_in_interval(double t, const LandingSequence::Interval& iv, double pad, bool half) {
    double lo = iv.lo - pad, hi = iv.hi + pad;
    if (half) return t >= lo && t <= hi;
    double L = 8.0;
    double tt = std::fmod(std::fmod(t, L) + L, L);
    for (double shift : {-L, 0.0, L})
        if (tt >= lo + shift && tt <= hi + shift) return true;
    return false;
}

} // namespace

std::pair<double, double> LandingSequence::center_of(int k) const {
    const auto& iv = intervals.at(k);
    return square_point((iv.lo + iv.hi) / 2, half_plane);
}

bool detect_arms_separated(const SpinConfig& config, const AnnulusSpec& annulus,
                           const ArmPattern& pattern, const LandingSequence& landing_in,
                           const LandingSequence& landing_out) {
    check_alternating(pattern);
    if (pattern.half_plane != annulus.half)
        throw std::invalid_argument("pattern/annulus half-plane mismatch");
    if ((int)landing_in.intervals.size() != pattern.arm_count() ||
        (int)landing_out.intervals.size() != pattern.arm_count())
        throw std::invalid_argument("landing sequence length must match the pattern");
    if (landing_in.half_plane != annulus.half || landing_out.half_plane != annulus.half)
        throw std::invalid_argument("landing sequence half-plane mismatch");
    landing_in.validate();
    landing_out.validate();

    const auto& dom = config.domain;
    AnnulusIndex ai(annulus);
    auto scan = scan_annulus(config, annulus);
    int n = annulus.inner + 1, N = annulus.outer;
    double dn = landing_in.delta, dN = landing_out.delta;

    // per-cluster outer landing positions
    std::map<int, std::vector<int>> outer_cells; // root -> cell ids with outer touch
    for (int i = 0; i < (int)ai.cells.size(); ++i)
        if (scan.crossing[i] && ai.geo.outer_touch(ai.cells[i]))
            outer_cells[scan.roots[i]].push_back(i);

    // BFS of color `color` inside a lattice box, from seed cells, until the
    // predicate holds for some reached cell
    auto color_reach = [&](Point box_center, int box_radius, int8_t color,
                           const std::vector<Point>& seeds,
                           const std::function<bool(const Point&)>& goal) {
        auto inside_box = [&](const Point& p) {
            return std::abs(p.x - box_center.x) <= box_radius &&
                   std::abs(p.y - box_center.y) <= box_radius &&
                   (!annulus.half || p.y >= annulus.center.y);
        };
        std::map<std::pair<int, int>, bool> seen;
        std::vector<Point> stack;
        for (const auto& s : seeds)
            if (inside_box(s) && dom.contains(s.x, s.y) && config.at(s.x, s.y) == color) {
                stack.push_back(s);
                seen[{s.x, s.y}] = true;
            }
        while (!stack.empty()) {
            Point p = stack.back();
            stack.pop_back();
            if (goal(p)) return true;
            for (auto [nx, ny] : {std::pair{p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y - 1},
                                  {p.x, p.y + 1}}) {
                Point q{nx, ny};
                if (!inside_box(q) || !dom.contains(q.x, q.y) || seen.count({q.x, q.y})) continue;
                if (config.at(q.x, q.y) != color) continue;
                seen[{q.x, q.y}] = true;
                stack.push_back(q);
            }
        }
        return false;
    };

    auto ring = inner_ring_cells(annulus);
    auto linf = [&](const Point& p) {
        return std::max(std::abs(p.x - annulus.center.x), std::abs(p.y - annulus.center.y));
    };
    std::map<std::pair<int, int>, bool> slot_cache; // (slot, inner position) -> admissible

    SlotCheck admit = [&](int slot, const ColoredArm& arm) -> bool {
        auto key = std::make_pair(slot, arm.position);
        auto it = slot_cache.find(key);
        if (it != slot_cache.end()) return it->second;
        bool ok = false;
        Point pc = ring[arm.position];
        double t_in = square_param(double(pc.x - annulus.center.x) / n,
                                   double(pc.y - annulus.center.y) / n, annulus.half);
        if (param_in_interval(t_in, landing_in.intervals[slot], 1.0 / n, annulus.half)) {
            // inward extension: reach depth n - delta*n inside the box at n z(I_k)
            auto [zx, zy] = landing_in.center_of(slot);
            Point ibox{annulus.center.x + (int)std::lround(zx * n),
                       annulus.center.y + (int)std::lround(zy * n)};
            int ir = (int)std::ceil(dn * n);
            int depth = (int)std::floor(n - dn * n + 1e-9);
            bool in_ext = color_reach(ibox, ir, arm.color, {pc},
                                      [&](const Point& p) { return linf(p) <= depth; });
            // outer landing: some outer cell of the cluster in the k-th interval
            // from which the outward extension reaches radius N + delta*N
            auto [wx, wy] = landing_out.center_of(slot);
            Point obox{annulus.center.x + (int)std::lround(wx * N),
                       annulus.center.y + (int)std::lround(wy * N)};
            int orr = (int)std::ceil(dN * N);
            int otarget = (int)std::ceil(N + dN * N - 1e-9);
            for (int i : outer_cells[arm.cluster]) {
                if (!in_ext) break;
                Point po = ai.cells[i];
                double t_out = square_param(double(po.x - annulus.center.x) / N,
                                            double(po.y - annulus.center.y) / N, annulus.half);
                if (!param_in_interval(t_out, landing_out.intervals[slot], 1.0 / N, annulus.half))
                    continue;
                if (color_reach(obox, orr, arm.color, {po},
                                [&](const Point& p) { return linf(p) >= otarget; })) {
                    ok = true;
                    break;
                }
            }
        }
        slot_cache[key] = ok;
        return ok;
    };

    return match_pattern(scan.seq, pattern, admit);
}

bool crossing_event(const SpinConfig& config, const LatticeDomain& quad) {
    if (quad.shape != Shape::TopologicalRectangle)
        throw std::invalid_argument("crossing_event needs a topological rectangle");
    const auto& dom = config.domain;
    if (dom.x0 != quad.x0 || dom.y0 != quad.y0 || dom.w != quad.w || dom.h != quad.h)
        throw std::invalid_argument("configuration domain does not match the quad");
    auto [a, b, c, d] = quad.marked;
    int rs = quad.ring_size();
    std::vector<uint8_t> seen(dom.size(), 0);
    std::vector<int> stack;
    auto arc_cells = [&](int from, int to) {
        std::vector<Point> cells;
        for (int i = from; i != to; i = (i + 1) % rs) cells.push_back(quad.ring_at(i));
        return cells;
    };
    // seed: plus cells adjacent to arc (ab)
    for (const auto& bp : arc_cells(a, b)) {
        for (auto [nx, ny] : {std::pair{bp.x - 1, bp.y}, {bp.x + 1, bp.y}, {bp.x, bp.y - 1},
                              {bp.x, bp.y + 1}}) {
            if (!dom.contains(nx, ny) || config.at(nx, ny) <= 0) continue;
            int i = dom.cell_index(nx, ny);
            if (!seen[i]) {
                seen[i] = 1;
                stack.push_back(i);
            }
        }
    }
    // goal: adjacency to arc (cd)
    std::vector<uint8_t> goal_ring(rs, 0);
    for (int i = c; i != d; i = (i + 1) % rs) goal_ring[i] = 1;
    auto is_goal = [&](const Point& p) {
        for (auto [nx, ny] : {std::pair{p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y - 1},
                              {p.x, p.y + 1}}) {
            int ri = dom.ring_index(Point{nx, ny});
            if (ri >= 0 && goal_ring[ri]) return true;
        }
        return false;
    };
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        Point p = dom.cell_at(i);
        if (is_goal(p)) return true;
        for (auto [nx, ny] : {std::pair{p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y - 1},
                              {p.x, p.y + 1}}) {
            if (!dom.contains(nx, ny) || config.at(nx, ny) <= 0) continue;
            int ni = dom.cell_index(nx, ny);
            if (!seen[ni]) {
                seen[ni] = 1;
                stack.push_back(ni);
            }
        }
    }
    return false;
}

int min_scale(const ArmPattern& pattern) {
    check_alternating(pattern);
    int j = pattern.arm_count();
    for (int n = 1; n <= 64; ++n) {
        int N = 2 * n;
        LatticeDomain dom =
            pattern.half_plane ? LatticeDomain::half_box(N) : LatticeDomain::box(N);
        auto bc = BoundaryCondition::uniform(dom, SpinState::Free);
        SpinConfig c = make_config(dom, bc, -1);
        constexpr double pi = 3.14159265358979323846;
        for (int y = dom.y0; y < dom.y0 + dom.h; ++y) {
            for (int x = dom.x0; x < dom.x0 + dom.w; ++x) {
                int sector;
                if (pattern.half_plane) {
                    double u = pi - std::atan2((double)std::max(y, 0) + 0.25, (double)x);
                    sector = std::clamp((int)(u / (pi / j)), 0, j - 1);
                } else {
                    double a = std::atan2((double)x, (double)y); // clockwise from north
                    if (a < 0) a += 2 * pi;
                    sector = std::clamp((int)(a / (2 * pi / j)), 0, j - 1);
                }
                c.at(x, y) = pattern.signs[sector];
            }
        }
        AnnulusSpec spec{Point{0, 0}, n, N, pattern.half_plane};
        if (detect_arms(c, spec, pattern)) return n;
    }
    throw std::logic_error("no satisfiable scale found up to n=64");
}

} // namespace arms
