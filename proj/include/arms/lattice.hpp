#pragma once
// Finite rectangular subdomains of Z^2, boundary conditions on the ring of
// outside sites, and spin configurations.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace arms {

struct Point {
    int x = 0, y = 0;
    bool operator==(const Point&) const = default;
};

enum class SpinState : int8_t { Minus = -1, Free = 0, Plus = 1 };

enum class Shape { Box, HalfBox, Rectangle, TopologicalRectangle };

// every shape is geometrically a rectangle of cells [x0, x0+w) x [y0, y0+h);
// Box and HalfBox fix the position convention Lambda_n = [-n,n]^2 and
// Lambda^+_n = [-n,n] x [0,n]
struct LatticeDomain {
    Shape shape = Shape::Rectangle;
    int x0 = 0, y0 = 0, w = 1, h = 1;
    std::array<int, 4> marked{-1, -1, -1, -1}; // ring indices a,b,c,d (ccw) if topological

    static LatticeDomain box(int n);
    static LatticeDomain half_box(int n);
    static LatticeDomain rectangle(int w, int h);
    // marked points given as ring indices, counterclockwise order required
    static LatticeDomain topological_rectangle(int w, int h, int a, int b, int c, int d);

    int size() const { return w * h; }
    bool contains(int x, int y) const {
        return x >= x0 && x < x0 + w && y >= y0 && y < y0 + h;
    }
    int cell_index(int x, int y) const { return (y - y0) * w + (x - x0); }
    Point cell_at(int idx) const { return Point{x0 + idx % w, y0 + idx / w}; }

    // boundary ring: the outside sites 4-adjacent to the domain, listed
    // counterclockwise starting at (x0, y0-1); length 2(w+h)
    int ring_size() const { return 2 * (w + h); }
    Point ring_at(int i) const;
    int ring_index(const Point& p) const; // -1 if not on the ring
};

struct BoundaryCondition {
    std::vector<SpinState> ring;             // state per ring position
    int a = -1, b = -1;                      // Dobrushin arc-change ring indices

    static BoundaryCondition uniform(const LatticeDomain& dom, SpinState s);
    // arc [a,b) gets s_ab, arc [b,a) gets s_ba (ring indices, ccw)
    static BoundaryCondition dobrushin(const LatticeDomain& dom, int a, int b,
                                       SpinState s_ab, SpinState s_ba);
};

struct SpinConfig {
    LatticeDomain domain;
    BoundaryCondition bc;
    std::vector<int8_t> s; // interior spins, indexed by cell_index

    int8_t at(int x, int y) const { return s[domain.cell_index(x, y)]; }
    int8_t& at(int x, int y) { return s[domain.cell_index(x, y)]; }

    // interior spin, fixed boundary spin, or 0 for free/outside
    int spin_or_zero(int x, int y) const {
        if (domain.contains(x, y)) return s[domain.cell_index(x, y)];
        int ri = domain.ring_index(Point{x, y});
        return ri >= 0 ? (int)bc.ring[ri] : 0;
    }
};

SpinConfig make_config(const LatticeDomain& dom, const BoundaryCondition& bc, int8_t fill);

} // namespace arms
