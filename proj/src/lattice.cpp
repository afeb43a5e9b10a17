#include "arms/lattice.hpp"

namespace arms {

LatticeDomain LatticeDomain::box(int n) {
    if (n < 0) throw std::invalid_argument("box extent must be >= 0");
    LatticeDomain d;
    d.shape = Shape::Box;
    d.x0 = -n;
    d.y0 = -n;
    d.w = 2 * n + 1;
    d.h = 2 * n + 1;
    return d;
}

LatticeDomain LatticeDomain::half_box(int n) {
    if (n < 0) throw std::invalid_argument("half-box extent must be >= 0");
    LatticeDomain d;
    d.shape = Shape::HalfBox;
    d.x0 = -n;
    d.y0 = 0;
    d.w = 2 * n + 1;
    d.h = n + 1;
    return d;
}

LatticeDomain LatticeDomain::rectangle(int w, int h) {
    if (w < 1 || h < 1) throw std::invalid_argument("rectangle extents must be >= 1");
    LatticeDomain d;
    d.shape = Shape::Rectangle;
    d.w = w;
    d.h = h;
    return d;
}

LatticeDomain LatticeDomain::topological_rectangle(int w, int h, int a, int b, int c, int dd) {
    LatticeDomain d = rectangle(w, h);
    d.shape = Shape::TopologicalRectangle;
    int rs = d.ring_size();
    for (int idx : {a, b, c, dd})
        if (idx < 0 || idx >= rs)
            throw std::invalid_argument("marked point off the boundary ring");
    // counterclockwise order up to rotation: the gaps around the ring from a
    // must visit b, c, d in increasing cyclic position
    int gb = (b - a + rs) % rs, gc = (c - a + rs) % rs, gd = (dd - a + rs) % rs;
    if (!(gb > 0 && gc > gb && gd > gc))
        throw std::invalid_argument("marked points not in counterclockwise order");
    d.marked = {a, b, c, dd};
    return d;
}

Point LatticeDomain::ring_at(int i) const {
    int rs = ring_size();
    i = ((i % rs) + rs) % rs;
    if (i < w) return Point{x0 + i, y0 - 1};                    // bottom, left->right
    i -= w;
    if (i < h) return Point{x0 + w, y0 + i};                    // right, bottom->top
    i -= h;
    if (i < w) return Point{x0 + w - 1 - i, y0 + h};            // top, right->left
    i -= w;
    return Point{x0 - 1, y0 + h - 1 - i};                       // left, top->bottom
}

int LatticeDomain::ring_index(const Point& p) const {
    if (p.y == y0 - 1 && p.x >= x0 && p.x < x0 + w) return p.x - x0;
    if (p.x == x0 + w && p.y >= y0 && p.y < y0 + h) return w + (p.y - y0);
    if (p.y == y0 + h && p.x >= x0 && p.x < x0 + w) return w + h + (x0 + w - 1 - p.x);
    if (p.x == x0 - 1 && p.y >= y0 && p.y < y0 + h) return 2 * w + h + (y0 + h - 1 - p.y);
    return -1;
}

BoundaryCondition BoundaryCondition::uniform(const LatticeDomain& dom, SpinState s) {
    BoundaryCondition bc;
    bc.ring.assign(dom.ring_size(), s);
    return bc;
}

BoundaryCondition BoundaryCondition::dobrushin(const LatticeDomain& dom, int a, int b,
                                               SpinState s_ab, SpinState s_ba) {
    int rs = dom.ring_size();
    if (a < 0 || a >= rs || b < 0 || b >= rs || a == b)
        throw std::invalid_argument("Dobrushin marked points must be distinct ring indices");
    BoundaryCondition bc;
    bc.ring.assign(rs, s_ba);
    for (int i = a; i != b; i = (i + 1) % rs) bc.ring[i] = s_ab;
    bc.a = a;
    bc.b = b;
    return bc;
}

SpinConfig make_config(const LatticeDomain& dom, const BoundaryCondition& bc, int8_t fill) {
    if ((int)bc.ring.size() != dom.ring_size())
        throw std::invalid_argument("boundary condition does not match domain ring");
    SpinConfig c;
    c.domain = dom;
    c.bc = bc;
    c.s.assign(dom.size(), fill);
    return c;
}

} // namespace arms
