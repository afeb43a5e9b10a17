#pragma once
// Alternating arm events in annuli and semi-annuli: pattern detection via
// crossing clusters, delta-separated landing variants, rectangle crossings,
// and the smallest satisfiable scale.

#include "arms/lattice.hpp"

namespace arms {

// sign sequence in clockwise order; full-plane patterns are cyclic (two
// patterns equal iff cyclically equivalent), half-plane patterns linear.
// Only alternating patterns (plus single arms) are supported: the
// cluster-based detector is an exact reduction only for those.
struct ArmPattern {
    std::vector<int8_t> signs; // +1 / -1
    bool half_plane = false;

    static ArmPattern full(std::vector<int8_t> signs);
    static ArmPattern half(std::vector<int8_t> signs);
    // alternating pattern of given length starting from `first`
    static ArmPattern alternating(int length, int8_t first, bool half_plane);
    int arm_count() const { return (int)signs.size(); }
};

struct AnnulusSpec {
    Point center;
    int inner = 0, outer = 0; // hole Lambda_inner, ambient Lambda_outer
    bool half = false;        // Lambda^+ convention: y >= center.y
};

// true iff there are vertex-disjoint monochromatic 4-connected arms of the
// prescribed colors crossing the annulus with inner endpoints in the
// prescribed clockwise (cyclic if full-plane) order
bool detect_arms(const SpinConfig& config, const AnnulusSpec& annulus, const ArmPattern& pattern);

// landing intervals on the boundary of the unit square Q = [-1,1]^2 (full)
// or of the half square [-1,1] x [0,1] without its diameter (half), in the
// clockwise arc-length parameter; full: t in [0,8) from the top-left corner
// rightwards; half: t in [0,4] from (-1,0) upwards over the top to (1,0)
struct LandingSequence {
    struct Interval {
        double lo = 0, hi = 0; // arc-length parameter, lo < hi
    };
    std::vector<Interval> intervals;
    double delta = 0.125;
    bool half_plane = false;

    void validate() const; // disjoint, clockwise, 2*delta separation rules
    std::pair<double, double> center_of(int k) const; // z(I_k) on the square
};

// detect_arms restricted to arms landing in their intervals and
// omega_k-connectable to depth delta*n inward (resp. delta*N outward)
// inside the landing boxes; lattice boxes are rounded outward
bool detect_arms_separated(const SpinConfig& config, const AnnulusSpec& annulus,
                           const ArmPattern& pattern, const LandingSequence& landing_in,
                           const LandingSequence& landing_out);

// plus-crossing between arcs (ab) and (cd) of a topological rectangle
bool crossing_event(const SpinConfig& config, const LatticeDomain& quad);

// smallest n such that the event in the annulus (n, 2n) is satisfiable,
// found constructively (sector-colored witness configurations)
int min_scale(const ArmPattern& pattern);

// the inner-boundary cells of the annulus in clockwise order (exposed for
// tests and landing logic)
std::vector<Point> inner_ring_cells(const AnnulusSpec& a);

} // namespace arms
