#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace arms {

// thrown when the requested event scale cannot be resolved by the step size
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ForcePoint {
    double x = 0;
    double rho = 0;
};

// chordal Loewner evolution driven by sqrt(kappa) B_t plus force-point drifts
struct SleConfig {
    double kappa = 3.0;
    std::vector<ForcePoint> left;  // 0 >= x1 >= x2 >= ...
    std::vector<ForcePoint> right; // 0 <= x1 <= x2 <= ...
    double dt = 1e-3;              // base step; shrinks adaptively near targets
    double horizon = 1.0;          // capacity-time budget per sample
    uint64_t seed = 0;
    bool zero_noise = false;       // deterministic degenerate driving (testing)

    void validate() const;
};

struct DrivingPath {
    double dt = 0;
    std::vector<double> t;
    std::vector<double> w;
    std::vector<std::vector<double>> v_left;  // v_left[i][k]: i-th left image at t_k
    std::vector<std::vector<double>> v_right;
    bool halted = false; // continuation threshold reached (weight sum <= -2)
    double halt_time = 0;

    int steps() const { return (int)t.size(); }
};

// Euler-Maruyama path of (W, V) on the uniform grid t_k = k*dt, with
// adaptive substepping near force-point collisions
DrivingPath drive(const SleConfig& config, uint64_t stream = 0);

struct TrackedPoint {
    std::complex<double> z0;
    std::vector<std::complex<double>> g;        // g_{t_k}(z)
    std::vector<std::complex<double>> log_deriv; // log g_{t_k}'(z)
    std::optional<double> swallow_time;

    double gap(int k, const DrivingPath& p) const { return g[k].real() - p.w[k]; }
};

// integrates dg = 2dt/(g - W) and dlog g' = -2dt/(g - W)^2 along a recorded
// path; swallowed boundary points are continued as the image of the hull edge
TrackedPoint evolve_point(const DrivingPath& driving, std::complex<double> z);

struct TraceCurve {
    std::vector<std::complex<double>> pts; // eta(t_k), k = 0..n
    bool resolution_warning = false;       // driving jumps large vs sqrt(dt)
};

// backward composition of per-step slit maps, deterministic given the driving
TraceCurve trace(const DrivingPath& driving);

enum class CrossingVariant { AlphaOdd, AlphaEven, BetaOdd, BetaEven };

struct IndicatorResult {
    bool hit = false;
    double stop_time = 0; // time of the final required stopping time when hit
    bool halted = false;  // continuation threshold reached before completion
    // g_sigma(x) - W_sigma at the first hit of B(y,r), for the hull inequality
    double gap_at_first_left_hit = std::numeric_limits<double>::quiet_NaN();
    // smallest uniformized distance to the current x-side target (diagnostic)
    double min_dist = std::numeric_limits<double>::infinity();
};

// alternating crossings between B(x,eps) and B(y,r): k interleaved stopping
// times completed before x is swallowed. AlphaOdd/BetaEven sequences start at
// the x-side, AlphaEven/BetaOdd at the y-side; k counts total crossings.
IndicatorResult boundary_crossing_indicator(const SleConfig& config, double eps, double x,
                                            double y, double r, CrossingVariant variant,
                                            int k, uint64_t stream = 0);

// interior 2j-arm event: j approaches of B(z,eps) interleaved with j-1 hits of
// B(y,r). j=1 is the plain hit of B(z,eps) (conformal-radius threshold).
IndicatorResult interior_event_indicator(const SleConfig& config, double eps,
                                         std::complex<double> z, double y, double r,
                                         int j, uint64_t stream = 0);

// three-force-point martingale observable M_t evaluated from tracked points at
// a recorded step; nullopt once a force point is swallowed
std::optional<double> martingale_observable(double kappa, double rho_l, double rho_1,
                                            double rho_2, const DrivingPath& path,
                                            const TrackedPoint& xl, const TrackedPoint& x1r,
                                            const TrackedPoint& x2r, int step);

} // namespace arms
