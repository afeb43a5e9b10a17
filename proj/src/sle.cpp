#include "arms/sle.hpp"

#include <algorithm>
#include <cmath>

#include "arms/rng.hpp"

namespace arms {

namespace {

double sign_floor(double d, double floor_) {
    if (d >= 0) return std::max(d, floor_);
    return std::min(d, -floor_);
}

// shared SDE/ODE stepper: driving W, force-point images, tracked boundary and
// interior points, all advanced in lockstep by Euler-Maruyama substeps
class Stepper {
public:
    Stepper(const SleConfig& cfg, uint64_t stream)
        : cfg_(cfg), sqk_(std::sqrt(cfg.kappa)), gap_floor_(std::pow(cfg.dt, 0.6)),
          rng_(cfg.seed, stream) {
        for (const auto& fp : cfg.left) fps_.push_back({std::min(fp.x, -gap_floor_), fp.rho, -1});
        for (const auto& fp : cfg.right) fps_.push_back({std::max(fp.x, gap_floor_), fp.rho, +1});
    }

    double t = 0, w = 0;
    bool halted = false;

    struct Fp {
        double v;
        double rho;
        int side; // -1 left, +1 right
    };
    const std::vector<Fp>& force_points() const { return fps_; }

    struct BTrack {
        double g;
        double logd = 0;
        int side;       // -1 left of the hull base, +1 right
        bool hull_edge; // clamp to W instead of recording a swallowing time
        bool reflect = false; // kappa <= 4 event tracker: never swallowed,
                              // held a gap floor away from W on collision
        bool swallowed = false;
        double swallow_time = 0;
        // running min of the uniformized W-gap, updated every substep; the
        // macro loop samples too coarsely to catch the deepest excursions
        double min_ups = std::numeric_limits<double>::infinity();
    };
    struct ITrack {
        std::complex<double> g;
        std::complex<double> logd = 0;
        bool reflect = false;
        bool swallowed = false;
        double swallow_time = 0;
        double min_ups = std::numeric_limits<double>::infinity();
    };

    int add_boundary(double x, bool hull_edge = false, bool reflect = false) {
        double v = sign_floor(x, gap_floor_);
        bt_.push_back({v, 0, v > 0 ? +1 : -1, hull_edge, reflect});
        return (int)bt_.size() - 1;
    }
    int add_interior(std::complex<double> z, bool reflect = false) {
        it_.push_back({z, 0, reflect});
        return (int)it_.size() - 1;
    }
    BTrack& b(int i) { return bt_[i]; }
    ITrack& in(int i) { return it_[i]; }
    double gap_floor() const { return gap_floor_; }

    // advance by h, subdividing near force-point and tracked-point collisions
    void advance(double h) {
        double rem = h;
        while (rem > 0 && !halted) {
            double gap = std::numeric_limits<double>::infinity();
            for (const auto& fp : fps_)
                if (fp.rho != 0) gap = std::min(gap, std::abs(w - fp.v));
            for (const auto& p : bt_)
                if (p.reflect) gap = std::min(gap, std::abs(p.g - w));
            for (const auto& p : it_)
                if (p.reflect) gap = std::min(gap, std::abs(p.g - w));
            double sub = h;
            if (gap < 20 * std::sqrt(h)) sub = std::max(gap * gap / 400, h * 1e-5);
            sub = std::min(sub, rem);
            substep(sub);
            rem -= sub;
        }
    }

private:
    void substep(double h) {
        double wold = w;
        double drift = 0;
        for (auto& fp : fps_) {
            drift += fp.rho * h / sign_floor(wold - fp.v, gap_floor_);
            fp.v += 2 * h / sign_floor(fp.v - wold, gap_floor_);
        }
        // reflected trackers may descend to the resolution of the current
        // substep; everything else keeps the coarse macro floor
        double fl = std::min(gap_floor_, std::sqrt(h));
        for (auto& p : bt_) {
            if (p.swallowed && !p.hull_edge) continue;
            double d = sign_floor(p.g - wold, p.reflect ? fl : gap_floor_);
            p.g += 2 * h / d;
            if (!p.hull_edge) p.logd += -2 * h / (d * d);
        }
        for (auto& p : it_) {
            if (p.swallowed) continue;
            std::complex<double> d = p.g - wold;
            p.g += 2.0 * h / d;
            p.logd += -2.0 * h / (d * d);
        }
        w = wold + drift + (cfg_.zero_noise ? 0.0 : sqk_ * std::sqrt(h) * rng_.next_gauss());
        t += h;

        double cluster = 0;
        for (auto& fp : fps_) {
            if (fp.side > 0) fp.v = std::max(fp.v, w);
            else fp.v = std::min(fp.v, w);
            if (std::abs(fp.v - w) <= gap_floor_) cluster += fp.rho;
        }
        if (cluster <= -2) halted = true;
        for (auto& p : bt_) {
            double pf = p.reflect ? fl : gap_floor_;
            bool collide = p.side > 0 ? p.g - w <= pf : w - p.g <= pf;
            if (p.hull_edge) {
                if (p.side > 0) p.g = std::max(p.g, w);
                else p.g = std::min(p.g, w);
            } else if (p.reflect) {
                if (collide) p.g = p.side > 0 ? w + pf : w - pf;
            } else if (collide && !p.swallowed) {
                p.swallowed = true;
                p.swallow_time = t;
            }
            if (p.swallowed) p.g = p.side > 0 ? std::max(p.g, w) : std::min(p.g, w);
        }
        for (auto& p : it_) {
            double pf = p.reflect ? fl : gap_floor_;
            bool collide = p.g.imag() <= 0 || std::abs(p.g - w) <= pf;
            if (p.reflect) {
                if (collide) {
                    auto d = p.g - w;
                    d = {d.real(), std::max(std::abs(d.imag()), 0.1 * pf)}; // keep Im > 0
                    double m = std::abs(d);
                    p.g = w + d * (std::max(m, pf) / m);
                }
            } else if (!p.swallowed && collide) {
                p.swallowed = true;
                p.swallow_time = t;
            }
        }
        for (auto& p : bt_) {
            if (p.hull_edge || p.swallowed) continue;
            double u = (p.side > 0 ? p.g - w : w - p.g) * std::exp(-p.logd);
            p.min_ups = std::min(p.min_ups, u);
        }
        for (auto& p : it_) {
            if (p.swallowed) continue;
            p.min_ups = std::min(p.min_ups, std::abs(p.g - w) * std::exp(-p.logd.real()));
        }
    }

    const SleConfig& cfg_;
    double sqk_, gap_floor_;
    CounterRng rng_;
    std::vector<Fp> fps_;
    std::vector<BTrack> bt_;
    std::vector<ITrack> it_;
};

// principal square root folded into the closed upper half-plane
std::complex<double> sqrt_h(std::complex<double> z) {
    auto s = std::sqrt(z);
    return s.imag() < 0 ? -s : s;
}

} // namespace

void SleConfig::validate() const {
    if (!(kappa > 0)) throw std::invalid_argument("kappa must be positive");
    if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
    if (!(horizon > 0)) throw std::invalid_argument("horizon must be positive");
    double prev = 0;
    for (const auto& fp : left) {
        if (fp.x > 0 || fp.x > prev)
            throw std::invalid_argument("left force points must be <= 0, descending");
        prev = fp.x;
    }
    prev = 0;
    for (const auto& fp : right) {
        if (fp.x < 0 || fp.x < prev)
            throw std::invalid_argument("right force points must be >= 0, ascending");
        prev = fp.x;
    }
}

DrivingPath drive(const SleConfig& config, uint64_t stream) {
    config.validate();
    Stepper st(config, stream);
    int n = (int)std::llround(config.horizon / config.dt);
    DrivingPath p;
    p.dt = config.dt;
    p.v_left.resize(config.left.size());
    p.v_right.resize(config.right.size());
    auto record = [&] {
        p.t.push_back(st.t);
        p.w.push_back(st.w);
        const auto& fps = st.force_points();
        for (size_t i = 0; i < config.left.size(); ++i) p.v_left[i].push_back(fps[i].v);
        for (size_t i = 0; i < config.right.size(); ++i)
            p.v_right[i].push_back(fps[config.left.size() + i].v);
    };
    record();
    for (int k = 0; k < n && !st.halted; ++k) {
        st.advance(config.dt);
        record();
    }
    p.halted = st.halted;
    p.halt_time = st.halted ? st.t : 0;
    return p;
}

TrackedPoint evolve_point(const DrivingPath& driving, std::complex<double> z) {
    if (z == 0.0) throw std::invalid_argument("tracked point must not be the root");
    TrackedPoint tp;
    tp.z0 = z;
    bool boundary = z.imag() == 0;
    int side = z.real() > 0 ? +1 : -1;
    std::complex<double> g = z, logd = 0;
    double floor_ = std::pow(driving.dt, 0.6);
    tp.g.reserve(driving.steps());
    tp.log_deriv.reserve(driving.steps());
    for (int k = 0; k < driving.steps(); ++k) {
        if (k > 0) {
            double h = driving.t[k] - driving.t[k - 1];
            double wprev = driving.w[k - 1];
            if (!tp.swallow_time) {
                std::complex<double> d = g - wprev;
                if (boundary) d = sign_floor(d.real(), floor_);
                g += 2.0 * h / d;
                logd += -2.0 * h / (d * d);
            }
            double wk = driving.w[k];
            if (boundary) {
                bool collide = side > 0 ? g.real() - wk <= floor_ : wk - g.real() <= floor_;
                if (collide && !tp.swallow_time) tp.swallow_time = driving.t[k];
                if (tp.swallow_time)
                    g = side > 0 ? std::max(g.real(), wk) : std::min(g.real(), wk);
            } else if (!tp.swallow_time &&
                       (g.imag() <= 0 || std::abs(g - wk) <= floor_)) {
                tp.swallow_time = driving.t[k];
            }
        }
        tp.g.push_back(g);
        tp.log_deriv.push_back(logd);
    }
    return tp;
}

TraceCurve trace(const DrivingPath& driving) {
    TraceCurve tc;
    int n = driving.steps();
    tc.pts.reserve(n);
    double max_jump = 0;
    for (int k = 1; k < n; ++k)
        max_jump = std::max(max_jump, std::abs(driving.w[k] - driving.w[k - 1]));
    tc.resolution_warning = max_jump > 10 * std::sqrt(driving.dt);
    for (int k = 0; k < n; ++k) {
        std::complex<double> z = driving.w[k];
        for (int j = k; j >= 1; --j) {
            double c = driving.w[j];
            double h = driving.t[j] - driving.t[j - 1];
            z = c + sqrt_h((z - c) * (z - c) - 4 * h);
        }
        tc.pts.push_back(z);
    }
    return tc;
}

namespace {

// core alternating-crossing replay shared by the boundary and interior events.
// `interior` switches the x-side target from a boundary point to a bulk point.
IndicatorResult run_crossings(const SleConfig& config, double eps, std::complex<double> zx,
                              double y, double r, bool start_right, int k, bool interior,
                              uint64_t stream) {
    config.validate();
    if (!(eps > 0) || !(r > 0)) throw std::invalid_argument("eps and r must be positive");
    if (!(y + r < 0)) throw std::invalid_argument("B(y,r) must sit on the negative axis");
    if (k < 1) throw std::invalid_argument("crossing count must be >= 1");
    if (config.dt > 0.25) throw ResolutionError("base step too coarse for event replay");

    Stepper st(config, stream);
    // for kappa <= 4 the curve is simple, but it can still touch the axis on a
    // side whose accumulated force-point weight falls below kappa/2 - 2, in
    // which case a target on that side is genuinely swallowed.  on the other
    // sides the finite-step gap-floor collision must reflect instead of
    // truncating the sample (a spurious swallow would censor exactly the
    // close approaches the indicator is supposed to count).
    auto weight = [](const std::vector<ForcePoint>& fps) {
        double s = 0;
        for (const auto& f : fps) s += f.rho;
        return s;
    };
    double crit = config.kappa / 2 - 2 - 1e-12;
    bool simple = config.kappa <= 4.0;
    bool reflect_right = simple && weight(config.right) >= crit;
    bool reflect_left = simple && weight(config.left) >= crit;
    int ix = -1, iz = -1;
    if (interior) {
        if (!(zx.imag() > 0)) throw std::invalid_argument("interior point must have Im > 0");
        iz = st.add_interior(zx, reflect_right && reflect_left);
    } else {
        ix = st.add_boundary(zx.real(), false, reflect_right);
    }
    int iy = st.add_boundary(y, false, reflect_left);

    IndicatorResult res;
    bool target_right = start_right;
    int done = 0;
    bool seen_left = false;
    long long step_guard = 0;
    while (st.t < config.horizon && !st.halted) {
        if (++step_guard > (1LL << 31))
            throw ResolutionError("event replay exceeded the substep budget");
        // `cur` steers the adaptive step; `ups` (the substep-resolved running
        // minimum since the last side switch) decides the hit, because the
        // macro loop alone samples the deepest excursions too coarsely
        double dist;
        if (target_right) {
            double cur, ups;
            if (interior) {
                auto& p = st.in(iz);
                if (p.swallowed) break;
                double dinv = std::exp(-p.logd.real());
                if (done == 0) {
                    // first approach by conformal radius (monotone, so the
                    // current value is already the running minimum)
                    cur = 2 * p.g.imag() * dinv / 4;
                    ups = cur;
                } else {
                    // later approaches by the uniformized tip distance
                    // (post-switch component bookkeeping)
                    cur = std::abs(p.g - std::complex<double>(st.w, 0)) * dinv;
                    ups = std::min(p.min_ups, cur);
                }
            } else {
                auto& p = st.b(ix);
                if (p.swallowed) break; // T_x reached
                // uniformized tip distance: for a simple curve every close
                // approach to x is a tip approach, and the W-gap tracks the
                // true distance up to absolute constants that cancel in the
                // log-log slope fits
                cur = (p.g - st.w) * std::exp(-p.logd);
                ups = std::min(p.min_ups, cur);
            }
            res.min_dist = std::min(res.min_dist, ups);
            if (ups <= eps) {
                ++done;
                res.stop_time = st.t;
                if (done == k) break;
                st.b(iy).min_ups = std::numeric_limits<double>::infinity();
                target_right = false;
                continue;
            }
            dist = cur;
        } else {
            auto& p = st.b(iy);
            double cur = p.swallowed ? 0.0 : (st.w - p.g) * std::exp(-p.logd);
            double ups = p.swallowed ? 0.0 : std::min(p.min_ups, cur);
            if (ups <= r) {
                ++done;
                res.stop_time = st.t;
                if (!seen_left) {
                    seen_left = true;
                    if (!interior && !st.b(ix).swallowed)
                        res.gap_at_first_left_hit = st.b(ix).g - st.w;
                }
                if (done == k) break;
                if (interior) st.in(iz).min_ups = std::numeric_limits<double>::infinity();
                else st.b(ix).min_ups = std::numeric_limits<double>::infinity();
                target_right = true;
                continue;
            }
            dist = cur;
        }
        if (!interior && st.b(ix).swallowed) break;
        // step shrinks quadratically with the distance above the threshold,
        // floored so the threshold crossing itself is still resolved
        double scale = target_right ? eps : r;
        double excess = dist - scale;
        double h = std::min(config.dt,
                            std::max(config.dt * excess * excess, 1e-3 * scale * scale));
        st.advance(h);
    }
    res.hit = done >= k;
    res.halted = st.halted;
    return res;
}

} // namespace

IndicatorResult boundary_crossing_indicator(const SleConfig& config, double eps, double x,
                                            double y, double r, CrossingVariant variant,
                                            int k, uint64_t stream) {
    bool start_right;
    switch (variant) {
    case CrossingVariant::AlphaOdd:
        if (k % 2 == 0) throw std::invalid_argument("AlphaOdd needs odd k");
        start_right = true;
        break;
    case CrossingVariant::AlphaEven:
        if (k % 2 == 1) throw std::invalid_argument("AlphaEven needs even k");
        start_right = false;
        break;
    case CrossingVariant::BetaOdd:
        if (k % 2 == 0) throw std::invalid_argument("BetaOdd needs odd k");
        start_right = false;
        break;
    case CrossingVariant::BetaEven:
        if (k % 2 == 1) throw std::invalid_argument("BetaEven needs even k");
        start_right = true;
        break;
    default:
        throw std::invalid_argument("unknown crossing variant");
    }
    if (!(x > 0)) throw std::invalid_argument("x must be positive");
    return run_crossings(config, eps, x, y, r, start_right, k, false, stream);
}

IndicatorResult interior_event_indicator(const SleConfig& config, double eps,
                                         std::complex<double> z, double y, double r,
                                         int j, uint64_t stream) {
    if (j < 1) throw std::invalid_argument("interior event index must be >= 1");
    return run_crossings(config, eps, z, y, r, true, 2 * j - 1, true, stream);
}

std::optional<double> martingale_observable(double kappa, double rho_l, double rho_1,
                                            double rho_2, const DrivingPath& path,
                                            const TrackedPoint& xl, const TrackedPoint& x1r,
                                            const TrackedPoint& x2r, int step) {
    double tk = path.t.at(step);
    for (const TrackedPoint* p : {&xl, &x1r, &x2r})
        if (p->swallow_time && *p->swallow_time <= tk) return std::nullopt;
    double w = path.w[step];
    double gl = xl.g[step].real(), g1 = x1r.g[step].real(), g2 = x2r.g[step].real();
    double dl = xl.log_deriv[step].real(), d1 = x1r.log_deriv[step].real(),
           d2 = x2r.log_deriv[step].real();
    auto dpow = [](double logd, double e) { return std::exp(logd * e); };
    double m = dpow(dl, rho_l * (rho_l + 4 - kappa) / (4 * kappa)) *
               std::pow(std::abs(gl - w), rho_l / kappa) *
               dpow(d1, rho_1 * (rho_1 + 4 - kappa) / (4 * kappa)) *
               std::pow(std::abs(g1 - w), rho_1 / kappa) *
               dpow(d2, rho_2 * (rho_2 + 4 - kappa) / (4 * kappa)) *
               std::pow(std::abs(g2 - w), rho_2 / kappa) *
               std::pow(g1 - gl, rho_l * rho_1 / (2 * kappa)) *
               std::pow(g2 - gl, rho_l * rho_2 / (2 * kappa)) *
               std::pow(g2 - g1, rho_1 * rho_2 / (2 * kappa));
    return m;
}

} // namespace arms
