#include "arms/estimation.hpp"

#include <cmath>
#include <stdexcept>

namespace arms {

namespace {
constexpr double kZ = 1.959963984540054; // 97.5% normal quantile

// Wilson score interval
std::pair<double, double> wilson(long long hits, long long n) {
    double p = double(hits) / double(n);
    double z2 = kZ * kZ;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = kZ * std::sqrt(p * (1 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct LinFit {
    double a = 0, b = 0, sb = 0, r2 = 0; // y = a + b x
};

LinFit weighted_linfit(const std::vector<double>& x, const std::vector<double>& y,
                       const std::vector<double>& var) {
    double sw = 0, swx = 0, swy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double w = 1.0 / var[i];
        sw += w;
        swx += w * x[i];
        swy += w * y[i];
    }
    double xbar = swx / sw, ybar = swy / sw;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double w = 1.0 / var[i];
        sxx += w * (x[i] - xbar) * (x[i] - xbar);
        sxy += w * (x[i] - xbar) * (y[i] - ybar);
        syy += w * (y[i] - ybar) * (y[i] - ybar);
    }
    if (sxx <= 0) throw std::invalid_argument("degenerate abscissae in fit");
    LinFit f;
    f.b = sxy / sxx;
    f.a = ybar - f.b * xbar;
    f.sb = std::sqrt(1.0 / sxx);
    f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

// delta-method variance of log p_hat, floored to stay usable at p_hat = 1
double log_var(const Estimate& e) {
    double v = (1.0 - e.p_hat) / (e.p_hat * double(e.n));
    return std::max(v, 0.25 / (double(e.n) * e.n));
}
} // namespace

Estimate estimate_probability(long long hits, long long n, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("estimate_probability needs n >= 1");
    if (hits < 0 || hits > n) throw std::invalid_argument("hits outside [0, n]");
    Estimate e;
    e.p_hat = double(hits) / double(n);
    e.n = n;
    e.seed = seed;
    auto [lo, hi] = wilson(hits, n);
    e.lo95 = lo;
    e.hi95 = hi;
    e.stderr_ = (hits == 0 || hits == n) ? (hi - lo) / (2.0 * kZ)
                                         : std::sqrt(e.p_hat * (1 - e.p_hat) / n);
    return e;
}

Estimate estimate_mean(double sum, double sumsq, long long n, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("estimate_mean needs n >= 1");
    Estimate e;
    e.p_hat = sum / n;
    e.n = n;
    e.seed = seed;
    double var = n > 1 ? std::max(0.0, (sumsq - sum * sum / n) / (n - 1)) : 0.0;
    e.stderr_ = std::sqrt(var / n);
    e.lo95 = e.p_hat - kZ * e.stderr_;
    e.hi95 = e.p_hat + kZ * e.stderr_;
    return e;
}

ExponentFit fit_exponent(const std::vector<ScalePoint>& points, SlopeSign sign,
                         bool fail_on_zero) {
    std::vector<double> x, y, var, used;
    for (const auto& pt : points) {
        if (pt.est.p_hat <= 0.0) {
            if (fail_on_zero) throw std::invalid_argument("zero estimate in exponent fit");
            continue;
        }
        if (pt.est.p_hat * double(pt.est.n) < 10.0) continue; // rare-event floor
        x.push_back(std::log(pt.scale));
        y.push_back(std::log(pt.est.p_hat));
        var.push_back(log_var(pt.est));
        used.push_back(pt.scale);
    }
    if (x.size() < 3) throw std::invalid_argument("exponent fit needs >= 3 usable scales");
    LinFit f = weighted_linfit(x, y, var);
    ExponentFit out;
    out.slope = sign == SlopeSign::DecayInScale ? -f.b : f.b;
    out.intercept = f.a;
    out.slope_stderr = f.sb;
    out.r2 = f.r2;
    out.scales_used = used;
    return out;
}

RatioEstimate quasi_mult_ratio(const Estimate& p13, const Estimate& p12, const Estimate& p23) {
    for (const auto* e : {&p13, &p12, &p23})
        if (e->p_hat <= 0.0) throw std::invalid_argument("quasi_mult_ratio needs positive estimates");
    RatioEstimate r;
    r.ratio = p13.p_hat / (p12.p_hat * p23.p_hat);
    double sigma = std::sqrt(log_var(p13) + log_var(p12) + log_var(p23));
    r.lo95 = r.ratio * std::exp(-kZ * sigma);
    r.hi95 = r.ratio * std::exp(kZ * sigma);
    return r;
}

RateEstimate crossing_rate(const std::vector<std::pair<double, Estimate>>& points) {
    std::vector<double> x, y, var;
    for (const auto& [L, e] : points) {
        if (e.p_hat <= 0.0) throw std::invalid_argument("crossing_rate needs positive f(L)");
        x.push_back(L);
        y.push_back(-std::log(e.p_hat));
        var.push_back(log_var(e));
    }
    if (x.size() < 3) throw std::invalid_argument("crossing_rate needs >= 3 lengths");
    LinFit f = weighted_linfit(x, y, var);
    return RateEstimate{f.b, f.sb, f.a};
}

} // namespace arms
