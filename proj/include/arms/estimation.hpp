#pragma once
// Probability estimates, log-log exponent fits, quasi-multiplicativity
// ratios, and the crossing-rate fit.

#include <cstdint>
#include <utility>
#include <vector>

namespace arms {

struct Estimate {
    double p_hat = 0.0;
    long long n = 0;
    double stderr_ = 0.0;
    double lo95 = 0.0, hi95 = 0.0;
    uint64_t seed = 0; // provenance
};

// binomial proportion; Wald stderr with Wilson fallback near 0/1, Wilson CI
Estimate estimate_probability(long long hits, long long n, uint64_t seed = 0);
// sample mean over real-valued observations (diagnostics like correlations)
Estimate estimate_mean(double sum, double sumsq, long long n, uint64_t seed = 0);

struct ScalePoint {
    double scale = 0.0;
    Estimate est;
};

// sign convention for the fitted power law
enum class SlopeSign {
    DecayInScale,    // P ~ scale^{-slope}, slope reported positive for decay
    GrowthInEpsilon, // P ~ eps^{+slope}, slope reported positive for decay as eps->0
};

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r2 = 0.0;
    std::vector<double> scales_used;
};

// weighted least squares of log p vs log scale; weights are inverse variances
// of the log-estimates (delta method); points with p_hat*n < 10 are dropped
// (rare-event floor), zero estimates dropped or fatal per flag
ExponentFit fit_exponent(const std::vector<ScalePoint>& points, SlopeSign sign,
                         bool fail_on_zero = false);

struct RatioEstimate {
    double ratio = 0.0;
    double lo95 = 0.0, hi95 = 0.0;
};

// p13 / (p12 * p23) with delta-method CI on the log scale
RatioEstimate quasi_mult_ratio(const Estimate& p13, const Estimate& p12, const Estimate& p23);

struct RateEstimate {
    double rate = 0.0;
    double rate_stderr = 0.0;
    double intercept = 0.0;
};

// fits -log f(L) = rate * L + c by weighted least squares
RateEstimate crossing_rate(const std::vector<std::pair<double, Estimate>>& points);

} // namespace arms
