#pragma once
// Closed-form arm exponents for chordal SLE_kappa(rho) and for the critical
// Ising interface (kappa = 3), plus the one-step ladder increments and the
// recurrence checker that ties the two together.

#include <optional>
#include <string>
#include <vector>

#include "arms/rational.hpp"

namespace arms {

struct SleParams {
    Rational kappa;
    Rational rho;
    double kappa_d() const { return kappa.to_double(); }
    double rho_d() const { return rho.to_double(); }
};

// family of arm patterns: alpha = (+-+-...) against a +/- Dobrushin boundary,
// beta = (-+-+...) seen from the minus side, gamma = mixed free boundary,
// interior = alternating arms around an interior point
enum class ExponentKind { BoundaryAlpha, BoundaryBeta, BoundaryGamma, Interior };

struct ExponentValue {
    double value = 0.0;
    std::optional<Rational> exact;   // set whenever (kappa, rho) are rational
    std::string formula;             // which closed form produced it

    double d() const { return value; }
};

// general SLE_kappa(rho) boundary families; k is the number of arms (k >= 0,
// k = 0 gives 0 by convention)
ExponentValue boundary_alpha(const SleParams& p, int k);  // rho in (-2, 0]
ExponentValue boundary_beta(const SleParams& p, int k);   // rho in (-2, kappa/2 - 2)
ExponentValue boundary_gamma(const SleParams& p, int k);  // rho in (-2, kappa/2 - 2)

// interior 2j-arm exponent, kappa in (0, 4), j >= 1
ExponentValue interior_alpha(const Rational& kappa, int j);

// Ising specialization (kappa = 3; alpha uses rho = 0, beta/gamma rho = -3/2)
ExponentValue ising_exponent(ExponentKind kind, int k);

// one-crossing increments u1, u2, u3 and the interior increment v, as
// functions of the accumulated exponent lambda
enum class Increment { U1, U2, U3, V };
ExponentValue ladder_increment(Increment which, const Rational& lambda, const SleParams& p);
double ladder_increment_numeric(Increment which, double lambda, double kappa, double rho);

// checks, in exact arithmetic where possible, that every closed form above
// satisfies its defining one-step recurrence up to arm index 2*j_max
struct RecurrenceRow {
    std::string identity;
    Rational lhs, rhs;
    bool pass = false;
};
struct RecurrenceReport {
    std::vector<RecurrenceRow> rows;
    bool all_pass = true;
};
RecurrenceReport verify_recurrences(const SleParams& p, int j_max);

// one-point boundary estimate exponents for three force points
// (rho_L; rho_1R, rho_2R); returns {alpha, beta} of the bound x^alpha * y^beta
struct OnePointExponents { double alpha, beta; };
OnePointExponents one_point_exponents(double kappa, double rho1R, double rho2R);

} // namespace arms
