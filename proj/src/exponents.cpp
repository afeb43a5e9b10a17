#include "arms/exponents.hpp"

#include <cmath>
#include <sstream>

namespace arms {

namespace {

const Rational kHalf{1, 2};

void require(bool ok, const std::string& what) {
    if (!ok) throw std::domain_error(what);
}

std::string fmt_range(const char* name, const Rational& v, const char* range) {
    std::ostringstream os;
    os << name << "=" << v.str() << " outside " << range;
    return os.str();
}

ExponentValue from_rational(const Rational& r, std::string formula) {
    return ExponentValue{r.to_double(), r, std::move(formula)};
}

void check_alpha_range(const SleParams& p) {
    require(Rational{0} < p.kappa && p.kappa < Rational{4},
            fmt_range("kappa", p.kappa, "(0,4)"));
    require(Rational{-2} < p.rho && p.rho <= Rational{0},
            fmt_range("rho", p.rho, "(-2,0] (alpha family)"));
}

void check_beta_gamma_range(const SleParams& p) {
    require(Rational{0} < p.kappa && p.kappa < Rational{4},
            fmt_range("kappa", p.kappa, "(0,4)"));
    require(Rational{-2} < p.rho && p.rho < p.kappa * kHalf - Rational{2},
            fmt_range("rho", p.rho, "(-2,kappa/2-2) (beta/gamma family)"));
}

} // namespace

ExponentValue boundary_alpha(const SleParams& p, int k) {
    check_alpha_range(p);
    require(k >= 0, "arm count k must be >= 0");
    if (k == 0) return from_rational(Rational{0}, "alpha_0 = 0");
    Rational j{(k + 1) / 2};
    Rational two_j = Rational{2} * j;
    if (k % 2 == 1) {
        // alpha_{2j-1} = 2j(2j + rho + 2 - kappa/2)/kappa
        Rational v = two_j * (two_j + p.rho + Rational{2} - p.kappa * kHalf) / p.kappa;
        return from_rational(v, "alpha_{2j-1} = 2j(2j+rho+2-kappa/2)/kappa");
    }
    // alpha_{2j} = 2j(2j + rho + 4 - kappa/2)/kappa
    Rational v = two_j * (two_j + p.rho + Rational{4} - p.kappa * kHalf) / p.kappa;
    return from_rational(v, "alpha_{2j} = 2j(2j+rho+4-kappa/2)/kappa");
}

ExponentValue boundary_beta(const SleParams& p, int k) {
    check_beta_gamma_range(p);
    require(k >= 0, "arm count k must be >= 0");
    if (k == 0) return from_rational(Rational{0}, "beta_0 = 0");
    Rational j{(k + 1) / 2};
    Rational two_j = Rational{2} * j;
    if (k % 2 == 1) {
        Rational v = two_j * (two_j + p.kappa * kHalf - Rational{4} - p.rho) / p.kappa;
        return from_rational(v, "beta_{2j-1} = 2j(2j+kappa/2-4-rho)/kappa");
    }
    Rational v = two_j * (two_j + p.kappa * kHalf - Rational{2} - p.rho) / p.kappa;
    return from_rational(v, "beta_{2j} = 2j(2j+kappa/2-2-rho)/kappa");
}

ExponentValue boundary_gamma(const SleParams& p, int k) {
    check_beta_gamma_range(p);
    require(k >= 0, "arm count k must be >= 0");
    if (k == 0) return from_rational(Rational{0}, "gamma_0 = 0");
    Rational j{(k + 1) / 2};
    Rational two_j = Rational{2} * j;
    if (k % 2 == 1) {
        Rational v = (two_j + p.rho) * (two_j + p.rho + Rational{2} - p.kappa * kHalf) / p.kappa;
        return from_rational(v, "gamma_{2j-1} = (2j+rho)(2j+rho+2-kappa/2)/kappa");
    }
    Rational v = two_j * (two_j + p.kappa * kHalf - Rational{2}) / p.kappa;
    return from_rational(v, "gamma_{2j} = 2j(2j+kappa/2-2)/kappa");
}

ExponentValue interior_alpha(const Rational& kappa, int j) {
    require(Rational{0} < kappa && kappa < Rational{4}, fmt_range("kappa", kappa, "(0,4)"));
    require(j >= 1, "interior arm pair count j must be >= 1");
    Rational jj{j};
    Rational v = (Rational{16} * jj * jj - (kappa - Rational{4}) * (kappa - Rational{4})) /
                 (Rational{8} * kappa);
    return from_rational(v, "alpha_{2j} = (16j^2-(kappa-4)^2)/(8 kappa)");
}

ExponentValue ising_exponent(ExponentKind kind, int k) {
    SleParams alpha_p{Rational{3}, Rational{0}};
    SleParams bg_p{Rational{3}, Rational{-3, 2}};
    switch (kind) {
    case ExponentKind::BoundaryAlpha: return boundary_alpha(alpha_p, k);
    case ExponentKind::BoundaryBeta: return boundary_beta(bg_p, k);
    case ExponentKind::BoundaryGamma: return boundary_gamma(bg_p, k);
    case ExponentKind::Interior:
        require(k >= 2 && k % 2 == 0, "interior patterns have an even arm count >= 2");
        return interior_alpha(Rational{3}, k / 2);
    }
    throw std::domain_error("unknown exponent family");
}

ExponentValue ladder_increment(Increment which, const Rational& lambda, const SleParams& p) {
    require(!(lambda < Rational{0}), "lambda must be >= 0");
    Rational c;
    switch (which) {
    case Increment::U1:
    case Increment::U3:
        c = p.rho + Rational{4} - p.kappa * kHalf;
        break;
    case Increment::U2:
        c = p.kappa * kHalf - Rational{2} - p.rho;
        break;
    case Increment::V:
        c = p.kappa * kHalf - Rational{4};
        break;
    }
    Rational radicand = Rational{4} * p.kappa * lambda + c * c;
    auto root = sqrt_exact(radicand);
    double root_d = root ? root->to_double() : std::sqrt(radicand.to_double());

    auto finish = [&](auto exact_fn, double numeric, const char* formula) {
        ExponentValue ev;
        ev.formula = formula;
        if (root) {
            Rational ex = exact_fn(*root);
            ev.exact = ex;
            ev.value = ex.to_double();
        } else {
            ev.value = numeric;
        }
        return ev;
    };

    switch (which) {
    case Increment::U1:
        return finish([&](const Rational& r) { return (c + r) / p.kappa; },
                      (c.to_double() + root_d) / p.kappa_d(),
                      "u1 = (c + sqrt(4 kappa lambda + c^2))/kappa, c = rho+4-kappa/2");
    case Increment::U2:
        return finish([&](const Rational& r) { return (c + r) / p.kappa; },
                      (c.to_double() + root_d) / p.kappa_d(),
                      "u2 = (c + sqrt(4 kappa lambda + c^2))/kappa, c = kappa/2-2-rho");
    case Increment::U3:
        return finish(
            [&](const Rational& r) {
                return (p.rho + Rational{2}) / (Rational{2} * p.kappa) * (c + r);
            },
            (p.rho_d() + 2) / (2 * p.kappa_d()) * (c.to_double() + root_d),
            "u3 = (rho+2)/(2 kappa) * (c + sqrt(4 kappa lambda + c^2)), c = rho+4-kappa/2");
    case Increment::V:
        return finish(
            [&](const Rational& r) {
                return kHalf - p.kappa / Rational{16} - lambda * kHalf + r / Rational{8};
            },
            0.5 - p.kappa_d() / 16 - lambda.to_double() / 2 + root_d / 8,
            "v = 1/2 - kappa/16 - lambda/2 + sqrt(4 kappa lambda + c^2)/8, c = kappa/2-4");
    }
    throw std::domain_error("unknown increment kind");
}

double ladder_increment_numeric(Increment which, double lambda, double kappa, double rho) {
    if (lambda < 0) throw std::domain_error("lambda must be >= 0");
    switch (which) {
    case Increment::U1: {
        double c = rho + 4 - kappa / 2;
        return (c + std::sqrt(4 * kappa * lambda + c * c)) / kappa;
    }
    case Increment::U2: {
        double c = kappa / 2 - 2 - rho;
        return (c + std::sqrt(4 * kappa * lambda + c * c)) / kappa;
    }
    case Increment::U3: {
        double c = rho + 4 - kappa / 2;
        return (rho + 2) / (2 * kappa) * (c + std::sqrt(4 * kappa * lambda + c * c));
    }
    case Increment::V: {
        double c = kappa / 2 - 4;
        return 0.5 - kappa / 16 - lambda / 2 + std::sqrt(4 * kappa * lambda + c * c) / 8;
    }
    }
    throw std::domain_error("unknown increment kind");
}

RecurrenceReport verify_recurrences(const SleParams& p, int j_max) {
    require(j_max >= 1, "j_max must be >= 1");
    RecurrenceReport rep;
    auto add = [&](const std::string& id, const ExponentValue& lhs, const Rational& rhs) {
        RecurrenceRow row;
        row.identity = id;
        if (!lhs.exact) throw std::logic_error("ladder value unexpectedly inexact: " + id);
        row.lhs = *lhs.exact;
        row.rhs = rhs;
        row.pass = row.lhs == row.rhs;
        rep.all_pass = rep.all_pass && row.pass;
        rep.rows.push_back(row);
    };
    auto inc = [&](Increment w, const Rational& lambda) {
        auto ev = ladder_increment(w, lambda, p);
        if (!ev.exact) throw std::logic_error("ladder increment unexpectedly inexact");
        return *ev.exact;
    };

    bool alpha_ok = Rational{-2} < p.rho && p.rho <= Rational{0};
    bool bg_ok = Rational{-2} < p.rho && p.rho < p.kappa * kHalf - Rational{2};

    for (int j = 1; j <= j_max; ++j) {
        std::string js = " (j=" + std::to_string(j) + ")";
        if (alpha_ok) {
            Rational a_odd = *boundary_alpha(p, 2 * j - 1).exact;
            Rational a_even = *boundary_alpha(p, 2 * j).exact;
            add("alpha_{2j} = alpha_{2j-1} + u2(alpha_{2j-1})" + js,
                boundary_alpha(p, 2 * j), a_odd + inc(Increment::U2, a_odd));
            add("alpha_{2j+1} = alpha_{2j} + u1(alpha_{2j})" + js,
                boundary_alpha(p, 2 * j + 1), a_even + inc(Increment::U1, a_even));
        }
        if (bg_ok) {
            Rational b_odd = *boundary_beta(p, 2 * j - 1).exact;
            Rational b_even = *boundary_beta(p, 2 * j).exact;
            add("beta_{2j} = beta_{2j-1} + u1(beta_{2j-1})" + js,
                boundary_beta(p, 2 * j), b_odd + inc(Increment::U1, b_odd));
            add("beta_{2j+1} = beta_{2j} + u2(beta_{2j})" + js,
                boundary_beta(p, 2 * j + 1), b_even + inc(Increment::U2, b_even));
            add("gamma_{2j} = beta_{2j-1} + u3(beta_{2j-1})" + js,
                boundary_gamma(p, 2 * j), b_odd + inc(Increment::U3, b_odd));
        }
        if (alpha_ok && bg_ok) {
            Rational a_even = *boundary_alpha(p, 2 * j).exact;
            add("gamma_{2j+1} = alpha_{2j} + u3(alpha_{2j})" + js,
                boundary_gamma(p, 2 * j + 1), a_even + inc(Increment::U3, a_even));
        }
    }
    return rep;
}

OnePointExponents one_point_exponents(double kappa, double rho1R, double rho2R) {
    if (!(kappa > 0)) throw std::domain_error("kappa must be > 0");
    double lower1 = std::max(-2.0, kappa / 2 - 4);
    if (!(rho1R > lower1))
        throw std::domain_error("rho1R must exceed max(-2, kappa/2-4)");
    if (!(rho1R + rho2R > kappa / 2 - 4))
        throw std::domain_error("rho1R + rho2R must exceed kappa/2-4");
    double s = rho1R + rho2R + 4 - kappa / 2;
    return OnePointExponents{(rho1R + 2) * s / kappa, 2 * s / kappa};
}

} // namespace arms
