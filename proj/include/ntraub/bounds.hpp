#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "ntraub/averages.hpp"
#include "ntraub/errors.hpp"

namespace ntraub {

/// True distances of the first iterates from the root, the seeds of every
/// error-bound sequence.  rho_y0 / rho_z0 may be exact zeros when the first
/// step already lands on the root.
struct SeedDistances {
    double rho_x0 = 0.0;
    double rho_y0 = 0.0;
    double rho_z0 = 0.0;
};

enum class BoundVariant { T31, T51, T52 };

inline const char* to_string(BoundVariant v) {
    switch (v) {
        case BoundVariant::T31: return "T31";
        case BoundVariant::T51: return "T51";
        case BoundVariant::T52: return "T52";
    }
    return "unknown";
}

namespace detail {

inline double denom_one_minus_K(const AverageFunction& center, double s, double tol) {
    const double k0 = integral_K(center, s, tol);
    if (k0 >= 1.0) throw ModelError("center integral >= 1; constants undefined");
    return 1.0 - k0;
}

}  // namespace detail

/// Contraction constants C1, C2, C3.  Zero-distance degenerate sums return 0
/// by continuity.
inline std::array<double, 3> constants_C(const LipschitzModel& m, const SeedDistances& d,
                                         double tol = kDefaultQuadTol) {
    const double dx = detail::denom_one_minus_K(m.center_avg, 2.0 * d.rho_x0, tol);
    const double dy = detail::denom_one_minus_K(m.center_avg, 2.0 * d.rho_y0, tol);
    std::array<double, 3> c{0.0, 0.0, 0.0};
    if (d.rho_x0 > 0.0)
        c[0] = integral_M(m.radius_avg, 2.0 * d.rho_x0, tol) / (2.0 * d.rho_x0 * dx);
    const double sxy = d.rho_x0 + d.rho_y0;
    if (sxy > 0.0) c[1] = integral_M(m.radius_avg, sxy, tol) / (sxy * dx);
    const double syz = d.rho_y0 + d.rho_z0;
    if (syz > 0.0) c[2] = integral_M(m.radius_avg, syz, tol) / (syz * dy);
    return c;
}

/// Weak-average constants q1, q2, q3 of the positive-integrable theorem.
inline std::array<double, 3> constants_q_t51(const LipschitzModel& m,
                                             const SeedDistances& d,
                                             double tol = kDefaultQuadTol) {
    const double dx = detail::denom_one_minus_K(m.center_avg, 2.0 * d.rho_x0, tol);
    const double dy = detail::denom_one_minus_K(m.center_avg, 2.0 * d.rho_y0, tol);
    return {integral_K(m.radius_avg, 2.0 * d.rho_x0, tol) / dx,
            integral_K(m.radius_avg, d.rho_x0 + d.rho_y0, tol) / dx,
            integral_K(m.radius_avg, d.rho_y0 + d.rho_z0, tol) / dy};
}

/// Center-only constants q1, q2, q3.
inline std::array<double, 3> constants_q_t52(const AverageFunction& center,
                                             const SeedDistances& d,
                                             double tol = kDefaultQuadTol) {
    const double dx = detail::denom_one_minus_K(center, 2.0 * d.rho_x0, tol);
    const double dy = detail::denom_one_minus_K(center, 2.0 * d.rho_y0, tol);
    return {2.0 * integral_K(center, 2.0 * d.rho_x0, tol) / dx,
            (integral_K(center, 2.0 * d.rho_x0, tol) +
             integral_K(center, 2.0 * d.rho_y0, tol)) /
                dx,
            (integral_K(center, 2.0 * d.rho_y0, tol) +
             integral_K(center, 2.0 * d.rho_z0, tol)) /
                dy};
}

/// E = C1^2 * C2 * rho_x0^2 / (rho_y0 * rho_z0), the factor the induction in
/// the fifth-order proof actually produces.  Returns 0 for degenerate seeds
/// (exact convergence in one step).
inline double e_factor(const std::array<double, 3>& c, const SeedDistances& d) {
    if (d.rho_y0 == 0.0 || d.rho_z0 == 0.0) return 0.0;
    return c[0] * c[0] * c[1] * d.rho_x0 * d.rho_x0 / (d.rho_y0 * d.rho_z0);
}

/// E as printed in the theorem statement (C1 * C2 * ...), kept for comparison.
inline double e_factor_printed(const std::array<double, 3>& c, const SeedDistances& d) {
    if (d.rho_y0 == 0.0 || d.rho_z0 == 0.0) return 0.0;
    return c[0] * c[1] * d.rho_x0 * d.rho_x0 / (d.rho_y0 * d.rho_z0);
}

/// F = q1^2 * q2 * rho_x0^2 / (rho_y0 * rho_z0) with the center-only q's.
inline double f_factor(const std::array<double, 3>& q_t52, const SeedDistances& d) {
    if (d.rho_y0 == 0.0 || d.rho_z0 == 0.0) return 0.0;
    return q_t52[0] * q_t52[0] * q_t52[1] * d.rho_x0 * d.rho_x0 / (d.rho_y0 * d.rho_z0);
}

struct BoundSequence {
    std::vector<double> values;
    /// Factor >= 1: the bound says nothing; values are still reported.
    bool vacuous = false;
};

/// Bounds factor^(5^t - 1) * rho_x0 for t = 1..t_max.  Underflow clamps to 0;
/// a vacuous factor may overflow to +inf, which is kept as-is.
inline BoundSequence error_seq_order5(double factor, double rho_x0, int t_max) {
    BoundSequence s;
    s.vacuous = factor >= 1.0;
    s.values.reserve(static_cast<std::size_t>(t_max));
    for (int t = 1; t <= t_max; ++t) {
        const double expo = std::pow(5.0, t) - 1.0;
        double v = std::pow(factor, expo) * rho_x0;
        if (std::isnan(v) || v < 0.0) v = 0.0;
        s.values.push_back(v);
    }
    return s;
}

/// Geometric bounds (q_product)^t * rho_x0 for t = 1..t_max.
inline BoundSequence error_seq_linear(double q_product, double rho_x0, int t_max) {
    BoundSequence s;
    s.vacuous = q_product >= 1.0;
    s.values.reserve(static_cast<std::size_t>(t_max));
    double v = rho_x0;
    for (int t = 1; t <= t_max; ++t) {
        v *= q_product;
        s.values.push_back(v);
    }
    return s;
}

/// Bounds factor^((1+3a+a^2)^t - 1) * rho_x0; a = 1 recovers the fifth-order
/// sequence, a = 0 degenerates to the constant rho_x0.
inline BoundSequence error_seq_weak(double factor, double a, double rho_x0, int t_max) {
    if (!(a >= 0.0 && a <= 1.0)) throw DomainError("error_seq_weak: a outside [0,1]");
    BoundSequence s;
    s.vacuous = factor >= 1.0;
    const double base = 1.0 + 3.0 * a + a * a;
    s.values.reserve(static_cast<std::size_t>(t_max));
    for (int t = 1; t <= t_max; ++t) {
        const double expo = std::pow(base, t) - 1.0;
        double v = std::pow(factor, expo) * rho_x0;
        if (std::isnan(v) || v < 0.0) v = 0.0;
        s.values.push_back(v);
    }
    return s;
}

enum class SubStep { Y, Z, X };

/// Sharp per-step error bound.  For the y-step only rho_a = rho(x_t) enters:
///   M(kappa, 2 rho_a) / (2 (1 - K(kappa0, 2 rho_a))).
/// For the z- and x-steps with (rho_a, rho_b) = (rho(x_t), rho(y_t)) or
/// (rho(y_t), rho(z_t)):
///   M(kappa, rho_a + rho_b) * rho_b / ((rho_a + rho_b)(1 - K(kappa0, 2 rho_a))).
inline double per_step_bound(const LipschitzModel& m, double rho_a, double rho_b,
                             SubStep step, double tol = kDefaultQuadTol) {
    const double denom = detail::denom_one_minus_K(m.center_avg, 2.0 * rho_a, tol);
    if (step == SubStep::Y) {
        if (rho_a == 0.0) return 0.0;
        return integral_M(m.radius_avg, 2.0 * rho_a, tol) / (2.0 * denom);
    }
    const double s = rho_a + rho_b;
    if (s == 0.0 || rho_b == 0.0) return 0.0;
    return integral_M(m.radius_avg, s, tol) * rho_b / (s * denom);
}

/// Worst-case seed distances without a known root: rho_y0 <= q1 * rho_x0 and
/// rho_z0 <= q2 * q1 * rho_x0, propagated with the variant's q-constants
/// (sharp per-step bounds for the T31 variant).
inline SeedDistances seeds_predictive(const LipschitzModel& m, double rho_x0,
                                      BoundVariant variant,
                                      double tol = kDefaultQuadTol) {
    SeedDistances d;
    d.rho_x0 = rho_x0;
    switch (variant) {
        case BoundVariant::T31: {
            d.rho_y0 = per_step_bound(m, rho_x0, 0.0, SubStep::Y, tol);
            d.rho_z0 = per_step_bound(m, rho_x0, d.rho_y0, SubStep::Z, tol);
            break;
        }
        case BoundVariant::T51: {
            const double dx = detail::denom_one_minus_K(m.center_avg, 2.0 * rho_x0, tol);
            const double q1 = integral_K(m.radius_avg, 2.0 * rho_x0, tol) / dx;
            d.rho_y0 = q1 * rho_x0;
            const double q2 = integral_K(m.radius_avg, rho_x0 + d.rho_y0, tol) / dx;
            d.rho_z0 = q2 * d.rho_y0;
            break;
        }
        case BoundVariant::T52: {
            const double kx = integral_K(m.center_avg, 2.0 * rho_x0, tol);
            if (kx >= 1.0) throw ModelError("center integral >= 1");
            const double q1 = 2.0 * kx / (1.0 - kx);
            d.rho_y0 = q1 * rho_x0;
            const double ky = integral_K(m.center_avg, 2.0 * d.rho_y0, tol);
            const double q2 = (kx + ky) / (1.0 - kx);
            d.rho_z0 = q2 * d.rho_y0;
            break;
        }
    }
    return d;
}

/// Aggregate report consumed by the CLI `bounds` subcommand.
struct ConstantsReport {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    std::array<double, 3> q{0.0, 0.0, 0.0};
    double e = 0.0;
    double e_printed = 0.0;
    double f = 0.0;
    BoundVariant variant = BoundVariant::T31;
    bool degenerate = false;  // rho_y0 or rho_z0 exactly 0
    bool vacuous_e = false;
    bool vacuous_f = false;
};

inline ConstantsReport compute_constants(const LipschitzModel& m, const SeedDistances& d,
                                         BoundVariant variant,
                                         double tol = kDefaultQuadTol) {
    ConstantsReport r;
    r.variant = variant;
    r.degenerate = (d.rho_y0 == 0.0 || d.rho_z0 == 0.0);
    if (variant != BoundVariant::T52) {
        r.c = constants_C(m, d, tol);
        r.q = constants_q_t51(m, d, tol);
        r.e = e_factor(r.c, d);
        r.e_printed = e_factor_printed(r.c, d);
        r.vacuous_e = r.e >= 1.0;
    } else {
        r.q = constants_q_t52(m.center_avg, d, tol);
        r.f = f_factor(r.q, d);
        r.vacuous_f = r.f >= 1.0;
    }
    return r;
}

}  // namespace ntraub
