#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "ntraub/averages.hpp"
#include "ntraub/errors.hpp"

namespace ntraub {

enum class Theorem { T31, T41, T51, T51Strong, T52 };

inline const char* to_string(Theorem t) {
    switch (t) {
        case Theorem::T31: return "T31";
        case Theorem::T41: return "T41";
        case Theorem::T51: return "T51";
        case Theorem::T51Strong: return "T51Strong";
        case Theorem::T52: return "T52";
    }
    return "unknown";
}

enum class RadiusMethod { ClosedForm, Bisection };

inline const char* to_string(RadiusMethod m) {
    return m == RadiusMethod::ClosedForm ? "ClosedForm" : "Bisection";
}

struct RadiusResult {
    double delta = 0.0;
    double condition_lhs_at_delta = 0.0;
    Theorem theorem = Theorem::T31;
    RadiusMethod method = RadiusMethod::Bisection;
    /// True when the condition still holds at search_hi and the search was
    /// cut off there rather than at a genuine boundary.
    bool clamped = false;
};

inline constexpr double kDefaultBisectTol = 1e-12;

namespace detail {

/// Search cap: radius conditions evaluate integrals at 2*delta, so delta must
/// stay below half the common domain.  The 1e-4 margin keeps rational-kind
/// evaluations away from the pole, where 1 - gamma*u cancels so badly that
/// neither quadrature nor the closed forms carry 10 digits.
inline double default_search_hi(double common_domain_hi) {
    const double cap = 1e3;
    if (!std::isfinite(common_domain_hi)) return cap;
    return std::min(cap, 0.5 * common_domain_hi * (1.0 - 1e-4));
}

inline double clamp_search_hi(double requested, double common_domain_hi) {
    const double cap = std::isfinite(common_domain_hi)
                           ? 0.5 * common_domain_hi * (1.0 - 1e-4)
                           : std::numeric_limits<double>::infinity();
    return std::min(requested, cap);
}

/// Largest delta in (0, hi] with lhs(delta) <= threshold, assuming lhs is
/// non-decreasing so the feasible set is an interval anchored at 0.
inline RadiusResult bisect_radius(const std::function<double(double)>& lhs,
                                  double threshold, double hi, double tol,
                                  Theorem theorem) {
    RadiusResult r;
    r.theorem = theorem;
    r.method = RadiusMethod::Bisection;
    const double at_hi = lhs(hi);
    if (at_hi <= threshold) {
        r.delta = hi;
        r.condition_lhs_at_delta = at_hi;
        r.clamped = true;
        return r;
    }
    double lo = 0.0, up = hi;
    double lhs_lo = 0.0;
    while (up - lo > tol) {
        const double mid = 0.5 * (lo + up);
        if (mid <= lo || mid >= up) break;
        const double v = lhs(mid);
        if (v <= threshold) {
            lo = mid;
            lhs_lo = v;
        } else {
            up = mid;
        }
    }
    if (lo == 0.0) throw NoRadiusError("radius condition infeasible on the search interval");
    r.delta = lo;
    r.condition_lhs_at_delta = lhs_lo;
    return r;
}

}  // namespace detail

// --- closed-form corollary radii ------------------------------------------
// These are regression references for the constant/affine/power/rational
// reductions.  Where a printed formula disagrees with direct bisection of the
// underlying condition, bisection is authoritative and the closed form is
// reported for comparison only (see radius_t31 / radius_t51).

/// Constant kappa, kappa0: convergence radius 1/(2*kappa0 + kappa).
inline double closed_form_cr51(double kappa, double kappa0) {
    return 1.0 / (2.0 * kappa0 + kappa);
}

/// Constant kappa0: uniqueness radius 1/kappa0.
inline double closed_form_cr52(double kappa0) { return 1.0 / kappa0; }

/// Affine kappa(u) = gamma + kappa*u: convergence radius as printed.  Known
/// to disagree with bisection of the radius condition; reference only.
inline double closed_form_cr56(double gamma, double kappa, double kappa0) {
    const double disc = 9.0 * gamma * gamma + (16.0 / 3.0) * kappa + 8.0 * kappa0;
    if (disc < 0.0) throw NoRadiusError("cr56 discriminant negative");
    return (-3.0 * gamma + std::sqrt(disc)) / ((8.0 / 3.0) * kappa + 4.0 * kappa0);
}

/// Affine kappa0(u) = gamma + kappa0*u: uniqueness radius as printed; needs
/// 4*gamma^2 >= (16/3)*kappa0.  Conservative relative to bisection.
inline double closed_form_cr57(double gamma, double kappa0) {
    const double disc = 4.0 * gamma * gamma - (16.0 / 3.0) * kappa0;
    if (disc < 0.0) throw NoRadiusError("cr57 discriminant negative");
    return (2.0 * gamma - std::sqrt(disc)) / ((8.0 / 3.0) * kappa0);
}

/// Power kappa = c*a*u^(a-1), kappa0 = c0*a*u^(a-1): radius as printed.
/// Coincides with the strong weak-average condition, not with the plain one.
inline double closed_form_cr53(double c, double a, double c0) {
    return std::pow((a + 1.0) / (std::pow(2.0, a) * (c0 * (a + 1.0) + c * a)), 1.0 / a);
}

/// Power kappa0: center-only radius (1/(3*c0*2^a))^(1/a).
inline double closed_form_cr54(double c0, double a) {
    return std::pow(1.0 / (3.0 * c0 * std::pow(2.0, a)), 1.0 / a);
}

/// Rational kappa0: center-only radius from the quadratic in (1-2*gamma*d)^2.
inline double closed_form_cr55(double gamma, double c0) {
    const double t = 3.0 * c0;
    return (t + 1.0 - std::sqrt(t * (t + 1.0))) / (2.0 * gamma * (t + 1.0));
}

// --- radius solvers ---------------------------------------------------------

/// Convergence radius of the non-decreasing-average theorem: largest delta
/// with  M(kappa,2d) / (2d * (1 - K(kappa0,2d))) <= 1  and K(kappa0,2d) < 1.
/// Constant averages short-circuit to 1/(2*kappa0 + kappa).
inline RadiusResult radius_t31(const LipschitzModel& m,
                               std::optional<double> search_hi = std::nullopt,
                               double tol = kDefaultBisectTol) {
    if (!m.radius_nondecreasing || !m.center_nondecreasing)
        throw ModelError("radius_t31 requires non-decreasing kappa and kappa0");
    const double dom = m.common_domain_hi();
    const double hi = search_hi ? detail::clamp_search_hi(*search_hi, dom)
                                : detail::default_search_hi(dom);
    auto lhs = [&m](double d) {
        const double k0 = integral_K(m.center_avg, 2.0 * d);
        if (k0 >= 1.0) return std::numeric_limits<double>::infinity();
        return integral_M(m.radius_avg, 2.0 * d) / (2.0 * d * (1.0 - k0));
    };
    if (m.radius_avg.kind() == AverageKind::Constant &&
        m.center_avg.kind() == AverageKind::Constant) {
        const double d = closed_form_cr51(m.radius_avg.param1(), m.center_avg.param1());
        if (d <= hi) {
            return RadiusResult{d, lhs(d), Theorem::T31, RadiusMethod::ClosedForm, false};
        }
    }
    return detail::bisect_radius(lhs, 1.0, hi, tol, Theorem::T31);
}

/// Uniqueness radius of the center-condition theorem: largest delta with
/// int_0^{2d} kappa0(u) (2d - u) du / (2d) <= 1.  The left side equals
/// K(kappa0,2d) - M(kappa0,2d)/(2d), which is non-decreasing for any
/// integrable kappa0.  Constant kappa0 short-circuits to 1/kappa0.
inline RadiusResult radius_uniqueness_t41(const LipschitzModel& m,
                                          std::optional<double> search_hi = std::nullopt,
                                          double tol = kDefaultBisectTol) {
    const double dom = m.center_avg.domain_hi();
    const double hi = search_hi ? detail::clamp_search_hi(*search_hi, dom)
                                : detail::default_search_hi(dom);
    auto lhs = [&m](double d) {
        return integral_K(m.center_avg, 2.0 * d) -
               integral_M(m.center_avg, 2.0 * d) / (2.0 * d);
    };
    if (m.center_avg.kind() == AverageKind::Constant) {
        const double d = closed_form_cr52(m.center_avg.param1());
        if (d <= hi) {
            return RadiusResult{d, lhs(d), Theorem::T41, RadiusMethod::ClosedForm, false};
        }
    }
    return detail::bisect_radius(lhs, 1.0, hi, tol, Theorem::T41);
}

/// Weak-average radius: largest delta with K(kappa,2d) + K(kappa0,2d) <= 1.
/// Needs only positive integrability; the left side is non-decreasing, so
/// bisection is exact.
inline RadiusResult radius_t51(const LipschitzModel& m,
                               std::optional<double> search_hi = std::nullopt,
                               double tol = kDefaultBisectTol) {
    const double dom = m.common_domain_hi();
    const double hi = search_hi ? detail::clamp_search_hi(*search_hi, dom)
                                : detail::default_search_hi(dom);
    auto lhs = [&m](double d) {
        return integral_K(m.radius_avg, 2.0 * d) + integral_K(m.center_avg, 2.0 * d);
    };
    if (m.radius_avg.kind() == AverageKind::Constant &&
        m.center_avg.kind() == AverageKind::Constant) {
        const double d = 1.0 / (2.0 * (m.radius_avg.param1() + m.center_avg.param1()));
        if (d <= hi) {
            return RadiusResult{d, lhs(d), Theorem::T51, RadiusMethod::ClosedForm, false};
        }
    }
    return detail::bisect_radius(lhs, 1.0, hi, tol, Theorem::T51);
}

/// Strong weak-average radius: largest delta with
/// K(kappa0,2d) + M(kappa,2d)/(2d) <= 1, valid when kappa_a is non-decreasing
/// for the given a.  Algebraically the same condition as radius_t31.
inline RadiusResult radius_t51_strong(const LipschitzModel& m, double a,
                                      std::optional<double> search_hi = std::nullopt,
                                      double tol = kDefaultBisectTol) {
    const double dom = m.common_domain_hi();
    const double hi = search_hi ? detail::clamp_search_hi(*search_hi, dom)
                                : detail::default_search_hi(dom);
    if (!is_nondecreasing_kappa_a(m.radius_avg, a, 2.0 * hi * (1.0 - 1e-12)))
        throw ModelError("radius_t51_strong: kappa_a is not non-decreasing for this a");
    auto lhs = [&m](double d) {
        return integral_K(m.center_avg, 2.0 * d) +
               integral_M(m.radius_avg, 2.0 * d) / (2.0 * d);
    };
    if (m.radius_avg.kind() == AverageKind::Constant &&
        m.center_avg.kind() == AverageKind::Constant) {
        const double d = closed_form_cr51(m.radius_avg.param1(), m.center_avg.param1());
        if (d <= hi) {
            return RadiusResult{d, lhs(d), Theorem::T51Strong, RadiusMethod::ClosedForm,
                                false};
        }
    }
    return detail::bisect_radius(lhs, 1.0, hi, tol, Theorem::T51Strong);
}

/// Center-only radius: largest delta with K(kappa0,2d) <= 1/3.  Constant,
/// power and rational kinds use the exact corollary formulas.
inline RadiusResult radius_t52(const AverageFunction& center,
                               std::optional<double> search_hi = std::nullopt,
                               double tol = kDefaultBisectTol) {
    const double dom = center.domain_hi();
    const double hi = search_hi ? detail::clamp_search_hi(*search_hi, dom)
                                : detail::default_search_hi(dom);
    auto lhs = [&center](double d) { return integral_K(center, 2.0 * d); };
    double d = -1.0;
    switch (center.kind()) {
        case AverageKind::Constant: d = 1.0 / (6.0 * center.param1()); break;
        case AverageKind::Power: d = closed_form_cr54(center.param1(), center.param2()); break;
        case AverageKind::Rational: d = closed_form_cr55(center.param1(), center.param2()); break;
        default: break;
    }
    if (d > 0.0 && d <= hi) {
        return RadiusResult{d, lhs(d), Theorem::T52, RadiusMethod::ClosedForm, false};
    }
    return detail::bisect_radius(lhs, 1.0 / 3.0, hi, tol, Theorem::T52);
}

/// Operative weak-average radius when both weak-average hypotheses hold: the
/// larger of the plain and strong feasible radii, tagged with its source.
inline RadiusResult radius_t51_operative(const LipschitzModel& m, double a,
                                         std::optional<double> search_hi = std::nullopt,
                                         double tol = kDefaultBisectTol) {
    const RadiusResult plain = radius_t51(m, search_hi, tol);
    RadiusResult best = plain;
    try {
        const RadiusResult strong = radius_t51_strong(m, a, search_hi, tol);
        if (strong.delta > best.delta) best = strong;
    } catch (const ModelError&) {
        // kappa_a hypothesis fails; the plain radius stands.
    }
    return best;
}

/// Minimal positive root of 2*kappa0(u)*u - 1 = 0, located by a geometric
/// bracketing scan followed by bisection.
inline double delta_bar(const AverageFunction& center,
                        std::optional<double> search_hi = std::nullopt,
                        double tol = kDefaultBisectTol) {
    double hi = search_hi.value_or(
        std::isfinite(center.domain_hi()) ? center.domain_hi() * (1.0 - 1e-9) : 1e3);
    hi = std::min(hi, center.domain_hi() * (1.0 - 1e-9));
    auto h = [&center](double u) { return 2.0 * center(u) * u - 1.0; };
    const auto grid = detail::geometric_grid(hi, 1024, 1e-12);
    double lo = -1.0, up = -1.0;
    if (h(grid[0]) >= 0.0) {
        // Root below the scan floor; bisection never evaluates at 0 itself.
        lo = 0.0;
        up = grid[0];
    } else {
        double prev = grid[0];
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (h(grid[i]) >= 0.0) {
                lo = prev;
                up = grid[i];
                break;
            }
            prev = grid[i];
        }
    }
    if (up < 0.0) throw NotFoundError("delta_bar: no sign change of 2*kappa0(u)*u - 1");
    while (up - lo > tol) {
        const double mid = 0.5 * (lo + up);
        if (mid <= lo || mid >= up) break;
        if (h(mid) >= 0.0)
            up = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + up);
}

struct RefinedModel {
    LipschitzModel model;
    double delta_bar_value = 0.0;
};

/// Substitutes the refinement kappa_bar for kappa after validating, by
/// sampling, that kappa_bar <= kappa on the intersection ball
/// [0, min(delta, delta_bar)].
inline RefinedModel refined_model(const LipschitzModel& m,
                                  std::optional<double> search_hi = std::nullopt) {
    if (!m.refined_avg) throw ModelError("refined_model: no refinement present");
    RadiusResult base;
    if (m.radius_nondecreasing && m.center_nondecreasing) {
        base = radius_t31(m, search_hi);
    } else {
        base = radius_t51(m, search_hi);
    }
    const double dbar = delta_bar(m.center_avg, search_hi);
    const double ball = std::min(base.delta, dbar);
    detail::check_dominates(m.radius_avg, *m.refined_avg, ball, "kappa_bar <= kappa");

    LipschitzModel refined{*m.refined_avg, m.center_avg, std::nullopt,
                           m.radius_nondecreasing, m.center_nondecreasing};
    detail::check_dominates(refined.radius_avg, refined.center_avg,
                            detail::sampling_hi(refined), "kappa0 <= kappa_bar");
    return RefinedModel{std::move(refined), dbar};
}

}  // namespace ntraub
