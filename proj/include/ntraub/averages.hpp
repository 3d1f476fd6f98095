#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ntraub/errors.hpp"
#include "ntraub/quadrature.hpp"

namespace ntraub {

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr int kDefaultMonotoneGrid = 512;

enum class AverageKind { Constant, Affine, Power, Rational, Callback };

inline const char* to_string(AverageKind k) {
    switch (k) {
        case AverageKind::Constant: return "constant";
        case AverageKind::Affine: return "affine";
        case AverageKind::Power: return "power";
        case AverageKind::Rational: return "rational";
        case AverageKind::Callback: return "callback";
    }
    return "unknown";
}

/// A positive integrable average function kappa on (0, domain_hi), the
/// integrand of every generalized Lipschitz condition.  The named kinds carry
/// analytic integrals; Callback falls back to adaptive quadrature.
class AverageFunction {
  public:
    /// kappa(u) = k.
    static AverageFunction constant(double k) {
        if (!(k > 0.0)) throw DomainError("constant average requires k > 0");
        return AverageFunction(AverageKind::Constant, k, 0.0,
                               std::numeric_limits<double>::infinity(), {});
    }

    /// kappa(u) = gamma + slope*u.
    static AverageFunction affine(double gamma, double slope) {
        if (gamma < 0.0 || slope < 0.0 || (gamma == 0.0 && slope == 0.0))
            throw DomainError("affine average requires gamma, slope >= 0, not both 0");
        return AverageFunction(AverageKind::Affine, gamma, slope,
                               std::numeric_limits<double>::infinity(), {});
    }

    /// kappa(u) = c*a*u^(a-1), a in (0,1]; integrable at 0 despite the
    /// u -> 0 singularity.
    static AverageFunction power(double c, double a) {
        if (!(c > 0.0)) throw DomainError("power average requires c > 0");
        if (!(a > 0.0 && a <= 1.0)) throw DomainError("power average requires a in (0,1]");
        return AverageFunction(AverageKind::Power, c, a,
                               std::numeric_limits<double>::infinity(), {});
    }

    /// kappa(u) = 2*gamma*c0 / (1 - gamma*u)^3, defined for u < 1/gamma.
    static AverageFunction rational(double gamma, double c0) {
        if (!(gamma > 0.0) || !(c0 > 0.0))
            throw DomainError("rational average requires gamma, c0 > 0");
        return AverageFunction(AverageKind::Rational, gamma, c0, 1.0 / gamma, {});
    }

    /// Arbitrary positive integrable kappa; the caller states the domain.
    /// Not serializable.  The callable must be re-entrant.
    static AverageFunction callback(std::function<double(double)> f, double domain_hi) {
        if (!(domain_hi > 0.0)) throw DomainError("callback average requires domain_hi > 0");
        if (!f) throw DomainError("callback average requires a callable");
        return AverageFunction(AverageKind::Callback, 0.0, 0.0, domain_hi, std::move(f));
    }

    AverageKind kind() const { return kind_; }
    double domain_hi() const { return domain_hi_; }

    // Kind parameters, named per construction: constant -> {k,-},
    // affine -> {gamma,slope}, power -> {c,a}, rational -> {gamma,c0}.
    double param1() const { return p1_; }
    double param2() const { return p2_; }

    /// Evaluates kappa(u) for 0 < u < domain_hi.
    double operator()(double u) const {
        if (!(u > 0.0) || !(u < domain_hi_))
            throw DomainError("eval_kappa: u outside (0, domain_hi)");
        switch (kind_) {
            case AverageKind::Constant: return p1_;
            case AverageKind::Affine: return p1_ + p2_ * u;
            case AverageKind::Power: return p1_ * p2_ * std::pow(u, p2_ - 1.0);
            case AverageKind::Rational: {
                const double d = 1.0 - p1_ * u;
                return 2.0 * p1_ * p2_ / (d * d * d);
            }
            case AverageKind::Callback: return fn_(u);
        }
        throw DomainError("eval_kappa: bad kind");
    }

    bool has_closed_forms() const { return kind_ != AverageKind::Callback; }

  private:
    AverageFunction(AverageKind kind, double p1, double p2, double domain_hi,
                    std::function<double(double)> fn)
        : kind_(kind), p1_(p1), p2_(p2), domain_hi_(domain_hi), fn_(std::move(fn)) {}

    AverageKind kind_;
    double p1_;
    double p2_;
    double domain_hi_;
    std::function<double(double)> fn_;
};

inline double eval_kappa(const AverageFunction& f, double u) { return f(u); }

/// Integral K(s) = int_0^s kappa(u) du.
inline double integral_K(const AverageFunction& f, double s,
                         double tol = kDefaultQuadTol) {
    if (s < 0.0) throw DomainError("integral_K: s < 0");
    if (!(s < f.domain_hi())) throw DomainError("integral_K: s >= domain_hi");
    if (s == 0.0) return 0.0;
    switch (f.kind()) {
        case AverageKind::Constant: return f.param1() * s;
        case AverageKind::Affine: return f.param1() * s + 0.5 * f.param2() * s * s;
        case AverageKind::Power: return f.param1() * std::pow(s, f.param2());
        case AverageKind::Rational: {
            // c0/(1-g s)^2 - c0 in product form; the difference cancels
            // catastrophically for small s.
            const double d = 1.0 - f.param1() * s;
            return f.param2() * f.param1() * s * (2.0 - f.param1() * s) / (d * d);
        }
        case AverageKind::Callback:
            return adaptive_quadrature([&f](double u) { return f(u); }, 0.0, s, tol);
    }
    throw DomainError("integral_K: bad kind");
}

/// Moment integral M(s) = int_0^s kappa(u) * u du.
inline double integral_M(const AverageFunction& f, double s,
                         double tol = kDefaultQuadTol) {
    if (s < 0.0) throw DomainError("integral_M: s < 0");
    if (!(s < f.domain_hi())) throw DomainError("integral_M: s >= domain_hi");
    if (s == 0.0) return 0.0;
    switch (f.kind()) {
        case AverageKind::Constant: return 0.5 * f.param1() * s * s;
        case AverageKind::Affine:
            return 0.5 * f.param1() * s * s + f.param2() * s * s * s / 3.0;
        case AverageKind::Power: {
            const double a = f.param2();
            return f.param1() * a * std::pow(s, a + 1.0) / (a + 1.0);
        }
        case AverageKind::Rational: {
            // Antiderivative of 2*gamma*c0*u/(1-gamma*u)^3 from 0 to s.
            const double d = 1.0 - f.param1() * s;
            const double t = f.param1() * s / d;
            return f.param2() / f.param1() * t * t;
        }
        case AverageKind::Callback:
            return adaptive_quadrature([&f](double u) { return f(u) * u; }, 0.0, s, tol);
    }
    throw DomainError("integral_M: bad kind");
}

/// int_lo^hi kappa(u) du = K(hi) - K(lo), the tail of the radius condition.
inline double integral_tail(const AverageFunction& f, double lo, double hi,
                            double tol = kDefaultQuadTol) {
    if (!(0.0 <= lo && lo <= hi)) throw DomainError("integral_tail: need 0 <= lo <= hi");
    if (!(hi < f.domain_hi())) throw DomainError("integral_tail: hi >= domain_hi");
    const double v = integral_K(f, hi, tol) - integral_K(f, lo, tol);
    return v > 0.0 ? v : 0.0;
}

/// Normalized moment phi_{beta,a}(P) = P^{-(a+beta)} int_0^P u^beta kappa(u) du.
inline double phi(const AverageFunction& f, double beta, double a, double P,
                  double tol = kDefaultQuadTol) {
    if (beta < 0.0) throw DomainError("phi: beta < 0");
    if (!(a >= 0.0 && a <= 1.0)) throw DomainError("phi: a outside [0,1]");
    if (!(P > 0.0)) throw DomainError("phi: P <= 0");
    if (!(P < f.domain_hi())) throw DomainError("phi: P >= domain_hi");
    double moment;
    if (beta == 0.0) {
        moment = integral_K(f, P, tol);
    } else if (beta == 1.0) {
        moment = integral_M(f, P, tol);
    } else {
        moment = adaptive_quadrature(
            [&f, beta](double u) { return std::pow(u, beta) * f(u); }, 0.0, P, tol);
    }
    return moment / std::pow(P, a + beta);
}

namespace detail {

/// Geometric grid of n points in (lo_frac*hi, hi].
inline std::vector<double> geometric_grid(double hi, int n, double lo_frac = 1e-8) {
    std::vector<double> g(static_cast<std::size_t>(n));
    const double lo = hi * lo_frac;
    const double ratio = std::pow(hi / lo, 1.0 / (n - 1));
    double v = lo;
    for (int i = 0; i < n; ++i) {
        g[static_cast<std::size_t>(i)] = (i == n - 1) ? hi : v;
        v *= ratio;
    }
    return g;
}

}  // namespace detail

/// Checks that kappa_a(P) = P^(1-a) * kappa(P) is non-decreasing on a
/// geometric grid in (0, hi]; decreases within 1e-12 relative are ignored.
inline bool is_nondecreasing_kappa_a(const AverageFunction& f, double a, double hi,
                                     int grid_n = kDefaultMonotoneGrid) {
    if (!(a >= 0.0 && a <= 1.0)) throw DomainError("kappa_a check: a outside [0,1]");
    if (!(hi > 0.0 && hi < f.domain_hi()))
        throw DomainError("kappa_a check: hi outside (0, domain_hi)");
    if (grid_n < 2) throw DomainError("kappa_a check: grid_n < 2");
    const auto grid = detail::geometric_grid(hi, grid_n);
    double prev = std::pow(grid[0], 1.0 - a) * f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = std::pow(grid[i], 1.0 - a) * f(grid[i]);
        if (cur < prev * (1.0 - 1e-12) - 1e-300) return false;
        prev = cur;
    }
    return true;
}

/// Hypotheses bundle of the convergence theorems: kappa for the radius
/// condition, kappa0 for the center condition, optionally a refinement
/// kappa_bar valid on the intersection ball.
struct LipschitzModel {
    AverageFunction radius_avg;
    AverageFunction center_avg;
    std::optional<AverageFunction> refined_avg;
    bool radius_nondecreasing = true;
    bool center_nondecreasing = true;

    double common_domain_hi() const {
        return std::min(radius_avg.domain_hi(), center_avg.domain_hi());
    }
};

namespace detail {

inline void check_dominates(const AverageFunction& big, const AverageFunction& small,
                            double hi, const char* what) {
    const auto grid = geometric_grid(hi, 256);
    for (double u : grid) {
        const double lo_v = small(u);
        const double hi_v = big(u);
        if (lo_v > hi_v * (1.0 + 1e-12) + 1e-15) {
            throw ModelError(std::string("model dominance violated: ") + what +
                             " at u=" + std::to_string(u));
        }
    }
}

inline double sampling_hi(const LipschitzModel& m) {
    double hi = m.common_domain_hi();
    if (!std::isfinite(hi)) hi = 1e3;
    return hi * (1.0 - 1e-9);
}

}  // namespace detail

/// Builds a model and validates kappa0 <= kappa by sampling on a geometric
/// grid of the common domain; violations raise ModelError.
inline LipschitzModel make_model(AverageFunction radius_avg, AverageFunction center_avg,
                                 std::optional<AverageFunction> refined_avg = std::nullopt,
                                 bool radius_nondecreasing = true,
                                 bool center_nondecreasing = true) {
    LipschitzModel m{std::move(radius_avg), std::move(center_avg), std::move(refined_avg),
                     radius_nondecreasing, center_nondecreasing};
    detail::check_dominates(m.radius_avg, m.center_avg, detail::sampling_hi(m),
                            "kappa0 <= kappa");
    return m;
}

}  // namespace ntraub
