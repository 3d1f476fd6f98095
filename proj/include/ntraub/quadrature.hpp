#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <vector>

#include "ntraub/errors.hpp"

namespace ntraub {

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1,1], nonnegative abscissae.  All nodes are
// strictly interior, so panel endpoints are never evaluated.
inline constexpr double gk15_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double gk15_weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

// Embedded Gauss-7 weights; its nodes are gk15_nodes[1], [3], [5], [7].
inline constexpr double g7_weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double integral = 0.0;
    double error = 0.0;
    double abs_integral = 0.0;
};

template <class F>
PanelResult gk15_panel(F&& g, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    // Keep rounded node positions strictly inside (a, b); the endpoints may
    // be singular.
    auto eval = [&](double x) {
        if (x <= a) x = std::nextafter(a, b);
        if (x >= b) x = std::nextafter(b, a);
        return g(x);
    };
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = eval(center - half * gk15_nodes[i]);
        fv[14 - i] = eval(center + half * gk15_nodes[i]);
    }
    fv[7] = eval(center);

    double resk = 0.0, resg = 0.0, resabs = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double sum = (i == 7) ? fv[7] : fv[i] + fv[14 - i];
        resk += gk15_weights[i] * sum;
        resabs += gk15_weights[i] * ((i == 7) ? std::fabs(fv[7])
                                              : std::fabs(fv[i]) + std::fabs(fv[14 - i]));
    }
    for (int i = 0; i < 4; ++i) {
        const int k = 2 * i + 1;
        resg += g7_weights[i] * ((k == 7) ? fv[7] : fv[k] + fv[14 - k]);
    }

    // QUADPACK-style error scaling.
    const double reskh = 0.5 * resk;
    double resasc = 0.0;
    for (int i = 0; i < 8; ++i) {
        if (i == 7) {
            resasc += gk15_weights[i] * std::fabs(fv[7] - reskh);
        } else {
            resasc += gk15_weights[i] *
                      (std::fabs(fv[i] - reskh) + std::fabs(fv[14 - i] - reskh));
        }
    }
    resasc *= half;

    double err = std::fabs(resk - resg) * half;
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }

    PanelResult r;
    r.integral = resk * half;
    r.error = err;
    r.abs_integral = resabs * half;
    return r;
}

struct Panel {
    double a, b;
    PanelResult res;
    bool operator<(const Panel& other) const { return res.error < other.res.error; }
};

}  // namespace detail

inline constexpr std::size_t kDefaultQuadBudget = 1'000'000;

/// Integrates g over [lo, hi] to estimated relative error <= tol by adaptive
/// Gauss-Kronrod panel refinement.  Panel endpoints are never evaluated, so
/// integrable endpoint singularities are handled by subdivision toward the
/// endpoint.  Throws QuadratureError once `max_evals` integrand evaluations
/// have been spent without meeting the tolerance.
template <class F>
double adaptive_quadrature(F&& g, double lo, double hi, double tol,
                           std::size_t max_evals = kDefaultQuadBudget) {
    if (!(lo <= hi)) throw DomainError("adaptive_quadrature: lo > hi");
    if (lo == hi) return 0.0;

    std::priority_queue<detail::Panel> panels;
    detail::Panel first{lo, hi, detail::gk15_panel(g, lo, hi)};
    double total = first.res.integral;
    double total_err = first.res.error;
    std::size_t evals = 15;
    panels.push(first);

    const double abs_floor = 1e-300;
    while (total_err > tol * std::max(std::fabs(total), abs_floor)) {
        if (!std::isfinite(total)) {
            throw QuadratureError("adaptive_quadrature: integrand produced non-finite values");
        }
        if (evals + 30 > max_evals) {
            throw QuadratureError("adaptive_quadrature: evaluation budget exhausted");
        }
        detail::Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            // Panel narrowed to machine resolution; accept its estimate.
            total_err -= worst.res.error;
            if (panels.empty()) break;
            continue;
        }
        detail::Panel left{worst.a, mid, detail::gk15_panel(g, worst.a, mid)};
        detail::Panel right{mid, worst.b, detail::gk15_panel(g, mid, worst.b)};
        evals += 30;
        total += left.res.integral + right.res.integral - worst.res.integral;
        total_err += left.res.error + right.res.error - worst.res.error;
        panels.push(left);
        panels.push(right);
    }
    return total;
}

}  // namespace ntraub
