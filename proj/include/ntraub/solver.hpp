#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ntraub/errors.hpp"
#include "ntraub/linalg.hpp"

namespace ntraub {

/// A nonlinear map G: R^dim -> R^dim with optional analytic Jacobian and
/// optional known root (benchmark mode).  Evaluators must be re-entrant.
struct Problem {
    int dim = 0;
    std::string name;
    std::function<Vector(const Vector&)> residual;
    std::function<Matrix(const Vector&)> jacobian;  // empty -> finite differences
    std::optional<Vector> known_root;
};

inline double default_fd_step() {
    return std::sqrt(std::numeric_limits<double>::epsilon());
}

/// Forward-difference Jacobian, column j stepped by fd_step * max(1, |x_j|).
/// One residual evaluation per column beyond the base point.
inline Matrix jacobian_fd(const Problem& p, const Vector& x,
                          double fd_step = default_fd_step()) {
    const Vector g0 = p.residual(x);
    Matrix jac(p.dim, p.dim);
    Vector xh = x;
    for (int j = 0; j < p.dim; ++j) {
        const double h = fd_step * std::max(1.0, std::fabs(x[static_cast<std::size_t>(j)]));
        xh[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + h;
        const Vector gh = p.residual(xh);
        xh[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)];
        for (int i = 0; i < p.dim; ++i) {
            jac(i, j) = (gh[static_cast<std::size_t>(i)] - g0[static_cast<std::size_t>(i)]) / h;
        }
    }
    return jac;
}

inline Matrix eval_jacobian(const Problem& p, const Vector& x, double fd_step) {
    return p.jacobian ? p.jacobian(x) : jacobian_fd(p, x, fd_step);
}

struct StepResult {
    Vector y;
    Vector z;
    Vector x_next;
};

/// One three-step iteration:
///   y = x - G'(x)^{-1} G(x)
///   z = y - G'(x)^{-1} G(y)
///   x+ = z - G'(y)^{-1} G(z)
/// Exactly two Jacobian evaluations and factorizations; the factorization at
/// x serves the first two solves.
inline StepResult newton_traub_step(const Problem& p, const Vector& x,
                                    double fd_step = default_fd_step()) {
    const std::size_t n = static_cast<std::size_t>(p.dim);
    std::optional<LuFactorization> lu_x;
    try {
        lu_x.emplace(eval_jacobian(p, x, fd_step));
    } catch (const SingularMatrixError& e) {
        throw SingularJacobianError(std::string("singular Jacobian at x: ") + e.what(), "x");
    }

    StepResult r;
    const Vector dx = lu_x->solve(p.residual(x));
    r.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.y[i] = x[i] - dx[i];

    const Vector dy = lu_x->solve(p.residual(r.y));
    r.z.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.z[i] = r.y[i] - dy[i];

    std::optional<LuFactorization> lu_y;
    try {
        lu_y.emplace(eval_jacobian(p, r.y, fd_step));
    } catch (const SingularMatrixError& e) {
        throw SingularJacobianError(std::string("singular Jacobian at y: ") + e.what(), "y");
    }
    const Vector dz = lu_y->solve(p.residual(r.z));
    r.x_next.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.x_next[i] = r.z[i] - dz[i];
    return r;
}

enum class SolveStatus { Converged, MaxIter, SingularJacobian, Diverged };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::MaxIter: return "MaxIter";
        case SolveStatus::SingularJacobian: return "SingularJacobian";
        case SolveStatus::Diverged: return "Diverged";
    }
    return "unknown";
}

/// One record per outer iteration.  y/z are empty on the terminal record;
/// err_* are present iff the problem has a known root.
struct TraceRecord {
    Vector x;
    Vector y;
    Vector z;
    double res_norm = 0.0;
    std::optional<double> err_x;
    std::optional<double> err_y;
    std::optional<double> err_z;
};

struct IterationTrace {
    std::vector<TraceRecord> records;
    SolveStatus status = SolveStatus::MaxIter;
    int outer_iterations = 0;
    std::string note;

    /// Outer-iterate error norms, in order, when a known root exists.
    std::vector<double> outer_errors() const {
        std::vector<double> e;
        e.reserve(records.size());
        for (const auto& r : records) {
            if (r.err_x) e.push_back(*r.err_x);
        }
        return e;
    }
};

struct SolveOptions {
    double tol = 1e-13;
    int max_iter = 50;
    double fd_step = default_fd_step();
    NormKind norm = NormKind::Max;
    double divergence_guard = 1e12;
};

namespace detail {

inline std::optional<double> error_to_root(const Problem& p, const Vector& v,
                                           NormKind norm) {
    if (!p.known_root) return std::nullopt;
    Vector d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) d[i] = v[i] - (*p.known_root)[i];
    return vector_norm(d, norm);
}

}  // namespace detail

/// Runs the iteration until the residual norm drops to tol, the iterate
/// escapes the divergence guard, the Jacobian turns singular, or the budget
/// runs out.  All sub-iterates are recorded.
inline IterationTrace solve(const Problem& p, Vector x0, const SolveOptions& opt = {}) {
    if (opt.max_iter < 1) throw DomainError("solve: max_iter must be >= 1");
    if (!(opt.tol > 0.0)) throw DomainError("solve: tol must be positive");
    if (static_cast<int>(x0.size()) != p.dim)
        throw DomainError("solve: x0 dimension mismatch");

    IterationTrace trace;
    Vector x = std::move(x0);
    for (int t = 0; t < opt.max_iter; ++t) {
        TraceRecord rec;
        rec.x = x;
        rec.res_norm = vector_norm(p.residual(x), opt.norm);
        rec.err_x = detail::error_to_root(p, x, opt.norm);
        if (rec.res_norm <= opt.tol) {
            trace.records.push_back(std::move(rec));
            trace.status = SolveStatus::Converged;
            trace.outer_iterations = t;
            return trace;
        }
        if (vector_norm(x, opt.norm) > opt.divergence_guard) {
            trace.records.push_back(std::move(rec));
            trace.status = SolveStatus::Diverged;
            trace.outer_iterations = t;
            return trace;
        }
        StepResult step;
        try {
            step = newton_traub_step(p, x, opt.fd_step);
        } catch (const SingularJacobianError& e) {
            trace.records.push_back(std::move(rec));
            trace.status = SolveStatus::SingularJacobian;
            trace.outer_iterations = t;
            trace.note = e.where;
            return trace;
        }
        rec.y = step.y;
        rec.z = step.z;
        rec.err_y = detail::error_to_root(p, step.y, opt.norm);
        rec.err_z = detail::error_to_root(p, step.z, opt.norm);
        trace.records.push_back(std::move(rec));
        x = std::move(step.x_next);
    }
    TraceRecord rec;
    rec.x = x;
    rec.res_norm = vector_norm(p.residual(x), opt.norm);
    rec.err_x = detail::error_to_root(p, x, opt.norm);
    trace.status = rec.res_norm <= opt.tol ? SolveStatus::Converged : SolveStatus::MaxIter;
    trace.records.push_back(std::move(rec));
    trace.outer_iterations = opt.max_iter;
    return trace;
}

/// Saturation floor for order estimation: errors at or below ~10*eps^0.9 are
/// dominated by rounding noise and excluded.
inline double coc_saturation_floor() {
    return 10.0 * std::pow(std::numeric_limits<double>::epsilon(), 0.9);
}

/// Computational order of convergence, ln(e_{t+1}/e_t) / ln(e_t/e_{t-1}), for
/// every triple of consecutive outer errors that is strictly decreasing and
/// fully above the saturation floor.
inline std::vector<double> coc_estimate(const IterationTrace& trace) {
    const std::vector<double> e = trace.outer_errors();
    if (e.size() < 3) {
        throw InsufficientDataError("coc_estimate: need >= 3 outer error norms");
    }
    const double floor = coc_saturation_floor();
    std::vector<double> out;
    for (std::size_t t = 1; t + 1 < e.size(); ++t) {
        const double e0 = e[t - 1], e1 = e[t], e2 = e[t + 1];
        if (e0 <= floor || e1 <= floor || e2 <= floor) continue;
        if (!(e0 > e1 && e1 > e2)) continue;
        out.push_back(std::log(e2 / e1) / std::log(e1 / e0));
    }
    if (out.empty()) {
        throw InsufficientDataError("coc_estimate: no admissible pre-saturation triple");
    }
    return out;
}

}  // namespace ntraub
