#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "ntraub/radii.hpp"

using namespace ntraub;
using Catch::Approx;

namespace {

const double kE = std::numbers::e;

/// Wraps a closed-form kind as a callback so the solver has to bisect.
AverageFunction as_callback(const AverageFunction& f) {
    const double hi = std::isfinite(f.domain_hi()) ? f.domain_hi() : 1e6;
    return AverageFunction::callback([f](double u) { return f(u); }, hi);
}

LipschitzModel motivational_model() {
    return make_model(AverageFunction::constant(kE / 2.0),
                      AverageFunction::constant((kE - 1.0) / 2.0),
                      AverageFunction::constant(std::exp(1.0 / (kE - 1.0)) / 2.0));
}

}  // namespace

TEST_CASE("convergence radius, constant averages") {
    const auto same = make_model(AverageFunction::constant(kE / 2.0),
                                 AverageFunction::constant(kE / 2.0));
    const RadiusResult d0 = radius_t31(same);
    CHECK(d0.delta == Approx(0.245253).margin(1e-6));
    CHECK(d0.method == RadiusMethod::ClosedForm);
    CHECK(d0.condition_lhs_at_delta <= 1.0 + 1e-9);

    const RadiusResult d1 = radius_t31(motivational_model());
    CHECK(d1.delta == Approx(0.324947).margin(1e-6));

    // Bisection on the same condition agrees with the closed form.
    const auto same_cb = LipschitzModel{as_callback(same.radius_avg),
                                        as_callback(same.center_avg), std::nullopt, true, true};
    CHECK(radius_t31(same_cb).delta == Approx(d0.delta).margin(1e-9));
}

TEST_CASE("convergence radius, affine averages") {
    const auto m = make_model(AverageFunction::affine(0.0, 3.0),
                              AverageFunction::affine(0.0, 1.5));
    const RadiusResult r = radius_t31(m);
    // Hand reduction of the radius condition: 4 d^2 <= 1 - 3 d^2.
    CHECK(r.delta == Approx(1.0 / std::sqrt(7.0)).margin(1e-8));
    CHECK(r.method == RadiusMethod::Bisection);
}

TEST_CASE("convergence radius requires non-decreasing flags") {
    auto m = make_model(AverageFunction::constant(2.0), AverageFunction::constant(1.0));
    m.radius_nondecreasing = false;
    CHECK_THROWS_AS(radius_t31(m), ModelError);
}

TEST_CASE("uniqueness radius") {
    const auto unit = make_model(AverageFunction::constant(1.0),
                                 AverageFunction::constant(1.0));
    const RadiusResult r = radius_uniqueness_t41(unit);
    CHECK(r.delta == Approx(1.0));
    CHECK(r.method == RadiusMethod::ClosedForm);

    for (double k : {0.5, 1.0, 2.0}) {
        const auto cb = LipschitzModel{as_callback(AverageFunction::constant(k)),
                                       as_callback(AverageFunction::constant(k)),
                                       std::nullopt, true, true};
        CHECK(radius_uniqueness_t41(cb).delta == Approx(1.0 / k).margin(1e-10));
    }
}

TEST_CASE("uniqueness radius, affine center") {
    // Printed quadratic-root formula, verbatim.
    const double gamma = 2.0, c0 = 1.0;
    const double printed = closed_form_cr57(gamma, c0);
    CHECK(printed == Approx((4.0 - std::sqrt(16.0 - 16.0 / 3.0)) / (8.0 / 3.0)).epsilon(1e-14));

    // Direct reduction of the condition: K - M/(2d) = gamma*d + (2/3)*c0*d^2,
    // so the largest admissible delta solves (2/3) c0 d^2 + gamma d = 1.
    const double truth =
        (-gamma + std::sqrt(gamma * gamma + (8.0 / 3.0) * c0)) / ((4.0 / 3.0) * c0);
    const auto m = make_model(AverageFunction::affine(gamma, c0),
                              AverageFunction::affine(gamma, c0));
    const RadiusResult r = radius_uniqueness_t41(m);
    CHECK(r.delta == Approx(truth).margin(1e-9));
    // The printed root is feasible but conservative; bisection is the radius.
    CHECK(printed < r.delta);
}

TEST_CASE("weak-average radius") {
    for (double k : {0.25, 1.0, 2.5}) {
        const auto m = make_model(AverageFunction::constant(k),
                                  AverageFunction::constant(k));
        CHECK(radius_t51(m).delta == Approx(1.0 / (4.0 * k)).epsilon(1e-12));
        const auto cb = LipschitzModel{as_callback(m.radius_avg), as_callback(m.center_avg),
                                       std::nullopt, true, true};
        CHECK(radius_t51(cb).delta == Approx(1.0 / (4.0 * k)).margin(1e-9));
    }
}

TEST_CASE("weak-average radius, power averages and the printed corollary") {
    const double c = 1.3, a = 0.6, c0 = 0.8;
    const auto m = make_model(AverageFunction::power(c, a), AverageFunction::power(c0, a));

    // Direct reduction of the plain condition: (c + c0) (2 d)^a = 1.
    const double plain_truth = 0.5 * std::pow(1.0 / (c + c0), 1.0 / a);
    const RadiusResult plain = radius_t51(m);
    CHECK(plain.delta == Approx(plain_truth).margin(1e-9));

    // The printed power-kind radius solves the strong condition instead; the
    // two radii genuinely differ and bisection of each condition is
    // authoritative.
    const RadiusResult strong = radius_t51_strong(m, a);
    CHECK(strong.delta == Approx(closed_form_cr53(c, a, c0)).margin(1e-9));
    CHECK(std::fabs(plain.delta - closed_form_cr53(c, a, c0)) > 1e-6);
}

TEST_CASE("weak-average radius clamps at search_hi") {
    const auto m = make_model(AverageFunction::constant(0.5),
                              AverageFunction::constant(0.5));
    const RadiusResult r = radius_t51(m, 0.1);
    CHECK(r.delta == Approx(0.1));
    CHECK(r.clamped);
    CHECK(r.condition_lhs_at_delta <= 1.0);
}

TEST_CASE("strong weak-average radius reproduces the constant-case values") {
    const auto m1 = make_model(AverageFunction::constant(kE / 2.0),
                               AverageFunction::constant(kE / 2.0));
    CHECK(radius_t51_strong(m1, 1.0).delta == Approx(0.245253).margin(1e-6));

    const auto m2 = make_model(AverageFunction::constant(kE / 2.0),
                               AverageFunction::constant((kE - 1.0) / 2.0));
    CHECK(radius_t51_strong(m2, 1.0).delta == Approx(0.324947).margin(1e-6));

    const auto m3 = make_model(AverageFunction::constant(std::exp(1.0 / (kE - 1.0)) / 2.0),
                               AverageFunction::constant((kE - 1.0) / 2.0));
    CHECK(radius_t51_strong(m3, 1.0).delta == Approx(0.382692).margin(1e-6));

    // kappa_a hypothesis failure surfaces as ModelError.
    const auto pw = make_model(AverageFunction::power(1.0, 0.4),
                               AverageFunction::power(0.5, 0.4));
    CHECK_THROWS_AS(radius_t51_strong(pw, 0.9), ModelError);
}

TEST_CASE("center-only radius") {
    const RadiusResult r1 = radius_t52(AverageFunction::constant(1.0));
    CHECK(r1.delta == Approx(1.0 / 6.0).margin(1e-12));

    CHECK(radius_t52(AverageFunction::power(1.0, 1.0)).delta ==
          Approx(1.0 / 6.0).margin(1e-12));

    const RadiusResult rat = radius_t52(AverageFunction::rational(1.0, 1.0));
    CHECK(rat.delta == Approx((4.0 - std::sqrt(12.0)) / 8.0).margin(1e-12));
    CHECK(rat.condition_lhs_at_delta == Approx(1.0 / 3.0).margin(1e-9));
    // Bisection on c0/(1-2 gamma d)^2 - c0 <= 1/3 agrees with the formula.
    const RadiusResult rat_cb = radius_t52(as_callback(AverageFunction::rational(1.0, 1.0)));
    CHECK(rat_cb.delta == Approx(rat.delta).margin(1e-9));
}

TEST_CASE("operative weak-average radius picks the larger feasible delta") {
    const double c = 1.3, a = 0.6, c0 = 0.8;
    const auto m = make_model(AverageFunction::power(c, a), AverageFunction::power(c0, a));
    const RadiusResult best = radius_t51_operative(m, a);
    CHECK(best.delta ==
          Approx(std::max(radius_t51(m).delta, radius_t51_strong(m, a).delta)));
}

TEST_CASE("delta_bar") {
    CHECK(delta_bar(AverageFunction::constant(2.0)) == Approx(0.25).margin(1e-10));
    CHECK(delta_bar(AverageFunction::affine(0.0, 3.0)) ==
          Approx(1.0 / std::sqrt(6.0)).margin(1e-10));
    CHECK(delta_bar(AverageFunction::constant((kE - 1.0) / 2.0)) ==
          Approx(1.0 / (kE - 1.0)).margin(1e-10));
    CHECK_THROWS_AS(delta_bar(AverageFunction::constant(1e-3), 1.0), NotFoundError);
}

TEST_CASE("refined model") {
    const auto m = motivational_model();
    const RefinedModel rm = refined_model(m);
    CHECK(rm.delta_bar_value == Approx(1.0 / (kE - 1.0)).margin(1e-9));
    CHECK(radius_t31(rm.model).delta == Approx(0.382692).margin(1e-6));

    // Identity refinement changes nothing.
    const auto id = make_model(AverageFunction::constant(2.0), AverageFunction::constant(1.0),
                               AverageFunction::constant(2.0));
    CHECK(radius_t31(refined_model(id).model).delta == Approx(radius_t31(id).delta));

    // kappa = kappa_bar = 3u is a no-op refinement.
    const auto ham = make_model(AverageFunction::affine(0.0, 3.0),
                                AverageFunction::affine(0.0, 1.5),
                                AverageFunction::affine(0.0, 3.0));
    CHECK(radius_t31(refined_model(ham).model).delta ==
          Approx(radius_t31(ham).delta).margin(1e-10));

    // A "refinement" that exceeds kappa fails the dominance sampling.
    const auto bad = make_model(AverageFunction::constant(2.0), AverageFunction::constant(1.0),
                                AverageFunction::constant(5.0));
    CHECK_THROWS_AS(refined_model(bad), ModelError);

    auto none = make_model(AverageFunction::constant(2.0), AverageFunction::constant(1.0));
    CHECK_THROWS_AS(refined_model(none), ModelError);
}

TEST_CASE("radius ordering under pointwise dominance") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> pos(0.2, 2.0);
    std::uniform_real_distribution<double> bump(1.0, 2.5);
    for (int rep = 0; rep < 30; ++rep) {
        const bool affine = rng() % 2 == 0;
        const double ka = pos(rng), k0a = ka * std::uniform_real_distribution<>(0.3, 1.0)(rng);
        const double kb = ka * bump(rng), k0b = k0a * bump(rng);
        const auto small = affine ? make_model(AverageFunction::affine(0.0, ka),
                                               AverageFunction::affine(0.0, k0a))
                                  : make_model(AverageFunction::constant(ka),
                                               AverageFunction::constant(k0a));
        const auto big = affine ? make_model(AverageFunction::affine(0.0, kb),
                                             AverageFunction::affine(0.0, std::min(k0b, kb)))
                                : make_model(AverageFunction::constant(kb),
                                             AverageFunction::constant(std::min(k0b, kb)));
        CHECK(radius_t31(small).delta >= radius_t31(big).delta - 1e-12);
        CHECK(radius_t51(small).delta >= radius_t51(big).delta - 1e-12);
        CHECK(radius_uniqueness_t41(small).delta >=
              radius_uniqueness_t41(big).delta - 1e-12);
        CHECK(radius_t52(small.center_avg).delta >= radius_t52(big.center_avg).delta - 1e-12);
    }
}

TEST_CASE("feasibility bracketing of returned radii") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> pos(0.3, 2.0);
    for (int rep = 0; rep < 15; ++rep) {
        const double k = pos(rng), k0 = k * 0.7;
        const auto m = make_model(AverageFunction::affine(0.1, k),
                                  AverageFunction::affine(0.1, k0));
        auto lhs_t51 = [&](double d) {
            return integral_K(m.radius_avg, 2 * d) + integral_K(m.center_avg, 2 * d);
        };
        const RadiusResult r = radius_t51(m);
        CHECK(lhs_t51(r.delta * (1.0 - 1e-6)) <= 1.0);
        if (!r.clamped) {
            CHECK(lhs_t51(r.delta * (1.0 + 1e-3)) >= 1.0 - 1e-9);
        }
    }
}

TEST_CASE("center-only radius is at most the weak-average radius") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> pos(0.2, 2.0);
    for (int rep = 0; rep < 20; ++rep) {
        const double k0 = pos(rng);
        const auto kinds = rep % 2 == 0
                               ? make_model(AverageFunction::constant(k0),
                                            AverageFunction::constant(k0))
                               : make_model(AverageFunction::affine(0.05, k0),
                                            AverageFunction::affine(0.05, k0));
        CHECK(radius_t52(kinds.center_avg).delta <= radius_t51(kinds).delta + 1e-12);
    }
}
