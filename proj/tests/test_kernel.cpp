#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bmx/detail/expdiff.hpp"
#include "bmx/errors.hpp"
#include "bmx/kernel.hpp"

using bmx::CorrelationKernel;

namespace {

// Composite Simpson quadrature used as an independent check of the closed
// forms; fine enough that its own error is far below the test tolerances.
template <typename F>
double simpson(const F& f, double a, double b, int n_pairs = 2000) {
    const double h = (b - a) / (2.0 * n_pairs);
    double sum = f(a) + f(b);
    for (int i = 1; i < 2 * n_pairs; ++i) {
        sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

}  // namespace

TEST_CASE("construction validates the parameter domain") {
    CHECK_THROWS_AS(CorrelationKernel(0.0), bmx::scenario_error);
    CHECK_THROWS_AS(CorrelationKernel(-1.0), bmx::scenario_error);
    CHECK_THROWS_AS(CorrelationKernel(0.5, 0.5), bmx::scenario_error);
    CHECK_THROWS_AS(CorrelationKernel(0.5, 1.0), bmx::scenario_error);
    CHECK_THROWS_AS(CorrelationKernel(0.5, -2.0), bmx::scenario_error);
    CHECK_NOTHROW(CorrelationKernel(0.5));
    CHECK_NOTHROW(CorrelationKernel(0.5, 1.5));
    CHECK_NOTHROW(CorrelationKernel(0.5, 4.0));
}

TEST_CASE("negative times are rejected") {
    const CorrelationKernel kernel(0.5);
    CHECK_THROWS_AS(kernel.intensity(-1e-9), bmx::scenario_error);
    CHECK_THROWS_AS(kernel.intensity_integral(-1e-9), bmx::scenario_error);
}

TEST_CASE("normal kernel rises from zero and saturates at one") {
    const CorrelationKernel kernel(0.5);
    CHECK(kernel.intensity(0.0) == 0.0);
    CHECK(kernel.intensity_integral(0.0) == 0.0);
    double prev = -1.0;
    for (double t : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0}) {
        const double i = kernel.intensity(t);
        CHECK(i > prev);
        CHECK(i < 1.0);
        prev = i;
    }
    CHECK(kernel.intensity(10.0) == doctest::Approx(1.0 - std::exp(-20.0)).epsilon(1e-14));
}

TEST_CASE("anomalous kernel starts at zero and grows without bound") {
    for (double lambda : {1.5, 2.0, 3.0, 4.0}) {
        const CorrelationKernel kernel(0.5, lambda);
        CHECK(kernel.intensity(0.0) == 0.0);
        CHECK(kernel.intensity(50.0) > 10.0);
    }
}

TEST_CASE("dimensionless and physical-time intensities run identical arithmetic") {
    // t_c = 0.5 makes alpha * t_c / t_c == alpha exact in double arithmetic,
    // so the delegation must give bit-equal results.
    for (double lambda : {0.0, 2.0, 3.5}) {
        const CorrelationKernel kernel(0.5, lambda);
        for (double alpha : {0.0, 0.125, 0.7, 1.0, 3.9, 17.0}) {
            CHECK(kernel.intensity(alpha * 0.5) == kernel.alpha_intensity(alpha));
        }
    }
}

TEST_CASE("intensity integral matches quadrature of the intensity") {
    for (double lambda : {0.0, 2.0, 3.0, 4.0}) {
        const CorrelationKernel kernel(0.7, lambda);
        for (double t : {0.3, 1.0, 4.0}) {
            const double quad = simpson([&](double s) { return kernel.intensity(s); }, 0.0, t);
            CHECK(kernel.intensity_integral(t) == doctest::Approx(quad).epsilon(1e-10));
        }
    }
}

TEST_CASE("intensity is the derivative of its integral") {
    const CorrelationKernel kernel(0.5, 2.0);
    for (double t : {0.2, 1.0, 3.0}) {
        const double dt = 1e-5;
        const double fd =
            (kernel.intensity_integral(t + dt) - kernel.intensity_integral(t - dt)) / (2.0 * dt);
        CHECK(kernel.intensity(t) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("small-time integral keeps quadratic accuracy") {
    // J(t) -> t^2 / (2 t_c) as t -> 0 for the normal kernel; a naive
    // t + t_c*(e^(-t/t_c) - 1) would cancel to noise at t ~ 1e-9.
    const CorrelationKernel kernel(0.5);
    const double t = 1e-9;
    CHECK(kernel.intensity_integral(t) == doctest::Approx(t * t / (2.0 * 0.5)).epsilon(1e-6));
}

TEST_CASE("expdiff helper agrees with the naive quotient away from degeneracy") {
    using bmx::detail::expdiff;
    for (double p : {0.5, 2.0}) {
        for (double q : {3.0, 8.0}) {
            for (double t : {0.1, 1.0, 5.0}) {
                const double naive = (std::exp(-p * t) - std::exp(-q * t)) / (q - p);
                CHECK(expdiff(p, q, t) == doctest::Approx(naive).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("expdiff helper is smooth across the degeneracy p == q") {
    using bmx::detail::expdiff;
    const double p = 2.0, t = 1.3;
    const double at = expdiff(p, p, t);                // Taylor branch
    const double near = expdiff(p, p * (1.0 + 1e-9), t);  // still Taylor branch
    const double off = expdiff(p, p * (1.0 + 1e-5), t);   // quotient branch
    CHECK(at == doctest::Approx(t * std::exp(-p * t)).epsilon(1e-14));
    CHECK(near == doctest::Approx(at).epsilon(1e-8));
    CHECK(off == doctest::Approx(at).epsilon(1e-4));
}

TEST_CASE("expdiff time derivative matches finite differences") {
    using bmx::detail::expdiff;
    using bmx::detail::expdiff_dt;
    const double p = 1.7, q = 4.2;
    for (double t : {0.3, 1.1, 2.9}) {
        const double dt = 1e-6;
        const double fd = (expdiff(p, q, t + dt) - expdiff(p, q, t - dt)) / (2.0 * dt);
        CHECK(expdiff_dt(p, q, t) == doctest::Approx(fd).epsilon(1e-7));
    }
}
