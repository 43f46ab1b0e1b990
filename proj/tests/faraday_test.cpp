#include <verdet/errors.hpp>
#include <verdet/faraday.hpp>

#include <doctest.h>

#include <cmath>

using namespace verdet;
using faraday::SlabOptics;

TEST_CASE("f(u, v) values") {
    SlabOptics o;  // d = mu_r = eps_r = c = omega = 1
    CHECK(faraday::f_uv(0.0, 0.0, o) == 1.0);

    // pure imaginary argument: f(0, v) = (1 + g^2 v^2)^{1/4} cos(arctan(gv)/2)
    const double g = 4.0 * M_PI;
    for (double v : {0.1, 0.5, -0.3}) {
        const double expected =
            std::pow(1.0 + g * g * v * v, 0.25) * std::cos(std::atan(g * v) / 2.0);
        CHECK(faraday::f_uv(0.0, v, o) == doctest::Approx(expected).epsilon(1e-14));
    }

    // f(u, 0) = sqrt(1 + gu) on the domain
    CHECK(faraday::f_uv(0.05, 0.0, o) ==
          doctest::Approx(std::sqrt(1.0 + g * 0.05)).epsilon(1e-14));

    // domain |u| < 1/g
    CHECK_THROWS_AS(faraday::f_uv(1.0 / g, 0.0, o), ValidationError);
    CHECK_THROWS_AS(faraday::f_uv(-0.2, 0.0, o), ValidationError);
}

TEST_CASE("analytic derivative matches finite differences") {
    SlabOptics o;
    o.d = 3.0;
    o.omega = 2.0;
    o.eps_r = 1.5;
    const double h = 1e-6;
    for (double u : {-0.1, 0.0, 0.12})
        for (double v : {-0.4, 0.0, 0.3, 1.1}) {
            const double fd =
                (faraday::f_uv(u + h, v, o) - faraday::f_uv(u - h, v, o)) / (2.0 * h);
            const double an = faraday::f_uv_du(u, v, o);
            CHECK(std::abs(an - fd) < 1e-6 * std::max(1.0, std::abs(an)));
        }
}

TEST_CASE("refraction indices") {
    SlabOptics o;
    auto r = faraday::refraction_indices(0.01, 0.2, o);
    CHECK(r.eta_plus > 0.0);
    CHECK(r.eta_minus > 0.0);
    CHECK(r.eta_plus != r.eta_minus);

    // flipping the Hall sign swaps the circular polarizations
    auto rf = faraday::refraction_indices(-0.01, 0.2, o);
    CHECK(rf.eta_plus == r.eta_minus);
    CHECK(rf.eta_minus == r.eta_plus);

    // no Hall response: both indices collapse to sqrt(mu_r eps_r) f(0, sigma11)
    SlabOptics scaled = o;
    scaled.mu_r = 2.0;
    scaled.eps_r = 3.0;
    auto rz = faraday::refraction_indices(0.0, 0.2, scaled);
    CHECK(rz.eta_plus == rz.eta_minus);
    CHECK(rz.eta_plus ==
          doctest::Approx(std::sqrt(6.0) * faraday::f_uv(0.0, 0.2, scaled)).epsilon(1e-14));
}

TEST_CASE("verdet constant and rotation angle") {
    SlabOptics o;
    o.d = 2.0;
    o.omega = 3.0;

    auto zero = faraday::verdet_and_angle(0.0, 0.1, 0.5, o);
    CHECK(zero.verdet == 0.0);
    CHECK(zero.theta == 0.0);
    CHECK(zero.theta_exact == 0.0);

    auto at_zero_b = faraday::verdet_and_angle(0.02, 0.1, 0.0, o);
    CHECK(at_zero_b.theta == 0.0);
    CHECK(at_zero_b.verdet != 0.0);

    // theta is the first-order term of theta_exact in b; the remainder of
    // (f(-u) - f(u)) / 2 after the linear term is O(u^3), so tiny at these b
    const double s21 = 0.015, s11 = 0.3;
    for (double b : {1e-3, 1e-4}) {
        auto r = faraday::verdet_and_angle(s21, s11, b, o);
        const double defect = std::abs(r.theta_exact / b - o.d * r.verdet);
        CHECK(defect < 1e-6 * std::abs(o.d * r.verdet));
        CHECK(std::abs(r.theta - r.theta_exact) < 1e-3 * std::abs(r.theta));
    }

    CHECK_THROWS_AS(faraday::verdet_and_angle(1.0, 0.0, 1.0, o), ValidationError);

    SlabOptics bad;
    bad.d = 0.0;
    CHECK_THROWS_AS(faraday::verdet_and_angle(0.0, 0.0, 0.0, bad), ValidationError);
}
