#include <verdet/bloch.hpp>
#include <verdet/errors.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace verdet;
using bloch::FiberConvention;
using lattice::Vec2;
using linalg::Complex;

namespace {
const double kSqrt3 = std::sqrt(3.0);
}

TEST_CASE("graphene fiber at k = 0") {
    auto model = lattice::graphene_model(1.0);
    auto fiber = bloch::fiber_hamiltonian(model, {0, 0}, FiberConvention::Phased);
    Eigen::Matrix4cd expected;
    expected << 0, 1, 0, 2,
                1, 0, 2, 0,
                0, 2, 0, 1,
                2, 0, 1, 0;
    CHECK((fiber.entries - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("graphene fiber entries at general k") {
    auto model = lattice::graphene_model(1.0);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int rep = 0; rep < 50; ++rep) {
        const Vec2 k{u(rng), u(rng)};
        auto fiber = bloch::fiber_hamiltonian(model, k, FiberConvention::Phased);
        const Complex e12 = std::exp(Complex{0, k.x()});
        const Complex e14 =
            2.0 * std::exp(Complex{0, -k.x() / 2}) * std::cos(kSqrt3 * k.y() / 2);
        CHECK(std::abs(fiber.entries(0, 1) - e12) < 1e-13);
        CHECK(std::abs(fiber.entries(0, 3) - e14) < 1e-13);
    }
}

TEST_CASE("fiber hermiticity at random k") {
    auto model = lattice::graphene_model(1.0);
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int rep = 0; rep < 1000; ++rep) {
        const Vec2 k{u(rng), u(rng)};
        for (auto conv : {FiberConvention::Plain, FiberConvention::Phased}) {
            auto fiber = bloch::fiber_hamiltonian(model, k, conv);
            CHECK((fiber.entries - fiber.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
}

TEST_CASE("graphene fiber entries even in k2") {
    auto model = lattice::graphene_model(1.0);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int rep = 0; rep < 200; ++rep) {
        const Vec2 k{u(rng), u(rng)};
        auto up = bloch::fiber_hamiltonian(model, k, FiberConvention::Phased);
        auto dn = bloch::fiber_hamiltonian(model, {k.x(), -k.y()}, FiberConvention::Phased);
        CHECK((up.entries - dn.entries).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("fiber k derivative analytic vs finite difference") {
    auto model = lattice::graphene_model(1.0);
    const Vec2 k{0.7, -1.3};

    auto d1 = bloch::fiber_k_derivative(model, k, 1, 0);
    const Complex expected12 = Complex{0, 1} * std::exp(Complex{0, k.x()});
    CHECK(std::abs(d1.entries(0, 1) - expected12) < 1e-13);

    auto d2 = bloch::fiber_k_derivative(model, k, 0, 1);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(d2.entries(i, i)) < 1e-15);

    const double eps = 1e-5;
    for (int dir = 0; dir < 2; ++dir) {
        const Vec2 e = dir == 0 ? Vec2{1, 0} : Vec2{0, 1};
        auto plus = bloch::fiber_hamiltonian(model, k + eps * e, FiberConvention::Phased);
        auto minus = bloch::fiber_hamiltonian(model, k - eps * e, FiberConvention::Phased);
        auto analytic = bloch::fiber_k_derivative(model, k, dir == 0 ? 1 : 0, dir == 0 ? 0 : 1);
        const double err =
            ((plus.entries - minus.entries) / (2 * eps) - analytic.entries).cwiseAbs().maxCoeff();
        CHECK(err < 1e-9);
    }

    // second derivatives against first-derivative differences
    auto d11 = bloch::fiber_k_derivative(model, k, 2, 0);
    auto p = bloch::fiber_k_derivative(model, k + eps * Vec2{1, 0}, 1, 0);
    auto m = bloch::fiber_k_derivative(model, k - eps * Vec2{1, 0}, 1, 0);
    CHECK(((p.entries - m.entries) / (2 * eps) - d11.entries).cwiseAbs().maxCoeff() < 1e-9);

    auto d12 = bloch::fiber_k_derivative(model, k, 1, 1);
    auto p2 = bloch::fiber_k_derivative(model, k + eps * Vec2{0, 1}, 1, 0);
    auto m2 = bloch::fiber_k_derivative(model, k - eps * Vec2{0, 1}, 1, 0);
    CHECK(((p2.entries - m2.entries) / (2 * eps) - d12.entries).cwiseAbs().maxCoeff() < 1e-9);

    CHECK_THROWS_AS(bloch::fiber_k_derivative(model, k, 0, 0), ValidationError);
    CHECK_THROWS_AS(bloch::fiber_k_derivative(model, k, 2, 1), ValidationError);
}

TEST_CASE("band energies at special points") {
    auto model = lattice::graphene_model(1.0);
    auto eg = bloch::band_energies(model, {0, 0});
    CHECK(eg(0) == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(eg(1) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(eg(2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eg(3) == doctest::Approx(3.0).epsilon(1e-12));

    auto ek = bloch::band_energies(model, bloch::graphene_waypoint("K", 1.0));
    CHECK(std::abs(ek(1)) < 1e-10);
    CHECK(std::abs(ek(2)) < 1e-10);
    auto ekp = bloch::band_energies(model, bloch::graphene_waypoint("Kp", 1.0));
    CHECK(std::abs(ekp(1)) < 1e-10);
}

TEST_CASE("band energies periodic in reciprocal vectors") {
    auto model = lattice::graphene_model(1.0);
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int rep = 0; rep < 100; ++rep) {
        const Vec2 k{u(rng), u(rng)};
        auto e0 = bloch::band_energies(model, k);
        auto e1 = bloch::band_energies(model, k + model.reciprocal_vector(1));
        auto e2 = bloch::band_energies(model, k + model.reciprocal_vector(2));
        CHECK((e0 - e1).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((e0 - e2).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("band path") {
    auto model = lattice::graphene_model(1.0);
    const Vec2 G{0, 0};
    const Vec2 K = bloch::graphene_waypoint("K", 1.0);

    auto rows = bloch::band_path(model, {G, K}, 1);
    CHECK(rows.size() == 2);
    CHECK(rows.front().arclength == 0.0);
    CHECK(rows.back().arclength == doctest::Approx((K - G).norm()));

    // band 3 falls from 1 at Gamma to 0 at K
    auto fine = bloch::band_path(model, {G, K}, 50);
    CHECK(fine.front().energies(2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(fine.back().energies(2)) < 1e-10);
    for (size_t i = 1; i < fine.size(); ++i)
        CHECK(fine[i].energies(2) <= fine[i - 1].energies(2) + 1e-12);

    // spectrum symmetric along the standard path
    auto path = bloch::band_path(
        model, {G, bloch::graphene_waypoint("X1", 1.0), bloch::graphene_waypoint("M", 1.0), K}, 20);
    for (const auto& row : path) {
        CHECK(row.energies.size() == 4);
        CHECK(row.energies(0) == doctest::Approx(-row.energies(3)).epsilon(1e-10));
        CHECK(row.energies(1) == doctest::Approx(-row.energies(2)).epsilon(1e-10));
    }

    CHECK_THROWS_AS(bloch::band_path(model, {G}, 10), ValidationError);
    CHECK_THROWS_AS(bloch::band_path(model, {G, K}, 0), ValidationError);
    CHECK_THROWS_AS(bloch::band_path(model, {G, G}, 10), ValidationError);
    CHECK_THROWS_AS(bloch::graphene_waypoint("Q", 1.0), ValidationError);
}

TEST_CASE("brillouin zone grid") {
    auto model = lattice::graphene_model(1.0);
    auto grid = bloch::make_bz_grid(model, 8, 6);
    CHECK(grid.nodes.size() == 48);
    CHECK(grid.node_weight * 48 == doctest::Approx(model.brillouin_zone_area()).epsilon(1e-13));

    // shift symmetry: -k is a node modulo reciprocal vectors
    const auto b1 = model.reciprocal_vector(1);
    const auto b2 = model.reciprocal_vector(2);
    for (const auto& k : grid.nodes) {
        bool found = false;
        for (const auto& q : grid.nodes)
            for (int m = -1; m <= 1 && !found; ++m)
                for (int n = -1; n <= 1 && !found; ++n)
                    if ((q + k + m * b1 + n * b2).norm() < 1e-10) found = true;
        CHECK(found);
    }

    CHECK_THROWS_AS(bloch::make_bz_grid(model, 0, 4), ValidationError);
}

TEST_CASE("spectral radius and interval") {
    auto model = lattice::graphene_model(1.0);
    CHECK(bloch::spectral_radius(model) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(bloch::spectral_radius(model) <= lattice::schur_holmgren_norm(model) + 1e-12);
    auto [lo, hi] = bloch::spectrum_interval(model);
    CHECK(lo == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(3.0).epsilon(1e-12));
}
