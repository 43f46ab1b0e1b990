#include <verdet/bloch.hpp>
#include <verdet/errors.hpp>
#include <verdet/linalg.hpp>

#include <doctest.h>

#include <random>

using namespace verdet;
using linalg::Complex;
using linalg::ComplexMatrix;

namespace {

ComplexMatrix random_matrix(int n, std::mt19937& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex{g(rng), g(rng)};
    return m;
}

ComplexMatrix random_hermitian(int n, std::mt19937& rng) {
    ComplexMatrix m = random_matrix(n, rng);
    return (m + m.adjoint()) / 2.0;
}

} // namespace

TEST_CASE("hermitian eigendecomposition") {
    auto id = linalg::hermitian_eig(ComplexMatrix::Identity(4, 4));
    for (int i = 0; i < 4; ++i) CHECK(id.eigenvalues(i) == doctest::Approx(1.0));

    auto model = lattice::graphene_model(1.0);
    auto fiber = bloch::fiber_hamiltonian(model, {0, 0}, bloch::FiberConvention::Phased);
    auto eig = linalg::hermitian_eig(fiber.entries);
    CHECK(eig.eigenvalues(0) == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(eig.eigenvalues(3) == doctest::Approx(3.0).epsilon(1e-12));

    std::mt19937 rng(21);
    for (int rep = 0; rep < 20; ++rep) {
        auto m = random_hermitian(8, rng);
        auto e = linalg::hermitian_eig(m);
        const ComplexMatrix recon =
            e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.adjoint();
        CHECK((recon - m).cwiseAbs().maxCoeff() < 1e-11 * m.cwiseAbs().maxCoeff());
        const ComplexMatrix gram = e.eigenvectors.adjoint() * e.eigenvectors;
        CHECK((gram - ComplexMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
        // ascending order
        for (int i = 1; i < 8; ++i) CHECK(e.eigenvalues(i) >= e.eigenvalues(i - 1));
    }

    std::mt19937 rng2(22);
    CHECK_THROWS_AS(linalg::hermitian_eig(random_matrix(4, rng2)), ValidationError);
    CHECK_THROWS_AS(linalg::hermitian_eig(ComplexMatrix(0, 0)), ValidationError);
}

TEST_CASE("resolvent") {
    ComplexMatrix zero1(1, 1);
    zero1(0, 0) = 0.0;
    auto r = linalg::resolvent(zero1, Complex{0, 1});
    CHECK(std::abs(r(0, 0) - Complex{0, 1}) < 1e-15);

    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    // convention (H - z)^{-1}
    auto rd = linalg::resolvent(d, Complex{0, 0});
    CHECK(std::abs(rd(0, 0) - Complex{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(rd(1, 1) - Complex{0.5, 0.0}) < 1e-15);

    std::mt19937 rng(23);
    auto m = random_hermitian(6, rng);
    const Complex z{0.3, 0.2};
    auto rm = linalg::resolvent(m, z);
    ComplexMatrix shifted = m;
    shifted.diagonal().array() -= z;
    CHECK((shifted * rm - ComplexMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);

    // z on the spectrum is rejected
    CHECK_THROWS_AS(linalg::resolvent(d, Complex{1.0, 0.0}), NumericalError);
}

TEST_CASE("trace product") {
    CHECK(std::abs(linalg::trace_product({ComplexMatrix::Identity(3, 3)}) - Complex{3, 0}) <
          1e-15);

    std::mt19937 rng(24);
    auto a = random_matrix(5, rng);
    auto b = random_matrix(5, rng);
    CHECK(std::abs(linalg::trace_product({a, b}) - linalg::trace_product({b, a})) < 1e-12);
    CHECK(std::abs(linalg::trace_product({a, b}) - (a * b).trace()) < 1e-12);

    const Complex taa = linalg::trace_product({a, ComplexMatrix(a.adjoint())});
    CHECK(taa.real() >= 0.0);
    CHECK(std::abs(taa.imag()) < 1e-12 * taa.real());

    auto c = random_matrix(5, rng);
    CHECK(std::abs(linalg::trace_product({a, b, c}) - (a * b * c).trace()) < 1e-11);

    CHECK_THROWS_AS(linalg::trace_product({}), ValidationError);
    CHECK_THROWS_AS(linalg::trace_product({a, random_matrix(4, rng)}), ValidationError);
}

TEST_CASE("adjoint_times matches reference product") {
    std::mt19937 rng(25);
    auto a = random_matrix(7, rng);
    auto b = random_matrix(7, rng);
    const ComplexMatrix fast = linalg::adjoint_times(a, b);
    const ComplexMatrix ref = a.adjoint() * b;
    CHECK((fast - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pairwise sum determinism and accuracy") {
    std::mt19937 rng(26);
    std::normal_distribution<double> g;
    std::vector<Complex> values(1000);
    long double re = 0, im = 0;
    for (auto& v : values) {
        v = Complex{g(rng), g(rng)};
        re += v.real();
        im += v.imag();
    }
    const Complex s1 = linalg::pairwise_sum(values);
    const Complex s2 = linalg::pairwise_sum(values);
    CHECK(s1 == s2);
    CHECK(std::abs(s1 - Complex{static_cast<double>(re), static_cast<double>(im)}) < 1e-12);
    CHECK(linalg::pairwise_sum(std::vector<Complex>{}) == Complex{0, 0});
}
