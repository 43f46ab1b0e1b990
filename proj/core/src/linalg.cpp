#include "verdet/linalg.hpp"
#include "verdet/errors.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <cmath>
#include <limits>
#include <sstream>

namespace verdet::linalg {

EigResult hermitian_eig(const ComplexMatrix& m) {
    const Eigen::Index n = m.rows();
    if (n == 0 || m.cols() != n)
        throw ValidationError("hermitian_eig: matrix must be square and non-empty");
    const double herm_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (!(herm_defect < 1e-10)) {
        std::ostringstream os;
        os << "hermitian_eig: input not Hermitian, defect " << herm_defect;
        throw ValidationError(os.str());
    }
    EigResult r;
    r.eigenvalues.resize(n);
    r.eigenvectors = (m + m.adjoint()) / 2.0;  // symmetrize, decomposed in place
    const int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
        reinterpret_cast<lapack_complex_double*>(r.eigenvectors.data()),
        static_cast<lapack_int>(n), r.eigenvalues.data());
    if (info != 0)
        throw NumericalError("hermitian_eig: zheevd failed to converge, info=" + std::to_string(info));
    return r;
}

ComplexMatrix resolvent(const ComplexMatrix& m, Complex z) {
    const Eigen::Index n = m.rows();
    if (n == 0 || m.cols() != n)
        throw ValidationError("resolvent: matrix must be square and non-empty");
    ComplexMatrix shifted = m;
    shifted.diagonal().array() -= z;
    Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
    const auto& u = lu.matrixLU();
    double min_pivot = std::numeric_limits<double>::infinity();
    double max_pivot = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double p = std::abs(u(i, i));
        min_pivot = std::min(min_pivot, p);
        max_pivot = std::max(max_pivot, p);
    }
    if (min_pivot <= 1e-14 * std::max(max_pivot, 1.0))
        throw NumericalError("resolvent: z is numerically on the spectrum");
    ComplexMatrix result = lu.solve(ComplexMatrix::Identity(n, n));
    const double residual = (shifted * result - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(residual < 1e-8 * std::max(1.0, result.cwiseAbs().maxCoeff())))
        throw NumericalError("resolvent: solve residual too large, z too close to an eigenvalue");
    return result;
}

Complex trace_product(const std::vector<ComplexMatrix>& factors) {
    if (factors.empty())
        throw ValidationError("trace_product: empty factor list");
    for (std::size_t i = 0; i + 1 < factors.size(); ++i)
        if (factors[i].cols() != factors[i + 1].rows())
            throw ValidationError("trace_product: dimension mismatch");
    if (factors.front().rows() != factors.back().cols())
        throw ValidationError("trace_product: product is not square");
    if (factors.size() == 1)
        return factors[0].trace();
    // multiply all but the last, then contract: tr(PB) = sum_ij P_ij B_ji
    ComplexMatrix p = factors[0];
    for (std::size_t i = 1; i + 1 < factors.size(); ++i)
        p = p * factors[i];
    return (p.transpose().cwiseProduct(factors.back())).sum();
}

ComplexMatrix adjoint_times(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows())
        throw ValidationError("adjoint_times: dimension mismatch");
    ComplexMatrix c(a.cols(), b.cols());
    const Complex one{1.0, 0.0}, zero{0.0, 0.0};
    cblas_zgemm(CblasColMajor, CblasConjTrans, CblasNoTrans,
                static_cast<int>(a.cols()), static_cast<int>(b.cols()), static_cast<int>(a.rows()),
                &one, a.data(), static_cast<int>(a.rows()),
                b.data(), static_cast<int>(b.rows()),
                &zero, c.data(), static_cast<int>(c.rows()));
    return c;
}

Complex pairwise_sum(std::span<const Complex> values) {
    const std::size_t n = values.size();
    if (n == 0) return {0.0, 0.0};
    if (n <= 8) {
        Complex acc{0.0, 0.0};
        for (const auto& v : values) acc += v;
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

} // namespace verdet::linalg
