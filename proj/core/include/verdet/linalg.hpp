#ifndef VERDET_LINALG_HPP
#define VERDET_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

namespace verdet::linalg {

using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

struct EigResult {
    Eigen::VectorXd eigenvalues;   // ascending
    ComplexMatrix eigenvectors;    // columns, unitary
};

/// Hermitian eigendecomposition m = V diag(lambda) V^dagger.
/// Rejects input with max |m - m^dagger| >= 1e-10.
EigResult hermitian_eig(const ComplexMatrix& m);

/// (m - z)^{-1}. Throws NumericalError when z is numerically on the spectrum.
ComplexMatrix resolvent(const ComplexMatrix& m, Complex z);

/// Trace of the ordered product of the factors.
Complex trace_product(const std::vector<ComplexMatrix>& factors);

/// Deterministic pairwise reduction; order-stable to well below 1e-13 relative.
Complex pairwise_sum(std::span<const Complex> values);

/// a^dagger * b through the BLAS backend (Eigen's own complex GEMM is too slow
/// for the finite-lattice sizes this project reaches).
ComplexMatrix adjoint_times(const ComplexMatrix& a, const ComplexMatrix& b);

} // namespace verdet::linalg

#endif
