#ifndef VERDET_FINITE_HPP
#define VERDET_FINITE_HPP

#include "verdet/contour.hpp"
#include "verdet/lattice.hpp"
#include "verdet/linalg.hpp"

#include <Eigen/SparseCore>
#include <vector>

namespace verdet::finite {

using contour::ThermoOpticalParams;
using lattice::LatticeModel;
using lattice::Site;
using linalg::Complex;
using linalg::ComplexMatrix;

using SparseComplex = Eigen::SparseMatrix<Complex>;

/// Dirichlet box |m|,|n| <= N with dense magnetic Hamiltonian and the
/// position / current operators built from it. Immutable after build.
struct FiniteLattice {
    int N = 0;
    double b = 0.0;
    std::vector<Site> sites;       // lexicographic in (m, n, basis_index)
    ComplexMatrix H;               // Peierls Hamiltonian, Hermitian
    Eigen::VectorXd X1, X2;        // diagonal position operators
    SparseComplex j1, j2;          // current operators i[H, X_nu]
    double area = 0.0;             // (2N+1)^2 * |cell|
};

FiniteLattice build_finite(const LatticeModel& model, int N, double b,
                           std::size_t size_cap = 10000);

/// Max row/column absolute sum of H_b; independent of b.
double schur_holmgren_norm_finite(const FiniteLattice& lat);

struct FiniteSigmaResult {
    double sigma21 = 0.0;   ///< eta_term + trace_term
    double eta_term = 0.0;  ///< the eta-prefactor commutator trace, reported separately
    double trace_term = 0.0;
};

enum class EvalMethod { Residue, Quadrature };

/// sigma21(b, N) at omega = omega0 - i*eta; requires eta > 0.
FiniteSigmaResult sigma21_finite(const FiniteLattice& lat, const ThermoOpticalParams& params,
                                 EvalMethod method = EvalMethod::Residue,
                                 const contour::ContourConfig& cfg = {});

/// Eigendecomposition of H_|b| shared across both field signs and any
/// (beta, mu, omega0, eta): H_{-b} is the complex conjugate of H_b for a
/// real zero-field kernel, so one decomposition serves +-b.
class FiniteSpectralSolver {
public:
    FiniteSpectralSolver(const LatticeModel& model, int N, double b_magnitude,
                         std::size_t size_cap = 10000);
    explicit FiniteSpectralSolver(const FiniteLattice& lat);

    /// sign = +1 evaluates at +|b|, sign = -1 at -|b|.
    FiniteSigmaResult sigma21(const ThermoOpticalParams& params, int sign = +1) const;
    FiniteSigmaResult sigma21_quadrature(const ThermoOpticalParams& params, int sign,
                                         const contour::ContourConfig& cfg) const;

    /// Equilibrium current density Tr{f_FD(H) j_nu} / area; vanishes identically.
    double equilibrium_current(const ThermoOpticalParams& params, int direction) const;

    const Eigen::VectorXd& spectrum() const { return energies_; }
    double area() const { return area_; }
    double b_magnitude() const { return b_; }

private:
    void init(const FiniteLattice& lat);
    Complex weighted_pair_sum(const ThermoOpticalParams& params, int sign, Complex omega) const;

    double b_ = 0.0;
    double area_ = 0.0;
    Eigen::VectorXd energies_;
    ComplexMatrix j1_eig_, j2_eig_;   // V^dagger j_nu V
    Eigen::VectorXcd comm_diag_;      // diag of V^dagger i[j2, X1] V
};

struct FinitePoint {
    int N = 0;
    double b = 0.0;
    double eta = 0.0;
    double sigma21 = 0.0;
    double eta_term = 0.0;
};

struct BDerivativeResult {
    double value = 0.0;           ///< extrapolated d sigma21/db at b = 0
    double error_estimate = 0.0;  ///< Richardson defect (b-step and eta combined)
    std::vector<std::pair<double, double>> per_eta;  ///< (eta, b-extrapolated derivative)
    std::vector<FinitePoint> points;                 ///< every (b, eta) evaluation
};

/// Central difference [sigma21(b) - sigma21(-b)] / 2b with Richardson
/// extrapolation over {b_step, b_step/2}; when two eta values are given the
/// derivative is additionally extrapolated linearly to eta -> 0.
BDerivativeResult numeric_b_derivative(const LatticeModel& model, int N,
                                       const ThermoOpticalParams& params, double b_step,
                                       std::vector<double> etas = {},
                                       std::size_t size_cap = 10000,
                                       bool richardson_b = true);

} // namespace verdet::finite

#endif
