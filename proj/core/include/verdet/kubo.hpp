#ifndef VERDET_KUBO_HPP
#define VERDET_KUBO_HPP

#include "verdet/bloch.hpp"
#include "verdet/contour.hpp"
#include "verdet/lattice.hpp"

#include <map>
#include <string>

namespace verdet::kubo {

using bloch::FiberMatrix;
using contour::ThermoOpticalParams;
using lattice::LatticeModel;
using linalg::Complex;
using linalg::ComplexMatrix;

struct KuboConfig {
    int bz_n1 = 64;
    int bz_n2 = 64;
    contour::ContourConfig contour;
    int workers = 0;  ///< 0 = all available cores; reduction is deterministic either way
    int spectrum_grid = 64;
};

struct ConductivityResult {
    double value = 0.0;
    /// Per term-family partial sums before the final Re and prefactor;
    /// "_z" is the direct term, "_zw" its z -> z + omega0 image.
    std::map<std::string, Complex> breakdown;
    int grid_n1 = 0, grid_n2 = 0;
    int contour_nodes = 0;
    ThermoOpticalParams params;
    /// |Im| / |value| of the pre-Re accumulation; reported, never dropped silently.
    double imag_residual = 0.0;
};

/// Zero-field conductivity sigma_{alpha beta}(0) from the fiber trace formula:
/// (1/(2|cell| pi omega0)) Re oint dz f_FD(z) <trace[r0(z-w0) d_a h r0(z) d_b h] + image>_BZ.
/// (alpha, beta) = (1, 2) gives the transverse element, (1, 1) the diagonal one.
ConductivityResult sigma_zero(const LatticeModel& model, const ThermoOpticalParams& params,
                              int alpha, int beta, const KuboConfig& cfg = {});

/// The Verdet coefficient sigma21^(1) = d sigma21 / db at b = 0, assembled from
/// the five k-space term families (three S.j.S lines, S.j.SK, SK.j.S) plus
/// their z -> z + omega0 images, with analytic fiber derivatives throughout.
ConductivityResult sigma21_first_derivative(const LatticeModel& model,
                                            const ThermoOpticalParams& params,
                                            const KuboConfig& cfg = {});

/// Closed-form residue evaluation of
///   oint dz f_FD(z) trace[r0(z - omega0) A r0(z) B]        (image = false)
///   oint dz f_FD(z) trace[r0(z) A r0(z + omega0) B]        (image = true)
/// over a contour enclosing the fiber spectrum; only the unshifted resolvent
/// poles lie inside. Oracle for the quadrature path.
Complex residue_double_resolvent(const FiberMatrix& fiber, const ComplexMatrix& a,
                                 const ComplexMatrix& b, const ThermoOpticalParams& params,
                                 bool image = false);

} // namespace verdet::kubo

#endif
