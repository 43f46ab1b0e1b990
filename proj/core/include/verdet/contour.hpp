#ifndef VERDET_CONTOUR_HPP
#define VERDET_CONTOUR_HPP

#include "verdet/linalg.hpp"

#include <functional>
#include <vector>

namespace verdet::contour {

using linalg::Complex;

/// The physical knobs of every conductivity formula.
/// Units: hbar = 2 m_electron = e = 1.
struct ThermoOpticalParams {
    double beta = 10.0;    ///< inverse temperature 1/(k_B T)
    double mu = 0.0;       ///< chemical potential
    double omega0 = 7.0;   ///< real part of the light frequency
    double eta = 0.0;      ///< adiabatic parameter, Im(omega) = -eta
    double b = 0.0;        ///< magnetic field strength

    void validate() const;  // beta > 0, eta in [0, pi/beta)
};

struct ContourConfig {
    int nodes_per_edge = 64;
    double delta = 0.5;               ///< horizontal clearance beyond the spectrum
    double half_height_factor = 0.25; ///< half-height = factor * pi/beta, capped at 0.9*pi/beta
    double min_clearance = 0.1;       ///< required node distance to the spectrum (capped at the half-height)
};

/// Positively oriented closed rectangle around a real spectral interval,
/// Gauss-Legendre nodes per edge. Weights include the dz direction factor.
struct Contour {
    std::vector<Complex> nodes;
    std::vector<Complex> weights;
    double half_height = 0.0;
    double interval_lo = 0.0;  ///< enclosed interval [e_min - delta, e_max + delta]
    double interval_hi = 0.0;
};

/// Builds and validates the contour for a spectrum inside [e_min, e_max]:
///  - eta < pi/beta, else the Fermi poles would be enclosed;
///  - |omega0| strictly larger than twice the spectral radius;
///  - the shifted sets {z +- omega0} keep clear of the spectrum.
Contour build_contour(double e_min, double e_max, const ThermoOpticalParams& params,
                      const ContourConfig& cfg = {});

/// Fermi-Dirac weight 1/(e^{beta(z-mu)} + 1), overflow-safe for large |Re|.
/// Rejects z within 1e-8 of a pole mu + i*pi*(2n+1)/beta.
Complex fermi_dirac(Complex z, const ThermoOpticalParams& params);

/// Quadrature sum of the integrand over the contour nodes.
Complex contour_integrate(const Contour& contour, const std::function<Complex(Complex)>& integrand);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

} // namespace verdet::contour

#endif
