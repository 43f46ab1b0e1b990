#ifndef VERDET_FARADAY_HPP
#define VERDET_FARADAY_HPP

namespace verdet::faraday {

/// Slab geometry and optical environment. Conductivities are taken in the
/// same unit system the caller uses for d, omega and c; the library performs
/// no unit conversion.
struct SlabOptics {
    double d = 1.0;      ///< slab thickness
    double mu_r = 1.0;   ///< relative permeability
    double eps_r = 1.0;  ///< relative permittivity
    double c = 1.0;      ///< speed of light in the chosen units
    double omega = 1.0;  ///< light frequency

    void validate() const;
};

/// f(u, v) = [(1 + gu)^2 + (gv)^2]^{1/4} cos(arctan(gv / (1 + gu)) / 2)
/// with g = 4*pi / (d * omega * eps_r). Defined for |u| < 1/g.
double f_uv(double u, double v, const SlabOptics& optics);

/// Analytic partial derivative of f_uv in its first argument.
double f_uv_du(double u, double v, const SlabOptics& optics);

struct RefractionIndices {
    double eta_plus = 0.0;   ///< right circular polarization
    double eta_minus = 0.0;  ///< left circular polarization
};

/// eta_pm = sqrt(mu_r * eps_r) * f(+-sigma21_2d, sigma11_2d); both nonnegative.
RefractionIndices refraction_indices(double sigma21_2d, double sigma11_2d,
                                     const SlabOptics& optics);

struct FaradayResult {
    double verdet = 0.0;       ///< V with theta = d * b * V
    double theta = 0.0;        ///< linearized rotation angle d * b * V
    double theta_exact = 0.0;  ///< omega * d * (eta_minus - eta_plus) / (2 c) at this b
};

/// Verdet constant from the linear-response coefficient sigma21_first and the
/// zero-field sigma11_zero:
///   V = -sqrt(mu_r * eps_r) * (omega * sigma21_first / c) * df/du(0, sigma11_zero)
/// The sqrt(mu_r * eps_r) factor makes theta agree with the exact angle
/// computed from the refraction indices to first order in b.
FaradayResult verdet_and_angle(double sigma21_first, double sigma11_zero, double b,
                               const SlabOptics& optics);

} // namespace verdet::faraday

#endif
