#include "verdet/faraday.hpp"
#include "verdet/errors.hpp"

#include <cmath>
#include <sstream>

namespace verdet::faraday {

namespace {

double coupling(const SlabOptics& o) { return 4.0 * M_PI / (o.d * o.omega * o.eps_r); }

void check_domain(double u, const SlabOptics& o) {
    const double bound = 1.0 / coupling(o);
    if (!(std::abs(u) < bound)) {
        std::ostringstream os;
        os << "f(u, v): |u| = " << std::abs(u) << " outside the domain |u| < d*omega*eps/(4*pi) = "
           << bound;
        throw ValidationError(os.str());
    }
}

} // namespace

void SlabOptics::validate() const {
    if (!(d > 0.0) || !(mu_r > 0.0) || !(eps_r > 0.0) || !(c > 0.0))
        throw ValidationError("SlabOptics: d, mu_r, eps_r and c must be positive");
    if (!std::isfinite(omega) || omega == 0.0)
        throw ValidationError("SlabOptics: omega must be finite and nonzero");
}

double f_uv(double u, double v, const SlabOptics& optics) {
    optics.validate();
    check_domain(u, optics);
    const double g = coupling(optics);
    const double a = 1.0 + g * u;
    const double bb = g * v;
    const double theta = std::atan2(bb, a);
    return std::pow(a * a + bb * bb, 0.25) * std::cos(theta / 2.0);
}

double f_uv_du(double u, double v, const SlabOptics& optics) {
    optics.validate();
    check_domain(u, optics);
    const double g = coupling(optics);
    const double a = 1.0 + g * u;
    const double bb = g * v;
    const double theta = std::atan2(bb, a);
    return 0.5 * g * std::pow(a * a + bb * bb, -0.75) *
           (a * std::cos(theta / 2.0) + bb * std::sin(theta / 2.0));
}

RefractionIndices refraction_indices(double sigma21_2d, double sigma11_2d,
                                     const SlabOptics& optics) {
    const double scale = std::sqrt(optics.mu_r * optics.eps_r);
    RefractionIndices r;
    r.eta_plus = scale * f_uv(sigma21_2d, sigma11_2d, optics);
    r.eta_minus = scale * f_uv(-sigma21_2d, sigma11_2d, optics);
    return r;
}

FaradayResult verdet_and_angle(double sigma21_first, double sigma11_zero, double b,
                               const SlabOptics& optics) {
    optics.validate();
    if (!std::isfinite(sigma21_first) || !std::isfinite(sigma11_zero) || !std::isfinite(b))
        throw ValidationError("verdet_and_angle: inputs must be finite");
    FaradayResult r;
    r.verdet = -std::sqrt(optics.mu_r * optics.eps_r) * optics.omega * sigma21_first /
               optics.c * f_uv_du(0.0, sigma11_zero, optics);
    r.theta = optics.d * b * r.verdet;
    const auto eta = refraction_indices(b * sigma21_first, sigma11_zero, optics);
    r.theta_exact = optics.omega * optics.d * (eta.eta_minus - eta.eta_plus) / (2.0 * optics.c);
    return r;
}

} // namespace verdet::faraday
