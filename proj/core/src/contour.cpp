#include "verdet/contour.hpp"
#include "verdet/errors.hpp"

#include <cmath>
#include <sstream>

namespace verdet::contour {

void ThermoOpticalParams::validate() const {
    if (!(beta > 0.0))
        throw ValidationError("params: beta must be positive");
    if (eta < 0.0)
        throw ValidationError("params: eta must be non-negative");
    if (!(eta < M_PI / beta)) {
        std::ostringstream os;
        os << "params: eta = " << eta << " must be below pi/beta = " << M_PI / beta
           << ", otherwise the contour would enclose Fermi poles";
        throw ValidationError(os.str());
    }
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1)
        throw ValidationError("gauss_legendre: node count must be positive");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration from the Chebyshev estimate
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

Contour build_contour(double e_min, double e_max, const ThermoOpticalParams& params,
                      const ContourConfig& cfg) {
    params.validate();
    if (!(e_min <= e_max))
        throw ValidationError("build_contour: empty spectrum interval");
    if (cfg.nodes_per_edge < 8)
        throw ValidationError("build_contour: nodes_per_edge must be >= 8");

    const double radius = std::max(std::abs(e_min), std::abs(e_max));
    if (!(std::abs(params.omega0) > 2.0 * radius)) {
        std::ostringstream os;
        os << "build_contour: |omega0| = " << std::abs(params.omega0)
           << " must be strictly larger than twice the spectral radius " << radius;
        throw ValidationError(os.str());
    }
    // The shifted contour must stay off the spectrum so that resolvents at
    // z -+ omega0 remain well conditioned along the whole path.
    const double lo = e_min - cfg.delta;
    const double hi = e_max + cfg.delta;
    for (const double edge : {lo, hi}) {
        for (const double sgn : {-1.0, 1.0}) {
            const double shifted = edge + sgn * params.omega0;
            if (shifted >= e_min - 1e-12 && shifted <= e_max + 1e-12) {
                std::ostringstream os;
                os << "build_contour: contour shifted by omega0 = " << params.omega0
                   << " intersects the spectrum interval [" << e_min << ", " << e_max << "]";
                throw ValidationError(os.str());
            }
        }
    }

    const double pole_height = M_PI / params.beta;
    const double h = std::min(0.9, cfg.half_height_factor) * pole_height;
    const double clearance = std::min(cfg.min_clearance, h);
    if (cfg.delta < clearance)
        throw ValidationError("build_contour: delta below the required spectrum clearance");

    Contour c;
    c.half_height = h;
    c.interval_lo = lo;
    c.interval_hi = hi;

    std::vector<double> gx, gw;
    gauss_legendre(cfg.nodes_per_edge, gx, gw);

    const Complex corners[4] = {
        {lo, -h}, {hi, -h}, {hi, h}, {lo, h}};  // positively oriented
    for (int edge = 0; edge < 4; ++edge) {
        const Complex from = corners[edge];
        const Complex to = corners[(edge + 1) % 4];
        const Complex half_span = 0.5 * (to - from);
        const Complex mid = 0.5 * (to + from);
        for (int i = 0; i < cfg.nodes_per_edge; ++i) {
            c.nodes.push_back(mid + gx[i] * half_span);
            c.weights.push_back(gw[i] * half_span);
        }
    }
    return c;
}

Complex fermi_dirac(Complex z, const ThermoOpticalParams& params) {
    const Complex w = params.beta * (z - params.mu);
    // Nearest pole is at w = i*pi*(2n+1)
    const double nearest_odd = 2.0 * std::round((w.imag() / M_PI - 1.0) / 2.0) + 1.0;
    const Complex pole{0.0, M_PI * nearest_odd};
    if (std::abs(w - pole) / params.beta <= 1e-8)
        throw NumericalError("fermi_dirac: z too close to a Fermi pole");
    if (w.real() > 0.0) {
        const Complex e = std::exp(-w);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(w));
}

Complex contour_integrate(const Contour& contour, const std::function<Complex(Complex)>& integrand) {
    std::vector<Complex> terms(contour.nodes.size());
    for (std::size_t i = 0; i < contour.nodes.size(); ++i)
        terms[i] = contour.weights[i] * integrand(contour.nodes[i]);
    return linalg::pairwise_sum(terms);
}

} // namespace verdet::contour
