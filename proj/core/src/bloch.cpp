#include "verdet/bloch.hpp"
#include "verdet/errors.hpp"

#include <cmath>

namespace verdet::bloch {

namespace {

// Shared kernel for the fiber and its k-derivatives. For each hopping record
// (i, j, (m, n)) the displacement entering the Phased phase is
// d = u_i - (m*a1 + n*a2) - u_j, the gamma over which the lattice sum runs
// being -(m*a1 + n*a2). Each k1/k2 derivative multiplies by -i*d1 / -i*d2.
ComplexMatrix assemble_fiber(const LatticeModel& model, const Vec2& k,
                             FiberConvention convention, int order1, int order2) {
    const int nb = model.num_basis();
    ComplexMatrix out = ComplexMatrix::Zero(nb, nb);
    for (const auto& h : model.hoppings()) {
        const Vec2 gamma = -(h.m * model.a1() + h.n * model.a2());
        const Vec2 d = model.basis()[h.i] + gamma - model.basis()[h.j];
        const Vec2 phase_arg = (convention == FiberConvention::Phased) ? d : gamma;
        Complex term = h.amplitude * std::exp(Complex{0.0, -k.dot(phase_arg)});
        for (int p = 0; p < order1; ++p) term *= Complex{0.0, -d.x()};
        for (int p = 0; p < order2; ++p) term *= Complex{0.0, -d.y()};
        out(h.i, h.j) += term;
    }
    return out;
}

} // namespace

FiberMatrix fiber_hamiltonian(const LatticeModel& model, const Vec2& k, FiberConvention convention) {
    return {k, assemble_fiber(model, k, convention, 0, 0), convention};
}

FiberMatrix fiber_k_derivative(const LatticeModel& model, const Vec2& k, int order1, int order2) {
    if (order1 < 0 || order2 < 0 || order1 + order2 < 1 || order1 + order2 > 2)
        throw ValidationError("fiber_k_derivative: total derivative order must be 1 or 2");
    return {k, assemble_fiber(model, k, FiberConvention::Phased, order1, order2),
            FiberConvention::Phased};
}

Eigen::VectorXd band_energies(const LatticeModel& model, const Vec2& k) {
    return linalg::hermitian_eig(fiber_hamiltonian(model, k, FiberConvention::Phased).entries)
        .eigenvalues;
}

std::vector<BandPathRow> band_path(const LatticeModel& model,
                                   const std::vector<Vec2>& waypoints,
                                   int samples_per_segment) {
    if (waypoints.size() < 2)
        throw ValidationError("band_path: need at least two waypoints");
    if (samples_per_segment < 1)
        throw ValidationError("band_path: samples_per_segment must be >= 1");
    std::vector<BandPathRow> rows;
    double s = 0.0;
    for (std::size_t seg = 0; seg + 1 < waypoints.size(); ++seg) {
        const Vec2& from = waypoints[seg];
        const Vec2& to = waypoints[seg + 1];
        const double seg_len = (to - from).norm();
        if (!(seg_len > 0.0))
            throw ValidationError("band_path: empty segment between equal waypoints");
        const int first = (seg == 0) ? 0 : 1;  // avoid duplicating shared waypoints
        for (int i = first; i <= samples_per_segment; ++i) {
            const double t = static_cast<double>(i) / samples_per_segment;
            const Vec2 k = from + t * (to - from);
            rows.push_back({s + t * seg_len, k, band_energies(model, k)});
        }
        s += seg_len;
    }
    return rows;
}

Vec2 graphene_waypoint(const std::string& name, double a) {
    const double s3 = std::sqrt(3.0);
    if (name == "G") return Vec2{0.0, 0.0};
    if (name == "X1") return Vec2{M_PI / (3.0 * a), 0.0};
    if (name == "X2") return Vec2{0.0, M_PI / (s3 * a)};
    if (name == "M") return Vec2{M_PI / (3.0 * a), M_PI / (s3 * a)};
    // Dirac points, derived from the fiber matrix (not printed in the source model)
    if (name == "K") return Vec2{0.0, 2.0 * M_PI / (3.0 * s3 * a)};
    if (name == "Kp") return Vec2{0.0, -2.0 * M_PI / (3.0 * s3 * a)};
    throw ValidationError("graphene_waypoint: unknown waypoint '" + name + "'");
}

BZGrid make_bz_grid(const LatticeModel& model, int n1, int n2) {
    if (n1 < 1 || n2 < 1)
        throw ValidationError("make_bz_grid: node counts must be positive");
    const Vec2 b1 = model.reciprocal_vector(1);
    const Vec2 b2 = model.reciprocal_vector(2);
    BZGrid g;
    g.n1 = n1;
    g.n2 = n2;
    g.bz_area = model.brillouin_zone_area();
    g.node_weight = g.bz_area / (static_cast<double>(n1) * n2);
    g.nodes.reserve(static_cast<std::size_t>(n1) * n2);
    for (int i = 0; i < n1; ++i) {
        const double t1 = -0.5 + static_cast<double>(i) / n1;
        for (int j = 0; j < n2; ++j) {
            const double t2 = -0.5 + static_cast<double>(j) / n2;
            g.nodes.push_back(t1 * b1 + t2 * b2);
        }
    }
    return g;
}

double spectral_radius(const LatticeModel& model, int grid) {
    const auto [lo, hi] = spectrum_interval(model, grid);
    return std::max(std::abs(lo), std::abs(hi));
}

std::pair<double, double> spectrum_interval(const LatticeModel& model, int grid) {
    const BZGrid g = make_bz_grid(model, grid, grid);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& k : g.nodes) {
        const Eigen::VectorXd e = band_energies(model, k);
        lo = std::min(lo, e.minCoeff());
        hi = std::max(hi, e.maxCoeff());
    }
    return {lo, hi};
}

} // namespace verdet::bloch
