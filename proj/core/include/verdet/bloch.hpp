#ifndef VERDET_BLOCH_HPP
#define VERDET_BLOCH_HPP

#include "verdet/lattice.hpp"
#include "verdet/linalg.hpp"

#include <string>
#include <vector>

namespace verdet::bloch {

using lattice::LatticeModel;
using lattice::Vec2;
using linalg::Complex;
using linalg::ComplexMatrix;

enum class FiberConvention {
    Plain,   ///< phases e^{-i k . gamma}; exactly periodic in k
    Phased,  ///< phases e^{-i k . (u + gamma - u')}; hosts the current fibers
};

struct FiberMatrix {
    Vec2 k;
    ComplexMatrix entries;
    FiberConvention convention = FiberConvention::Phased;
};

/// Bloch fiber of h0 at momentum k.
FiberMatrix fiber_hamiltonian(const LatticeModel& model, const Vec2& k, FiberConvention convention);

/// Analytic k-derivative of the Phased fiber. (order1, order2) is the
/// multi-index in (k1, k2); only total orders 1 and 2 are supported.
FiberMatrix fiber_k_derivative(const LatticeModel& model, const Vec2& k, int order1, int order2);

/// Band energies at k in ascending order.
Eigen::VectorXd band_energies(const LatticeModel& model, const Vec2& k);

struct BandPathRow {
    double arclength = 0.0;
    Vec2 k;
    Eigen::VectorXd energies;
};

/// Bands sampled along the piecewise-linear path through the waypoints,
/// samples_per_segment subdivisions per segment.
std::vector<BandPathRow> band_path(const LatticeModel& model,
                                   const std::vector<Vec2>& waypoints,
                                   int samples_per_segment);

/// Named Brillouin-zone waypoint (G, X1, X2, M, K, Kp) for the graphene cell.
Vec2 graphene_waypoint(const std::string& name, double a);

/// Uniform shift-symmetric Monkhorst-style grid over the Brillouin zone;
/// every node k has -k as a node modulo a reciprocal vector.
struct BZGrid {
    int n1 = 0, n2 = 0;
    std::vector<Vec2> nodes;
    double node_weight = 0.0;  // uniform; node_weight * nodes.size() = |BZ|
    double bz_area = 0.0;
};

BZGrid make_bz_grid(const LatticeModel& model, int n1, int n2);

/// Max |band energy| over a dense BZ grid; upper-bounded by the
/// Schur-Holmgren norm and exact for graphene (attained at k = 0).
double spectral_radius(const LatticeModel& model, int grid = 64);

/// [min, max] band energy over a dense BZ grid.
std::pair<double, double> spectrum_interval(const LatticeModel& model, int grid = 64);

} // namespace verdet::bloch

#endif
