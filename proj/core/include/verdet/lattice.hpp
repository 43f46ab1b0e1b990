#ifndef VERDET_LATTICE_HPP
#define VERDET_LATTICE_HPP

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace verdet::lattice {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;

/// One hopping record: amplitude of h0 between basis site i in the home cell
/// and basis site j in the cell displaced by (m, n) Bravais steps, i.e.
/// amplitude = h0(u_i, u_j + m*a1 + n*a2).
struct Hopping {
    int i = 0;
    int j = 0;
    int m = 0;
    int n = 0;
    Complex amplitude;
};

/// A site of the crystal: cell coordinates plus basis index.
struct Site {
    Eigen::Vector2i cell;
    int basis_index = 0;
};

/// Real-space tight-binding crystal model. Immutable after construction.
class LatticeModel {
public:
    LatticeModel(Vec2 a1, Vec2 a2, std::vector<Vec2> basis, std::vector<Hopping> hoppings);

    const Vec2& a1() const { return a1_; }
    const Vec2& a2() const { return a2_; }
    const std::vector<Vec2>& basis() const { return basis_; }
    const std::vector<Hopping>& hoppings() const { return hoppings_; }
    int num_basis() const { return static_cast<int>(basis_.size()); }
    double unit_cell_area() const { return unit_cell_area_; }

    /// h0(u_i, u_j + m*a1 + n*a2); zero when no such hopping is listed.
    Complex amplitude(int i, int j, int m, int n) const;

    Vec2 site_position(const Site& s) const;

    /// Reciprocal primitive vector b_idx (idx in {1,2}), a_i . b_j = 2 pi delta_ij.
    Vec2 reciprocal_vector(int idx) const;
    double brillouin_zone_area() const;

private:
    Vec2 a1_, a2_;
    std::vector<Vec2> basis_;
    std::vector<Hopping> hoppings_;
    std::map<std::tuple<int, int, int, int>, Complex> lookup_;
    double unit_cell_area_ = 0.0;
};

/// The 4-site rectangular-cell nearest-neighbour model of graphene with
/// lattice constant a and unit hopping between sites at distance exactly a.
LatticeModel graphene_model(double a);

/// Peierls phase phi(x, y) = (y1*x2 - x1*y2) / 2.
double peierls_phase(const Vec2& x, const Vec2& y);

/// Signed flux of a unit field through the triangle <x, x2, x3>:
/// [(x2 - x3) x (x - x2)]_z / 2. Equals the phi-sum around the triangle.
double triangle_flux(const Vec2& x, const Vec2& x2, const Vec2& x3);

/// Magnetic kernel e^{i b phi(x, y)} h0(x, y) between two sites.
Complex magnetic_kernel(const LatticeModel& model, double b, const Site& x, const Site& y);

/// Max of sup-row-sum and sup-column-sum of |h0| over one period.
double schur_holmgren_norm(const LatticeModel& model);

/// Load a model from the structured text format (keys a1, a2, basis, hopping).
LatticeModel load_model_file(const std::string& path);

} // namespace verdet::lattice

#endif
