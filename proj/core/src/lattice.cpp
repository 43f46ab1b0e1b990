#include "verdet/lattice.hpp"
#include "verdet/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace verdet::lattice {

LatticeModel::LatticeModel(Vec2 a1, Vec2 a2, std::vector<Vec2> basis, std::vector<Hopping> hoppings)
    : a1_(std::move(a1)), a2_(std::move(a2)),
      basis_(std::move(basis)), hoppings_(std::move(hoppings)) {
    unit_cell_area_ = std::abs(a1_.x() * a2_.y() - a1_.y() * a2_.x());
    if (!(unit_cell_area_ > 0.0))
        throw ValidationError("LatticeModel: Bravais generators are collinear");
    if (basis_.empty())
        throw ValidationError("LatticeModel: empty basis");
    if (basis_.front().norm() > 0.0)
        throw ValidationError("LatticeModel: basis[0] must be the origin");

    const int nb = num_basis();
    for (const auto& h : hoppings_) {
        if (h.i < 0 || h.i >= nb || h.j < 0 || h.j >= nb)
            throw ValidationError("LatticeModel: hopping basis index out of range");
        auto key = std::make_tuple(h.i, h.j, h.m, h.n);
        if (lookup_.count(key))
            throw ValidationError("LatticeModel: duplicate hopping record");
        lookup_[key] = h.amplitude;
    }
    // Hermiticity of the kernel: h0(i,j,(m,n)) = conj(h0(j,i,(-m,-n)))
    for (const auto& h : hoppings_) {
        auto it = lookup_.find(std::make_tuple(h.j, h.i, -h.m, -h.n));
        const Complex mirror = (it == lookup_.end()) ? Complex{0.0, 0.0} : it->second;
        if (std::abs(mirror - std::conj(h.amplitude)) > 1e-12 * std::max(1.0, std::abs(h.amplitude)))
            throw ValidationError("LatticeModel: hopping table is not Hermitian");
    }
}

Complex LatticeModel::amplitude(int i, int j, int m, int n) const {
    auto it = lookup_.find(std::make_tuple(i, j, m, n));
    return it == lookup_.end() ? Complex{0.0, 0.0} : it->second;
}

Vec2 LatticeModel::site_position(const Site& s) const {
    return s.cell.x() * a1_ + s.cell.y() * a2_ + basis_.at(s.basis_index);
}

Vec2 LatticeModel::reciprocal_vector(int idx) const {
    Eigen::Matrix2d a;
    a.row(0) = a1_.transpose();
    a.row(1) = a2_.transpose();
    const Eigen::Matrix2d b = 2.0 * M_PI * a.inverse().transpose();
    if (idx == 1) return b.row(0).transpose();
    if (idx == 2) return b.row(1).transpose();
    throw ValidationError("reciprocal_vector: index must be 1 or 2");
}

double LatticeModel::brillouin_zone_area() const {
    const Vec2 b1 = reciprocal_vector(1);
    const Vec2 b2 = reciprocal_vector(2);
    return std::abs(b1.x() * b2.y() - b1.y() * b2.x());
}

LatticeModel graphene_model(double a) {
    if (!(a > 0.0))
        throw ValidationError("graphene_model: lattice constant must be positive");
    const double s3 = std::sqrt(3.0);
    const Vec2 a1{3.0 * a, 0.0};
    const Vec2 a2{0.0, s3 * a};
    const std::vector<Vec2> basis{
        Vec2{0.0, 0.0},
        Vec2{a, 0.0},
        Vec2{1.5 * a, 0.5 * s3 * a},
        Vec2{2.5 * a, 0.5 * s3 * a},
    };
    std::vector<Hopping> hops;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int m = -1; m <= 1; ++m)
                for (int n = -1; n <= 1; ++n) {
                    const Vec2 d = basis[i] - (basis[j] + m * a1 + n * a2);
                    if (std::abs(d.norm() - a) <= 1e-12 * a)
                        hops.push_back({i, j, m, n, Complex{1.0, 0.0}});
                }
    return LatticeModel(a1, a2, basis, std::move(hops));
}

double peierls_phase(const Vec2& x, const Vec2& y) {
    return 0.5 * (y.x() * x.y() - x.x() * y.y());
}

double triangle_flux(const Vec2& x, const Vec2& x2, const Vec2& x3) {
    const Vec2 u = x2 - x3;
    const Vec2 v = x - x2;
    return 0.5 * (u.x() * v.y() - u.y() * v.x());
}

Complex magnetic_kernel(const LatticeModel& model, double b, const Site& x, const Site& y) {
    const Complex h0 = model.amplitude(x.basis_index, y.basis_index,
                                       y.cell.x() - x.cell.x(), y.cell.y() - x.cell.y());
    if (h0 == Complex{0.0, 0.0}) return h0;
    const double phi = peierls_phase(model.site_position(x), model.site_position(y));
    return std::exp(Complex{0.0, b * phi}) * h0;
}

double schur_holmgren_norm(const LatticeModel& model) {
    const int nb = model.num_basis();
    std::vector<double> row(nb, 0.0), col(nb, 0.0);
    for (const auto& h : model.hoppings()) {
        row[h.i] += std::abs(h.amplitude);
        col[h.j] += std::abs(h.amplitude);
    }
    double norm = 0.0;
    for (int i = 0; i < nb; ++i) norm = std::max({norm, row[i], col[i]});
    return norm;
}

LatticeModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("load_model_file: cannot open '" + path + "'");
    bool have_a1 = false, have_a2 = false;
    Vec2 a1, a2;
    std::vector<Vec2> basis;
    std::vector<Hopping> hops;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        auto fail = [&](const char* msg) {
            throw ValidationError("load_model_file: " + path + ":" + std::to_string(lineno) + ": " + msg);
        };
        if (key == "a1" || key == "a2") {
            double x, y;
            if (!(ls >> x >> y)) fail("expected two reals");
            (key == "a1" ? a1 : a2) = Vec2{x, y};
            (key == "a1" ? have_a1 : have_a2) = true;
        } else if (key == "basis") {
            double x, y;
            if (!(ls >> x >> y)) fail("expected two reals");
            basis.emplace_back(x, y);
        } else if (key == "hopping" || key == "hoppings") {
            Hopping h;
            double re, im;
            if (!(ls >> h.i >> h.j >> h.m >> h.n >> re >> im)) fail("expected: i j m n re im");
            h.amplitude = Complex{re, im};
            hops.push_back(h);
        } else {
            fail("unknown key");
        }
    }
    if (!have_a1 || !have_a2)
        throw ValidationError("load_model_file: missing a1/a2 in '" + path + "'");
    return LatticeModel(a1, a2, std::move(basis), std::move(hops));
}

} // namespace verdet::lattice
