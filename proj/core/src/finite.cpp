#include "verdet/finite.hpp"
#include "verdet/bloch.hpp"
#include "verdet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace verdet::finite {

namespace {

int box_width(int N) { return 2 * N + 1; }

int site_index(int N, int nb, int m, int n, int basis) {
    const int w = box_width(N);
    return ((m + N) * w + (n + N)) * nb + basis;
}

bool in_box(int N, int m, int n) { return std::abs(m) <= N && std::abs(n) <= N; }

} // namespace

FiniteLattice build_finite(const LatticeModel& model, int N, double b, std::size_t size_cap) {
    if (N < 1)
        throw ValidationError("build_finite: N must be >= 1");
    const int nb = model.num_basis();
    const std::size_t n_sites =
        static_cast<std::size_t>(nb) * box_width(N) * box_width(N);
    if (n_sites > size_cap) {
        std::ostringstream os;
        os << "build_finite: " << n_sites << " sites exceed the dense-solver cap " << size_cap;
        throw ValidationError(os.str());
    }

    FiniteLattice lat;
    lat.N = N;
    lat.b = b;
    lat.area = static_cast<double>(box_width(N)) * box_width(N) * model.unit_cell_area();
    lat.sites.reserve(n_sites);
    for (int m = -N; m <= N; ++m)
        for (int n = -N; n <= N; ++n)
            for (int s = 0; s < nb; ++s)
                lat.sites.push_back({Eigen::Vector2i{m, n}, s});

    const Eigen::Index dim = static_cast<Eigen::Index>(n_sites);
    lat.H = ComplexMatrix::Zero(dim, dim);
    lat.X1.resize(dim);
    lat.X2.resize(dim);
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
        const auto pos = model.site_position(lat.sites[idx]);
        lat.X1(idx) = pos.x();
        lat.X2(idx) = pos.y();
    }

    std::vector<Eigen::Triplet<Complex>> t1, t2;
    for (Eigen::Index row = 0; row < dim; ++row) {
        const Site& x = lat.sites[row];
        for (const auto& h : model.hoppings()) {
            if (h.i != x.basis_index) continue;
            const int m2 = x.cell.x() + h.m;
            const int n2 = x.cell.y() + h.n;
            if (!in_box(N, m2, n2)) continue;  // Dirichlet cut
            const Eigen::Index col = site_index(N, nb, m2, n2, h.j);
            const double phi = lattice::peierls_phase(
                {lat.X1(row), lat.X2(row)}, {lat.X1(col), lat.X2(col)});
            const Complex value = std::exp(Complex{0.0, b * phi}) * h.amplitude;
            lat.H(row, col) += value;
            const Complex i_unit{0.0, 1.0};
            t1.emplace_back(static_cast<int>(row), static_cast<int>(col),
                            i_unit * value * (lat.X1(col) - lat.X1(row)));
            t2.emplace_back(static_cast<int>(row), static_cast<int>(col),
                            i_unit * value * (lat.X2(col) - lat.X2(row)));
        }
    }
    lat.j1.resize(dim, dim);
    lat.j2.resize(dim, dim);
    lat.j1.setFromTriplets(t1.begin(), t1.end());
    lat.j2.setFromTriplets(t2.begin(), t2.end());
    return lat;
}

double schur_holmgren_norm_finite(const FiniteLattice& lat) {
    const Eigen::VectorXd row_sums = lat.H.cwiseAbs().rowwise().sum();
    const Eigen::VectorXd col_sums = lat.H.cwiseAbs().colwise().sum();
    return std::max(row_sums.maxCoeff(), col_sums.maxCoeff());
}

void FiniteSpectralSolver::init(const FiniteLattice& lat) {
    b_ = lat.b;
    area_ = lat.area;
    const auto eig = linalg::hermitian_eig(lat.H);
    energies_ = eig.eigenvalues;
    const auto& v = eig.eigenvectors;
    j1_eig_ = linalg::adjoint_times(v, lat.j1 * v);
    j2_eig_ = linalg::adjoint_times(v, lat.j2 * v);
    // diag of V^dagger C V for C = i[j2, X1], kept as per-eigenvector scalars
    ComplexMatrix cv = lat.j2 * (lat.X1.asDiagonal() * v);
    cv -= lat.X1.asDiagonal() * (lat.j2 * v);
    cv *= Complex{0.0, 1.0};
    comm_diag_ = (v.conjugate().cwiseProduct(cv)).colwise().sum();
}

FiniteSpectralSolver::FiniteSpectralSolver(const LatticeModel& model, int N, double b_magnitude,
                                           std::size_t size_cap) {
    if (b_magnitude < 0.0)
        throw ValidationError("FiniteSpectralSolver: b magnitude must be non-negative");
    init(build_finite(model, N, b_magnitude, size_cap));
}

FiniteSpectralSolver::FiniteSpectralSolver(const FiniteLattice& lat) {
    if (lat.b < 0.0)
        throw ValidationError("FiniteSpectralSolver: build the lattice at |b| and use sign = -1");
    init(lat);
}

namespace {

// H_{-b} = conj(H_b) when h0 is real: eigenvectors conjugate, energies equal,
// and j_nu(-b) = -conj(j_nu(b)). In the shared eigenbasis the pair product
// J1_nm * J2_mn therefore conjugates under b -> -b, while the commutator
// i[j2, X1] maps to its conjugate and the real trace with f(H) is even in b.
Complex signed_pair(Complex p, int sign) { return sign >= 0 ? p : std::conj(p); }

} // namespace

Complex FiniteSpectralSolver::weighted_pair_sum(const ThermoOpticalParams& params, int sign,
                                                Complex omega) const {
    const Eigen::Index dim = energies_.size();
    Eigen::VectorXd fd(dim);
    for (Eigen::Index n = 0; n < dim; ++n)
        fd(n) = contour::fermi_dirac(Complex{energies_(n), 0.0}, params).real();
    Complex sum{0.0, 0.0};
    for (Eigen::Index n = 0; n < dim; ++n) {
        Complex row{0.0, 0.0};
        for (Eigen::Index m = 0; m < dim; ++m) {
            const Complex p = signed_pair(j1_eig_(n, m) * j2_eig_(m, n), sign);
            row += p * ((fd(n) - fd(m)) / (energies_(n) - energies_(m) + omega));
        }
        sum += row;
    }
    return sum;
}

FiniteSigmaResult FiniteSpectralSolver::sigma21(const ThermoOpticalParams& params,
                                                int sign) const {
    params.validate();
    if (!(params.eta > 0.0))
        throw ValidationError("sigma21_finite: the finite-volume formula requires eta > 0");
    const double e_radius = std::max(std::abs(energies_.minCoeff()), std::abs(energies_.maxCoeff()));
    if (!(std::abs(params.omega0) > 2.0 * e_radius))
        throw ValidationError("sigma21_finite: |omega0| must exceed twice the spectral radius");

    const Complex omega{params.omega0, -params.eta};
    FiniteSigmaResult r;
    // eta-prefactor commutator term; real trace, even under b -> -b
    double comm_trace = 0.0;
    for (Eigen::Index n = 0; n < energies_.size(); ++n)
        comm_trace += contour::fermi_dirac(Complex{energies_(n), 0.0}, params).real() *
                      comm_diag_(n).real();
    r.eta_term = -params.eta /
                 ((params.eta * params.eta + params.omega0 * params.omega0) * area_) * comm_trace;
    // residue form of the contour term
    const Complex sum = weighted_pair_sum(params, sign, omega);
    r.trace_term = (Complex{0.0, 1.0} / (omega * area_) * sum).real();
    r.sigma21 = r.eta_term + r.trace_term;
    return r;
}

FiniteSigmaResult FiniteSpectralSolver::sigma21_quadrature(const ThermoOpticalParams& params,
                                                           int sign,
                                                           const contour::ContourConfig& cfg) const {
    params.validate();
    if (!(params.eta > 0.0))
        throw ValidationError("sigma21_finite: the finite-volume formula requires eta > 0");
    const Complex omega{params.omega0, -params.eta};
    const auto path =
        contour::build_contour(energies_.minCoeff(), energies_.maxCoeff(), params, cfg);

    const Eigen::Index dim = energies_.size();
    // pair matrix P(n, m) = J1(n, m) J2(m, n); the trace at each node reduces
    // to two matrix-vector products with resolvent-diagonal vectors
    ComplexMatrix pair = j1_eig_.cwiseProduct(j2_eig_.transpose());
    if (sign < 0) pair = pair.conjugate().eval();
    std::vector<Complex> terms(path.nodes.size());
    Eigen::VectorXcd shifted_up(dim), center(dim), shifted_dn(dim);
    for (std::size_t iz = 0; iz < path.nodes.size(); ++iz) {
        const Complex z = path.nodes[iz];
        for (Eigen::Index n = 0; n < dim; ++n) {
            shifted_up(n) = 1.0 / (energies_(n) - z + omega);
            center(n) = 1.0 / (energies_(n) - z);
            shifted_dn(n) = 1.0 / (energies_(n) - z - omega);
        }
        const Complex tr = (shifted_up.array() * (pair * center).array()).sum() +
                           (center.array() * (pair * shifted_dn).array()).sum();
        terms[iz] = path.weights[iz] * contour::fermi_dirac(z, params) * tr;
    }
    const Complex integral = linalg::pairwise_sum(terms);

    FiniteSigmaResult r;
    double comm_trace = 0.0;
    for (Eigen::Index n = 0; n < dim; ++n)
        comm_trace += contour::fermi_dirac(Complex{energies_(n), 0.0}, params).real() *
                      comm_diag_(n).real();
    r.eta_term = -params.eta /
                 ((params.eta * params.eta + params.omega0 * params.omega0) * area_) * comm_trace;
    r.trace_term = (integral / (2.0 * M_PI * omega * area_)).real();
    r.sigma21 = r.eta_term + r.trace_term;
    return r;
}

double FiniteSpectralSolver::equilibrium_current(const ThermoOpticalParams& params,
                                                 int direction) const {
    const ComplexMatrix& j = (direction == 1) ? j1_eig_ : j2_eig_;
    Complex tr{0.0, 0.0};
    for (Eigen::Index n = 0; n < energies_.size(); ++n)
        tr += contour::fermi_dirac(Complex{energies_(n), 0.0}, params) * j(n, n);
    return tr.real() / area_;
}

FiniteSigmaResult sigma21_finite(const FiniteLattice& lat, const ThermoOpticalParams& params,
                                 EvalMethod method, const contour::ContourConfig& cfg) {
    FiniteSpectralSolver solver(lat);
    return method == EvalMethod::Residue ? solver.sigma21(params, +1)
                                         : solver.sigma21_quadrature(params, +1, cfg);
}

BDerivativeResult numeric_b_derivative(const LatticeModel& model, int N,
                                       const ThermoOpticalParams& params, double b_step,
                                       std::vector<double> etas, std::size_t size_cap,
                                       bool richardson_b) {
    if (!(b_step > 0.0))
        throw ValidationError("numeric_b_derivative: b_step must be positive");
    if (etas.empty()) etas.push_back(params.eta);
    for (double eta : etas)
        if (!(eta > 0.0))
            throw ValidationError("numeric_b_derivative: every eta must be positive");

    std::vector<double> steps{b_step};
    if (richardson_b) steps.push_back(b_step / 2.0);

    BDerivativeResult out;
    // derivative[step][eta]
    std::vector<std::vector<double>> deriv(steps.size(), std::vector<double>(etas.size()));
    for (std::size_t is = 0; is < steps.size(); ++is) {
        FiniteSpectralSolver solver(model, N, steps[is], size_cap);
        for (std::size_t ie = 0; ie < etas.size(); ++ie) {
            ThermoOpticalParams p = params;
            p.eta = etas[ie];
            p.b = steps[is];
            const auto plus = solver.sigma21(p, +1);
            const auto minus = solver.sigma21(p, -1);
            deriv[is][ie] = (plus.sigma21 - minus.sigma21) / (2.0 * steps[is]);
            out.points.push_back({N, steps[is], etas[ie], plus.sigma21, plus.eta_term});
            out.points.push_back({N, -steps[is], etas[ie], minus.sigma21, minus.eta_term});
        }
    }

    double b_defect = 0.0;
    std::vector<double> per_eta(etas.size());
    for (std::size_t ie = 0; ie < etas.size(); ++ie) {
        if (richardson_b) {
            const double coarse = deriv[0][ie];
            const double fine = deriv[1][ie];
            per_eta[ie] = (4.0 * fine - coarse) / 3.0;  // O(b^2) error model
            b_defect = std::max(b_defect, std::abs(per_eta[ie] - fine));
        } else {
            per_eta[ie] = deriv[0][ie];
        }
        out.per_eta.emplace_back(etas[ie], per_eta[ie]);
    }

    if (etas.size() >= 2) {
        // linear extrapolation eta -> 0 through the two smallest eta values
        std::vector<std::size_t> order(etas.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return etas[a] < etas[b]; });
        const double e0 = etas[order[0]], e1 = etas[order[1]];
        const double v0 = per_eta[order[0]], v1 = per_eta[order[1]];
        if (std::abs(e1 - e0) < 1e-15)
            throw ValidationError("numeric_b_derivative: eta values must be distinct");
        out.value = (e1 * v0 - e0 * v1) / (e1 - e0);
        out.error_estimate = std::abs(out.value - v0) + b_defect;
    } else {
        out.value = per_eta[0];
        out.error_estimate = b_defect;
    }
    return out;
}

} // namespace verdet::finite
