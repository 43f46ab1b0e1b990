#include "verdet/kubo.hpp"
#include "verdet/errors.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <thread>

namespace verdet::kubo {

namespace {

using bloch::BZGrid;
using bloch::FiberConvention;

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    workers = std::min<std::size_t>(std::max(workers, 1), n ? n : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

// Diagonal of the resolvent in the fiber eigenbasis: 1 / (eps_n - z).
Eigen::VectorXcd resolvent_diag(const Eigen::VectorXd& eps, Complex z) {
    return (eps.cast<Complex>().array() - z).inverse().matrix();
}

struct ContourCache {
    contour::Contour path;
    std::vector<Complex> fermi_weight;  // weight_i * f_FD(node_i)
};

ContourCache make_contour_cache(const LatticeModel& model, const ThermoOpticalParams& params,
                                const KuboConfig& cfg) {
    const auto [e_min, e_max] = bloch::spectrum_interval(model, cfg.spectrum_grid);
    ContourCache cc;
    cc.path = contour::build_contour(e_min, e_max, params, cfg.contour);
    cc.fermi_weight.resize(cc.path.nodes.size());
    for (std::size_t i = 0; i < cc.path.nodes.size(); ++i)
        cc.fermi_weight[i] = cc.path.weights[i] * contour::fermi_dirac(cc.path.nodes[i], params);
    return cc;
}

} // namespace

ConductivityResult sigma_zero(const LatticeModel& model, const ThermoOpticalParams& params,
                              int alpha, int beta, const KuboConfig& cfg) {
    if ((alpha != 1 && alpha != 2) || (beta != 1 && beta != 2))
        throw ValidationError("sigma_zero: directions must be 1 or 2");
    params.validate();
    const double w0 = params.omega0;
    const ContourCache cc = make_contour_cache(model, params, cfg);
    const BZGrid grid = bloch::make_bz_grid(model, cfg.bz_n1, cfg.bz_n2);
    const std::size_t nk = grid.nodes.size();
    const std::size_t nz = cc.path.nodes.size();

    std::vector<Complex> per_k_direct(nk), per_k_image(nk);
    parallel_for(nk, resolve_workers(cfg.workers), [&](std::size_t ik) {
        const auto& k = grid.nodes[ik];
        const auto fiber = bloch::fiber_hamiltonian(model, k, FiberConvention::Phased);
        const auto eig = linalg::hermitian_eig(fiber.entries);
        const auto& v = eig.eigenvectors;
        const ComplexMatrix da =
            v.adjoint() * bloch::fiber_k_derivative(model, k, alpha == 1, alpha == 2).entries * v;
        const ComplexMatrix db =
            v.adjoint() * bloch::fiber_k_derivative(model, k, beta == 1, beta == 2).entries * v;
        const Eigen::Index nb = da.rows();
        Complex direct{0.0, 0.0}, image{0.0, 0.0};
        for (std::size_t iz = 0; iz < nz; ++iz) {
            const Complex z = cc.path.nodes[iz];
            const Eigen::VectorXcd rm = resolvent_diag(eig.eigenvalues, z - w0);
            const Eigen::VectorXcd r0 = resolvent_diag(eig.eigenvalues, z);
            const Eigen::VectorXcd rp = resolvent_diag(eig.eigenvalues, z + w0);
            Complex td{0.0, 0.0}, ti{0.0, 0.0};
            for (Eigen::Index n = 0; n < nb; ++n)
                for (Eigen::Index m = 0; m < nb; ++m) {
                    const Complex ab = da(n, m) * db(m, n);
                    td += ab * rm(n) * r0(m);
                    ti += ab * r0(n) * rp(m);
                }
            direct += cc.fermi_weight[iz] * td;
            image += cc.fermi_weight[iz] * ti;
        }
        per_k_direct[ik] = direct;
        per_k_image[ik] = image;
    });

    const Complex sum_direct = linalg::pairwise_sum(per_k_direct);
    const Complex sum_image = linalg::pairwise_sum(per_k_image);
    const Complex mean_k = (sum_direct + sum_image) / static_cast<double>(nk);
    const Complex pre = mean_k / (2.0 * model.unit_cell_area() * M_PI * w0);

    ConductivityResult res;
    res.value = pre.real();
    res.breakdown["rjr_z"] = sum_direct / static_cast<double>(nk);
    res.breakdown["rjr_zw"] = sum_image / static_cast<double>(nk);
    res.grid_n1 = cfg.bz_n1;
    res.grid_n2 = cfg.bz_n2;
    res.contour_nodes = static_cast<int>(nz);
    res.params = params;
    res.imag_residual = std::abs(pre.imag()) / std::max(std::abs(pre.real()), 1e-300);
    return res;
}

namespace {

// Trace of the five term families of the first-derivative formula at one
// (k, z). All matrices live in the fiber eigenbasis; rm/r0 are the diagonal
// resolvents in the two z-slots (z - omega0 and z for the direct term, z and
// z + omega0 for the image).
struct TermTraces {
    Complex sjs1, sjs2, sjs3, sjsk, sksj;
};

TermTraces monster_traces(const Eigen::VectorXcd& rm, const Eigen::VectorXcd& r0,
                          const ComplexMatrix& h1, const ComplexMatrix& h2,
                          const ComplexMatrix& h11, const ComplexMatrix& h12) {
    const auto dm = rm.asDiagonal();
    const auto d0 = r0.asDiagonal();
    // Resolvent derivatives: d_nu r = r (d_nu h) r
    const ComplexMatrix d1rm = dm * h1 * dm;
    const ComplexMatrix d2rm = dm * h2 * dm;
    const ComplexMatrix d1r0 = d0 * h1 * d0;
    const ComplexMatrix d2r0 = d0 * h2 * d0;

    TermTraces t;
    t.sjs1 = ((d1rm * h12 - d2rm * h11) * (d0 * h2)).trace();
    t.sjs2 = ((d1rm * h1 * d2r0 - d2rm * h1 * d1r0) * h2).trace();
    t.sjs3 = ((dm * (h11 * d2r0 - h12 * d1r0)) * h2).trace();
    t.sjsk = ((dm * h1) * (d0 * (h1 * d2r0 - h2 * d1r0)) * h2).trace();
    t.sksj = ((dm * (h1 * d2rm - h2 * d1rm)) * (h1 * (d0 * h2))).trace();
    return t;
}

} // namespace

ConductivityResult sigma21_first_derivative(const LatticeModel& model,
                                            const ThermoOpticalParams& params,
                                            const KuboConfig& cfg) {
    params.validate();
    const double w0 = params.omega0;
    const ContourCache cc = make_contour_cache(model, params, cfg);
    const BZGrid grid = bloch::make_bz_grid(model, cfg.bz_n1, cfg.bz_n2);
    const std::size_t nk = grid.nodes.size();
    const std::size_t nz = cc.path.nodes.size();

    constexpr int kFamilies = 10;  // 5 term families x {direct, image}
    std::vector<std::array<Complex, kFamilies>> per_k(nk);
    parallel_for(nk, resolve_workers(cfg.workers), [&](std::size_t ik) {
        const auto& k = grid.nodes[ik];
        const auto fiber = bloch::fiber_hamiltonian(model, k, FiberConvention::Phased);
        const auto eig = linalg::hermitian_eig(fiber.entries);
        const auto& v = eig.eigenvectors;
        const ComplexMatrix h1 = v.adjoint() * bloch::fiber_k_derivative(model, k, 1, 0).entries * v;
        const ComplexMatrix h2 = v.adjoint() * bloch::fiber_k_derivative(model, k, 0, 1).entries * v;
        const ComplexMatrix h11 = v.adjoint() * bloch::fiber_k_derivative(model, k, 2, 0).entries * v;
        const ComplexMatrix h12 = v.adjoint() * bloch::fiber_k_derivative(model, k, 1, 1).entries * v;

        std::array<Complex, kFamilies> acc{};
        for (std::size_t iz = 0; iz < nz; ++iz) {
            const Complex z = cc.path.nodes[iz];
            // i * f_FD(z) dz, the measure of the first-derivative formula
            const Complex wgt = Complex{0.0, 1.0} * cc.fermi_weight[iz];
            const Eigen::VectorXcd rm = resolvent_diag(eig.eigenvalues, z - w0);
            const Eigen::VectorXcd r0 = resolvent_diag(eig.eigenvalues, z);
            const Eigen::VectorXcd rp = resolvent_diag(eig.eigenvalues, z + w0);
            const TermTraces direct = monster_traces(rm, r0, h1, h2, h11, h12);
            const TermTraces image = monster_traces(r0, rp, h1, h2, h11, h12);
            acc[0] += wgt * direct.sjs1;
            acc[1] += wgt * direct.sjs2;
            acc[2] += wgt * direct.sjs3;
            acc[3] += wgt * direct.sjsk;
            acc[4] += wgt * direct.sksj;
            acc[5] += wgt * image.sjs1;
            acc[6] += wgt * image.sjs2;
            acc[7] += wgt * image.sjs3;
            acc[8] += wgt * image.sjsk;
            acc[9] += wgt * image.sksj;
        }
        per_k[ik] = acc;
    });

    static const char* kLabels[kFamilies] = {
        "sjs1_z", "sjs2_z", "sjs3_z", "sjsk_z", "sksj_z",
        "sjs1_zw", "sjs2_zw", "sjs3_zw", "sjsk_zw", "sksj_zw"};

    ConductivityResult res;
    // Prefactor 1/(4 |cell| pi omega0 |BZ|), the |cell||BZ| = 4 pi^2 bookkeeping
    // done symbolically so non-graphene lattices normalize correctly. The
    // (1/|BZ|) integral is the mean over the uniform grid.
    const double pre = 1.0 / (4.0 * model.unit_cell_area() * M_PI * w0);
    Complex total{0.0, 0.0};
    std::vector<Complex> column(nk);
    for (int f = 0; f < kFamilies; ++f) {
        for (std::size_t ik = 0; ik < nk; ++ik) column[ik] = per_k[ik][f];
        const Complex fam = linalg::pairwise_sum(column) / static_cast<double>(nk);
        res.breakdown[kLabels[f]] = fam;
        total += fam;
    }
    total *= pre;
    res.value = total.real();
    res.grid_n1 = cfg.bz_n1;
    res.grid_n2 = cfg.bz_n2;
    res.contour_nodes = static_cast<int>(nz);
    res.params = params;
    res.imag_residual = std::abs(total.imag()) / std::max(std::abs(total.real()), 1e-300);
    return res;
}

Complex residue_double_resolvent(const FiberMatrix& fiber, const ComplexMatrix& a,
                                 const ComplexMatrix& b, const ThermoOpticalParams& params,
                                 bool image) {
    params.validate();
    const auto eig = linalg::hermitian_eig(fiber.entries);
    const auto& eps = eig.eigenvalues;
    const auto& v = eig.eigenvectors;
    const Eigen::Index nb = eps.size();
    const double w0 = params.omega0;
    for (Eigen::Index n = 0; n < nb; ++n)
        for (Eigen::Index m = 0; m < nb; ++m) {
            if (std::abs(eps(n) - eps(m) + w0) <= 1e-8 || std::abs(eps(n) - eps(m) - w0) <= 1e-8)
                throw NumericalError("residue_double_resolvent: eigenvalue pair resonant with omega0");
        }
    const ComplexMatrix at = v.adjoint() * a * v;
    const ComplexMatrix bt = v.adjoint() * b * v;

    Complex sum{0.0, 0.0};
    if (!image) {
        // Poles inside the contour come from r0(z) at z = eps_m; the z - omega0
        // resolvent poles sit at eps_n + omega0, outside by the admissibility bound.
        for (Eigen::Index m = 0; m < nb; ++m) {
            const Complex f = contour::fermi_dirac(Complex{eps(m), 0.0}, params);
            for (Eigen::Index n = 0; n < nb; ++n)
                sum += at(n, m) * bt(m, n) * f * (-1.0) / (eps(n) - eps(m) + w0);
        }
    } else {
        // trace[r0(z) A r0(z + omega0) B]; enclosed poles at z = eps_n.
        for (Eigen::Index n = 0; n < nb; ++n) {
            const Complex f = contour::fermi_dirac(Complex{eps(n), 0.0}, params);
            for (Eigen::Index m = 0; m < nb; ++m)
                sum += at(n, m) * bt(m, n) * f * (-1.0) / (eps(m) - eps(n) - w0);
        }
    }
    return Complex{0.0, 2.0 * M_PI} * sum;
}

} // namespace verdet::kubo
