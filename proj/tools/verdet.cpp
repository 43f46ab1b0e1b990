// Command-line front end for the magneto-optical transport library.
#include <verdet/bloch.hpp>
#include <verdet/contour.hpp>
#include <verdet/errors.hpp>
#include <verdet/faraday.hpp>
#include <verdet/finite.hpp>
#include <verdet/kubo.hpp>
#include <verdet/lattice.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr const char* kFormatVersion = "1";

using verdet::ValidationError;
using verdet::NumericalError;

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct RunConfig {
    std::string preset = "graphene";
    std::string model_file;
    double lattice_a = 1.0;
    verdet::contour::ThermoOpticalParams params;
    int grid_n1 = 64, grid_n2 = 64;
    int contour_nodes = 512;
    double contour_delta = 0.5;
    double contour_height_factor = 0.25;
    int workers = 0;
    std::string output;   // empty = stdout
    std::string sweep;    // "mu=-1:1:0.05"

    verdet::lattice::LatticeModel load_model() const {
        if (!model_file.empty())
            return verdet::lattice::load_model_file(model_file);
        if (preset == "graphene")
            return verdet::lattice::graphene_model(lattice_a);
        throw ValidationError("unknown preset '" + preset + "' (available: graphene)");
    }
    verdet::kubo::KuboConfig kubo_config() const {
        verdet::kubo::KuboConfig cfg;
        cfg.bz_n1 = grid_n1;
        cfg.bz_n2 = grid_n2;
        cfg.contour.nodes_per_edge = contour_nodes;
        cfg.contour.delta = contour_delta;
        cfg.contour.half_height_factor = contour_height_factor;
        cfg.workers = workers;
        return cfg;
    }
    void emit(std::ostream& os) const {
        os << "format_version=" << kFormatVersion << "\n";
        os << "config.preset=" << (model_file.empty() ? preset : "file:" + model_file) << "\n";
        os << "config.lattice_a=" << fmt17(lattice_a) << "\n";
        os << "config.beta=" << fmt17(params.beta) << "\n";
        os << "config.mu=" << fmt17(params.mu) << "\n";
        os << "config.omega0=" << fmt17(params.omega0) << "\n";
        os << "config.eta=" << fmt17(params.eta) << "\n";
        os << "config.b=" << fmt17(params.b) << "\n";
        os << "config.grid_n1=" << grid_n1 << "\n";
        os << "config.grid_n2=" << grid_n2 << "\n";
        os << "config.contour_nodes=" << contour_nodes << "\n";
        os << "config.contour_delta=" << fmt17(contour_delta) << "\n";
        os << "config.contour_height_factor=" << fmt17(contour_height_factor) << "\n";
        os << "config.workers=" << workers << "\n";
    }
};

class OutputSink {
public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ValidationError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
private:
    std::ofstream file_;
};

void add_common_options(CLI::App* cmd, RunConfig& cfg, bool with_model = true) {
    if (with_model) {
        cmd->add_option("--preset", cfg.preset, "Built-in model preset")
            ->envname("VERDET_PRESET")->capture_default_str();
        cmd->add_option("--model", cfg.model_file, "Model file (overrides --preset)")
            ->envname("VERDET_MODEL");
        cmd->add_option("--a", cfg.lattice_a, "Nearest-neighbour distance for the preset")
            ->envname("VERDET_A")->capture_default_str();
    }
    cmd->add_option("--beta", cfg.params.beta, "Inverse temperature")
        ->envname("VERDET_BETA")->capture_default_str();
    cmd->add_option("--mu", cfg.params.mu, "Chemical potential")
        ->envname("VERDET_MU")->capture_default_str();
    cmd->add_option("--omega0", cfg.params.omega0, "Light frequency (real part)")
        ->envname("VERDET_OMEGA0")->capture_default_str();
    cmd->add_option("--eta", cfg.params.eta, "Adiabatic parameter")
        ->envname("VERDET_ETA")->capture_default_str();
    cmd->add_option("--output", cfg.output, "Write results to this file instead of stdout")
        ->envname("VERDET_OUTPUT");
}

void add_grid_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--grid-n1", cfg.grid_n1, "Brillouin-zone grid size, first axis")
        ->envname("VERDET_GRID_N1")->capture_default_str();
    cmd->add_option("--grid-n2", cfg.grid_n2, "Brillouin-zone grid size, second axis")
        ->envname("VERDET_GRID_N2")->capture_default_str();
    cmd->add_option("--contour-nodes", cfg.contour_nodes, "Quadrature nodes per contour edge")
        ->envname("VERDET_CONTOUR_NODES")->capture_default_str();
    cmd->add_option("--contour-delta", cfg.contour_delta, "Horizontal contour clearance")
        ->envname("VERDET_CONTOUR_DELTA")->capture_default_str();
    cmd->add_option("--contour-height-factor", cfg.contour_height_factor,
                    "Contour half-height as a fraction of pi/beta")
        ->envname("VERDET_CONTOUR_HEIGHT_FACTOR")->capture_default_str();
    cmd->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)")
        ->envname("VERDET_WORKERS")->capture_default_str();
}

std::optional<std::tuple<std::string, double, double, double>> parse_sweep(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ValidationError("sweep syntax is key=start:stop:step");
    const std::string key = s.substr(0, eq);
    double start, stop, step;
    char c1, c2;
    std::istringstream is(s.substr(eq + 1));
    if (!(is >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':')
        throw ValidationError("sweep syntax is key=start:stop:step");
    if (key != "mu" && key != "beta" && key != "omega0")
        throw ValidationError("sweep key must be one of mu, beta, omega0");
    if (!(step > 0.0) || stop < start)
        throw ValidationError("sweep needs step > 0 and stop >= start");
    return std::make_tuple(key, start, stop, step);
}

void print_breakdown(std::ostream& os, const verdet::kubo::ConductivityResult& r,
                     const std::string& prefix) {
    for (const auto& [key, val] : r.breakdown)
        os << prefix << ".breakdown." << key << "=" << fmt17(val.real()) << ","
           << fmt17(val.imag()) << "\n";
    os << prefix << ".imag_residual=" << fmt17(r.imag_residual) << "\n";
    os << prefix << ".contour_nodes=" << r.contour_nodes << "\n";
}

int cmd_bands(const RunConfig& cfg, const std::string& path, int samples) {
    auto model = cfg.load_model();
    std::vector<verdet::lattice::Vec2> waypoints;
    std::stringstream ss(path);
    std::string name;
    while (std::getline(ss, name, ','))
        waypoints.push_back(verdet::bloch::graphene_waypoint(name, cfg.lattice_a));
    const auto rows = verdet::bloch::band_path(model, waypoints, samples);
    OutputSink sink(cfg.output);
    auto& os = sink.stream();
    os << "# format_version=" << kFormatVersion << "\n";
    os << "s,k1,k2";
    for (int i = 1; i <= model.num_basis(); ++i) os << ",e" << i;
    os << "\n";
    for (const auto& row : rows) {
        os << fmt17(row.arclength) << "," << fmt17(row.k.x()) << "," << fmt17(row.k.y());
        for (Eigen::Index i = 0; i < row.energies.size(); ++i) os << "," << fmt17(row.energies(i));
        os << "\n";
    }
    return 0;
}

int cmd_sigma21_zero(const RunConfig& cfg) {
    auto model = cfg.load_model();
    auto r = verdet::kubo::sigma_zero(model, cfg.params, 2, 1, cfg.kubo_config());
    OutputSink sink(cfg.output);
    auto& os = sink.stream();
    cfg.emit(os);
    os << "result.sigma21_zero=" << fmt17(r.value) << "\n";
    print_breakdown(os, r, "result");
    return 0;
}

int cmd_verdet(const RunConfig& cfg, bool with_sigma11) {
    auto model = cfg.load_model();
    OutputSink sink(cfg.output);
    auto& os = sink.stream();
    const auto sweep = parse_sweep(cfg.sweep);
    if (sweep) {
        const auto& [key, start, stop, step] = *sweep;
        cfg.emit(os);
        os << "sweep.key=" << key << "\n";
        os << key << ",sigma21_first\n";
        for (double v = start; v <= stop + step * 1e-9; v += step) {
            auto p = cfg.params;
            if (key == "mu") p.mu = v;
            else if (key == "beta") p.beta = v;
            else p.omega0 = v;
            auto r = verdet::kubo::sigma21_first_derivative(model, p, cfg.kubo_config());
            os << fmt17(v) << "," << fmt17(r.value) << "\n";
        }
        return 0;
    }
    auto r = verdet::kubo::sigma21_first_derivative(model, cfg.params, cfg.kubo_config());
    cfg.emit(os);
    os << "result.sigma21_first=" << fmt17(r.value) << "\n";
    print_breakdown(os, r, "result");
    if (with_sigma11) {
        auto s11 = verdet::kubo::sigma_zero(model, cfg.params, 1, 1, cfg.kubo_config());
        os << "result.sigma11_zero=" << fmt17(s11.value) << "\n";
    }
    return 0;
}

int cmd_finite(const RunConfig& cfg, int N, double b, bool derivative, double b_step,
               std::vector<double> etas, bool quadrature) {
    auto model = cfg.load_model();
    OutputSink sink(cfg.output);
    auto& os = sink.stream();
    cfg.emit(os);
    os << "config.N=" << N << "\n";
    if (derivative) {
        auto d = verdet::finite::numeric_b_derivative(model, N, cfg.params, b_step, etas);
        os << "result.dsigma21_db=" << fmt17(d.value) << "\n";
        os << "result.error_estimate=" << fmt17(d.error_estimate) << "\n";
        for (const auto& [eta, val] : d.per_eta)
            os << "result.per_eta." << fmt17(eta) << "=" << fmt17(val) << "\n";
        for (const auto& pt : d.points)
            os << "result.point.N=" << pt.N << ",b=" << fmt17(pt.b) << ",eta=" << fmt17(pt.eta)
               << ",sigma21=" << fmt17(pt.sigma21) << ",eta_term=" << fmt17(pt.eta_term) << "\n";
        return 0;
    }
    auto p = cfg.params;
    p.b = b;
    auto lat = verdet::finite::build_finite(model, N, b);
    auto r = verdet::finite::sigma21_finite(
        lat, p,
        quadrature ? verdet::finite::EvalMethod::Quadrature : verdet::finite::EvalMethod::Residue,
        cfg.kubo_config().contour);
    os << "config.b=" << fmt17(b) << "\n";
    os << "result.sigma21=" << fmt17(r.sigma21) << "\n";
    os << "result.eta_term=" << fmt17(r.eta_term) << "\n";
    os << "result.trace_term=" << fmt17(r.trace_term) << "\n";
    return 0;
}

int cmd_faraday(const RunConfig& cfg, verdet::faraday::SlabOptics optics, double sigma21_first,
                double sigma11_zero, double b, bool compute) {
    OutputSink sink(cfg.output);
    auto& os = sink.stream();
    if (compute) {
        auto model = cfg.load_model();
        auto v = verdet::kubo::sigma21_first_derivative(model, cfg.params, cfg.kubo_config());
        auto s11 = verdet::kubo::sigma_zero(model, cfg.params, 1, 1, cfg.kubo_config());
        sigma21_first = v.value;
        sigma11_zero = s11.value;
    }
    auto r = verdet::faraday::verdet_and_angle(sigma21_first, sigma11_zero, b, optics);
    cfg.emit(os);
    os << "config.slab_d=" << fmt17(optics.d) << "\n";
    os << "config.slab_mu_r=" << fmt17(optics.mu_r) << "\n";
    os << "config.slab_eps_r=" << fmt17(optics.eps_r) << "\n";
    os << "config.slab_c=" << fmt17(optics.c) << "\n";
    os << "config.slab_omega=" << fmt17(optics.omega) << "\n";
    os << "config.sigma21_first=" << fmt17(sigma21_first) << "\n";
    os << "config.sigma11_zero=" << fmt17(sigma11_zero) << "\n";
    os << "config.b=" << fmt17(b) << "\n";
    os << "result.verdet=" << fmt17(r.verdet) << "\n";
    os << "result.theta=" << fmt17(r.theta) << "\n";
    os << "result.theta_exact=" << fmt17(r.theta_exact) << "\n";
    return 0;
}

int cmd_selftest() {
    using namespace verdet;
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
        if (!ok) ++failures;
    };
    auto model = lattice::graphene_model(1.0);

    // flux identity on random triples
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    bool flux_ok = true;
    for (int i = 0; i < 1000; ++i) {
        lattice::Vec2 x{u(rng), u(rng)}, y{u(rng), u(rng)}, z{u(rng), u(rng)};
        const double lhs = lattice::peierls_phase(x, y) + lattice::peierls_phase(y, z) +
                           lattice::peierls_phase(z, x);
        if (std::abs(lhs - lattice::triangle_flux(x, y, z)) > 1e-12 * std::max(1.0, std::abs(lhs)))
            flux_ok = false;
    }
    check(flux_ok, "flux identity on random triples");

    // band parity and Gamma values
    auto eg = bloch::band_energies(model, {0.0, 0.0});
    check(std::abs(eg(0) + 3) < 1e-10 && std::abs(eg(3) - 3) < 1e-10, "Gamma band edges");

    // residue vs quadrature on random fibers
    contour::ThermoOpticalParams p;
    p.omega0 = 20.0;  // clears twice the spectral radius of the random fibers
    std::normal_distribution<double> g;
    bool oracle_ok = true;
    for (int rep = 0; rep < 20; ++rep) {
        linalg::ComplexMatrix a(4, 4), b(4, 4), h(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                a(i, j) = {g(rng), g(rng)};
                b(i, j) = {g(rng), g(rng)};
                h(i, j) = {g(rng), g(rng)};
            }
        h = (h + h.adjoint()).eval() / 2.0;
        bloch::FiberMatrix fiber{{0.0, 0.0}, h, bloch::FiberConvention::Phased};
        const auto res = kubo::residue_double_resolvent(fiber, a, b, p, false);
        contour::ContourConfig ccfg;
        ccfg.nodes_per_edge = 512;
        auto eig = linalg::hermitian_eig(h);
        auto path = contour::build_contour(eig.eigenvalues.minCoeff(),
                                           eig.eigenvalues.maxCoeff(), p, ccfg);
        const auto quad = contour::contour_integrate(path, [&](linalg::Complex z) {
            return contour::fermi_dirac(z, p) *
                   linalg::trace_product({linalg::resolvent(h, z - p.omega0), a,
                                          linalg::resolvent(h, z), b});
        });
        if (std::abs(res - quad) > 1e-8 * std::max(1.0, std::abs(res))) oracle_ok = false;
    }
    check(oracle_ok, "residue vs quadrature on random fibers");

    // equilibrium current vanishes
    finite::FiniteSpectralSolver solver(model, 2, 0.1);
    contour::ThermoOpticalParams pf = p;
    pf.eta = 0.1;
    check(std::abs(solver.equilibrium_current(pf, 1)) < 1e-12 &&
              std::abs(solver.equilibrium_current(pf, 2)) < 1e-12,
          "equilibrium current vanishes");

    // faraday linearization
    faraday::SlabOptics optics;
    optics.omega = 7.0;
    check(std::abs(faraday::f_uv(0.0, 0.0, optics) - 1.0) < 1e-15, "f(0,0) = 1");

    std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Magneto-optical transport for 2-D tight-binding crystals"};
    app.require_subcommand(0, 1);
    app.failure_message(CLI::FailureMessage::help);

    RunConfig cfg;
    bool print_config = false;
    app.add_flag("--print-config", print_config, "Print the resolved configuration and exit");

    // bands
    std::string band_path_spec = "G,X1,M,K";
    int band_samples = 100;
    auto* bands = app.add_subcommand("bands", "Band energies along a waypoint path (CSV)");
    add_common_options(bands, cfg);
    bands->add_option("--path", band_path_spec, "Comma-separated waypoints (G,X1,X2,M,K,Kp)")
        ->capture_default_str();
    bands->add_option("--samples", band_samples, "Samples per path segment")->capture_default_str();

    // sigma21-zero
    auto* s21zero = app.add_subcommand("sigma21-zero", "Zero-field transverse conductivity");
    add_common_options(s21zero, cfg);
    add_grid_options(s21zero, cfg);

    // verdet
    bool verdet_with_s11 = false;
    auto* verdet_cmd = app.add_subcommand("verdet", "First b-derivative of sigma21 at b = 0");
    add_common_options(verdet_cmd, cfg);
    add_grid_options(verdet_cmd, cfg);
    verdet_cmd->add_option("--sweep", cfg.sweep, "Parameter sweep, e.g. mu=-1:1:0.05");
    verdet_cmd->add_flag("--with-sigma11", verdet_with_s11, "Also report sigma11(0)");

    // finite
    int fin_N = 8;
    double fin_b = 0.01, fin_b_step = 1e-3;
    bool fin_derivative = false, fin_quadrature = false;
    std::vector<double> fin_etas;
    auto* finite_cmd = app.add_subcommand("finite", "Finite-lattice conductivity oracle");
    add_common_options(finite_cmd, cfg);
    add_grid_options(finite_cmd, cfg);
    finite_cmd->add_option("--N", fin_N, "Box half-width in unit cells")->capture_default_str();
    finite_cmd->add_option("--b", fin_b, "Magnetic field strength")->capture_default_str();
    finite_cmd->add_flag("--derivative", fin_derivative, "Numeric d sigma21/db at b = 0");
    finite_cmd->add_option("--b-step", fin_b_step, "Central-difference step")->capture_default_str();
    finite_cmd->add_option("--etas", fin_etas, "Adiabatic parameters for eta -> 0 extrapolation");
    finite_cmd->add_flag("--quadrature", fin_quadrature, "Contour quadrature instead of residues");

    // faraday
    verdet::faraday::SlabOptics optics;
    double far_s21 = 0.0, far_s11 = 0.0, far_b = 0.0;
    bool far_compute = false;
    auto* faraday_cmd = app.add_subcommand("faraday", "Verdet constant and rotation angle");
    add_common_options(faraday_cmd, cfg);
    add_grid_options(faraday_cmd, cfg);
    faraday_cmd->add_option("--sigma21-first", far_s21, "Linear response coefficient");
    faraday_cmd->add_option("--sigma11-zero", far_s11, "Zero-field diagonal conductivity");
    faraday_cmd->add_flag("--compute", far_compute, "Compute both coefficients from the model");
    faraday_cmd->add_option("--d", optics.d, "Slab thickness")->capture_default_str();
    faraday_cmd->add_option("--eps", optics.eps_r, "Relative permittivity")->capture_default_str();
    faraday_cmd->add_option("--mu-r", optics.mu_r, "Relative permeability")->capture_default_str();
    faraday_cmd->add_option("--c", optics.c, "Speed of light in chosen units")->capture_default_str();
    faraday_cmd->add_option("--omega", optics.omega, "Light frequency")->capture_default_str();
    faraday_cmd->add_option("--b", far_b, "Magnetic field strength")->capture_default_str();

    auto* selftest_cmd = app.add_subcommand("selftest", "Quick oracle-equivalence and parity checks");
    (void)selftest_cmd;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (print_config) {
            cfg.emit(std::cout);
            return 0;
        }
        if (app.got_subcommand("bands")) return cmd_bands(cfg, band_path_spec, band_samples);
        if (app.got_subcommand("sigma21-zero")) return cmd_sigma21_zero(cfg);
        if (app.got_subcommand("verdet")) return cmd_verdet(cfg, verdet_with_s11);
        if (app.got_subcommand("finite"))
            return cmd_finite(cfg, fin_N, fin_b, fin_derivative, fin_b_step, fin_etas,
                              fin_quadrature);
        if (app.got_subcommand("faraday")) {
            if (faraday_cmd->count("--omega") == 0) optics.omega = cfg.params.omega0;
            return cmd_faraday(cfg, optics, far_s21, far_s11, far_b, far_compute);
        }
        if (app.got_subcommand("selftest")) return cmd_selftest();
        std::cout << app.help();
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error kind=validation exit=2 msg=\"" << e.what() << "\"\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error kind=numerical exit=3 msg=\"" << e.what() << "\"\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error kind=internal exit=3 msg=\"" << e.what() << "\"\n";
        return 3;
    }
}
