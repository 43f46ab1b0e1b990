#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    const std::string tag = std::to_string(counter++);
    const std::string out_path = "cli_out_" + tag + ".txt";
    const std::string err_path = "cli_err_" + tag + ".txt";
    const std::string cmd =
        env + " " VERDET_CLI_PATH " " + args + " >" + out_path + " 2>" + err_path;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

} // namespace

TEST_CASE("bands runs and emits versioned csv") {
    auto r = run_cli("bands --samples 4");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("# format_version=1", 0) == 0);
    CHECK(r.out.find("s,k1,k2,") != std::string::npos);
}

TEST_CASE("csv output is byte identical across runs") {
    const std::string args =
        "sigma21-zero --grid-n1 8 --grid-n2 8 --contour-nodes 32 --workers 4";
    auto a = run_cli(args);
    auto b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("validation errors exit with code 2 and a machine-parsable record") {
    auto r = run_cli("sigma21-zero --omega0 5 --grid-n1 4 --grid-n2 4");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("error kind=validation exit=2") != std::string::npos);

    auto eta = run_cli("finite --N 2 --eta 0.4 --beta 10");
    CHECK(eta.exit_code == 2);
    CHECK(eta.err.find("kind=validation") != std::string::npos);

    auto zero_eta = run_cli("finite --N 2 --eta 0");
    CHECK(zero_eta.exit_code == 2);

    // |b * sigma21| outside the refraction-index domain
    auto domain = run_cli("faraday --sigma21-first 1 --sigma11-zero 0 --b 1");
    CHECK(domain.exit_code == 2);
}

TEST_CASE("unknown subcommand exits with code 2") {
    auto r = run_cli("frobnicate");
    CHECK(r.exit_code == 2);
}

TEST_CASE("environment variables override defaults") {
    auto r = run_cli("sigma21-zero --grid-n1 4 --grid-n2 4", "VERDET_OMEGA0=5");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("kind=validation") != std::string::npos);
}

TEST_CASE("print-config reports effective settings") {
    auto r = run_cli("--print-config sigma21-zero --mu 0.25");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("config.omega0=") != std::string::npos);
    CHECK(r.out.find("config.mu=0.25") != std::string::npos);
}

TEST_CASE("selftest passes") {
    auto r = run_cli("selftest");
    CHECK(r.exit_code == 0);
}
