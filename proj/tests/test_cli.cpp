// End-to-end CLI exit codes and output artifacts.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CHDBC_CLI_PATH) + " " + args + " >/dev/null 2>cli_err.txt";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WEXITSTATUS(rc);
}

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    os << text;
}

const std::string kSmallConfig = R"({
  "geometry": {"nx": 8, "ny": 4, "lx": 1.0, "ly": 1.0},
  "potentials": {"bulk": {"kind": "regular"}, "surface": {"kind": "regular"}, "eps": 1e-2},
  "viscosity": {"tau_omega": 1.0, "tau_gamma": 1.0},
  "initial": {"kind": "constant_noise", "m0": 0.0, "amplitude": 0.1, "seed": 1},
  "time": {"dt": 0.01, "t_end": 0.1}
})";

}  // namespace

TEST_CASE("config errors exit with code 2") {
    CHECK(run_cli("simulate --config missing_file.json") == 2);

    write_file("cli_bad.json", R"({"geometry": {"nx": 8}})");
    CHECK(run_cli("simulate --config cli_bad.json") == 2);

    std::string bad_tau = kSmallConfig;
    const auto pos = bad_tau.find("\"tau_omega\": 1.0");
    bad_tau.replace(pos, 16, "\"tau_omega\": 0.0");
    write_file("cli_bad_tau.json", bad_tau);
    CHECK(run_cli("simulate --config cli_bad_tau.json") == 2);
    CHECK(read_file("cli_err.txt").find("tau_omega") != std::string::npos);
}

TEST_CASE("simulate writes a CSV stream and a checkpoint, deterministically") {
    write_file("cli_small.json", kSmallConfig);
    fs::remove_all("cli_out_a");
    fs::remove_all("cli_out_b");
    CHECK(run_cli("simulate --config cli_small.json --out cli_out_a --quiet") == 0);
    CHECK(run_cli("simulate --config cli_small.json --out cli_out_b --quiet") == 0);

    const std::string csv_a = read_file("cli_out_a/diagnostics.csv");
    CHECK(csv_a.find("t,mean_rho,energy") == 0);
    CHECK(std::count(csv_a.begin(), csv_a.end(), '\n') >= 2);
    CHECK(csv_a == read_file("cli_out_b/diagnostics.csv"));
    CHECK(fs::exists("cli_out_a/final.ckpt"));

    // a different seed changes the stream
    CHECK(run_cli("simulate --config cli_small.json --out cli_out_b --seed 7 --quiet") == 0);
    CHECK(csv_a != read_file("cli_out_b/diagnostics.csv"));

    // restart from the written checkpoint
    std::string resume = kSmallConfig;
    const auto pos = resume.find(R"("kind": "constant_noise", "m0": 0.0, "amplitude": 0.1, "seed": 1)");
    resume.replace(pos, std::string(R"("kind": "constant_noise", "m0": 0.0, "amplitude": 0.1, "seed": 1)").size(),
                   R"("kind": "file", "path": "cli_out_a/final.ckpt")");
    write_file("cli_resume.json", resume);
    CHECK(run_cli("simulate --config cli_resume.json --out cli_out_b --quiet") == 0);
}

TEST_CASE("stationary subcommand reports mu_s = 0 at the symmetric mean") {
    std::string cfg = kSmallConfig;
    const auto pos = cfg.find("\"amplitude\": 0.1");
    cfg.replace(pos, 16, "\"amplitude\": 0.0");
    write_file("cli_stat.json", cfg);
    fs::remove_all("cli_out_stat");
    CHECK(run_cli("stationary --config cli_stat.json --out cli_out_stat --quiet") == 0);
    const auto rep = nlohmann::json::parse(read_file("cli_out_stat/report.json"));
    CHECK(std::abs(rep.at("mu_s").get<double>()) < 1e-9);
    CHECK(rep.at("residual").get<double>() <= 1e-10);
}

TEST_CASE("verify: staleness exits with code 4, a settled run passes") {
    write_file("cli_small.json", kSmallConfig);
    fs::remove_all("cli_out_v");
    CHECK(run_cli("verify --config cli_small.json --out cli_out_v --quiet") == 4);

    // on the unit strip every mode decays: a longer horizon settles
    std::string longer = kSmallConfig;
    const auto pos = longer.find("\"t_end\": 0.1");
    longer.replace(pos, 12, "\"t_end\": 20.0");
    write_file("cli_long.json", longer);
    CHECK(run_cli("verify --config cli_long.json --out cli_out_v --quiet") == 0);
    const auto rep = nlohmann::json::parse(read_file("cli_out_v/report.json"));
    CHECK(rep.at("pass").get<bool>());
}

TEST_CASE("sweep emits one CSV per cell plus a summary") {
    std::string cfg = kSmallConfig;
    const auto pos = cfg.find("\"initial\"");
    cfg.insert(pos, R"("sweep": {"parameter": "eps", "values": [1e-2, 1e-3]}, )");
    write_file("cli_sweep.json", cfg);
    fs::remove_all("cli_out_sweep");
    CHECK(run_cli("sweep --config cli_sweep.json --out cli_out_sweep --quiet") == 0);
    CHECK(fs::exists("cli_out_sweep/sweep_eps_0.01.csv"));
    CHECK(fs::exists("cli_out_sweep/sweep_eps_0.001.csv"));
    const auto rep = nlohmann::json::parse(read_file("cli_out_sweep/report.json"));
    CHECK(rep.size() == 2);
}
