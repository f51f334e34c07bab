#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdecoh/commands.hpp"
#include "qdecoh/config.hpp"
#include "qdecoh/constants.hpp"
#include "qdecoh/csv.hpp"
#include "qdecoh/errors.hpp"
#include "qdecoh/rates.hpp"

#include "support/csv_read.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace qdecoh;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("qdecoh_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

using test_support::Csv;

Csv read_csv(const fs::path& path) { return test_support::read_csv(path.string()); }

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig fast_config(const std::string& out_dir) {
    RunConfig config;
    config.out_dir = out_dir;
    config.max_resonators = 2000;
    config.s21_points = 301;
    config.impedance_points = 201;
    config.noise_points = 80;
    config.sweep_points = 40;
    config.evolve_points = 60;
    config.threads = 2;
    return config;
}

} // namespace

TEST_CASE("config parsing, overrides, validation") {
    TempDir dir("config");
    const fs::path cfg_path = dir.path / "run.cfg";
    {
        std::ofstream f(cfg_path);
        f << "# reference device\n";
        f << "f_j = 13.5e9\n";
        f << "r = 9e3   # trailing comment\n";
        f << "temperature = 0.02\n";
    }
    RunConfig config = load_config(cfg_path.string());
    CHECK(config.r == 9e3);
    CHECK(config.temperature == 0.02);

    apply_overrides(config, {{"r", "11e3"}, {"threads", "4"}});
    CHECK(config.r == 11e3);
    CHECK(config.threads == 4);

    SUBCASE("unknown keys and malformed values") {
        CHECK_THROWS_AS(set_key(config, "no_such_key", "1"), config_error);
        CHECK_THROWS_AS(set_key(config, "r", "ten"), config_error);
        CHECK_THROWS_AS(load_config((dir.path / "missing.cfg").string()), config_error);
    }

    SUBCASE("validation names the offending field") {
        config.f_b = -1.0;
        CHECK_THROWS_WITH_AS(validate(config), doctest::Contains("f_b"), config_error);
        config.f_b = 1e6;
        config.temperature = -1.0;
        CHECK_THROWS_WITH_AS(validate(config), doctest::Contains("temperature"),
                             config_error);
    }

    SUBCASE("hz to rad/s conversion happens once") {
        CHECK(config.omega_j() == doctest::Approx(constants::two_pi * config.f_j));
    }
}

TEST_CASE("csv formatting is shortest round-trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(1e300) == "1e+300");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    const double v = 0.1234567890123456789;
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("cmd_bath writes the three files with the contracted shapes") {
    TempDir dir("bath");
    RunConfig config = fast_config(dir.str());
    std::ostringstream log;
    cmd_bath(config, log);
    CHECK(log.str().find("warning") != std::string::npos); // capped resonator count

    const Csv sections = read_csv(dir.path / "bath_sections.csv");
    CHECK(sections.rows.size() == config.max_resonators);
    const std::size_t kq = sections.col("q_k");
    const std::size_t kk = sections.col("k");
    for (std::size_t i = 0; i < sections.rows.size(); i += 97) {
        CHECK(sections.rows[i][kq]
              == doctest::Approx(constants::pi / 2 * sections.rows[i][kk])
                     .epsilon(1e-12));
    }

    const Csv s21 = read_csv(dir.path / "s21.csv");
    const std::size_t c_norm = s21.col("omega_norm");
    const std::size_t c_k = s21.col("k");
    const std::size_t c_mag = s21.col("s21_mag");
    std::map<int, std::pair<double, double>> best; // k -> (mag, omega_norm)
    for (const auto& row : s21.rows) {
        const int k = static_cast<int>(row[c_k]);
        if (row[c_mag] > best[k].first) best[k] = {row[c_mag], row[c_norm]};
    }
    REQUIRE(best.size() == 5);
    for (const auto& [k, peak] : best) {
        CHECK(peak.first == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(peak.second == doctest::Approx(static_cast<double>(k)).epsilon(0.02));
    }

    const Csv imp = read_csv(dir.path / "impedance.csv");
    const std::size_t c_w = imp.col("omega_norm");
    const std::size_t c_x = imp.col("x_over_R");
    const std::size_t c_r = imp.col("r_over_R");
    const double w_zero = std::sqrt(config.omega_b() * config.omega_c())
                        / config.omega_c();
    bool crossed = false;
    double plateau = 0.0;
    for (std::size_t i = 1; i < imp.rows.size(); ++i) {
        if ((imp.rows[i - 1][c_w] - w_zero) * (imp.rows[i][c_w] - w_zero) <= 0.0) {
            crossed = std::signbit(imp.rows[i - 1][c_x]) != std::signbit(imp.rows[i][c_x]);
        }
        plateau = std::max(plateau, imp.rows[i][c_r]);
    }
    CHECK(crossed);
    CHECK(plateau == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("cmd_noise grids and zero-temperature emission side") {
    TempDir dir("noise");
    RunConfig config = fast_config(dir.str());
    config.temperature = 0.0;
    std::ostringstream log;
    cmd_noise(config, log);

    const Csv spec = read_csv(dir.path / "spectral_density.csv");
    const std::size_t c_w = spec.col("omega");
    const std::size_t c_s = spec.col("s_vv");
    for (const auto& row : spec.rows) {
        if (row[c_w] < 0.0) CHECK(row[c_s] == 0.0);
        CHECK(row[c_s] >= 0.0);
    }

    const Csv weights = read_csv(dir.path / "weights.csv");
    CHECK(weights.rows.size() == spec.rows.size());
}

TEST_CASE("cmd_noise flat band rows stay near the classical plateau") {
    TempDir dir("noise_warm");
    RunConfig config = fast_config(dir.str());
    config.temperature = 1.0;
    std::ostringstream log;
    cmd_noise(config, log);
    const Csv spec = read_csv(dir.path / "spectral_density.csv");
    const std::size_t c_w = spec.col("omega");
    const std::size_t c_ratio = spec.col("s_vv_over_2kTR");
    const double lo = 100.0 * config.omega_b();
    const double hi = std::min(config.omega_c() / 100.0,
                               constants::k_boltzmann / (100.0 * constants::hbar));
    std::size_t counted = 0;
    for (const auto& row : spec.rows) {
        if (row[c_w] >= lo && row[c_w] <= hi) {
            CHECK(row[c_ratio] == doctest::Approx(1.0).epsilon(0.01));
            ++counted;
        }
    }
    CHECK(counted > 0);
}

TEST_CASE("cmd_rates sweep satisfies detailed balance row by row") {
    TempDir dir("rates");
    RunConfig config = fast_config(dir.str());
    std::ostringstream log;
    cmd_rates(config, log);
    CHECK(log.str().find("gamma_e") != std::string::npos);

    const Csv rates = read_csv(dir.path / "rates_vs_T.csv");
    const std::size_t c_t = rates.col("temperature");
    const std::size_t c_ge = rates.col("gamma_e");
    const std::size_t c_ga = rates.col("gamma_a");
    const std::size_t c_ta = rates.col("t_a");
    const double wj = config.omega_j();
    double prev_ga = -1.0;
    for (const auto& row : rates.rows) {
        const double x = constants::hbar * wj / (constants::k_boltzmann * row[c_t]);
        if (row[c_ga] > 0.0 && x < 500.0) {
            CHECK(row[c_ge] / row[c_ga] == doctest::Approx(std::exp(x)).epsilon(1e-8));
        }
        CHECK(row[c_ga] >= prev_ga);
        prev_ga = row[c_ga];
    }
    // absorption time diverges toward low temperature
    CHECK(rates.rows.front()[c_ta] > 1e100);
    // emission and absorption approach each other at the hot end
    // (exp(beta hbar omega_j) = 1.067 at 10 K, 13.5 GHz)
    const auto& hot = rates.rows.back();
    CHECK(hot[c_ge] / hot[c_ga] < 1.1);
    CHECK(hot[c_ge] / hot[c_ga] < rates.rows.front()[c_ge] / rates.rows.front()[c_ga]);
}

TEST_CASE("cmd_evolve trajectories and deviation channels") {
    TempDir dir("evolve");
    RunConfig config = fast_config(dir.str());
    std::ostringstream log;
    cmd_evolve(config, log);

    const Csv paper = read_csv(dir.path / "trajectory_paper.csv");
    const std::size_t c_t = paper.col("t");
    const std::size_t c_p1 = paper.col("p1");
    const std::size_t c_p0 = paper.col("p0");
    CHECK(paper.rows.front()[c_p1] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(paper.rows.front()[c_p0] == doctest::Approx(0.5).epsilon(1e-9));

    // p1 halves once more at t = ln2/gamma
    const double gamma = calibrated_rates(config.circuit()).gamma_e;
    const double t_half = std::log(2.0) / gamma;
    double best = 1e300;
    double p1_at_half = 0.0;
    for (const auto& row : paper.rows) {
        if (std::abs(row[c_t] - t_half) < best) {
            best = std::abs(row[c_t] - t_half);
            p1_at_half = row[c_p1];
        }
    }
    CHECK(p1_at_half == doctest::Approx(0.25).epsilon(0.05));
    // excited state dies, ground state lingers
    CHECK(paper.rows.back()[c_p1] < 0.01);
    CHECK(paper.rows.back()[c_p0] > 0.4);

    const Csv dev = read_csv(dir.path / "solution_deviation.csv");
    const std::size_t c_dev1 = dev.col("dev_p1");
    for (const auto& row : dev.rows) {
        CHECK(row[c_dev1] <= 1e-6);
    }

    const Csv oracle = read_csv(dir.path / "trajectory_oracle.csv");
    CHECK(oracle.rows.size() == paper.rows.size());
    // oracle preserves the trace: p0 + p1 = 1
    const std::size_t o_p1 = oracle.col("p1");
    const std::size_t o_p0 = oracle.col("p0");
    const std::size_t o_coh = oracle.col("coherence_mag");
    for (const auto& row : oracle.rows) {
        CHECK(row[o_p1] + row[o_p0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(row[o_p1] >= 0.0);
        CHECK(row[o_p0] >= 0.0);
        CHECK(row[o_coh] <= std::sqrt(row[o_p0] * row[o_p1]) + 1e-9);
    }
}

TEST_CASE("identical configuration produces byte-identical csv output") {
    TempDir dir1("det1");
    TempDir dir2("det2");
    RunConfig c1 = fast_config(dir1.str());
    RunConfig c2 = fast_config(dir2.str());
    c1.threads = 1;
    c2.threads = 2; // thread count must not affect bytes
    std::ostringstream sink;
    cmd_bath(c1, sink);
    cmd_bath(c2, sink);
    cmd_rates(c1, sink);
    cmd_rates(c2, sink);
    for (const char* name : {"bath_sections.csv", "s21.csv", "impedance.csv",
                             "rates_vs_T.csv"}) {
        CHECK(slurp(dir1.path / name) == slurp(dir2.path / name));
    }
}

TEST_CASE("verify battery passes on defaults and fails on a corrupted tolerance") {
    TempDir dir("verify");
    RunConfig config = fast_config(dir.str());
    const auto results = verify_battery(config);
    std::ostringstream report;
    CHECK(print_report(results, report));
    // report format: one line per property with measured and limit
    std::size_t lines = 0;
    std::string text = report.str();
    for (char ch : text) lines += ch == '\n' ? 1 : 0;
    CHECK(lines == results.size());
    CHECK(text.find("measured=") != std::string::npos);
    CHECK(text.find("limit<=") != std::string::npos);

    RunConfig broken = config;
    broken.balance_tol = 0.0;
    const auto bad = verify_battery(broken);
    std::ostringstream bad_report;
    CHECK_FALSE(print_report(bad, bad_report));
    CHECK(bad_report.str().find("FAIL") != std::string::npos);
    CHECK(bad_report.str().find("detailed_balance") != std::string::npos);
}

#ifdef QDECOH_CLI_PATH
namespace {
int run_cli(const std::string& args) {
    const std::string cmd = std::string(QDECOH_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}
} // namespace

TEST_CASE("binary exit-code contract") {
    TempDir dir("exitcodes");
    const std::string out = " --out-dir " + dir.str();
    // 0: success
    CHECK(run_cli("rates --sweep_points 16" + out) == 0);
    CHECK(run_cli("help") == 0);
    // 1: verification failure (corrupted tolerance)
    CHECK(run_cli("verify --balance_tol 0 --max_resonators 1000") == 1);
    // 2: I/O failure (unwritable output directory)
    CHECK(run_cli("rates --out-dir /proc/not_writable") == 2);
    // 3: configuration errors of every flavor
    CHECK(run_cli("") == 3);
    CHECK(run_cli("frobnicate") == 3);
    CHECK(run_cli("rates --no_such_key 1" + out) == 3);
    CHECK(run_cli("rates --r -5" + out) == 3);
    CHECK(run_cli("rates --config /does/not/exist" + out) == 3);
}

TEST_CASE("binary reads config files and applies cli precedence") {
    TempDir dir("precedence");
    const fs::path cfg = dir.path / "run.cfg";
    {
        std::ofstream f(cfg);
        f << "sweep_points = 16\n";
        f << "sweep_t_max = 2.0\n";
    }
    CHECK(run_cli("rates --config " + cfg.string() + " --sweep_t_max 4.0 --out-dir "
                  + dir.str()) == 0);
    const Csv rates = read_csv(dir.path / "rates_vs_T.csv");
    CHECK(rates.rows.size() == 16);                       // from file
    CHECK(rates.rows.back()[0] == doctest::Approx(4.0));  // cli override wins
}
#endif

TEST_CASE("out-dir is created and write failures surface as io errors") {
    TempDir dir("outdir");
    const fs::path nested = dir.path / "a" / "b";
    RunConfig config = fast_config(nested.string());
    std::ostringstream log;
    cmd_rates(config, log);
    CHECK(fs::exists(nested / "rates_vs_T.csv"));

    CHECK_THROWS_AS(prepare_out_dir("/proc/definitely_not_writable"), io_error);
}
