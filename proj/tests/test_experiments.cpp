#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "csv.hpp"
#include "experiments.hpp"
#include "keyvalue.hpp"

using namespace corr1d;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("corr1d_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
    const fs::path path = dir / "run.toml";
    std::ofstream out(path);
    out << body;
    return path;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("config parser") {
    SUBCASE("values of every kind") {
        KeyValueFile kv = KeyValueFile::parse_text(
            "a = 1.5   # trailing comment\n"
            "b = \"text # not a comment\"\n"
            "c = true\n"
            "d = [1, 2.5, -3]\n");
        CHECK(kv.require_number("a") == 1.5);
        CHECK(kv.require_string("b") == "text # not a comment");
        CHECK(kv.get_boolean("c", false));
        CHECK(kv.get_number_array("d", {}) == std::vector<double>{1.0, 2.5, -3.0});
        kv.finalize();
    }

    SUBCASE("unknown keys are rejected with line diagnostics") {
        KeyValueFile kv = KeyValueFile::parse_text("known = 1\nmystery_key = 2\n", "cfg");
        kv.require_number("known");
        CHECK_THROWS_WITH_AS(kv.finalize(), doctest::Contains("mystery_key"), ConfigError);
    }

    SUBCASE("syntax errors carry line numbers") {
        CHECK_THROWS_WITH_AS(KeyValueFile::parse_text("a = 1\nnonsense line\n", "cfg"),
                             doctest::Contains("cfg:2"), ConfigError);
        CHECK_THROWS_AS(KeyValueFile::parse_text("a = 1\na = 2\n"), ConfigError);
        CHECK_THROWS_AS(KeyValueFile::parse_text("a = [1, oops]\n"), ConfigError);
        CHECK_THROWS_AS(KeyValueFile::parse_text("a = \"unterminated\n"), ConfigError);
    }

    SUBCASE("type mismatches and integer checks") {
        KeyValueFile kv = KeyValueFile::parse_text("s = \"x\"\nf = 1.25\n");
        CHECK_THROWS_AS(kv.require_number("s"), ConfigError);
        CHECK_THROWS_AS(kv.require_integer("f"), ConfigError);
        CHECK_THROWS_AS(kv.require_number("absent"), ConfigError);
    }
}

TEST_CASE("csv round trip preserves doubles exactly") {
    const fs::path dir = fresh_dir("csv");
    const fs::path file = dir / "table.csv";
    const std::vector<double> values{1.0 / 3.0, -0.0, 1e-300, 6.02214076e23,
                                     3.141592653589793, -2.2250738585072014e-308};
    {
        CsvWriter writer(file.string(), {"a", "b", "c", "d", "e", "f"});
        writer.write_row(values);
    }
    const CsvTable table = read_csv(file.string());
    REQUIRE(table.rows.size() == 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        CHECK(table.number(0, static_cast<int>(i)) == values[i]);
    }
}

TEST_CASE("spectrum experiment end to end") {
    const fs::path dir = fresh_dir("spectrum");
    const fs::path cfg = write_config(dir,
                                      "experiment = \"spectrum\"\n"
                                      "kind = \"classical\"\n"
                                      "gamma_w_over_gamma_t = 0.5\n"
                                      "n_atoms = 4\n"
                                      "box_length_k = 10\n"
                                      "n_realizations = 64\n"
                                      "delta_min = -2\n"
                                      "delta_max = 2\n"
                                      "delta_count = 9\n"
                                      "seed = 7\n");
    RunOptions options;
    options.config_path = cfg.string();
    options.output_dir = (dir / "out").string();
    run_experiment(options);

    const CsvTable table = read_csv((dir / "out" / "results.csv").string());
    CHECK(table.header ==
          std::vector<std::string>{"delta_over_gamma_t", "mean_T", "stderr_T", "mean_lnT_scaled",
                                   "mft_T", "n_used", "n_diverged"});
    CHECK(table.rows.size() == 9);
    CHECK(fs::exists(dir / "out" / "manifest.json"));

    SUBCASE("identical seeds give bitwise-identical output for any thread count") {
        RunOptions again = options;
        again.output_dir = (dir / "out_threads").string();
        again.threads = 5;
        run_experiment(again);
        CHECK(slurp(dir / "out" / "results.csv") == slurp(dir / "out_threads" / "results.csv"));
    }

    SUBCASE("backends agree numerically") {
        const fs::path cfg2 = dir / "run_dipole.toml";
        std::ofstream(cfg2) << slurp(cfg) << "solver = \"dipole\"\n";
        RunOptions dip;
        dip.config_path = cfg2.string();
        dip.output_dir = (dir / "out_dipole").string();
        run_experiment(dip);
        const CompareReport report = compare_csv((dir / "out" / "results.csv").string(),
                                                 (dir / "out_dipole" / "results.csv").string());
        CHECK(report.max_abs_delta < 1e-9);
    }
}

TEST_CASE("empty ensemble transmits everything") {
    const fs::path dir = fresh_dir("empty");
    const fs::path cfg = write_config(dir,
                                      "experiment = \"spectrum\"\n"
                                      "n_atoms = 0\n"
                                      "box_length_k = 5\n"
                                      "n_realizations = 8\n"
                                      "delta_count = 5\n");
    RunOptions options;
    options.config_path = cfg.string();
    options.output_dir = (dir / "out").string();
    run_experiment(options);
    const CsvTable table = read_csv((dir / "out" / "results.csv").string());
    const int t_col = table.column("mean_T");
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        CHECK(table.number(r, t_col) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("fig2 preset emits one curve per loss ratio") {
    const fs::path dir = fresh_dir("fig2");
    const fs::path cfg = write_config(dir,
                                      "experiment = \"fig2\"\n"
                                      "n_realizations = 16\n"
                                      "n_atoms = 6\n"
                                      "delta_count = 7\n"
                                      "seed = 3\n");
    RunOptions options;
    options.config_path = cfg.string();
    options.output_dir = (dir / "out").string();
    run_experiment(options);
    for (const char* label : {"gw0.4", "gw0.2", "gw0.1", "gw0.05", "gw0.025"}) {
        CHECK(fs::exists(dir / "out" / label / "results.csv"));
    }
}

TEST_CASE("fig3a preset emits shifts with the CLS prediction column") {
    const fs::path dir = fresh_dir("fig3a");
    const fs::path cfg = write_config(dir,
                                      "experiment = \"fig3a\"\n"
                                      "n_realizations = 128\n"
                                      "gamma_values = [0.05]\n"
                                      "kl_values = [3.141592653589793]\n"
                                      "delta_count = 15\n"
                                      "seed = 5\n");
    RunOptions options;
    options.config_path = cfg.string();
    options.output_dir = (dir / "out").string();
    run_experiment(options);
    const CsvTable table = read_csv((dir / "out" / "shifts.csv").string());
    CHECK(table.header == std::vector<std::string>{"kL", "gamma_w_over_gamma_t",
                                                   "shift_over_gamma_t", "uncertainty",
                                                   "cls_prediction"});
    REQUIRE(table.rows.size() == 1);
    // at 2Lk = 2 pi the etalon term vanishes: cls = gamma_w rho / 2k
    CHECK(table.number(0, 4) == doctest::Approx(0.05 * (32.0 / 3.141592653589793) / 2.0));
    // the measured shift lands within a factor 2 of it even at this size
    CHECK(table.number(0, 2) / table.number(0, 4) > 0.5);
    CHECK(table.number(0, 2) / table.number(0, 4) < 2.0);
}

TEST_CASE("figA1b deviation grows with density") {
    const fs::path dir = fresh_dir("figa1b");
    const fs::path cfg = write_config(dir,
                                      "experiment = \"figA1b\"\n"
                                      "rho_values = [0.05, 0.5, 5]\n");
    RunOptions options;
    options.config_path = cfg.string();
    options.output_dir = (dir / "out").string();
    run_experiment(options);
    const CsvTable table = read_csv((dir / "out" / "deviation.csv").string());
    REQUIRE(table.rows.size() == 3);
    CHECK(table.number(0, 1) < table.number(1, 1));
    CHECK(table.number(1, 1) < table.number(2, 1));
}

TEST_CASE("config errors are reported, not swallowed") {
    const fs::path dir = fresh_dir("cfgerr");
    SUBCASE("unknown experiment") {
        const fs::path cfg = write_config(dir, "experiment = \"fig9\"\n");
        RunOptions options;
        options.config_path = cfg.string();
        options.output_dir = (dir / "out").string();
        CHECK_THROWS_AS(run_experiment(options), ConfigError);
    }
    SUBCASE("unknown key names the offender") {
        const fs::path cfg = write_config(dir,
                                          "experiment = \"spectrum\"\n"
                                          "n_atoms = 2\n"
                                          "box_length_k = 5\n"
                                          "n_realizations = 4\n"
                                          "delta_count = 5\n"
                                          "gamma_w_ovr_gamma_t = 0.5\n");
        RunOptions options;
        options.config_path = cfg.string();
        options.output_dir = (dir / "out").string();
        CHECK_THROWS_WITH_AS(run_experiment(options), doctest::Contains("gamma_w_ovr_gamma_t"),
                             ConfigError);
    }
    SUBCASE("missing file") {
        RunOptions options;
        options.config_path = (dir / "absent.toml").string();
        CHECK_THROWS_AS(run_experiment(options), ConfigError);
    }
}

TEST_CASE("comparison harness") {
    const fs::path dir = fresh_dir("compare");
    auto write_table = [&](const std::string& name, double perturbation) {
        CsvWriter writer((dir / name).string(), {"delta_over_gamma_t", "mean_T", "stderr_T"});
        for (int i = 0; i < 5; ++i) {
            writer.write_row(std::vector<double>{0.5 * i, 0.9 - 0.01 * i + perturbation, 0.001});
        }
    };
    write_table("a.csv", 0.0);
    write_table("b.csv", 0.0);
    write_table("c.csv", 5e-4);

    SUBCASE("identical files") {
        const CompareReport report = compare_csv((dir / "a.csv").string(), (dir / "b.csv").string());
        CHECK(report.identical_bytes);
        CHECK(report.max_abs_delta == 0.0);
        CHECK(report.chi2 == 0.0);
        const fs::path report_path = dir / "report.json";
        write_report_json(report, report_path.string());
        CHECK(slurp(report_path).find("\"max_abs_delta\": 0.0") != std::string::npos);
    }

    SUBCASE("small perturbation shows up in max delta and chi2") {
        const CompareReport report = compare_csv((dir / "a.csv").string(), (dir / "c.csv").string());
        CHECK(!report.identical_bytes);
        CHECK(report.max_abs_delta == doctest::Approx(5e-4));
        CHECK(report.chi2 > 0.0);
        CHECK(report.chi2_points == 5);
    }

    SUBCASE("grid mismatch is an error") {
        {
            CsvWriter writer((dir / "short.csv").string(),
                             {"delta_over_gamma_t", "mean_T", "stderr_T"});
            writer.write_row(std::vector<double>{0.0, 0.9, 0.001});
        }
        CHECK_THROWS_AS(compare_csv((dir / "a.csv").string(), (dir / "short.csv").string()),
                        GridMismatch);
    }
}
