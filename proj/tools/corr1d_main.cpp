// corr1d command-line driver.  Talks to the library exclusively through the
// C API so it doubles as a usage example for foreign-language bindings.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "corr1d/corr1d.h"

namespace {

int exit_code_for(corr1d_status status) {
    switch (status) {
        case CORR1D_OK: return 0;
        case CORR1D_ERR_CONFIG: return 2;
        case CORR1D_ERR_MISMATCH: return 2;
        default: return 3;
    }
}

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("CORR1D_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    return 0;  // library picks the available parallelism
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corr1d: light transmission through 1D waveguide atomic ensembles"};
    app.set_version_flag("--version", std::string(corr1d_version()));
    app.require_subcommand(1);

    // run
    std::string config_path;
    std::string output_dir;
    std::uint64_t seed = 0;
    int threads = 0;
    CLI::App* run = app.add_subcommand("run", "run an experiment described by a config file");
    run->add_option("config", config_path, "key-value config file (see README)")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--threads", threads, "worker threads (default: CORR1D_THREADS or all cores)");
    run->add_option("--output", output_dir, "output directory (overrides the config)");
    CLI::Option* seed_opt = run->add_option("--seed", seed, "master seed (overrides the config)");

    // compare
    std::string csv_a, csv_b, report_path;
    CLI::App* compare = app.add_subcommand("compare", "compare two results files point by point");
    compare->add_option("a", csv_a, "first results file")->required()->check(CLI::ExistingFile);
    compare->add_option("b", csv_b, "second results file")->required()->check(CLI::ExistingFile);
    compare->add_option("--report", report_path, "write the JSON comparison report here");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        const corr1d_status status = corr1d_run_experiment(
            config_path.c_str(), output_dir.empty() ? nullptr : output_dir.c_str(),
            resolve_threads(threads), seed_opt->count() > 0 ? 1 : 0, seed);
        if (status != CORR1D_OK) {
            std::fprintf(stderr, "corr1d run: %s\n", corr1d_last_error());
        }
        return exit_code_for(status);
    }

    double max_abs_delta = 0.0;
    const corr1d_status status =
        corr1d_compare_csv(csv_a.c_str(), csv_b.c_str(),
                           report_path.empty() ? nullptr : report_path.c_str(), &max_abs_delta);
    if (status != CORR1D_OK) {
        std::fprintf(stderr, "corr1d compare: %s\n", corr1d_last_error());
        return exit_code_for(status);
    }
    std::printf("grids match; max |delta| over numeric columns = %.17g\n", max_abs_delta);
    return 0;
}
