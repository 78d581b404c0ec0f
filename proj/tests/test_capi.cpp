// Exercises the shared-library surface exactly as an external consumer
// would: opaque handles, status codes, no C++ headers from the core.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "corr1d/corr1d.h"

namespace fs = std::filesystem;

namespace {

double cabs2(corr1d_complex z) { return z.re * z.re + z.im * z.im; }

double cdist(corr1d_complex a, corr1d_complex b) {
    return std::hypot(a.re - b.re, a.im - b.im);
}

}  // namespace

TEST_CASE("version and error reporting") {
    CHECK(std::string(corr1d_version()).find("corr1d") != std::string::npos);

    corr1d_params* params = nullptr;
    CHECK(corr1d_params_create(-1.0, 1.0, 0.0, &params) == CORR1D_ERR_INVALID_ARGUMENT);
    CHECK(params == nullptr);
    CHECK(std::string(corr1d_last_error()).size() > 0);
}

TEST_CASE("single-atom amplitudes through the C surface") {
    corr1d_params* params = nullptr;
    REQUIRE(corr1d_params_create(1.0, 1.0, 0.0, &params) == CORR1D_OK);
    CHECK(corr1d_params_gamma_t(params) == 1.0);

    corr1d_complex t, r;
    REQUIRE(corr1d_single_atom(params, 0.0, &t, &r) == CORR1D_OK);
    CHECK(std::abs(t.re) < 1e-15);
    CHECK(std::abs(t.im) < 1e-15);
    CHECK(std::abs(r.re + 1.0) < 1e-15);

    corr1d_params_free(params);
}

TEST_CASE("configurations and both exact backends") {
    corr1d_params* params = nullptr;
    REQUIRE(corr1d_params_create(1.0, 0.6, 0.4, &params) == CORR1D_OK);

    const double positions[4] = {0.0, 1.3, 2.9, 7.1};
    const double detunings[4] = {0.2, -0.4, 1.1, 0.0};
    corr1d_config* config = nullptr;
    REQUIRE(corr1d_config_create(positions, detunings, 4, &config) == CORR1D_OK);

    corr1d_complex td, rd, tt, rt;
    REQUIRE(corr1d_transmission(params, config, CORR1D_BACKEND_DIPOLE, &td, &rd) == CORR1D_OK);
    REQUIRE(corr1d_transmission(params, config, CORR1D_BACKEND_TRANSFER, &tt, &rt) == CORR1D_OK);
    CHECK(cdist(td, tt) < 1e-10);
    CHECK(cdist(rd, rt) < 1e-10);
    CHECK(cabs2(td) + cabs2(rd) < 1.0);  // lossy waveguide

    corr1d_config_free(config);

    const double unsorted[2] = {1.0, 0.0};
    const double flat[2] = {0.0, 0.0};
    corr1d_config* bad = nullptr;
    CHECK(corr1d_config_create(unsorted, flat, 2, &bad) == CORR1D_ERR_INVALID_ARGUMENT);
    CHECK(bad == nullptr);

    corr1d_params_free(params);
}

TEST_CASE("two-atom closed forms") {
    corr1d_params* params = nullptr;
    REQUIRE(corr1d_params_create(1.0, 0.9, 0.1, &params) == CORR1D_OK);

    corr1d_complex t12, fixed, averaged;
    REQUIRE(corr1d_two_atom_amplitude(params, 0.5, 0.5, 0.8, &t12) == CORR1D_OK);
    REQUIRE(corr1d_two_atom_average_doppler(params, 0.5, 0.0, 0.8, &fixed) == CORR1D_OK);
    CHECK(cdist(t12, fixed) < 1e-15);

    REQUIRE(corr1d_two_atom_average(params, 0.5, 0.4, &averaged) == CORR1D_OK);
    CHECK(std::isfinite(averaged.re));

    corr1d_params_free(params);
}

TEST_CASE("mean-field helpers") {
    corr1d_params* params = nullptr;
    REQUIRE(corr1d_params_create(1.0, 1.0, 0.0, &params) == CORR1D_OK);

    corr1d_complex unity;
    REQUIRE(corr1d_mft_product(params, 0.7, 0.0, 0, &unity) == CORR1D_OK);
    CHECK(unity.re == 1.0);
    CHECK(unity.im == 0.0);

    double thickness = 0.0;
    REQUIRE(corr1d_poisson_mft_thickness(params, 0.0, 1.0, &thickness) == CORR1D_OK);
    CHECK(thickness == doctest::Approx(1.0));

    corr1d_complex t, r;
    REQUIRE(corr1d_slab_transmission(params, 0.0, 2.0, 0.3, &t, &r) == CORR1D_OK);
    CHECK(std::abs(t.re - 1.0) < 1e-12);

    double shift = 0.0;
    const double pi = 3.141592653589793;
    REQUIRE(corr1d_cls_shift(params, 0.5, pi / 2.0, &shift) == CORR1D_OK);
    CHECK(shift == doctest::Approx(0.25));  // 2Lk = pi: plain gamma_w rho / 2k

    double width = 0.0;
    REQUIRE(corr1d_mft_width(params, 0.0, 2.0, &width) == CORR1D_OK);
    CHECK(width == doctest::Approx(1.0));

    corr1d_params_free(params);
}

TEST_CASE("experiment runner and comparison through the C surface") {
    const fs::path dir = fs::temp_directory_path() / "corr1d_capi_run";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "run.toml";
    std::ofstream(cfg) << "experiment = \"spectrum\"\n"
                          "n_atoms = 3\n"
                          "box_length_k = 8\n"
                          "n_realizations = 32\n"
                          "delta_count = 5\n"
                          "seed = 11\n";

    const fs::path out_a = dir / "a";
    const fs::path out_b = dir / "b";
    REQUIRE(corr1d_run_experiment(cfg.string().c_str(), out_a.string().c_str(), 1, 0, 0) ==
            CORR1D_OK);
    REQUIRE(corr1d_run_experiment(cfg.string().c_str(), out_b.string().c_str(), 3, 0, 0) ==
            CORR1D_OK);

    const std::string csv_a = (out_a / "results.csv").string();
    const std::string csv_b = (out_b / "results.csv").string();
    double max_delta = -1.0;
    const std::string report = (dir / "report.json").string();
    REQUIRE(corr1d_compare_csv(csv_a.c_str(), csv_b.c_str(), report.c_str(), &max_delta) ==
            CORR1D_OK);
    CHECK(max_delta == 0.0);
    CHECK(fs::exists(report));

    // a different seed gives a different ensemble: grids match, values move
    REQUIRE(corr1d_run_experiment(cfg.string().c_str(), out_b.string().c_str(), 1, 1, 999) ==
            CORR1D_OK);
    REQUIRE(corr1d_compare_csv(csv_a.c_str(), csv_b.c_str(), nullptr, &max_delta) == CORR1D_OK);
    CHECK(max_delta > 0.0);

    CHECK(corr1d_run_experiment((dir / "missing.toml").string().c_str(), nullptr, 1, 0, 0) ==
          CORR1D_ERR_CONFIG);
    CHECK(corr1d_compare_csv(csv_a.c_str(), (dir / "nope.csv").string().c_str(), nullptr,
                             nullptr) == CORR1D_ERR_RUNTIME);
}
