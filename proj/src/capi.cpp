#include "corr1d/corr1d.h"

#include <string>

#include "configuration.hpp"
#include "core.hpp"
#include "dipole.hpp"
#include "ensembles.hpp"
#include "experiments.hpp"
#include "meanfield.hpp"
#include "transfer.hpp"

namespace {

thread_local std::string g_last_error;

corr1d_status fail(corr1d_status status, const char* what) {
    g_last_error = what;
    return status;
}

// Translates C++ errors into status codes and keeps the message available
// through corr1d_last_error().
template <typename Fn>
corr1d_status guarded(Fn&& fn) {
    try {
        fn();
        return CORR1D_OK;
    } catch (const corr1d::ConfigError& e) {
        return fail(CORR1D_ERR_CONFIG, e.what());
    } catch (const corr1d::GridMismatch& e) {
        return fail(CORR1D_ERR_MISMATCH, e.what());
    } catch (const corr1d::SingularSystem& e) {
        return fail(CORR1D_ERR_SINGULAR, e.what());
    } catch (const corr1d::SingularAtomMatrix& e) {
        return fail(CORR1D_ERR_SINGULAR, e.what());
    } catch (const corr1d::ResonantDivergence& e) {
        return fail(CORR1D_ERR_SINGULAR, e.what());
    } catch (const corr1d::InvalidParams& e) {
        return fail(CORR1D_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(CORR1D_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(CORR1D_ERR_RUNTIME, "unknown error");
    }
}

corr1d_complex to_c(corr1d::Complex z) { return {z.real(), z.imag()}; }

}  // namespace

struct corr1d_params {
    corr1d::WaveguideParams value;
};

struct corr1d_config {
    corr1d::Configuration value;
};

extern "C" {

const char* corr1d_version(void) { return corr1d::kVersionString; }

const char* corr1d_last_error(void) { return g_last_error.c_str(); }

corr1d_status corr1d_params_create(double k, double gamma_w, double gamma_l, corr1d_params** out) {
    if (!out) return fail(CORR1D_ERR_INVALID_ARGUMENT, "out is NULL");
    *out = nullptr;
    return guarded([&] {
        corr1d::WaveguideParams p;
        p.k = k;
        p.gamma_w = gamma_w;
        p.gamma_l = gamma_l;
        p.validate();
        *out = new corr1d_params{p};
    });
}

void corr1d_params_free(corr1d_params* params) { delete params; }

double corr1d_params_gamma_t(const corr1d_params* params) {
    return params ? params->value.gamma_t() : 0.0;
}

corr1d_status corr1d_single_atom(const corr1d_params* params, double delta, corr1d_complex* t,
                                 corr1d_complex* r) {
    if (!params || !t || !r) return fail(CORR1D_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded([&] {
        const corr1d::ScatterResult s = corr1d::single_atom_scatter(params->value, delta);
        *t = to_c(s.t);
        *r = to_c(s.r);
    });
}

corr1d_status corr1d_config_create(const double* positions, const double* detunings,
                                   size_t n_atoms, corr1d_config** out) {
    if (!out || (n_atoms > 0 && (!positions || !detunings))) {
        return fail(CORR1D_ERR_INVALID_ARGUMENT, "NULL argument");
    }
    *out = nullptr;
    return guarded([&] {
        std::vector<double> x(positions, positions + n_atoms);
        std::vector<double> d(detunings, detunings + n_atoms);
        *out = new corr1d_config{corr1d::Configuration(std::move(x), std::move(d))};
    });
}

void corr1d_config_free(corr1d_config* config) { delete config; }

corr1d_status corr1d_transmission(const corr1d_params* params, const corr1d_config* config,
                                  corr1d_backend backend, corr1d_complex* t, corr1d_complex* r) {
    if (!params || !config || !t || !r) return fail(CORR1D_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded([&] {
        const corr1d::ScatterResult s =
            (backend == CORR1D_BACKEND_DIPOLE)
                ? corr1d::dipole_scatter(params->value, config->value)
                : corr1d::composite_scatter(params->value, config->value);
        *t = to_c(s.t);
        *r = to_c(s.r);
    });
}

corr1d_status corr1d_two_atom_amplitude(const corr1d_params* params, double delta1, double delta2,
                                        double x12, corr1d_complex* t12) {
    if (!params || !t12) return fail(CORR1D_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded(
        [&] { *t12 = to_c(corr1d::two_atom_amplitude(params->value, delta1, delta2, x12)); });
}

corr1d_status corr1d_two_atom_average(const corr1d_params* params, double delta, double rho,
                                      corr1d_complex* out) {
    if (!params || !out) return fail(CORR1D_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded(
        [&] { *out = to_c(corr1d::two_atom_average_analytic(params->value, delta, rho)); });
}

corr1d_status corr1d_two_atom_average_doppler(const corr1d_params* params, double delta_mean,
                                              double doppler, double x12, corr1d_complex* out) {
    if (!params || !out) return fail(CORR1D_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded([&] {
        *out = to_c(corr1d::two_atom_average_doppler(params->value, delta_mean, doppler, x12));
    });
}

corr1d_status corr1d_mft_product(const corr1d_params* params, double delta, double doppler,
                                 uint64_t n_atoms, corr1d_complex* out) {
    if (!params || !out) return fail(CORR1D_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded([&] {
        *out = to_c(corr1d::mft_product(params->value, delta, doppler,
                                        static_cast<long>(n_atoms)));
    });
}

corr1d_status corr1d_poisson_mft_thickness(const corr1d_params* params, double delta, double nbar,
                                           double* out) {
    if (!params || !out) return fail(CORR1D_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded([&] { *out = corr1d::poisson_mft_thickness(params->value, delta, nbar); });
}

corr1d_status corr1d_slab_transmission(const corr1d_params* params, double rho, double length,
                                       double delta, corr1d_complex* t, corr1d_complex* r) {
    if (!params || !t || !r) return fail(CORR1D_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded([&] {
        const corr1d::SlabMedium slab{rho, length, params->value};
        const corr1d::ScatterResult s = corr1d::slab_transmission(slab, delta);
        *t = to_c(s.t);
        *r = to_c(s.r);
    });
}

corr1d_status corr1d_cls_shift(const corr1d_params* params, double rho, double length,
                               double* out) {
    if (!params || !out) return fail(CORR1D_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded([&] {
        const corr1d::SlabMedium slab{rho, length, params->value};
        slab.validate();
        *out = corr1d::cls_shift(slab);
    });
}

corr1d_status corr1d_mft_width(const corr1d_params* params, double rho, double length,
                               double* out) {
    if (!params || !out) return fail(CORR1D_ERR_INVALID_ARGUMENT, "NULL argument");
    return guarded([&] {
        const corr1d::SlabMedium slab{rho, length, params->value};
        slab.validate();
        *out = corr1d::mft_width(slab);
    });
}

corr1d_status corr1d_run_experiment(const char* config_path, const char* output_dir, int threads,
                                    int has_seed_override, uint64_t seed_override) {
    if (!config_path) return fail(CORR1D_ERR_INVALID_ARGUMENT, "config_path is NULL");
    return guarded([&] {
        corr1d::RunOptions options;
        options.config_path = config_path;
        if (output_dir) options.output_dir = std::string(output_dir);
        options.threads = threads;
        if (has_seed_override) options.seed = seed_override;
        corr1d::run_experiment(options);
    });
}

corr1d_status corr1d_compare_csv(const char* csv_a, const char* csv_b, const char* report_path,
                                 double* max_abs_delta) {
    if (!csv_a || !csv_b) return fail(CORR1D_ERR_INVALID_ARGUMENT, "NULL csv path");
    return guarded([&] {
        const corr1d::CompareReport report = corr1d::compare_csv(csv_a, csv_b);
        if (report_path) corr1d::write_report_json(report, report_path);
        if (max_abs_delta) *max_abs_delta = report.max_abs_delta;
    });
}

}  // extern "C"
