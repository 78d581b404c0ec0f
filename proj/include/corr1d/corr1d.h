#ifndef CORR1D_H
#define CORR1D_H

/*
 * corr1d -- coherent light transmission through 1D waveguide atomic
 * ensembles: exact coupled-dipole / transfer-matrix solvers, stochastic
 * ensemble averaging, and mean-field (effective medium) models.
 *
 * C binding over the C++ core.  All functions return a corr1d_status;
 * outputs are written through pointers.  Objects are opaque handles created
 * and destroyed by the corresponding *_create / *_free pair.  On any
 * failure corr1d_last_error() returns a thread-local description of what
 * went wrong.
 *
 * Units: the wavenumber k and the total linewidth gamma_t set the scales.
 * With the conventional k = 1, gamma_t = 1, positions are k*x, rates are
 * fractions of gamma_t and detunings are delta/gamma_t.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CORR1D_API __declspec(dllexport)
#else
#define CORR1D_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum corr1d_status {
    CORR1D_OK = 0,
    CORR1D_ERR_INVALID_ARGUMENT = 1,
    CORR1D_ERR_CONFIG = 2,    /* config parse/validation failure (CLI exit 2) */
    CORR1D_ERR_RUNTIME = 3,   /* runtime failure (CLI exit 3) */
    CORR1D_ERR_SINGULAR = 4,  /* singular system / divergent closed form */
    CORR1D_ERR_MISMATCH = 5   /* comparison grids do not match */
} corr1d_status;

typedef struct corr1d_complex {
    double re;
    double im;
} corr1d_complex;

CORR1D_API const char* corr1d_version(void);

/* Thread-local message for the most recent failure in this thread. */
CORR1D_API const char* corr1d_last_error(void);

/* ---- physical parameters ---------------------------------------------- */

typedef struct corr1d_params corr1d_params;

/* k > 0, gamma_w >= 0, gamma_l >= 0, gamma_w + gamma_l > 0 */
CORR1D_API corr1d_status corr1d_params_create(double k, double gamma_w, double gamma_l,
                                              corr1d_params** out);
CORR1D_API void corr1d_params_free(corr1d_params* params);
CORR1D_API double corr1d_params_gamma_t(const corr1d_params* params);

/* ---- single atom -------------------------------------------------------- */

CORR1D_API corr1d_status corr1d_single_atom(const corr1d_params* params, double delta,
                                            corr1d_complex* t, corr1d_complex* r);

/* ---- fixed configurations ----------------------------------------------- */

typedef struct corr1d_config corr1d_config;

/* positions sorted ascending (no coincidences); detunings per atom */
CORR1D_API corr1d_status corr1d_config_create(const double* positions, const double* detunings,
                                              size_t n_atoms, corr1d_config** out);
CORR1D_API void corr1d_config_free(corr1d_config* config);

typedef enum corr1d_backend {
    CORR1D_BACKEND_DIPOLE = 0,  /* dense coupled-dipole linear solve */
    CORR1D_BACKEND_TRANSFER = 1 /* ordered 2x2 transfer-matrix product */
} corr1d_backend;

/* Exact transmission/reflection amplitudes of one configuration. */
CORR1D_API corr1d_status corr1d_transmission(const corr1d_params* params,
                                             const corr1d_config* config,
                                             corr1d_backend backend, corr1d_complex* t,
                                             corr1d_complex* r);

/* ---- two-atom closed forms ---------------------------------------------- */

CORR1D_API corr1d_status corr1d_two_atom_amplitude(const corr1d_params* params, double delta1,
                                                   double delta2, double x12,
                                                   corr1d_complex* t12);

/* <t12> over the exponential nearest-neighbor separation at density rho */
CORR1D_API corr1d_status corr1d_two_atom_average(const corr1d_params* params, double delta,
                                                 double rho, corr1d_complex* out);

/* <t12> over independent Gaussian detunings of width doppler at fixed x12 */
CORR1D_API corr1d_status corr1d_two_atom_average_doppler(const corr1d_params* params,
                                                         double delta_mean, double doppler,
                                                         double x12, corr1d_complex* out);

/* ---- mean-field models --------------------------------------------------- */

/* <t1>^n, with <t1> Doppler-averaged when doppler > 0 */
CORR1D_API corr1d_status corr1d_mft_product(const corr1d_params* params, double delta,
                                            double doppler, uint64_t n_atoms,
                                            corr1d_complex* out);

/* (2 gamma_t - gamma_w) nbar gamma_w / (gamma_t^2 + delta^2) */
CORR1D_API corr1d_status corr1d_poisson_mft_thickness(const corr1d_params* params, double delta,
                                                      double nbar, double* out);

/* uniform slab [0, length] of line density rho */
CORR1D_API corr1d_status corr1d_slab_transmission(const corr1d_params* params, double rho,
                                                  double length, double delta, corr1d_complex* t,
                                                  corr1d_complex* r);

CORR1D_API corr1d_status corr1d_cls_shift(const corr1d_params* params, double rho, double length,
                                          double* out);

CORR1D_API corr1d_status corr1d_mft_width(const corr1d_params* params, double rho, double length,
                                          double* out);

/* ---- batch experiments ---------------------------------------------------- */

/*
 * Runs the experiment described by a key-value config file (see README for
 * the format and presets).  output_dir overrides the config when non-NULL;
 * threads = 0 uses the available parallelism; the seed override applies
 * when has_seed_override is nonzero.  Returns CORR1D_ERR_CONFIG for config
 * problems and CORR1D_ERR_RUNTIME for execution failures.
 */
CORR1D_API corr1d_status corr1d_run_experiment(const char* config_path, const char* output_dir,
                                               int threads, int has_seed_override,
                                               uint64_t seed_override);

/*
 * Compares two results files on matching grids.  Writes a JSON report to
 * report_path when non-NULL; the maximum absolute per-point difference over
 * the numeric columns lands in max_abs_delta when non-NULL.
 */
CORR1D_API corr1d_status corr1d_compare_csv(const char* csv_a, const char* csv_b,
                                            const char* report_path, double* max_abs_delta);

#ifdef __cplusplus
}
#endif

#endif /* CORR1D_H */
