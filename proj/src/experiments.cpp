#include "experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "csv.hpp"
#include "ensembles.hpp"
#include "keyvalue.hpp"
#include "meanfield.hpp"
#include "transfer.hpp"

namespace corr1d {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

std::vector<double> linspace(double lo, double hi, long count) {
    if (count < 1) throw ConfigError("grid needs at least one point");
    std::vector<double> grid(count);
    if (count == 1) {
        grid[0] = lo;
        return grid;
    }
    for (long i = 0; i < count; ++i) grid[i] = lo + (hi - lo) * i / (count - 1);
    return grid;
}

std::vector<double> logspace(double lo, double hi, long count) {
    if (!(lo > 0.0 && hi > lo)) throw ConfigError("logspace needs 0 < lo < hi");
    std::vector<double> grid = linspace(std::log(lo), std::log(hi), count);
    for (double& g : grid) g = std::exp(g);
    return grid;
}

std::string short_number(double x) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%g", x);
    return buffer;
}

EnsembleKind parse_kind(const std::string& text) {
    if (text == "classical") return EnsembleKind::ClassicalUniform;
    if (text == "fermionic") return EnsembleKind::Fermionic;
    throw ConfigError("kind must be \"classical\" or \"fermionic\", got \"" + text + "\"");
}

SolverBackend parse_solver(const std::string& text) {
    if (text == "transfer") return SolverBackend::Transfer;
    if (text == "dipole") return SolverBackend::Dipole;
    throw ConfigError("solver must be \"transfer\" or \"dipole\", got \"" + text + "\"");
}

struct RunContext {
    fs::path output;
    int threads = 0;
    std::uint64_t seed = 1;
    SolverBackend backend = SolverBackend::Transfer;
    long n_realizations = 4096;
};

// One ensemble curve: parameters plus where its rows go.
struct SpectrumSetup {
    WaveguideParams params;
    EnsembleSpec spec;
    std::vector<double> grid;
    double scale_atoms = 0.0;  // N (or nbar) for the lnT scaling and mft column
};

Complex mft_amplitude(const SpectrumSetup& s, double delta) {
    if (s.spec.poisson_nbar >= 0.0) {
        const Complex base = mft_single_atom(s.params, delta, s.spec.doppler_width);
        return std::exp(s.spec.poisson_nbar * (base - 1.0));
    }
    return mft_product(s.params, delta, s.spec.doppler_width, s.spec.n_atoms);
}

// Runs the ensemble average and writes the results.csv column contract:
// delta_over_gamma_t, mean_T, stderr_T, mean_lnT_scaled, mft_T, n_used, n_diverged
std::vector<SpectrumPoint> write_spectrum(const SpectrumSetup& s, const fs::path& file,
                                          const RunContext& ctx) {
    const auto points = average_transmission(s.params, s.spec, s.grid, ctx.backend, ctx.threads);
    CsvWriter csv(file.string(), {"delta_over_gamma_t", "mean_T", "stderr_T", "mean_lnT_scaled",
                                  "mft_T", "n_used", "n_diverged"});
    const double scale = 2.0 * s.scale_atoms * s.params.gamma_w;  // gamma_t = 1 internally
    for (const SpectrumPoint& pt : points) {
        const double scaled = scale > 0.0 ? -pt.mean_lnT / scale : 0.0;
        const double mft_T = std::norm(mft_amplitude(s, pt.delta));
        csv.write_row(std::vector<double>{pt.delta, pt.mean_T, pt.stderr_T, scaled, mft_T,
                                          static_cast<double>(pt.n_used),
                                          static_cast<double>(pt.n_diverged)});
    }
    return points;
}

json curve_entry(const std::string& label, const SpectrumSetup& s, const std::string& file) {
    json entry;
    entry["label"] = label;
    entry["file"] = file;
    entry["gamma_w_over_gamma_t"] = s.params.gamma_w;
    entry["kind"] = (s.spec.kind == EnsembleKind::Fermionic) ? "fermionic" : "classical";
    if (s.spec.poisson_nbar >= 0.0) {
        entry["poisson_nbar"] = s.spec.poisson_nbar;
    } else {
        entry["n_atoms"] = s.spec.n_atoms;
    }
    entry["box_length_k"] = s.spec.box_length;
    entry["rho_over_k"] = s.scale_atoms / s.spec.box_length;
    entry["doppler_width_over_gamma_t"] = s.spec.doppler_width;
    entry["n_realizations"] = s.spec.n_realizations;
    entry["seed"] = s.spec.seed;
    return entry;
}

// Shared ensemble keys for the generic experiments.
SpectrumSetup parse_ensemble(KeyValueFile& kv, const RunContext& ctx) {
    SpectrumSetup s;
    s.params = WaveguideParams::from_ratio(kv.get_number("gamma_w_over_gamma_t", 1.0));
    s.spec.kind = parse_kind(kv.get_string("kind", "classical"));
    s.spec.seed = ctx.seed;
    s.spec.n_realizations = static_cast<int>(ctx.n_realizations);
    s.spec.doppler_width = kv.get_number("doppler_width_over_gamma_t", 0.0);

    const bool has_box = kv.has("box_length_k");
    const bool has_rho = kv.has("rho_over_k");
    if (has_box && has_rho) {
        throw ConfigError("give either box_length_k or rho_over_k, not both");
    }
    if (kv.has("poisson_nbar")) {
        s.spec.poisson_nbar = kv.require_number("poisson_nbar");
        s.spec.n_atoms = 0;
        s.scale_atoms = s.spec.poisson_nbar;
    } else {
        s.spec.n_atoms = static_cast<int>(kv.get_integer("n_atoms", 32));
        s.scale_atoms = s.spec.n_atoms;
    }
    if (has_rho) {
        const double rho = kv.require_number("rho_over_k");
        if (!(rho > 0.0)) throw ConfigError("rho_over_k must be > 0");
        s.spec.box_length = s.scale_atoms / rho;
    } else {
        s.spec.box_length = kv.get_number("box_length_k", 4.0 * kPi);
    }
    s.grid = linspace(kv.get_number("delta_min", -3.0), kv.get_number("delta_max", 3.0),
                      kv.get_integer("delta_count", 25));
    return s;
}

PeakFit thickness_peak(const std::vector<SpectrumPoint>& points) {
    std::vector<double> grid, thickness, errs;
    for (const SpectrumPoint& pt : points) {
        grid.push_back(pt.delta);
        thickness.push_back(-pt.mean_lnT);
        errs.push_back(pt.stderr_lnT);
    }
    return extract_peak_shift(grid, thickness, errs);
}

// ---- experiment bodies ----------------------------------------------------

json run_spectrum_experiment(KeyValueFile& kv, const RunContext& ctx) {
    SpectrumSetup s = parse_ensemble(kv, ctx);
    write_spectrum(s, ctx.output / "results.csv", ctx);
    json curves = json::array();
    curves.push_back(curve_entry("spectrum", s, "results.csv"));
    return curves;
}

json run_custom_sweep(KeyValueFile& kv, const RunContext& ctx) {
    const bool over_gamma = kv.has("gamma_ladder");
    const bool over_rho = kv.has("rho_values");
    const bool over_doppler = kv.has("doppler_values");
    if (over_gamma + over_rho + over_doppler != 1) {
        throw ConfigError("custom-sweep needs exactly one of gamma_ladder, rho_values, doppler_values");
    }
    json curves = json::array();
    auto emit = [&](const std::string& label, SpectrumSetup s) {
        fs::create_directories(ctx.output / label);
        write_spectrum(s, ctx.output / label / "results.csv", ctx);
        curves.push_back(curve_entry(label, s, label + "/results.csv"));
    };
    if (over_gamma) {
        const auto ladder = kv.get_number_array("gamma_ladder", {});
        SpectrumSetup base = parse_ensemble(kv, ctx);
        for (double gw : ladder) {
            SpectrumSetup s = base;
            s.params = WaveguideParams::from_ratio(gw);
            emit("gw" + short_number(gw), s);
        }
    } else if (over_rho) {
        const auto rhos = kv.get_number_array("rho_values", {});
        if (kv.has("rho_over_k") || kv.has("box_length_k")) {
            throw ConfigError("rho_values replaces rho_over_k/box_length_k");
        }
        SpectrumSetup base = parse_ensemble(kv, ctx);
        for (double rho : rhos) {
            SpectrumSetup s = base;
            s.spec.box_length = s.scale_atoms / rho;
            emit("rho" + short_number(rho), s);
        }
    } else {
        const auto widths = kv.get_number_array("doppler_values", {});
        SpectrumSetup base = parse_ensemble(kv, ctx);
        for (double w : widths) {
            SpectrumSetup s = base;
            s.spec.doppler_width = w;
            emit("dw" + short_number(w), s);
        }
    }
    return curves;
}

json run_fig1(KeyValueFile& kv, const RunContext& ctx) {
    // Exact <T> vs MFT across the density where correlations switch on.
    const auto rho_values = kv.get_number_array("rho_values", {2.0, 8.0});
    const double gamma = kv.get_number("gamma_w_over_gamma_t", 1.0);
    const EnsembleKind kind = parse_kind(kv.get_string("kind", "classical"));
    const double box = kv.get_number("box_length_k", 4.0 * kPi);  // L = 2 lambda
    // An even count keeps the lossless resonance point off the grid.
    const auto grid = linspace(kv.get_number("delta_min", -10.0), kv.get_number("delta_max", 10.0),
                               kv.get_integer("delta_count", 80));

    json curves = json::array();
    for (double rho : rho_values) {
        SpectrumSetup s;
        s.params = WaveguideParams::from_ratio(gamma);
        s.spec.kind = kind;
        s.spec.n_atoms = static_cast<int>(std::lround(rho * box));
        s.spec.box_length = box;
        s.spec.n_realizations = static_cast<int>(ctx.n_realizations);
        s.spec.seed = ctx.seed;
        s.scale_atoms = s.spec.n_atoms;
        s.grid = grid;
        const std::string label = "rho" + short_number(rho);
        fs::create_directories(ctx.output / label);
        write_spectrum(s, ctx.output / label / "results.csv", ctx);
        curves.push_back(curve_entry(label, s, label + "/results.csv"));
    }
    return curves;
}

json run_fig2(KeyValueFile& kv, const RunContext& ctx) {
    // Scaled optical thickness -<ln T>/(2 N gamma_w/gamma_t) for a ladder of
    // loss ratios; converges to gamma_t^2/(gamma_t^2 + delta^2) as
    // gamma_w/gamma_t -> 0.
    const auto ladder = kv.get_number_array("gamma_ladder", {0.4, 0.2, 0.1, 0.05, 0.025});
    const EnsembleKind kind = parse_kind(kv.get_string("kind", "classical"));
    const long n_atoms = kv.get_integer("n_atoms", 32);
    const double box = kv.get_number("box_length_k", 4.0 * kPi);  // L = 2 lambda
    const auto grid = linspace(kv.get_number("delta_min", -3.0), kv.get_number("delta_max", 3.0),
                               kv.get_integer("delta_count", 25));

    json curves = json::array();
    for (double gw : ladder) {
        SpectrumSetup s;
        s.params = WaveguideParams::from_ratio(gw);
        s.spec.kind = kind;
        s.spec.n_atoms = static_cast<int>(n_atoms);
        s.spec.box_length = box;
        s.spec.n_realizations = static_cast<int>(ctx.n_realizations);
        s.spec.seed = ctx.seed;
        s.scale_atoms = s.spec.n_atoms;
        s.grid = grid;
        const std::string label = "gw" + short_number(gw);
        fs::create_directories(ctx.output / label);
        write_spectrum(s, ctx.output / label / "results.csv", ctx);
        curves.push_back(curve_entry(label, s, label + "/results.csv"));
    }
    return curves;
}

json run_fig3a(KeyValueFile& kv, const RunContext& ctx) {
    // Resonance shift vs sample thickness at fixed density, compared with
    // the cooperative Lamb shift prediction.
    const double rho = kv.get_number("rho_over_k", 32.0 / kPi);
    const auto gammas = kv.get_number_array("gamma_values", {0.01, 0.02, 0.1});
    const auto kls = kv.get_number_array(
        "kl_values", {kPi / 4.0, 3.0 * kPi / 8.0, kPi / 2.0, 3.0 * kPi / 4.0, kPi, 1.5 * kPi, 2.0 * kPi});
    const long count = kv.get_integer("delta_count", 31);

    CsvWriter csv((ctx.output / "shifts.csv").string(),
                  {"kL", "gamma_w_over_gamma_t", "shift_over_gamma_t", "uncertainty",
                   "cls_prediction"});
    json curves = json::array();
    for (double gw : gammas) {
        for (double kl : kls) {
            SpectrumSetup s;
            s.params = WaveguideParams::from_ratio(gw);
            s.spec.kind = EnsembleKind::ClassicalUniform;
            s.spec.n_atoms = static_cast<int>(std::lround(rho * kl));
            s.spec.box_length = kl;
            s.spec.n_realizations = static_cast<int>(ctx.n_realizations);
            s.spec.seed = ctx.seed;
            s.scale_atoms = s.spec.n_atoms;

            SlabMedium slab{rho, kl, s.params};
            const double cls = cls_shift(slab);
            const double span = gw * rho / 2.0;  // unmodulated shift scale
            s.grid = linspace(cls - 2.0 * span, cls + 2.5 * span, count);

            const auto points = average_transmission(s.params, s.spec, s.grid, ctx.backend,
                                                     ctx.threads);
            const PeakFit fit = thickness_peak(points);
            csv.write_row(std::vector<double>{kl, gw, fit.shift, fit.uncertainty, cls});

            json entry;
            entry["kL"] = kl;
            entry["gamma_w_over_gamma_t"] = gw;
            entry["n_atoms"] = s.spec.n_atoms;
            entry["rho_over_k"] = rho;
            curves.push_back(entry);
        }
    }
    return curves;
}

json run_fig3b(KeyValueFile& kv, const RunContext& ctx) {
    // Shifts of the fig2 curve maxima for classical and fermionic ensembles.
    const auto ladder = kv.get_number_array("gamma_ladder", {0.4, 0.2, 0.1, 0.05, 0.025});
    const long n_atoms = kv.get_integer("n_atoms", 32);
    const double box = kv.get_number("box_length_k", 4.0 * kPi);
    const long count = kv.get_integer("delta_count", 31);
    const double rho = static_cast<double>(n_atoms) / box;

    CsvWriter csv((ctx.output / "shifts.csv").string(),
                  {"gamma_w_over_gamma_t", "kind", "shift_over_gamma_t", "uncertainty",
                   "cls_prediction"});
    json curves = json::array();
    for (EnsembleKind kind : {EnsembleKind::ClassicalUniform, EnsembleKind::Fermionic}) {
        const std::string kind_name = (kind == EnsembleKind::Fermionic) ? "fermionic" : "classical";
        for (double gw : ladder) {
            SpectrumSetup s;
            s.params = WaveguideParams::from_ratio(gw);
            s.spec.kind = kind;
            s.spec.n_atoms = static_cast<int>(n_atoms);
            s.spec.box_length = box;
            s.spec.n_realizations = static_cast<int>(ctx.n_realizations);
            s.spec.seed = ctx.seed;
            s.scale_atoms = s.spec.n_atoms;

            SlabMedium slab{rho, box, s.params};
            const double cls = cls_shift(slab);
            const double span = gw * rho / 2.0;
            s.grid = linspace(cls - 2.0 * span, cls + 2.5 * span, count);

            const auto points = average_transmission(s.params, s.spec, s.grid, ctx.backend,
                                                     ctx.threads);
            const PeakFit fit = thickness_peak(points);
            csv.write_row(std::vector<std::string>{format_double(gw), kind_name,
                                                   format_double(fit.shift),
                                                   format_double(fit.uncertainty),
                                                   format_double(cls)});

            json entry;
            entry["kind"] = kind_name;
            entry["gamma_w_over_gamma_t"] = gw;
            entry["n_atoms"] = n_atoms;
            entry["rho_over_k"] = rho;
            curves.push_back(entry);
        }
    }
    return curves;
}

json run_figA1a(KeyValueFile& kv, const RunContext& ctx) {
    // Thermal decorrelation of the two-atom amplitude at fixed separation.
    const double gamma = kv.get_number("gamma_w_over_gamma_t", 1.0);
    const double delta = kv.get_number("delta_over_gamma_t", 0.0);
    const double x12 = kv.get_number("x12_k", 0.0);
    std::vector<double> widths = kv.get_number_array("doppler_values", {});
    if (widths.empty()) widths = logspace(0.1, 100.0, kv.get_integer("n_points", 25));

    const WaveguideParams p = WaveguideParams::from_ratio(gamma);
    CsvWriter csv((ctx.output / "deviation.csv").string(),
                  {"delta_omega_over_gamma_t", "r_deviation"});
    for (double w : widths) {
        const Complex exact = two_atom_average_doppler(p, delta, w, x12);
        const Complex single = mft_single_atom(p, delta, w);
        csv.write_row(std::vector<double>{w, relative_deviation(exact, single * single)});
    }
    json curves = json::array();
    curves.push_back({{"label", "doppler-deviation"},
                      {"file", "deviation.csv"},
                      {"gamma_w_over_gamma_t", gamma},
                      {"delta_over_gamma_t", delta},
                      {"x12_k", x12}});
    return curves;
}

json run_figA1b(KeyValueFile& kv, const RunContext& ctx) {
    // Density dependence of the two-atom deviation for the exponential
    // nearest-neighbor separation of a uniform gas.
    const double gamma = kv.get_number("gamma_w_over_gamma_t", 1.0);
    const double delta = kv.get_number("delta_over_gamma_t", 0.1);
    std::vector<double> rhos = kv.get_number_array("rho_values", {});
    if (rhos.empty()) rhos = logspace(0.01, 10.0, kv.get_integer("n_points", 25));

    const WaveguideParams p = WaveguideParams::from_ratio(gamma);
    const Complex t1 = single_atom_scatter(p, delta).t;
    CsvWriter csv((ctx.output / "deviation.csv").string(), {"rho_over_k", "r_deviation"});
    for (double rho : rhos) {
        const Complex exact = two_atom_average_analytic(p, delta, rho);
        csv.write_row(std::vector<double>{rho, relative_deviation(exact, t1 * t1)});
    }
    json curves = json::array();
    curves.push_back({{"label", "density-deviation"},
                      {"file", "deviation.csv"},
                      {"gamma_w_over_gamma_t", gamma},
                      {"delta_over_gamma_t", delta}});
    return curves;
}

json run_two_atom(KeyValueFile& kv, const RunContext& ctx) {
    // Phase-resolved two-atom amplitude with its recurrent-scattering series.
    const double gamma = kv.get_number("gamma_w_over_gamma_t", 1.0);
    const double d1 = kv.get_number("delta1_over_gamma_t", kv.get_number("delta_over_gamma_t", 0.5));
    const double d2 = kv.get_number("delta2_over_gamma_t", d1);
    const long count = kv.get_integer("n_points", 81);
    const long terms = kv.get_integer("series_terms", 50);

    const WaveguideParams p = WaveguideParams::from_ratio(gamma);
    CsvWriter csv((ctx.output / "two_atom.csv").string(),
                  {"two_k_x12", "t12_re", "t12_im", "T12", "mft_re", "mft_im", "series_re",
                   "series_im"});
    const Complex mft = single_atom_scatter(p, d2).t * single_atom_scatter(p, d1).t;
    for (long i = 0; i < count; ++i) {
        const double phase = 2.0 * kPi * i / count;
        const double x12 = phase / 2.0;
        const Complex t12 = two_atom_amplitude(p, d1, d2, x12);
        const Complex series = two_atom_series(p, d1, d2, x12, static_cast<int>(terms));
        csv.write_row(std::vector<double>{phase, t12.real(), t12.imag(), std::norm(t12), mft.real(),
                                          mft.imag(), series.real(), series.imag()});
    }
    json curves = json::array();
    curves.push_back({{"label", "two-atom"},
                      {"file", "two_atom.csv"},
                      {"gamma_w_over_gamma_t", gamma},
                      {"delta1_over_gamma_t", d1},
                      {"delta2_over_gamma_t", d2},
                      {"series_terms", terms}});
    return curves;
}

json echo_config(const KeyValueFile& kv) {
    json echo;
    for (const auto& [key, value] : kv.entries()) {
        switch (value.kind) {
            case KeyValueFile::Value::Kind::Number: echo[key] = value.number; break;
            case KeyValueFile::Value::Kind::String: echo[key] = value.string; break;
            case KeyValueFile::Value::Kind::Boolean: echo[key] = value.boolean; break;
            case KeyValueFile::Value::Kind::NumberArray: echo[key] = value.array; break;
        }
    }
    return echo;
}

}  // namespace

void run_experiment(const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();

    KeyValueFile kv = KeyValueFile::parse_file(options.config_path);
    const std::string experiment = kv.require_string("experiment");

    RunContext ctx;
    ctx.threads = options.threads;
    const auto config_seed = static_cast<std::uint64_t>(kv.get_integer("seed", 1));
    ctx.seed = options.seed ? *options.seed : config_seed;
    ctx.n_realizations = kv.get_integer("n_realizations", 4096);
    if (ctx.n_realizations < 1) throw ConfigError("n_realizations must be >= 1");
    ctx.backend = parse_solver(kv.get_string("solver", "transfer"));
    const std::string out_dir = options.output_dir
                                    ? *options.output_dir
                                    : kv.get_string("output_dir", "corr1d-out");
    ctx.output = fs::path(out_dir);
    fs::create_directories(ctx.output);

    json curves;
    if (experiment == "spectrum") {
        curves = run_spectrum_experiment(kv, ctx);
    } else if (experiment == "custom-sweep") {
        curves = run_custom_sweep(kv, ctx);
    } else if (experiment == "fig1") {
        curves = run_fig1(kv, ctx);
    } else if (experiment == "fig2") {
        curves = run_fig2(kv, ctx);
    } else if (experiment == "fig3a") {
        curves = run_fig3a(kv, ctx);
    } else if (experiment == "fig3b") {
        curves = run_fig3b(kv, ctx);
    } else if (experiment == "figA1a") {
        curves = run_figA1a(kv, ctx);
    } else if (experiment == "figA1b") {
        curves = run_figA1b(kv, ctx);
    } else if (experiment == "two-atom") {
        curves = run_two_atom(kv, ctx);
    } else {
        throw ConfigError("unknown experiment \"" + experiment +
                          "\" (expected fig1, fig2, fig3a, fig3b, figA1a, figA1b, spectrum, "
                          "two-atom or custom-sweep)");
    }
    kv.finalize();

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json manifest;
    manifest["experiment"] = experiment;
    manifest["version"] = kVersionString;
    manifest["seed"] = ctx.seed;
    manifest["seed_overridden"] = options.seed.has_value();
    manifest["threads_requested"] = options.threads;
    manifest["solver"] = (ctx.backend == SolverBackend::Dipole) ? "dipole" : "transfer";
    manifest["n_realizations"] = ctx.n_realizations;
    manifest["wall_time_seconds"] = wall;
    manifest["config"] = echo_config(kv);
    manifest["defaulted"] = kv.defaulted();
    manifest["curves"] = curves;

    std::ofstream out(ctx.output / "manifest.json");
    out << manifest.dump(2) << '\n';
    if (!out) throw Error("cannot write manifest.json");
}

CompareReport compare_csv(const std::string& file_a, const std::string& file_b) {
    const CsvTable a = read_csv(file_a);
    const CsvTable b = read_csv(file_b);

    CompareReport report;
    report.file_a = file_a;
    report.file_b = file_b;

    if (a.header != b.header) throw GridMismatch("headers differ");
    if (a.rows.size() != b.rows.size()) {
        throw GridMismatch("row counts differ: " + std::to_string(a.rows.size()) + " vs " +
                           std::to_string(b.rows.size()));
    }
    report.n_rows = a.rows.size();
    if (report.n_rows == 0) throw GridMismatch("no data rows");

    // the grid is the first column and must agree exactly
    for (std::size_t r = 0; r < report.n_rows; ++r) {
        if (a.rows[r].empty() || b.rows[r].empty() || a.rows[r][0] != b.rows[r][0]) {
            throw GridMismatch("grid mismatch at row " + std::to_string(r));
        }
    }

    {
        std::ifstream fa(file_a, std::ios::binary), fb(file_b, std::ios::binary);
        std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
        std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
        report.identical_bytes = (ca == cb);
    }

    const int value_col = (a.header.size() > 1) ? 1 : 0;
    for (std::size_t c = 1; c < a.header.size(); ++c) {
        double max_delta = 0.0;
        bool numeric = true;
        for (std::size_t r = 0; r < report.n_rows; ++r) {
            try {
                const double va = a.number(r, static_cast<int>(c));
                const double vb = b.number(r, static_cast<int>(c));
                max_delta = std::max(max_delta, std::abs(va - vb));
            } catch (...) {
                numeric = false;  // label columns compare as strings
                if (a.rows[r][c] != b.rows[r][c]) {
                    throw GridMismatch("label mismatch in column " + a.header[c]);
                }
            }
        }
        if (numeric) {
            report.column_max_delta[a.header[c]] = max_delta;
            report.max_abs_delta = std::max(report.max_abs_delta, max_delta);
        }
    }
    for (std::size_t r = 0; r < report.n_rows; ++r) {
        report.per_point_delta.push_back(
            std::abs(a.number(r, value_col) - b.number(r, value_col)));
    }

    const int t_col = a.column("mean_T");
    const int e_col = a.column("stderr_T");
    if (t_col >= 0 && e_col >= 0) {
        for (std::size_t r = 0; r < report.n_rows; ++r) {
            const double diff = a.number(r, t_col) - b.number(r, t_col);
            const double var = a.number(r, e_col) * a.number(r, e_col) +
                               b.number(r, e_col) * b.number(r, e_col);
            if (var > 0.0) {
                report.chi2 += diff * diff / var;
                ++report.chi2_points;
            }
        }
    }
    return report;
}

std::string report_to_json(const CompareReport& report) {
    json j;
    j["file_a"] = report.file_a;
    j["file_b"] = report.file_b;
    j["n_rows"] = report.n_rows;
    j["identical_bytes"] = report.identical_bytes;
    j["max_abs_delta"] = report.max_abs_delta;
    j["column_max_delta"] = report.column_max_delta;
    j["per_point_delta"] = report.per_point_delta;
    j["chi2_mean_T"] = report.chi2;
    j["chi2_points"] = report.chi2_points;
    return j.dump(2) + "\n";
}

void write_report_json(const CompareReport& report, const std::string& path) {
    std::ofstream out(path);
    out << report_to_json(report);
    if (!out) throw Error("cannot write report: " + path);
}

}  // namespace corr1d
