#include "ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dipole.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "stats.hpp"
#include "transfer.hpp"

namespace corr1d {

namespace {

// Emissions per Metropolis chain in batched fermionic sampling.  Fixed so
// that the chain layout (and therefore every sample) is independent of the
// worker count.
constexpr int kEmitsPerChain = 64;

constexpr int kThinningSweeps = 10;
constexpr int kBurnInSweepsPerAtom = 100;
constexpr int kAdaptWindowSweeps = 25;

double wrap(double x, double box) {
    x -= box * std::floor(x / box);
    if (x >= box) x -= box;  // guard against floor rounding at the seam
    return x;
}

std::vector<double> draw_uniform_positions(int n, double box, double k, Rng& rng) {
    std::uniform_real_distribution<double> uniform(0.0, box);
    const double min_gap = Configuration::kMinSeparation / k;
    std::vector<double> x(n);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        for (double& xi : x) xi = uniform(rng);
        std::sort(x.begin(), x.end());
        bool ok = true;
        for (int j = 1; j < n; ++j) {
            if (x[j] - x[j - 1] < min_gap) {
                ok = false;
                break;
            }
        }
        if (ok) return x;
    }
    throw Error("draw_uniform_positions: could not draw separated positions (box too small?)");
}

std::vector<double> draw_offsets(int n, double width, Rng& rng) {
    std::vector<double> offsets(n, 0.0);
    if (width > 0.0) {
        std::normal_distribution<double> gauss(0.0, width);
        for (double& o : offsets) o = gauss(rng);
    }
    return offsets;
}

}  // namespace

void EnsembleSpec::validate() const {
    if (!(box_length > 0.0)) throw InvalidParams("EnsembleSpec: box_length must be > 0");
    if (n_realizations < 1) throw InvalidParams("EnsembleSpec: n_realizations must be >= 1");
    if (doppler_width < 0.0) throw InvalidParams("EnsembleSpec: doppler_width must be >= 0");
    if (poisson_nbar >= 0.0) {
        if (kind == EnsembleKind::Fermionic) {
            throw InvalidParams("EnsembleSpec: Poisson atom number is incompatible with a fixed Fermi sea");
        }
    } else if (n_atoms < 0) {
        throw InvalidParams("EnsembleSpec: n_atoms must be >= 0");
    }
    if (kind == EnsembleKind::Fermionic && n_atoms < 1) {
        throw InvalidParams("EnsembleSpec: fermionic ensemble needs at least one atom");
    }
}

Configuration sample_uniform(const EnsembleSpec& spec, Rng& rng) {
    spec.validate();
    if (spec.kind != EnsembleKind::ClassicalUniform) {
        throw InvalidParams("sample_uniform: spec.kind must be classical-uniform");
    }
    int n = spec.n_atoms;
    if (spec.poisson_nbar >= 0.0) {
        std::poisson_distribution<int> poisson(spec.poisson_nbar);
        n = poisson(rng);
    }
    auto positions = draw_uniform_positions(n, spec.box_length, 1.0, rng);
    auto detunings = draw_offsets(n, spec.doppler_width, rng);
    for (double& d : detunings) d += spec.base_detuning;
    return Configuration(std::move(positions), std::move(detunings));
}

FermionicChain::FermionicChain(int n_atoms, double box_length, std::uint64_t seed)
    : FermionicChain(n_atoms, box_length, Rng(seed)) {}

FermionicChain::FermionicChain(int n_atoms, double box_length, Rng rng)
    : n_(n_atoms), box_(box_length), step_(box_length / (4.0 * n_atoms)), rng_(std::move(rng)) {
    if (n_ < 1) throw InvalidParams("FermionicChain: need at least one atom");
    if (!(box_ > 0.0)) throw InvalidParams("FermionicChain: box must be > 0");

    // Start from the weight maximum (equally spaced) with a small jitter.
    std::normal_distribution<double> gauss(0.0, 0.05 * box_ / n_);
    x_.resize(n_);
    for (int j = 0; j < n_; ++j) x_[j] = wrap((j + 0.5) * box_ / n_ + gauss(rng_), box_);
    burn_in();
}

double FermionicChain::log_weight_delta(std::size_t i, double x_new) const {
    const double pi_over_box = std::numbers::pi / box_;
    double delta = 0.0;
    for (std::size_t j = 0; j < x_.size(); ++j) {
        if (j == i) continue;
        const double s_new = std::abs(std::sin(pi_over_box * (x_new - x_[j])));
        if (s_new == 0.0) return -std::numeric_limits<double>::infinity();
        const double s_old = std::abs(std::sin(pi_over_box * (x_[i] - x_[j])));
        delta += 2.0 * (std::log(s_new) - std::log(s_old));
    }
    return delta;
}

void FermionicChain::sweep() {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int i = 0; i < n_; ++i) {
        const double x_new = wrap(x_[i] + step_ * gauss(rng_), box_);
        const double delta = log_weight_delta(i, x_new);
        ++proposals_;
        if (delta >= 0.0 || std::log(uniform(rng_)) < delta) {
            x_[i] = x_new;
            ++accepts_;
        }
    }
}

void FermionicChain::burn_in() {
    const int total = kBurnInSweepsPerAtom * n_;
    std::uint64_t window_proposals = 0;
    std::uint64_t window_accepts = 0;
    for (int s = 0; s < total; ++s) {
        const std::uint64_t p0 = proposals_, a0 = accepts_;
        sweep();
        window_proposals += proposals_ - p0;
        window_accepts += accepts_ - a0;
        const bool last = (s + 1 == total);
        if ((s + 1) % kAdaptWindowSweeps == 0 && !last) {
            const double rate = static_cast<double>(window_accepts) / window_proposals;
            step_ = std::clamp(step_ * std::exp(0.66 * (rate - 0.40)), 1e-6 * box_, 0.5 * box_);
            window_proposals = window_accepts = 0;
        }
        if (last) {
            const double rate = static_cast<double>(window_accepts) / window_proposals;
            if (rate < 0.1 || rate > 0.9) {
                throw ChainNotEquilibrated("FermionicChain: acceptance rate " +
                                           std::to_string(rate) + " outside [0.1, 0.9]");
            }
        }
    }
    proposals_ = accepts_ = 0;  // report the frozen-step rate from here on
}

double FermionicChain::acceptance_rate() const {
    return proposals_ ? static_cast<double>(accepts_) / proposals_ : 0.0;
}

std::vector<double> FermionicChain::emit_positions() {
    const double min_gap = Configuration::kMinSeparation;  // internal units k = 1
    for (int attempt = 0; attempt < 1000; ++attempt) {
        for (int s = 0; s < kThinningSweeps; ++s) sweep();
        std::vector<double> snapshot(x_);
        std::sort(snapshot.begin(), snapshot.end());
        bool ok = true;
        for (std::size_t j = 1; j < snapshot.size(); ++j) {
            if (snapshot[j] - snapshot[j - 1] < min_gap) {
                ok = false;
                break;
            }
        }
        if (ok) return snapshot;
    }
    throw ChainNotEquilibrated("FermionicChain: persistent coincident positions");
}

Configuration sample_fermionic(const EnsembleSpec& spec, Rng& rng) {
    spec.validate();
    if (spec.kind != EnsembleKind::Fermionic) {
        throw InvalidParams("sample_fermionic: spec.kind must be fermionic");
    }
    auto detunings = draw_offsets(spec.n_atoms, spec.doppler_width, rng);
    for (double& d : detunings) d += spec.base_detuning;
    FermionicChain chain(spec.n_atoms, spec.box_length, rng);  // chain runs on a copy of the stream
    auto positions = chain.emit_positions();
    return Configuration(std::move(positions), std::move(detunings));
}

namespace {

struct Draw {
    std::vector<double> positions;
    std::vector<double> offsets;
};

std::vector<Draw> draw_realizations(const EnsembleSpec& spec, double k, int threads) {
    const std::size_t n_real = static_cast<std::size_t>(spec.n_realizations);
    std::vector<Draw> draws(n_real);

    if (spec.kind == EnsembleKind::ClassicalUniform) {
        parallel_for(n_real, threads, [&](std::size_t i) {
            Rng rng(derive_seed(spec.seed, i));
            int n = spec.n_atoms;
            if (spec.poisson_nbar >= 0.0) {
                std::poisson_distribution<int> poisson(spec.poisson_nbar);
                n = poisson(rng);
            }
            draws[i].positions = draw_uniform_positions(n, spec.box_length, k, rng);
            draws[i].offsets = draw_offsets(n, spec.doppler_width, rng);
        });
        return draws;
    }

    const std::size_t n_chains = (n_real + kEmitsPerChain - 1) / kEmitsPerChain;
    parallel_for(n_chains, threads, [&](std::size_t c) {
        FermionicChain chain(spec.n_atoms, spec.box_length, derive_seed(spec.seed, c));
        Rng offsets_rng(derive_seed(spec.seed ^ 0x446F70706C6572ull, c));
        for (int m = 0; m < kEmitsPerChain; ++m) {
            const std::size_t i = c * kEmitsPerChain + m;
            if (i >= n_real) break;
            draws[i].positions = chain.emit_positions();
            draws[i].offsets = draw_offsets(spec.n_atoms, spec.doppler_width, offsets_rng);
        }
    });
    return draws;
}

}  // namespace

std::vector<SpectrumPoint> average_transmission(const WaveguideParams& p, const EnsembleSpec& spec,
                                                const std::vector<double>& delta_grid,
                                                SolverBackend backend, int threads) {
    p.validate();
    spec.validate();

    const std::vector<Draw> draws = draw_realizations(spec, p.k, threads);
    const std::size_t n_real = draws.size();

    struct Eval {
        Complex t{0.0, 0.0};
        double T = 0.0;
        bool ok = false;
    };

    std::vector<SpectrumPoint> spectrum;
    spectrum.reserve(delta_grid.size());

    std::vector<Eval> evals(n_real);
    for (double delta : delta_grid) {
        parallel_for(n_real, threads, [&](std::size_t i) {
            evals[i].ok = false;
            try {
                std::vector<double> detunings(draws[i].offsets);
                for (double& d : detunings) d += delta;
                Configuration c(draws[i].positions, std::move(detunings), p.k);
                const ScatterResult s = (backend == SolverBackend::Dipole)
                                            ? dipole_scatter(p, c)
                                            : composite_scatter(p, c);
                evals[i] = {s.t, s.T(), true};
            } catch (const Error&) {
                // solver failure for this realization: recorded and skipped
            }
        });

        SpectrumPoint pt;
        pt.delta = delta;
        ComplexMeanAccumulator t_acc;
        MeanAccumulator T_acc;
        MeanAccumulator lnT_acc;
        long diverged = 0;
        for (std::size_t i = 0; i < n_real; ++i) {  // fixed index order
            if (!evals[i].ok) {
                ++diverged;
                continue;
            }
            t_acc.add(evals[i].t);
            T_acc.add(evals[i].T);
            if (evals[i].T < kTransmissionFloor) {
                ++diverged;
            } else {
                lnT_acc.add(std::log(evals[i].T));
            }
        }
        pt.mean_t = t_acc.mean();
        pt.mean_T = T_acc.mean();
        pt.stderr_T = T_acc.stderr_mean();
        pt.mean_lnT = lnT_acc.mean();
        pt.stderr_lnT = lnT_acc.stderr_mean();
        pt.n_used = static_cast<long>(lnT_acc.count());
        pt.n_diverged = diverged;
        spectrum.push_back(pt);
    }
    return spectrum;
}

Complex mft_single_atom(const WaveguideParams& p, double delta, double doppler_width) {
    if (doppler_width == 0.0) return single_atom_scatter(p, delta).t;
    return gaussian_average([&](double d) { return single_atom_scatter(p, d).t; }, delta,
                            doppler_width, 1e-8);
}

Complex mft_product(const WaveguideParams& p, double delta, double doppler_width, long n) {
    if (n < 0) throw InvalidParams("mft_product: n must be >= 0");
    const Complex base = mft_single_atom(p, delta, doppler_width);
    Complex result{1.0, 0.0};
    for (long j = 0; j < n; ++j) result *= base;
    return result;
}

}  // namespace corr1d
