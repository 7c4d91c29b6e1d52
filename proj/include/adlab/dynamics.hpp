#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adlab/bifurcation.hpp"
#include "adlab/state.hpp"
#include "adlab/stationary.hpp"

namespace adlab {

struct StepperOptions {
    double dt = 0.01;
    double t_end = 100.0;
    int N = 256;
    bool dealias = true;
    std::vector<double> snapshot_times;
    double sample_every = 0.5;       // diagnostic cadence
    double homog_tol = 1e-10;        // early stop: converged to homogeneous
    double pattern_tol = 1e-10;      // early stop: ||u(t+D) - u(t)|| small
    double cfl_safety = 0.5;

    void validate() const;
};

struct TrajectorySample {
    double t = 0.0;
    double mass_err1 = 0.0, mass_err2 = 0.0;
    double min_u = 0.0;
    double H = 0.0;      // relative entropy vs homogeneous
    double F = 0.0;      // free energy
    double l2_dist = 0.0;
};

enum class StopReason { t_end, homogeneous, pattern, positivity_breach, energy_violation };

struct Trajectory {
    explicit Trajectory(GridState initial) : final_state(std::move(initial)) {}

    std::vector<TrajectorySample> samples;
    std::vector<std::pair<double, GridState>> snapshots;
    StopReason stop = StopReason::t_end;
    GridState final_state;
    double final_time = 0.0;
    std::string diagnostic;
};

/// One semi-implicit step: diffusion integrated exactly per cosine/sine mode,
/// advection divergence evaluated pseudo-spectrally and advanced explicitly
/// (ETD1 weights), mode 0 untouched. Throws on a positivity breach.
GridState step(const GridState& state, const TwoSpeciesParams& p, const SpectralKernel& spectral,
               double dt, bool dealias = true);
GridState step(const GridState& state, const ScalarParams& p, const SpectralKernel& spectral,
               double dt, bool dealias = true);

/// Time integration with mass/positivity/entropy/energy diagnostics, adaptive
/// CFL cap on dt, and early stopping on either attractor.
Trajectory simulate(const GridState& u0, const TwoSpeciesParams& p, const SpectralKernel& spectral,
                    const StepperOptions& opts);
Trajectory simulate(const GridState& u0, const ScalarParams& p, const SpectralKernel& spectral,
                    const StepperOptions& opts);

struct EntropyDecayResult {
    enum class Status { checked, vacuous } status = Status::checked;
    double measured_rate = 0.0;    // fitted decay rate of H over the tail half
    double bound = 0.0;            // 4 pi^2 sigma / L^2 - 2(gamma_bar + alpha_bar)
    bool pass = false;             // measured >= bound * 0.95
};

/// Exponential relative-entropy decay check. Rejects kernels that are not
/// W^{2,inf} (top-hat); skips with status vacuous when the bound is <= 0.
EntropyDecayResult entropy_decay_check(const GridState& u0, const TwoSpeciesParams& p,
                                       const SpectralKernel& spectral, const StepperOptions& opts);

enum class ExchangeOutcome { homogeneous, pattern, inconclusive };

struct ExchangeVerdict {
    explicit ExchangeVerdict(GridState s) : pattern_state(std::move(s)) {}

    ExchangeOutcome below = ExchangeOutcome::inconclusive;
    ExchangeOutcome above = ExchangeOutcome::inconclusive;
    double pattern_amplitude = 0.0;             // |<u1 - 1/L, w_k>| on the patterned side
    std::optional<double> predicted_amplitude;  // branch-law prediction, when on the existence side
    double projection_product = 0.0;            // <u1-um,w_k><u2-um,w_k> (two species)
    GridState pattern_state;                    // final state of the patterned side
    std::string note;
};

/// Runs simulate just below and just above bp.value from a perturbed
/// homogeneous seed along the kernel direction.
ExchangeVerdict exchange_experiment(const BifurcationPoint& bp, const TwoSpeciesParams& p,
                                    const SpectralKernel& spectral, double eps_param,
                                    double eps_state, const StepperOptions& opts);
ExchangeVerdict exchange_experiment(const BifurcationPoint& bp, const ScalarParams& p,
                                    const SpectralKernel& spectral, double eps_param,
                                    double eps_state, const StepperOptions& opts);

/// Relative entropy H(u | u_inf) = sum_i \int u_i log(L u_i).
double relative_entropy(const GridState& state);

}  // namespace adlab
