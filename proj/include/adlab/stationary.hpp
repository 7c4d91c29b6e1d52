#pragma once

#include <string>
#include <utility>
#include <vector>

#include "adlab/bifurcation.hpp"
#include "adlab/state.hpp"

namespace adlab {

struct FreeEnergyBreakdown {
    double entropy = 0.0;        // S(u) = sum_i \int u_i log u_i
    double interaction = 0.0;    // E(u,u)
    double total = 0.0;          // F = sigma S + E/2
    double dissipation = 0.0;    // J(u) = sum_i \int u_i |d/dx dF/du_i|^2
};

struct SolverOptions {
    double theta = 0.5;          // damping, (0, 1]
    double tol = 1e-10;          // fixed-point residual ||u - Tu||_L2
    int max_iter = 100000;

    void validate() const;
};

struct ConvergenceReport {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    bool oscillation = false;        // residual non-monotone over a 50-iteration window
    int descent_violations = 0;      // free-energy increases beyond 1e-12 per step
    double free_energy = 0.0;
    double dissipation = 0.0;
    std::string diagnostic;
};

/// One application of the nonlinear map:
/// (T u)_i = exp(-(chi_i alpha_i W*u_i + gamma W*u_j)/sigma) / Z_i.
/// Output components have mass exactly one and are strictly positive.
GridState apply_T(const GridState& state, const TwoSpeciesParams& p, const SpectralKernel& spectral);
GridState apply_T(const GridState& state, const ScalarParams& p, const SpectralKernel& spectral);

/// Damped iteration u <- (1-theta) u + theta T u until ||u - Tu|| <= tol.
std::pair<GridState, ConvergenceReport> fixed_point_solve(const TwoSpeciesParams& p,
                                                          const SpectralKernel& spectral,
                                                          const SolverOptions& opts,
                                                          const GridState& seed);
std::pair<GridState, ConvergenceReport> fixed_point_solve(const ScalarParams& p,
                                                          const SpectralKernel& spectral,
                                                          const SolverOptions& opts,
                                                          const GridState& seed);

FreeEnergyBreakdown free_energy(const GridState& state, const TwoSpeciesParams& p,
                                const SpectralKernel& spectral);
FreeEnergyBreakdown free_energy(const GridState& state, const ScalarParams& p,
                                const SpectralKernel& spectral);

/// L2 norm of the stationary PDE right-hand side, evaluated pseudo-spectrally.
double stationarity_residual(const GridState& state, const TwoSpeciesParams& p,
                             const SpectralKernel& spectral);
double stationarity_residual(const GridState& state, const ScalarParams& p,
                             const SpectralKernel& spectral);

/// Signed amplitude <u1 - 1/L, w_k>.
double amplitude(const GridState& state, int k);

struct BranchSample {
    double nu = 0.0;
    double amplitude = 0.0;
    double free_energy = 0.0;
    double residual = 0.0;
    int iters = 0;
};

struct BranchTrace {
    std::vector<BranchSample> samples;
    bool truncated = false;
    std::string diagnostic;
};

/// Natural continuation from a bifurcation point: at each nu step solve with
/// the previous solution as seed (first step seeded by branch_expansion).
/// Aborts when the branch collapses to homogeneous (|amplitude| < 10 tol) or
/// the solver fails to converge.
BranchTrace trace_branch(const TwoSpeciesParams& p, const SpectralKernel& spectral,
                         const BifurcationPoint& bp, double nu_from, double nu_to, int steps,
                         const TorusGrid& grid, const SolverOptions& opts);
BranchTrace trace_branch(const ScalarParams& p, const SpectralKernel& spectral,
                         const BifurcationPoint& bp, double nu_from, double nu_to, int steps,
                         const TorusGrid& grid, const SolverOptions& opts);

}  // namespace adlab
