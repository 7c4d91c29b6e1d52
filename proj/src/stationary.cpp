#include "adlab/stationary.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <type_traits>

#include "coupling.hpp"

namespace adlab {

using detail::Coupling;
using detail::check_state;
using detail::energy_from_potentials;
using detail::make_coupling;
using detail::potentials;

namespace {

GridState apply_core(const GridState& st, const Coupling& cp,
                     const std::array<std::vector<double>, 2>& phi) {
    GridState out = st;
    for (int i = 0; i < cp.n; ++i) {
        auto& u = out.component(i + 1);
        double emax = 0.0;
        for (int j = 0; j < st.grid.N; ++j) emax = std::max(emax, std::abs(phi[i][j] / cp.sigma));
        if (emax > 700.0)
            throw std::runtime_error("apply_T: exponent out of numeric range (|phi|/sigma > 700)");
        double Z = 0.0;
        for (int j = 0; j < st.grid.N; ++j) {
            u[j] = std::exp(-phi[i][j] / cp.sigma);
            Z += u[j];
        }
        Z *= st.grid.h();
        for (int j = 0; j < st.grid.N; ++j) u[j] /= Z;
    }
    return out;
}

double dissipation_impl(const GridState& st, const Coupling& cp,
                        const std::array<std::vector<double>, 2>& phi) {
    double J = 0.0;
    for (int i = 0; i < cp.n; ++i) {
        const auto& u = st.component(i + 1);
        std::vector<double> f(st.grid.N);
        for (int j = 0; j < st.grid.N; ++j) {
            if (u[j] <= 0.0) throw std::domain_error("dissipation: density must be strictly positive");
            f[j] = cp.sigma * std::log(u[j]) + phi[i][j];
        }
        const std::vector<double> fx = spectral_derivative(st.grid, f);
        double s = 0.0;
        for (int j = 0; j < st.grid.N; ++j) s += u[j] * fx[j] * fx[j];
        J += s * st.grid.h();
    }
    return J;
}

FreeEnergyBreakdown free_energy_impl(const GridState& st, const Coupling& cp,
                                     const SpectralKernel& ker) {
    check_state(st, cp);
    const auto phi = potentials(st, cp, ker);
    FreeEnergyBreakdown fe;
    fe.total = energy_from_potentials(st, cp, phi, &fe.entropy);
    fe.interaction = (fe.total - cp.sigma * fe.entropy) * 2.0;
    fe.dissipation = dissipation_impl(st, cp, phi);
    return fe;
}

double residual_impl(const GridState& st, const Coupling& cp, const SpectralKernel& ker) {
    check_state(st, cp);
    const auto phi = potentials(st, cp, ker);
    const int M = st.grid.N / 2 - 1;
    TrigTransform t(st.grid, M);
    double acc = 0.0;
    for (int i = 0; i < cp.n; ++i) {
        const auto& u = st.component(i + 1);
        const TrigSpectrum us = t.analyze(u);
        const std::vector<double> ux = t.synthesize(t.derivative(us));
        const std::vector<double> v = t.synthesize(t.derivative(t.analyze(phi[i])));
        std::vector<double> flux(st.grid.N);
        for (int j = 0; j < st.grid.N; ++j) flux[j] = cp.sigma * ux[j] + u[j] * v[j];
        const TrigSpectrum rs = t.derivative(t.analyze(flux));
        for (int k = 0; k < rs.modes(); ++k) acc += rs.a[k] * rs.a[k] + rs.b[k] * rs.b[k];
    }
    return std::sqrt(acc);
}

std::pair<GridState, ConvergenceReport> solve_impl(const Coupling& cp, const SpectralKernel& ker,
                                                   const SolverOptions& opts, const GridState& seed) {
    opts.validate();
    check_state(seed, cp);

    // Even-subspace enforcement: symmetrize the seed, renormalize masses.
    GridState u = seed;
    for (int i = 1; i <= cp.n; ++i) {
        auto& c = u.component(i);
        c = symmetrize(c);
        const double m = integrate(u.grid, c);
        for (double& v : c) v /= m;
    }

    ConvergenceReport rep;
    double prevF = std::numeric_limits<double>::infinity();
    std::deque<double> window;

    for (int it = 0; it < opts.max_iter; ++it) {
        const auto phi = potentials(u, cp, ker);
        const double F = energy_from_potentials(u, cp, phi, nullptr);
        if (F > prevF + 1e-12 * (1.0 + std::abs(prevF))) ++rep.descent_violations;
        prevF = F;

        const GridState Tu = apply_core(u, cp, phi);
        const double r = l2_distance(u, Tu);
        rep.iterations = it + 1;
        rep.residual = r;

        window.push_back(r);
        if (window.size() > 50) window.pop_front();
        if (window.size() == 50 && window.back() >= window.front() && r > opts.tol) {
            rep.oscillation = true;
            rep.diagnostic = "residual non-monotone over a 50-iteration window; consider smaller theta";
        }

        if (r <= opts.tol) {
            rep.converged = true;
            break;
        }
        for (int i = 1; i <= cp.n; ++i) {
            auto& uc = u.component(i);
            const auto& tc = Tu.component(i);
            for (int j = 0; j < u.grid.N; ++j)
                uc[j] = (1.0 - opts.theta) * uc[j] + opts.theta * tc[j];
        }
    }
    if (!rep.converged && rep.diagnostic.empty())
        rep.diagnostic = "max_iter reached before ||u - Tu|| <= tol";

    const auto phi = potentials(u, cp, ker);
    rep.free_energy = energy_from_potentials(u, cp, phi, nullptr);
    rep.dissipation = dissipation_impl(u, cp, phi);
    return {u, rep};
}

template <typename Params>
BranchTrace trace_impl(Params p, const SpectralKernel& ker, const BifurcationPoint& bp,
                       double nu_from, double nu_to, int steps, const TorusGrid& grid,
                       const SolverOptions& opts) {
    if (steps < 1) throw std::invalid_argument("trace_branch: steps >= 1 required");
    if (!bp.simple) throw std::invalid_argument("trace_branch: bifurcation point is not simple");

    constexpr bool scalar = std::is_same_v<Params, ScalarParams>;
    auto bind = [&bp](Params& q, double nu) {
        if constexpr (scalar) {
            q.alpha = nu;
        } else {
            if (bp.kind == ParamKind::alpha1)
                q.alpha1 = nu;
            else
                q.gamma = nu;
        }
    };

    BranchTrace trace;
    GridState u = GridState::homogeneous(grid, !scalar);
    bool seeded = false;

    for (int i = 0; i < steps; ++i) {
        const double nu = nu_from + (nu_to - nu_from) * (i + 1) / steps;
        bind(p, nu);
        if (!seeded) {
            // non-existence side of the branch: seed exactly homogeneous
            const double s0 = predicted_amplitude(bp, nu).value_or(0.0);
            u = branch_expansion(bp, s0, grid);
            seeded = true;
        }

        auto [sol, rep] = solve_impl(make_coupling(p), ker, opts, u);
        const double amp = amplitude(sol, bp.k);
        if (!rep.converged) {
            trace.truncated = true;
            trace.diagnostic = "solver did not converge at nu = " + std::to_string(nu);
            break;
        }
        BranchSample smp;
        smp.nu = nu;
        smp.amplitude = amp;
        smp.free_energy = rep.free_energy;
        smp.residual = rep.residual;
        smp.iters = rep.iterations;
        trace.samples.push_back(smp);
        if (std::abs(amp) < 10.0 * opts.tol) {
            trace.truncated = true;
            trace.diagnostic = "branch collapsed to homogeneous at nu = " + std::to_string(nu);
            break;
        }
        u = sol;
    }
    return trace;
}

}    // namespace

void SolverOptions::validate() const {
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("solver: theta must be in (0, 1]");
    if (tol <= 0.0) throw std::invalid_argument("solver: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
}

GridState apply_T(const GridState& st, const TwoSpeciesParams& p, const SpectralKernel& ker) {
    const auto cp = make_coupling(p);
    check_state(st, cp);
    return apply_core(st, cp, potentials(st, cp, ker));
}
GridState apply_T(const GridState& st, const ScalarParams& p, const SpectralKernel& ker) {
    const auto cp = make_coupling(p);
    check_state(st, cp);
    return apply_core(st, cp, potentials(st, cp, ker));
}

std::pair<GridState, ConvergenceReport> fixed_point_solve(const TwoSpeciesParams& p,
                                                          const SpectralKernel& ker,
                                                          const SolverOptions& opts,
                                                          const GridState& seed) {
    return solve_impl(make_coupling(p), ker, opts, seed);
}
std::pair<GridState, ConvergenceReport> fixed_point_solve(const ScalarParams& p,
                                                          const SpectralKernel& ker,
                                                          const SolverOptions& opts,
                                                          const GridState& seed) {
    return solve_impl(make_coupling(p), ker, opts, seed);
}

FreeEnergyBreakdown free_energy(const GridState& st, const TwoSpeciesParams& p,
                                const SpectralKernel& ker) {
    return free_energy_impl(st, make_coupling(p), ker);
}
FreeEnergyBreakdown free_energy(const GridState& st, const ScalarParams& p,
                                const SpectralKernel& ker) {
    return free_energy_impl(st, make_coupling(p), ker);
}

double stationarity_residual(const GridState& st, const TwoSpeciesParams& p,
                             const SpectralKernel& ker) {
    return residual_impl(st, make_coupling(p), ker);
}
double stationarity_residual(const GridState& st, const ScalarParams& p,
                             const SpectralKernel& ker) {
    return residual_impl(st, make_coupling(p), ker);
}

double amplitude(const GridState& st, int k) {
    const TorusGrid& g = st.grid;
    const double norm = std::sqrt(2.0 / g.L);
    double s = 0.0;
    for (int j = 0; j < g.N; ++j)
        s += st.u1[j] * norm * std::cos(2.0 * std::numbers::pi * k * g.node(j) / g.L);
    return s * g.h();
}

BranchTrace trace_branch(const TwoSpeciesParams& p, const SpectralKernel& ker,
                         const BifurcationPoint& bp, double nu_from, double nu_to, int steps,
                         const TorusGrid& grid, const SolverOptions& opts) {
    if (bp.kind == ParamKind::scalar_alpha)
        throw std::invalid_argument("trace_branch: scalar point with two-species params");
    return trace_impl(p, ker, bp, nu_from, nu_to, steps, grid, opts);
}
BranchTrace trace_branch(const ScalarParams& p, const SpectralKernel& ker,
                         const BifurcationPoint& bp, double nu_from, double nu_to, int steps,
                         const TorusGrid& grid, const SolverOptions& opts) {
    if (bp.kind != ParamKind::scalar_alpha)
        throw std::invalid_argument("trace_branch: two-species point with scalar params");
    return trace_impl(p, ker, bp, nu_from, nu_to, steps, grid, opts);
}

}  // namespace adlab
