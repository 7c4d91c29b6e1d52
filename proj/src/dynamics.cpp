#include "adlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <type_traits>

#include "coupling.hpp"

namespace adlab {

using detail::Coupling;
using detail::check_state;
using detail::energy_floored;
using detail::make_coupling;

namespace {

double phi1(double z) {
    // (e^z - 1)/z, stable near zero
    if (std::abs(z) < 1e-12) return 1.0 + 0.5 * z;
    return std::expm1(z) / z;
}

int stepper_modes(int N, bool dealias) {
    const int full = N / 2 - 1;
    return dealias ? std::min(N / 3, full) : full;
}

struct StepScratch {
    const TrigTransform* t = nullptr;
    std::vector<TrigSpectrum> uhat;    // per component
};

// One ETD1 step on spectra held in scratch; returns max |velocity| seen.
// Positivity of the OUTPUT is checked by the caller on the synthesized grid.
double etd1_step(StepScratch& sc, const Coupling& cp, const SpectralKernel& ker, double dt) {
    const TrigTransform& t = *sc.t;
    const int M = t.modes();
    const int n = cp.n;

    // potentials and velocities in coefficient space
    std::vector<TrigSpectrum> conv(n);
    for (int i = 0; i < n; ++i) conv[i] = convolve_spectrum(ker, sc.uhat[i]);

    std::vector<std::vector<double>> g(n);    // products u_i * v_i on the grid
    double vmax = 0.0;
    for (int i = 0; i < n; ++i) {
        TrigSpectrum phi;
        phi.a0 = 0.0;
        phi.a.assign(M, 0.0);
        phi.b.assign(M, 0.0);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < M; ++k) {
                phi.a[k] += cp.c[i][j] * conv[j].a[k];
                phi.b[k] += cp.c[i][j] * conv[j].b[k];
            }
        const std::vector<double> v = t.synthesize(t.derivative(phi));
        const std::vector<double> ui = t.synthesize(sc.uhat[i]);
        g[i].resize(v.size());
        for (size_t x = 0; x < v.size(); ++x) {
            vmax = std::max(vmax, std::abs(v[x]));
            g[i][x] = ui[x] * v[x];
        }
    }

    for (int i = 0; i < n; ++i) {
        const TrigSpectrum A = t.derivative(t.analyze(g[i]));    // advection divergence
        TrigSpectrum& u = sc.uhat[i];
        for (int k = 1; k <= M; ++k) {
            const double q = cp.sigma * t.omega(k) * t.omega(k) * dt;
            const double decay = std::exp(-q);
            const double w = dt * phi1(-q);
            u.a[k - 1] = decay * u.a[k - 1] + w * A.a[k - 1];
            u.b[k - 1] = decay * u.b[k - 1] + w * A.b[k - 1];
        }
        // mode 0 untouched: mass conserved exactly
    }
    return vmax;
}

GridState states_from(const StepScratch& sc, const TorusGrid& grid, int n) {
    GridState st{grid, sc.t->synthesize(sc.uhat[0]), {}};
    if (n == 2) st.u2 = sc.t->synthesize(sc.uhat[1]);
    return st;
}

void check_positivity(const GridState& st) {
    if (st.min_density() < -1e-8)
        throw std::runtime_error(
            "step: positivity breach (min density < -1e-8); reduce dt or refine the grid");
}

GridState step_impl(const GridState& st, const Coupling& cp, const SpectralKernel& ker, double dt,
                    bool dealias) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    check_state(st, cp);
    const int M = stepper_modes(st.grid.N, dealias);
    TrigTransform t(st.grid, M);
    StepScratch sc;
    sc.t = &t;
    for (int i = 0; i < cp.n; ++i) sc.uhat.push_back(t.analyze(st.component(i + 1)));
    etd1_step(sc, cp, ker, dt);
    GridState out = states_from(sc, st.grid, cp.n);
    check_positivity(out);
    return out;
}

double entropy_floored(const GridState& st) {
    double H = 0.0;
    for (int i = 1; i <= st.components(); ++i) {
        const auto& u = st.component(i);
        double s = 0.0;
        for (double v : u) s += v * std::log(std::max(v * st.grid.L, 1e-30));
        H += s * st.grid.h();
    }
    return H;
}

Trajectory simulate_impl(const GridState& u0, const Coupling& cp, const SpectralKernel& ker,
                         const StepperOptions& opts) {
    opts.validate();
    check_state(u0, cp);
    if (u0.min_density() <= 0.0)
        throw std::invalid_argument("simulate: initial data must be strictly positive");

    const TorusGrid grid = u0.grid;
    const int M = stepper_modes(grid.N, opts.dealias);
    TrigTransform t(grid, M);
    StepScratch sc;
    sc.t = &t;
    for (int i = 0; i < cp.n; ++i) sc.uhat.push_back(t.analyze(u0.component(i + 1)));

    Trajectory traj(u0);
    std::vector<bool> snapped(opts.snapshot_times.size(), false);

    auto record = [&](double time, const GridState& st, double F) {
        TrajectorySample s;
        s.t = time;
        s.mass_err1 = std::abs(st.mass(1) - 1.0);
        s.mass_err2 = cp.n == 2 ? std::abs(st.mass(2) - 1.0) : 0.0;
        s.min_u = st.min_density();
        s.H = entropy_floored(st);
        s.F = F;
        s.l2_dist = l2_distance_to_homogeneous(st);
        traj.samples.push_back(s);
    };

    double time = 0.0;
    GridState cur = u0;
    const auto phi0 = detail::potentials(cur, cp, ker);
    double F_prev = energy_floored(cur, cp, phi0);
    record(0.0, cur, F_prev);
    GridState prev_sample = cur;
    double next_sample = opts.sample_every;

    // CFL cap for the first step from the initial advection field
    double vmax_last = 0.0;
    for (int i = 0; i < cp.n; ++i)
        for (double v : spectral_derivative(grid, phi0[i])) vmax_last = std::max(vmax_last, std::abs(v));

    while (time < opts.t_end) {
        // advection CFL with safety factor, sampled from the previous step
        double dt = std::min(opts.dt, opts.t_end - time);
        if (vmax_last > 0.0) dt = std::min(dt, opts.cfl_safety * grid.h() / vmax_last);

        vmax_last = etd1_step(sc, cp, ker, dt);
        time += dt;
        cur = states_from(sc, grid, cp.n);

        if (cur.min_density() < -1e-8) {
            traj.stop = StopReason::positivity_breach;
            traj.diagnostic = "positivity breach at t = " + std::to_string(time) + "; reduce dt";
            break;
        }
        const double F = energy_floored(cur, cp, detail::potentials(cur, cp, ker));
        if (F > F_prev + 1e-8 * (1.0 + std::abs(F_prev))) {
            traj.stop = StopReason::energy_violation;
            traj.diagnostic = "free energy increased at t = " + std::to_string(time);
            record(time, cur, F);
            break;
        }
        F_prev = F;

        for (size_t i = 0; i < opts.snapshot_times.size(); ++i) {
            if (!snapped[i] && time >= opts.snapshot_times[i] - 1e-12) {
                traj.snapshots.emplace_back(opts.snapshot_times[i], cur);
                snapped[i] = true;
            }
        }

        if (time >= next_sample - 1e-12 || time >= opts.t_end) {
            record(time, cur, F);
            next_sample += opts.sample_every;

            const double dist = traj.samples.back().l2_dist;
            if (dist <= opts.homog_tol) {
                traj.stop = StopReason::homogeneous;
                break;
            }
            if (l2_distance(cur, prev_sample) <= opts.pattern_tol && dist > 100.0 * opts.homog_tol) {
                traj.stop = StopReason::pattern;
                break;
            }
            prev_sample = cur;
        }
    }

    if (traj.samples.empty() || traj.samples.back().t < time)
        record(time, cur, F_prev);
    traj.final_state = cur;
    traj.final_time = time;
    return traj;
}

}    // namespace

void StepperOptions::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("stepper: dt must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("stepper: t_end must be positive");
    if (N < 16 || N % 2 != 0) throw std::invalid_argument("stepper: N must be even and >= 16");
    if (!(sample_every > 0.0)) throw std::invalid_argument("stepper: sample_every must be positive");
}

GridState step(const GridState& st, const TwoSpeciesParams& p, const SpectralKernel& ker, double dt,
               bool dealias) {
    return step_impl(st, make_coupling(p), ker, dt, dealias);
}
GridState step(const GridState& st, const ScalarParams& p, const SpectralKernel& ker, double dt,
               bool dealias) {
    return step_impl(st, make_coupling(p), ker, dt, dealias);
}

Trajectory simulate(const GridState& u0, const TwoSpeciesParams& p, const SpectralKernel& ker,
                    const StepperOptions& opts) {
    return simulate_impl(u0, make_coupling(p), ker, opts);
}
Trajectory simulate(const GridState& u0, const ScalarParams& p, const SpectralKernel& ker,
                    const StepperOptions& opts) {
    return simulate_impl(u0, make_coupling(p), ker, opts);
}

double relative_entropy(const GridState& st) { return entropy_floored(st); }

EntropyDecayResult entropy_decay_check(const GridState& u0, const TwoSpeciesParams& p,
                                       const SpectralKernel& ker, const StepperOptions& opts) {
    p.validate();
    const auto wxx = ker.wxx_sup();
    if (!wxx)
        throw std::invalid_argument(
            "entropy_decay_check: W_xx not bounded; hypothesis fails for top-hat kernels");

    EntropyDecayResult res;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double gamma_bar = p.gamma * *wxx;
    const double alpha_bar = std::max(p.alpha1, p.alpha2) * *wxx;
    res.bound = 4.0 * pi2 * p.sigma / (p.L * p.L) - 2.0 * (gamma_bar + alpha_bar);
    if (res.bound <= 0.0) {
        res.status = EntropyDecayResult::Status::vacuous;
        return res;
    }

    const Trajectory traj = simulate(u0, p, ker, opts);

    // least-squares slope of log H over the tail half, above the noise floor
    const double H0 = traj.samples.front().H;
    std::vector<std::pair<double, double>> pts;
    for (size_t i = traj.samples.size() / 2; i < traj.samples.size(); ++i) {
        const auto& s = traj.samples[i];
        if (s.H > 1e-14 * std::max(H0, 1.0)) pts.emplace_back(s.t, std::log(s.H));
    }
    if (pts.size() < 3) {
        // decayed below the floor before the tail window: treat as max-speed decay
        res.measured_rate = res.bound * 10.0;
        res.pass = true;
        return res;
    }
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (auto [x, y] : pts) {
        st += x;
        sy += y;
        stt += x * x;
        sty += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    res.measured_rate = -slope;
    res.pass = res.measured_rate >= 0.95 * res.bound;
    return res;
}

namespace {

template <typename Params>
ExchangeVerdict exchange_impl(const BifurcationPoint& bp, Params p, const SpectralKernel& ker,
                              double eps_param, double eps_state, const StepperOptions& opts) {
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

    const TorusGrid grid{p.L, opts.N};
    GridState seed = branch_expansion(bp, eps_state, grid);

    auto classify = [](const Trajectory& tr) {
        switch (tr.stop) {
            case StopReason::homogeneous: return ExchangeOutcome::homogeneous;
            case StopReason::pattern: return ExchangeOutcome::pattern;
            default: return ExchangeOutcome::inconclusive;
        }
    };

    ExchangeVerdict v(GridState::homogeneous(grid, !scalar));

    Params lo = p, hi = p;
    bind(lo, bp.value - eps_param);
    bind(hi, bp.value + eps_param);

    const Trajectory below = simulate(seed, lo, ker, opts);
    const Trajectory above = simulate(seed, hi, ker, opts);
    v.below = classify(below);
    v.above = classify(above);

    const Trajectory* patterned = nullptr;
    double nu_pat = 0.0;
    if (v.above == ExchangeOutcome::pattern) {
        patterned = &above;
        nu_pat = bp.value + eps_param;
    } else if (v.below == ExchangeOutcome::pattern) {
        patterned = &below;
        nu_pat = bp.value - eps_param;
    }
    if (patterned) {
        v.pattern_state = patterned->final_state;
        v.pattern_amplitude = std::abs(amplitude(patterned->final_state, bp.k));
        v.predicted_amplitude = predicted_amplitude(bp, nu_pat);
        if constexpr (!scalar) {
            const TorusGrid& g = patterned->final_state.grid;
            const double um = 1.0 / g.L;
            double p1 = 0.0, p2 = 0.0;
            const double norm = std::sqrt(2.0 / g.L);
            for (int j = 0; j < g.N; ++j) {
                const double wk = norm * std::cos(2.0 * std::numbers::pi * bp.k * g.node(j) / g.L);
                p1 += (patterned->final_state.u1[j] - um) * wk;
                p2 += (patterned->final_state.u2[j] - um) * wk;
            }
            v.projection_product = p1 * p2 * g.h() * g.h();
        }
    } else {
        v.note = "no side reached a patterned attractor within t_end";
    }
    if (v.below == ExchangeOutcome::inconclusive && v.above == ExchangeOutcome::inconclusive)
        v.note = "inconclusive: neither stopping flag reached within t_end";
    return v;
}

}    // namespace

ExchangeVerdict exchange_experiment(const BifurcationPoint& bp, const TwoSpeciesParams& p,
                                    const SpectralKernel& ker, double eps_param, double eps_state,
                                    const StepperOptions& opts) {
    return exchange_impl(bp, p, ker, eps_param, eps_state, opts);
}
ExchangeVerdict exchange_experiment(const BifurcationPoint& bp, const ScalarParams& p,
                                    const SpectralKernel& ker, double eps_param, double eps_state,
                                    const StepperOptions& opts) {
    return exchange_impl(bp, p, ker, eps_param, eps_state, opts);
}

}  // namespace adlab
