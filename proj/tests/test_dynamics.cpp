#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "adlab/bifurcation.hpp"
#include "adlab/dynamics.hpp"
#include "test_support.hpp"

using namespace adlab;
using oracle::kPi;

namespace {
const double kTwoPi = 2.0 * kPi;

SpectralKernel cosine_fixture() { return cosine_transform(KernelSpec::cosine(1, -1.0), kTwoPi, 64); }

GridState perturbed(const TorusGrid& g, bool two, int k, double amp, double amp2 = -1.0) {
    GridState st = GridState::homogeneous(g, two);
    const double norm = std::sqrt(2.0 / g.L);
    for (int j = 0; j < g.N; ++j) {
        const double w = norm * std::cos(2.0 * kPi * k * g.node(j) / g.L);
        st.u1[j] += amp * w;
        if (two) st.u2[j] += (amp2 < 0 ? amp : amp2) * w;
    }
    return st;
}
}

TEST_CASE("heat flow is exact per mode") {
    const TorusGrid g(kTwoPi, 128);
    const SpectralKernel ker = cosine_fixture();
    ScalarParams p{1.0, kTwoPi, 0.0};
    for (double dt : {0.001, 0.05, 0.7}) {
        for (int k : {1, 3, 9}) {
            const GridState u0 = perturbed(g, false, k, 1e-3);
            const GridState u1 = step(u0, p, ker, dt);
            const double expected = 1e-3 * std::exp(-double(k) * k * dt);
            CHECK(amplitude(u1, k) == doctest::Approx(expected).epsilon(1e-13));
        }
    }
}

TEST_CASE("homogeneous initial data stays homogeneous") {
    const TorusGrid g(kTwoPi, 128);
    const SpectralKernel ker = cosine_fixture();
    TwoSpeciesParams p{1.0, kTwoPi, 1.5, 0.5, 0.8, +1, +1};
    StepperOptions opts;
    opts.t_end = 2.0;
    opts.dt = 0.05;
    const auto traj = simulate(GridState::homogeneous(g, true), p, ker, opts);
    CHECK(traj.stop == StopReason::homogeneous);
    CHECK(l2_distance_to_homogeneous(traj.final_state) <= 1e-12);
}

TEST_CASE("linearized growth rate matches lambda(k) within 5 percent") {
    const TorusGrid g(kTwoPi, 128);
    const SpectralKernel ker = cosine_fixture();
    ScalarParams p{1.0, kTwoPi, 2.2};    // lambda(1) = +0.1
    StepperOptions opts;
    opts.dt = 0.02;
    opts.t_end = 20.0;
    opts.sample_every = 1.0;
    const auto traj = simulate(perturbed(g, false, 1, 1e-3), p, ker, opts);
    // fit log(amplitude proxy): l2_dist tracks the mode-1 amplitude here
    double t0 = 0, a0 = 0, t1 = 0, a1 = 0;
    bool have0 = false;
    for (const auto& s : traj.samples) {
        if (s.l2_dist < 1e-2) {
            if (!have0 && s.t >= 1.0) {
                t0 = s.t;
                a0 = s.l2_dist;
                have0 = true;
            }
            t1 = s.t;
            a1 = s.l2_dist;
        }
    }
    REQUIRE(have0);
    REQUIRE(t1 > t0);
    const double rate = std::log(a1 / a0) / (t1 - t0);
    CHECK(rate == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("mass conserved and energy non-increasing along a patterned run") {
    const TorusGrid g(kTwoPi, 128);
    const SpectralKernel ker = cosine_fixture();
    ScalarParams p{1.0, kTwoPi, 2.2};
    StepperOptions opts;
    opts.dt = 0.05;
    opts.t_end = 120.0;
    const auto traj = simulate(perturbed(g, false, 1, 0.05), p, ker, opts);
    REQUIRE(traj.stop == StopReason::pattern);
    double prevF = traj.samples.front().F;
    for (const auto& s : traj.samples) {
        CHECK(s.mass_err1 <= 1e-8);
        CHECK(s.H >= -1e-12);
        CHECK(s.F <= prevF + 1e-8 * (1.0 + std::abs(prevF)));
        prevF = s.F;
    }
}

TEST_CASE("cross-solver agreement: stepper pattern equals the fixed point") {
    const TorusGrid g(kTwoPi, 128);
    const SpectralKernel ker = cosine_fixture();
    ScalarParams p{1.0, kTwoPi, 2.2};
    StepperOptions opts;
    opts.dt = 0.05;
    opts.t_end = 200.0;
    const auto traj = simulate(perturbed(g, false, 1, 0.05), p, ker, opts);
    REQUIRE(traj.stop == StopReason::pattern);

    BifurcationPoint bp;
    bp.kind = ParamKind::scalar_alpha;
    bp.value = 2.0;
    bp.k = 1;
    bp.curvature = kTwoPi;
    SolverOptions sopts;
    const auto [fp, rep] = fixed_point_solve(p, ker, sopts, branch_expansion(bp, 0.25, g));
    REQUIRE(rep.converged);
    CHECK(l2_distance(traj.final_state, fp) <= 1e-6);
}

TEST_CASE("positivity breach aborts") {
    const TorusGrid g(kTwoPi, 128);
    const SpectralKernel ker = cosine_fixture();
    ScalarParams p{1.0, kTwoPi, 40.0};    // violent aggregation
    GridState u0 = perturbed(g, false, 1, 0.08);
    StepperOptions opts;
    opts.dt = 0.5;
    opts.t_end = 50.0;
    opts.cfl_safety = 1e6;    // defeat the CFL cap to force the breach
    const auto traj = simulate(u0, p, ker, opts);
    CHECK(traj.stop == StopReason::positivity_breach);
}

TEST_CASE("entropy decay check") {
    const TorusGrid g(kTwoPi, 128);
    const SpectralKernel ker = cosine_fixture();
    SUBCASE("small interactions beat the bound") {
        TwoSpeciesParams p{1.0, kTwoPi, 0.1, 0.1, 0.1, +1, +1};
        StepperOptions opts;
        opts.dt = 0.02;
        opts.t_end = 8.0;
        opts.sample_every = 0.25;
        opts.homog_tol = 0.0;    // keep sampling the tail
        opts.pattern_tol = 0.0;
        const GridState u0 = perturbed(g, true, 1, 0.05, 0.03);
        const auto res = entropy_decay_check(u0, p, ker, opts);
        CHECK(res.status == EntropyDecayResult::Status::checked);
        CHECK(res.bound == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(res.pass);
        CHECK(res.measured_rate >= 0.6 * 0.95);
    }
    SUBCASE("vacuous bound is skipped") {
        TwoSpeciesParams p{1.0, kTwoPi, 1.0, 1.0, 1.0, +1, +1};
        StepperOptions opts;
        const auto res = entropy_decay_check(GridState::homogeneous(g, true), p, ker, opts);
        CHECK(res.status == EntropyDecayResult::Status::vacuous);
    }
    SUBCASE("tophat kernel rejected") {
        const SpectralKernel th = cosine_transform(KernelSpec::tophat(kPi / 5.0, +1), kTwoPi, 64);
        TwoSpeciesParams p{1.0, kTwoPi, 0.1, 0.1, 0.1, +1, +1};
        StepperOptions opts;
        CHECK_THROWS(entropy_decay_check(GridState::homogeneous(g, true), p, th, opts));
    }
}

TEST_CASE("exchange of stability across the gamma fixture point") {
    const SpectralKernel ker = cosine_fixture();
    TwoSpeciesParams p{1.0, kTwoPi, 1.0, 1.0, 1.0, +1, +1};
    BifurcationPoint bp;
    bp.kind = ParamKind::gamma;
    bp.value = 1.0;
    bp.k = 1;
    bp.c = 1.0;
    bp.curvature = kTwoPi;
    StepperOptions opts;
    opts.N = 128;
    opts.dt = 0.05;
    opts.t_end = 250.0;
    const auto v = exchange_experiment(bp, p, ker, 0.2, 1e-2, opts);
    CHECK(v.below == ExchangeOutcome::homogeneous);
    CHECK(v.above == ExchangeOutcome::pattern);
    CHECK(v.projection_product > 0.0);    // in phase
    REQUIRE(v.predicted_amplitude.has_value());
    CHECK(v.pattern_amplitude == doctest::Approx(*v.predicted_amplitude).epsilon(0.15));
}

TEST_CASE("subcritical lower point of a stability island: homogeneous side is above") {
    // two points of critical stability; the lower one is subcritical, so the
    // locally stable homogeneous side sits INSIDE the island (above the point)
    const SpectralKernel th = cosine_transform(KernelSpec::tophat(1.25, +1), kTwoPi, 64);
    const KernelSummary s = kernel_summary(th, 1.0, kTwoPi);
    TwoSpeciesParams p{1.0, kTwoPi, 3.5, 6.0, 12.0, +1, +1};
    const auto rep = critical_stability_alpha1(p, s, th);
    REQUIRE(rep.status == StabilityCase::two_points);
    const auto& lo = rep.points[0];
    REQUIRE(lo.criticality == Criticality::subcritical);

    BifurcationPoint bp;
    bp.kind = ParamKind::alpha1;
    bp.value = lo.value;
    bp.k = lo.k;
    bp.c = -p.gamma / (s.alpha_star_minus + p.z2());
    bp.curvature = -0.5 * p.chi1 * kTwoPi * s.alpha_star_minus *
                   (1.0 + std::pow(p.gamma / (s.alpha_star_minus + p.z2()), 4));
    StepperOptions opts;
    opts.N = 128;
    opts.dt = 0.05;
    opts.t_end = 400.0;
    const auto v = exchange_experiment(bp, p, th, 1.0, 1e-2, opts);
    CHECK(v.above == ExchangeOutcome::homogeneous);
    CHECK(v.below != ExchangeOutcome::homogeneous);    // pattern or drift
}

TEST_CASE("out-of-phase pattern above gamma* when S* > 0") {
    const SpectralKernel th = cosine_transform(KernelSpec::tophat(kPi / 5.0, +1), kTwoPi, 64);
    const KernelSummary s = kernel_summary(th, 1.0, kTwoPi);
    TwoSpeciesParams p{1.0, kTwoPi, 1.5, 4.35, 0.0, +1, -1};    // P2 coordinates
    const auto rep = critical_stability_gamma(p, s, th);
    REQUIRE(rep.status == StabilityCase::one_point);
    REQUIRE(rep.points[0].phase == Phase::out_of_phase);
    const auto cat = gamma_points(TwoSpeciesParams{1.0, kTwoPi, 1.5, 4.35, rep.points[0].value,
                                                   +1, -1},
                                  th);
    BifurcationPoint bp;
    for (const auto& c : cat.points)
        if (std::abs(c.value - rep.points[0].value) < 1e-9) bp = c;
    REQUIRE(bp.kind == ParamKind::gamma);
    StepperOptions opts;
    opts.N = 128;
    opts.dt = 0.02;
    opts.t_end = 220.0;
    const auto v = exchange_experiment(bp, p, th, 1.0, 0.03, opts);
    CHECK(v.above == ExchangeOutcome::pattern);
    CHECK(v.projection_product < 0.0);    // out of phase
}
