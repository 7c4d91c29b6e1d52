#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "adlab/bifurcation.hpp"
#include "adlab/stability.hpp"
#include "test_support.hpp"

using namespace adlab;
using oracle::kPi;

namespace {
const double kTwoPi = 2.0 * kPi;

SpectralKernel cosine_fixture() { return cosine_transform(KernelSpec::cosine(1, -1.0), kTwoPi, 64); }
}

TEST_CASE("scalar catalog") {
    SUBCASE("single-mode kernel") {
        const auto pts = scalar_points({1.0, kTwoPi, 0.0}, cosine_fixture());
        REQUIRE(pts.size() == 1);
        CHECK(pts[0].value == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(pts[0].k == 1);
        CHECK(pts[0].curvature == doctest::Approx(kTwoPi).epsilon(1e-14));
        CHECK(pts[0].criticality == Criticality::supercritical);
        CHECK(pts[0].simple);
        CHECK_FALSE(pts[0].c.has_value());
    }
    SUBCASE("H-stable kernel has no points") {
        const auto pts = scalar_points({1.0, kTwoPi, 0.0},
                                       cosine_transform(KernelSpec::cosine(1, +1.0), kTwoPi, 64));
        CHECK(pts.empty());
    }
    SUBCASE("tophat: points exactly at negative modes, first at k = 7") {
        const SpectralKernel ker = cosine_transform(KernelSpec::tophat(kPi / 5.0, +1), kTwoPi, 128);
        const auto pts = scalar_points({1.0, kTwoPi, 0.0}, ker);
        REQUIRE_FALSE(pts.empty());
        CHECK(pts.front().value == doctest::Approx(29.0565).epsilon(1e-3));
        CHECK(pts.front().k == 7);
        size_t negatives = 0;
        for (int k = 1; k <= ker.kmax(); ++k)
            if (ker.coef_at(k) < -ker.eps_zero()) ++negatives;
        CHECK(pts.size() == negatives);
        for (const auto& bp : pts) {
            CHECK(ker.coef_at(bp.k) < 0.0);    // alpha_k > 0 <=> W~(k) < 0
            CHECK(bp.curvature > 0.0);
        }
        for (size_t i = 1; i < pts.size(); ++i) CHECK(pts[i - 1].value <= pts[i].value);
    }
}

TEST_CASE("alpha1 catalog") {
    const SpectralKernel ker = cosine_fixture();
    SUBCASE("exact fixture point") {
        TwoSpeciesParams p{1.0, kTwoPi, 0.0, 1.0, 1.0, +1, +1};
        const auto cat = alpha1_points(p, ker);
        REQUIRE(cat.points.size() == 1);
        const auto& bp = cat.points[0];
        CHECK(bp.value == doctest::Approx(1.0).epsilon(1e-14));
        REQUIRE(bp.c.has_value());
        CHECK(*bp.c == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(bp.phase == Phase::in_phase);
        CHECK(bp.curvature == doctest::Approx(4.0 * kPi).epsilon(1e-14));
        CHECK(bp.criticality == Criticality::supercritical);
    }
    SUBCASE("resonance |h_k + chi2 alpha2| ~ 0 is skipped with a note") {
        TwoSpeciesParams p{1.0, kTwoPi, 0.0, 2.0, 1.0, +1, +1};    // z2 = 2 = -h_1
        const auto cat = alpha1_points(p, ker);
        CHECK(cat.points.empty());
        REQUIRE(cat.resonant_skipped.size() == 1);
        CHECK(cat.resonant_skipped[0] == 1);
    }
    SUBCASE("positive candidates on K+ are subcritical") {
        std::vector<double> coef(16, 0.0);
        coef[0] = -1.0;
        coef[1] = +0.5;
        const SpectralKernel two = SpectralKernel::from_coefficients(kTwoPi, coef);
        TwoSpeciesParams p{1.0, kTwoPi, 0.0, 0.0, 9.0, +1, +1};
        const auto cat = alpha1_points(p, two);
        bool found_subcritical = false;
        for (const auto& bp : cat.points)
            if (two.coef_at(bp.k) > 0.0) {
                CHECK(bp.criticality == Criticality::subcritical);
                found_subcritical = true;
            }
        CHECK(found_subcritical);
    }
    SUBCASE("gamma -> 0 reduces to the scalar catalog") {
        TwoSpeciesParams p{1.0, kTwoPi, 0.0, 0.7, 1e-8, +1, +1};
        const SpectralKernel th = cosine_transform(KernelSpec::tophat(kPi / 5.0, +1), kTwoPi, 128);
        const auto cat = alpha1_points(p, th);
        const auto sc = scalar_points({1.0, kTwoPi, 0.0}, th);
        REQUIRE(cat.points.size() == sc.size());
        for (size_t i = 0; i < sc.size(); ++i) {
            CHECK(std::abs(cat.points[i].value - sc[i].value) <= 1e-6 * sc[i].value);
            CHECK(std::abs(cat.points[i].curvature - sc[i].curvature) <=
                  1e-6 * std::abs(sc[i].curvature));
            CHECK(cat.points[i].k == sc[i].k);
        }
    }
}

TEST_CASE("gamma catalog") {
    const SpectralKernel ker = cosine_fixture();
    SUBCASE("exact fixture point") {
        TwoSpeciesParams p{1.0, kTwoPi, 1.0, 1.0, 0.0, +1, +1};
        const auto cat = gamma_points(p, ker);
        REQUIRE(cat.points.size() == 1);
        const auto& bp = cat.points[0];
        CHECK(bp.value == doctest::Approx(1.0).epsilon(1e-14));
        REQUIRE(bp.c.has_value());
        CHECK(*bp.c == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(bp.phase == Phase::in_phase);
        CHECK(bp.curvature == doctest::Approx(2.0 * kPi).epsilon(1e-14));
        CHECK(bp.criticality == Criticality::supercritical);
    }
    SUBCASE("alpha_i = 0 gives gamma_k = |h_k|") {
        const SpectralKernel th = cosine_transform(KernelSpec::tophat(kPi / 5.0, +1), kTwoPi, 64);
        TwoSpeciesParams p{1.0, kTwoPi, 0.0, 0.0, 0.0, +1, +1};
        const auto cat = gamma_points(p, th);
        for (const auto& bp : cat.points) {
            const auto h = h_k(th, 1.0, kTwoPi, bp.k);
            REQUIRE(h.has_value());
            CHECK(bp.value == doctest::Approx(std::abs(*h)).epsilon(1e-12));
        }
    }
    SUBCASE("sign mismatch is excluded") {
        TwoSpeciesParams p{1.0, kTwoPi, 3.0, 0.0, 0.0, +1, +1};    // h_1 = -2: f1 = 1, f2 = -2
        const auto cat = gamma_points(p, ker);
        CHECK(cat.points.empty());
        REQUIRE(cat.excluded_sign_mismatch.size() == 1);
        CHECK(cat.excluded_sign_mismatch[0] == 1);
    }
}

TEST_CASE("determinant and eigenvalue consistency at catalog points") {
    std::mt19937 rng(2024);
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto d = oracle::random_draw(rng);
        TwoSpeciesParams p = d.params;

        // At a generic catalog point the mode-k symbol is singular: one of the
        // two roots vanishes (the positive root only at points of critical
        // stability, where the rest of the spectrum is still stable).
        auto vanishing_root = [&](const TwoSpeciesParams& q, int k) {
            const auto [lm, lp] = two_species_eigenvalues(q, d.kernel, k);
            const double w2 = std::pow(2.0 * kPi * k / q.L, 2);
            return std::min(std::abs(lm), std::abs(lp)) <= 1e-9 * q.sigma * w2;
        };
        const auto a1 = alpha1_points(p, d.kernel);
        for (const auto& bp : a1.points) {
            TwoSpeciesParams q = p;
            q.alpha1 = bp.value;
            CHECK(std::abs(mode_block_det(q, d.kernel, bp.k)) <= 1e-10 * 100.0);
            CHECK(vanishing_root(q, bp.k));
            ++checked;
        }
        const auto g = gamma_points(p, d.kernel);
        for (const auto& bp : g.points) {
            TwoSpeciesParams q = p;
            q.gamma = bp.value;
            CHECK(std::abs(mode_block_det(q, d.kernel, bp.k)) <= 1e-10 * 100.0);
            CHECK(vanishing_root(q, bp.k));
            ++checked;
        }
        // At points of critical stability the vanishing root is lambda_plus.
        const KernelSummary s = kernel_summary(d.kernel, d.params.sigma, d.params.L);
        const bool simple = (!std::isfinite(s.alpha_star_plus) || s.simple_min) &&
                            (!std::isfinite(s.alpha_star_minus) || s.simple_max);
        if (simple) {
            const auto repg = critical_stability_gamma(p, s, d.kernel);
            for (const auto& cp : repg.points) {
                TwoSpeciesParams q = p;
                q.gamma = cp.value;
                const double lp = two_species_eigenvalues(q, d.kernel, cp.k).second;
                const double w2 = std::pow(2.0 * kPi * cp.k / q.L, 2);
                CHECK(std::abs(lp) <= 1e-9 * q.sigma * w2);
            }
            if (p.gamma > 0.0) {
                const auto repa = critical_stability_alpha1(p, s, d.kernel);
                for (const auto& cp : repa.points) {
                    TwoSpeciesParams q = p;
                    q.alpha1 = cp.value;
                    const double lp = two_species_eigenvalues(q, d.kernel, cp.k).second;
                    const double w2 = std::pow(2.0 * kPi * cp.k / q.L, 2);
                    CHECK(std::abs(lp) <= 1e-9 * q.sigma * w2);
                }
            }
        }
    }
    CHECK(checked > 1000);    // the draw box must actually exercise the catalogs
}

TEST_CASE("critical stability in alpha1") {
    const SpectralKernel ker = cosine_fixture();
    const KernelSummary sum = kernel_summary(ker, 1.0, kTwoPi);
    SUBCASE("single point for the cosine fixture (alpha*(-W) infinite)") {
        TwoSpeciesParams p{1.0, kTwoPi, 0.0, 1.0, 1.0, +1, +1};
        const auto rep = critical_stability_alpha1(p, sum, ker);
        CHECK(rep.status == StabilityCase::one_point);
        REQUIRE(rep.points.size() == 1);
        CHECK(rep.points[0].value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rep.points[0].k == 1);
        CHECK(rep.points[0].criticality == Criticality::supercritical);
        CHECK(rep.points[0].phase == Phase::in_phase);
        CHECK(rep.points[0].exchange);
        TwoSpeciesParams lo = p, hi = p;
        lo.alpha1 = 0.99;
        hi.alpha1 = 1.01;
        CHECK(max_growth_rate(lo, ker) < 0.0);
        CHECK(max_growth_rate(hi, ker) > 0.0);
    }
    SUBCASE("condition on (chi2 alpha2, gamma) violated: none") {
        TwoSpeciesParams p{1.0, kTwoPi, 0.0, 3.0, 1.0, +1, +1};    // z2 = 3 > alpha*(W) = 2
        const auto rep = critical_stability_alpha1(p, sum, ker);
        CHECK(rep.status == StabilityCase::none);
    }
    SUBCASE("adhesion scenario: two points, island confirmed by the scan") {
        const SpectralKernel th = cosine_transform(KernelSpec::tophat(1.25, +1), kTwoPi, 128);
        const KernelSummary s = kernel_summary(th, 1.0, kTwoPi);
        TwoSpeciesParams p{1.0, kTwoPi, 3.5, 6.0, 12.0, +1, +1};
        const auto rep = critical_stability_alpha1(p, s, th);
        REQUIRE(rep.status == StabilityCase::two_points);
        REQUIRE(rep.points.size() == 2);
        const auto& lo = rep.points[0];
        const auto& hi = rep.points[1];
        CHECK(lo.criticality == Criticality::subcritical);
        CHECK(lo.phase == Phase::out_of_phase);
        CHECK(lo.k == *s.k_minus_W);
        CHECK(lo.direction == CriticalPoint::Direction::decreasing);
        CHECK(hi.criticality == Criticality::supercritical);
        CHECK(hi.phase == Phase::in_phase);
        CHECK(hi.k == *s.k_W);
        CHECK(hi.direction == CriticalPoint::Direction::increasing);
        for (double a1 = 0.25; a1 < 32.0; a1 += 0.25) {
            TwoSpeciesParams q = p;
            q.alpha1 = a1;
            const bool inside = a1 > lo.value && a1 < hi.value;
            if (std::min(std::abs(a1 - lo.value), std::abs(a1 - hi.value)) < 1e-3) continue;
            CHECK((max_growth_rate(q, th) < 0.0) == inside);
        }
    }
    SUBCASE("chi1 = -1 mirror: two points on the negative-z side") {
        const SpectralKernel th = cosine_transform(KernelSpec::tophat(1.25, -1), kTwoPi, 128);
        const KernelSummary s = kernel_summary(th, 1.0, kTwoPi);
        TwoSpeciesParams plus{1.0, kTwoPi, 3.5, 6.0, 8.8, +1, +1};
        CHECK(critical_stability_alpha1(plus, s, th).status == StabilityCase::none);
        TwoSpeciesParams minus{1.0, kTwoPi, 3.5, 6.0, 8.8, -1, +1};
        const auto rep = critical_stability_alpha1(minus, s, th);
        REQUIRE(rep.status == StabilityCase::two_points);
        for (double a1 = 24.0; a1 < 33.0; a1 += 0.5) {
            TwoSpeciesParams q = minus;
            q.alpha1 = a1;
            const bool inside = a1 > rep.points[0].value && a1 < rep.points[1].value;
            if (std::min(std::abs(a1 - rep.points[0].value), std::abs(a1 - rep.points[1].value)) <
                1e-3)
                continue;
            CHECK((max_growth_rate(q, th) < 0.0) == inside);
        }
    }
}

TEST_CASE("critical stability in gamma") {
    const SpectralKernel ker = cosine_fixture();
    const KernelSummary sum = kernel_summary(ker, 1.0, kTwoPi);
    SUBCASE("cosine fixture: gamma* = 1 at k = 1, supercritical, in phase") {
        TwoSpeciesParams p{1.0, kTwoPi, 1.0, 1.0, 0.0, +1, +1};
        const auto rep = critical_stability_gamma(p, sum, ker);
        REQUIRE(rep.status == StabilityCase::one_point);
        CHECK(rep.points[0].value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rep.points[0].k == 1);
        CHECK(rep.points[0].criticality == Criticality::supercritical);
        CHECK(rep.points[0].phase == Phase::in_phase);
        TwoSpeciesParams lo = p, hi = p;
        lo.gamma = 0.99;
        hi.gamma = 1.01;
        CHECK(max_growth_rate(lo, ker) < 0.0);
        CHECK(max_growth_rate(hi, ker) > 0.0);
    }
    SUBCASE("S* > 0 selects k_{-W}") {
        const SpectralKernel th = cosine_transform(KernelSpec::tophat(kPi / 5.0, +1), kTwoPi, 128);
        const KernelSummary s = kernel_summary(th, 1.0, kTwoPi);
        TwoSpeciesParams p{1.0, kTwoPi, 0.0, 0.0, 0.0, +1, +1};
        const auto rep = critical_stability_gamma(p, s, th);
        REQUIRE(rep.status == StabilityCase::one_point);
        CHECK(rep.points[0].k == *s.k_minus_W);
        CHECK(rep.points[0].value == doctest::Approx(s.alpha_star_minus).epsilon(1e-12));
        CHECK(rep.points[0].phase == Phase::out_of_phase);
        CHECK(rep.points[0].criticality == Criticality::supercritical);
    }
    SUBCASE("box violated: none") {
        TwoSpeciesParams p{1.0, kTwoPi, 2.5, 1.0, 0.0, +1, +1};    // z1 > alpha*(W)
        CHECK(critical_stability_gamma(p, sum, ker).status == StabilityCase::none);
    }
    SUBCASE("S* = 0 two-mode kernel reports degenerate") {
        std::vector<double> coef(16, 0.0);
        coef[0] = -std::sqrt(kPi);
        coef[1] = +std::sqrt(kPi);
        const SpectralKernel two = SpectralKernel::from_coefficients(kTwoPi, coef);
        const KernelSummary s = kernel_summary(two, 1.0, kTwoPi);
        TwoSpeciesParams p{1.0, kTwoPi, 0.0, 0.0, 0.0, +1, +1};
        const auto rep = critical_stability_gamma(p, s, two);
        CHECK(rep.status == StabilityCase::degenerate);
        CHECK(rep.degenerate_wavenumbers.size() == 2);
    }
    SUBCASE("emitted first branch is always supercritical; phase follows the wavenumber") {
        std::mt19937 rng(71);
        for (int trial = 0; trial < 300; ++trial) {
            const auto d = oracle::random_draw(rng);
            const KernelSummary s = kernel_summary(d.kernel, d.params.sigma, d.params.L);
            if ((std::isfinite(s.alpha_star_plus) && !s.simple_min) ||
                (std::isfinite(s.alpha_star_minus) && !s.simple_max))
                continue;
            const auto rep = critical_stability_gamma(d.params, s, d.kernel);
            if (rep.status != StabilityCase::one_point) continue;
            CHECK(rep.points[0].criticality == Criticality::supercritical);
            if (s.k_W && rep.points[0].k == *s.k_W) CHECK(rep.points[0].phase == Phase::in_phase);
            if (s.k_minus_W && rep.points[0].k == *s.k_minus_W)
                CHECK(rep.points[0].phase == Phase::out_of_phase);
        }
    }
}

TEST_CASE("branch expansion") {
    const TorusGrid g(kTwoPi, 64);
    BifurcationPoint bp;
    bp.kind = ParamKind::scalar_alpha;
    bp.value = 2.0;
    bp.k = 1;
    bp.curvature = kTwoPi;
    SUBCASE("s = 0 is homogeneous") {
        const GridState st = branch_expansion(bp, 0.0, g);
        CHECK(l2_distance_to_homogeneous(st) == 0.0);
        CHECK(st.scalar());
    }
    SUBCASE("quadratic prediction inverts to the seed amplitude") {
        const auto s = predicted_amplitude(bp, 2.2);
        REQUIRE(s.has_value());
        CHECK(*s == doctest::Approx(0.25231).epsilon(1e-4));
        CHECK_FALSE(predicted_amplitude(bp, 1.9).has_value());
        CHECK(branch_parameter_prediction(bp, *s) == doctest::Approx(2.2).epsilon(1e-12));
    }
    SUBCASE("in-phase direction gives equal components") {
        BifurcationPoint two = bp;
        two.kind = ParamKind::gamma;
        two.c = 1.0;
        const GridState st = branch_expansion(two, 0.1, g);
        REQUIRE_FALSE(st.scalar());
        for (int j = 0; j < g.N; ++j) CHECK(st.u1[j] == doctest::Approx(st.u2[j]).epsilon(1e-15));
        CHECK(st.mass(1) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(st.mass(2) == doctest::Approx(1.0).epsilon(1e-13));
    }
}
