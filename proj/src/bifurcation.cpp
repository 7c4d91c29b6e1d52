#include "adlab/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace adlab {

namespace {
constexpr double kEpsCardRel = 1e-9;
const double kInf = std::numeric_limits<double>::infinity();

double resonance_eps(double h, double other) { return 1e-9 * (1.0 + std::abs(h) + std::abs(other)); }

// Flag near-equal critical values (relative scale) across a candidate list.
void flag_cardinality(std::vector<BifurcationPoint>& pts, const std::vector<double>& all_values) {
    for (auto& p : pts) {
        int hits = 0;
        for (double v : all_values)
            if (std::abs(v - p.value) <= kEpsCardRel * std::max(1.0, std::abs(p.value))) ++hits;
        if (hits > 1) p.simple = false;
    }
}

void sort_points(std::vector<BifurcationPoint>& pts) {
    std::sort(pts.begin(), pts.end(),
              [](const BifurcationPoint& a, const BifurcationPoint& b) { return a.value < b.value; });
}

Phase phase_of(double c) { return c > 0.0 ? Phase::in_phase : Phase::out_of_phase; }
}    // namespace

std::vector<BifurcationPoint> scalar_points(const ScalarParams& p, const SpectralKernel& spectral) {
    p.validate();
    std::vector<BifurcationPoint> pts;
    std::vector<double> values;
    for (int k = 1; k <= spectral.kmax(); ++k) {
        const auto hk = h_k(spectral, p.sigma, p.L, k);
        if (!hk) continue;
        const double alpha_k = -*hk;    // = -sigma sqrt(2L)/W~(k)
        values.push_back(alpha_k);
        if (alpha_k <= 0.0) continue;   // W~(k) > 0 never bifurcates
        BifurcationPoint bp;
        bp.kind = ParamKind::scalar_alpha;
        bp.value = alpha_k;
        bp.k = k;
        bp.curvature = 0.5 * p.L * alpha_k;
        bp.criticality = Criticality::supercritical;
        bp.phase = Phase::not_applicable;
        pts.push_back(bp);
    }
    flag_cardinality(pts, values);
    sort_points(pts);
    return pts;
}

Alpha1Catalog alpha1_points(const TwoSpeciesParams& p, const SpectralKernel& spectral) {
    p.validate();
    Alpha1Catalog cat;
    std::vector<double> values;
    for (int k = 1; k <= spectral.kmax(); ++k) {
        const auto hk = h_k(spectral, p.sigma, p.L, k);
        if (!hk) continue;
        const double h = *hk;
        const double denom = h + p.z2();
        if (std::abs(denom) <= resonance_eps(h, p.z2())) {
            cat.resonant_skipped.push_back(k);
            continue;
        }
        const double ratio = p.gamma / denom;
        const double a1k = -p.chi1 * (h - p.gamma * ratio);
        values.push_back(a1k);
        if (a1k <= 0.0) continue;
        BifurcationPoint bp;
        bp.kind = ParamKind::alpha1;
        bp.value = a1k;
        bp.k = k;
        bp.c = -ratio;
        bp.curvature = -0.5 * p.chi1 * p.L * h * (1.0 + ratio * ratio * ratio * ratio);
        bp.criticality = p.chi1 * h < 0.0 ? Criticality::supercritical : Criticality::subcritical;
        bp.phase = p.gamma == 0.0 ? Phase::not_applicable : phase_of(*bp.c);
        cat.points.push_back(bp);
    }
    flag_cardinality(cat.points, values);
    sort_points(cat.points);
    return cat;
}

GammaCatalog gamma_points(const TwoSpeciesParams& p, const SpectralKernel& spectral) {
    p.validate();
    GammaCatalog cat;
    std::vector<double> values;
    for (int k = 1; k <= spectral.kmax(); ++k) {
        const auto hk = h_k(spectral, p.sigma, p.L, k);
        if (!hk) continue;
        const double h = *hk;
        const double f1 = h + p.z1();
        const double f2 = h + p.z2();
        if (std::abs(f1) <= resonance_eps(h, p.z1()) || std::abs(f2) <= resonance_eps(h, p.z2())) {
            cat.resonant_skipped.push_back(k);
            continue;
        }
        if ((f1 > 0.0) != (f2 > 0.0)) {
            cat.excluded_sign_mismatch.push_back(k);
            continue;
        }
        const double gk = std::sqrt(f1 * f2);
        values.push_back(gk);
        const double ratio = f1 / f2;
        const double c = -(f1 > 0.0 ? 1.0 : -1.0) * std::sqrt(ratio);
        BifurcationPoint bp;
        bp.kind = ParamKind::gamma;
        bp.value = gk;
        bp.k = k;
        bp.c = c;
        bp.curvature = -p.L * h / (4.0 * c) * (1.0 + ratio * ratio);
        bp.criticality = (h > 0.0) == (f1 > 0.0) ? Criticality::supercritical : Criticality::subcritical;
        bp.phase = phase_of(c);
        cat.points.push_back(bp);
    }
    flag_cardinality(cat.points, values);
    sort_points(cat.points);
    return cat;
}

namespace {

void require_simple_extrema(const KernelSummary& summary) {
    if ((std::isfinite(summary.alpha_star_plus) && !summary.simple_min) ||
        (std::isfinite(summary.alpha_star_minus) && !summary.simple_max))
        throw std::runtime_error(
            "critical stability: kernel extremum attained at multiple wavenumbers; "
            "classification requires a simple critical mode");
}

// z-coordinate of the det A_k = 0 surface at wavenumber of h, fixed (z2, gamma).
double z_of(double h, double z2, double gamma) { return -(h - gamma * gamma / (h + z2)); }

bool near_valued(double v, const std::vector<double>& values) {
    int hits = 0;
    for (double w : values)
        if (std::abs(w - v) <= kEpsCardRel * std::max(1.0, std::abs(v))) ++hits;
    return hits > 1;
}

}    // namespace

CriticalStabilityReport critical_stability_alpha1(const TwoSpeciesParams& p,
                                                  const KernelSummary& summary,
                                                  const SpectralKernel& spectral) {
    p.validate();
    require_simple_extrema(summary);
    const double A = summary.alpha_star_plus;
    const double B = summary.alpha_star_minus;

    CriticalStabilityReport rep;
    rep.kind = ParamKind::alpha1;

    // fixed (chi2 alpha2, gamma) must admit a non-empty stability region
    if (!(-B < p.z2() && p.z2() < A) || !(p.gamma > 0.0) || !(p.gamma < 0.5 * (A + B))) {
        rep.status = StabilityCase::none;
        rep.note = "condition on (chi2*alpha2, gamma) fails: unstable for all alpha1 >= 0";
        return rep;
    }

    // Stability interval in z = chi1*alpha1: (z_lo, z_hi), endpoints from the
    // two binding wavenumbers k_{-W} (lower) and k_W (upper).
    const double z_lo = std::isfinite(B) ? z_of(B, p.z2(), p.gamma) : -kInf;
    const double z_hi = std::isfinite(A) ? z_of(-A, p.z2(), p.gamma) : kInf;

    const double eps_deg = 1e-9 * (1.0 + std::abs(z_lo) + std::abs(z_hi));
    if (z_hi <= z_lo + eps_deg) {
        if (std::isfinite(z_lo) && std::isfinite(z_hi) && std::abs(z_hi - z_lo) <= eps_deg) {
            rep.status = StabilityCase::degenerate;
            if (summary.k_W) rep.degenerate_wavenumbers.push_back(*summary.k_W);
            if (summary.k_minus_W) rep.degenerate_wavenumbers.push_back(*summary.k_minus_W);
            rep.note = "stability interval collapses: both constraints bind simultaneously";
        } else {
            rep.status = StabilityCase::none;
            rep.note = "empty alpha1 slice at this (chi2*alpha2, gamma)";
        }
        return rep;
    }

    // Map to alpha1 >= 0.
    const double lo = p.chi1 == +1 ? z_lo : (std::isfinite(z_hi) ? -z_hi : -kInf);
    const double hi = p.chi1 == +1 ? z_hi : (std::isfinite(z_lo) ? -z_lo : kInf);
    const int k_lower = p.chi1 == +1 ? summary.k_minus_W.value_or(0) : summary.k_W.value_or(0);
    const int k_upper = p.chi1 == +1 ? summary.k_W.value_or(0) : summary.k_minus_W.value_or(0);

    if (hi <= 0.0) {
        rep.status = StabilityCase::none;
        rep.note = "stability interval lies in alpha1 < 0: unstable for all alpha1 >= 0";
        return rep;
    }
    rep.stable_interval = {std::max(lo, 0.0), hi};

    // Cardinality context: all candidate critical alpha1 values at these (z2, gamma).
    std::vector<double> all_values;
    for (int k = 1; k <= spectral.kmax(); ++k) {
        const auto hk = h_k(spectral, p.sigma, p.L, k);
        if (!hk) continue;
        const double denom = *hk + p.z2();
        if (std::abs(denom) <= resonance_eps(*hk, p.z2())) continue;
        all_values.push_back(p.chi1 * z_of(*hk, p.z2(), p.gamma));
    }

    auto emit = [&](double value, CriticalPoint::Direction dir, int k) {
        CriticalPoint cp;
        cp.value = value;
        cp.direction = dir;
        cp.k = k;
        const double h = k == summary.k_W.value_or(-1) ? -A : B;
        cp.criticality = p.chi1 * h < 0.0 ? Criticality::supercritical : Criticality::subcritical;
        cp.phase = phase_of(-p.gamma / (h + p.z2()));
        cp.exchange = !near_valued(value, all_values);
        rep.points.push_back(cp);
    };

    if (lo > 0.0 && k_lower > 0) emit(lo, CriticalPoint::Direction::decreasing, k_lower);
    if (std::isfinite(hi) && k_upper > 0) emit(hi, CriticalPoint::Direction::increasing, k_upper);

    rep.status = rep.points.size() == 2   ? StabilityCase::two_points
                 : rep.points.size() == 1 ? StabilityCase::one_point
                                          : StabilityCase::none;
    if (rep.points.empty()) rep.note = "stable for all alpha1 >= 0: no point of critical stability";
    std::sort(rep.points.begin(), rep.points.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.value < b.value; });
    return rep;
}

CriticalStabilityReport critical_stability_gamma(const TwoSpeciesParams& p,
                                                 const KernelSummary& summary,
                                                 const SpectralKernel& spectral) {
    p.validate();
    require_simple_extrema(summary);
    const double A = summary.alpha_star_plus;
    const double B = summary.alpha_star_minus;

    CriticalStabilityReport rep;
    rep.kind = ParamKind::gamma;

    const bool box = (-B < p.z1() && p.z1() < A) && (-B < p.z2() && p.z2() < A);
    if (!box) {
        rep.status = StabilityCase::none;
        rep.note = "necessary box violated: unstable for all gamma > 0";
        return rep;
    }
    if (!std::isfinite(A) && !std::isfinite(B)) {
        rep.status = StabilityCase::none;
        rep.note = "kernel has no active modes: stable for all gamma";
        rep.stable_interval = {0.0, kInf};
        return rep;
    }

    double S_star;
    if (std::isfinite(A) && std::isfinite(B)) {
        S_star = A - B - (p.z1() + p.z2());
        const double eps_deg = 1e-9 * (1.0 + std::abs(A) + std::abs(B));
        if (std::abs(S_star) <= eps_deg) {
            rep.status = StabilityCase::degenerate;
            if (summary.k_W) rep.degenerate_wavenumbers.push_back(*summary.k_W);
            if (summary.k_minus_W) rep.degenerate_wavenumbers.push_back(*summary.k_minus_W);
            rep.note = "S* = 0: kernel of the linearised operator is two-dimensional";
            return rep;
        }
    } else {
        // exactly one branch infinite: it never binds
        S_star = std::isfinite(A) ? -kInf : kInf;
    }

    const bool at_kW = S_star < 0.0;
    const int k_star = at_kW ? summary.k_W.value_or(0) : summary.k_minus_W.value_or(0);
    if (k_star == 0) {
        rep.status = StabilityCase::none;
        rep.note = "binding branch has no critical wavenumber";
        return rep;
    }
    const double h = at_kW ? -A : B;
    const double f1 = h + p.z1(), f2 = h + p.z2();
    const double gamma_star = std::sqrt(f1 * f2);

    // Cardinality context among all candidate gamma_k at these (z1, z2).
    std::vector<double> all_values;
    for (int k = 1; k <= spectral.kmax(); ++k) {
        const auto hk = h_k(spectral, p.sigma, p.L, k);
        if (!hk) continue;
        const double a = *hk + p.z1(), b = *hk + p.z2();
        if ((a > 0.0) == (b > 0.0) && std::abs(a) > 0.0 && std::abs(b) > 0.0)
            all_values.push_back(std::sqrt(a * b));
    }

    CriticalPoint cp;
    cp.value = gamma_star;
    cp.direction = CriticalPoint::Direction::increasing;
    cp.k = k_star;
    cp.criticality = Criticality::supercritical;    // first gamma branch, inside the box
    cp.phase = at_kW ? Phase::in_phase : Phase::out_of_phase;
    cp.exchange = !near_valued(gamma_star, all_values);
    rep.points.push_back(cp);
    rep.status = StabilityCase::one_point;
    rep.stable_interval = {0.0, gamma_star};
    return rep;
}

GridState branch_expansion(const BifurcationPoint& bp, double s, const TorusGrid& grid) {
    const bool two = bp.kind != ParamKind::scalar_alpha;
    GridState st = GridState::homogeneous(grid, two);
    const double norm = std::sqrt(2.0 / grid.L);
    const double c = bp.c.value_or(1.0);
    for (int j = 0; j < grid.N; ++j) {
        const double wk = norm * std::cos(2.0 * std::numbers::pi * bp.k * grid.node(j) / grid.L);
        st.u1[j] += s * wk;
        if (two) st.u2[j] += s * c * wk;
    }
    return st;
}

double branch_parameter_prediction(const BifurcationPoint& bp, double s) {
    return bp.value + 0.5 * bp.curvature * s * s;
}

std::optional<double> predicted_amplitude(const BifurcationPoint& bp, double nu) {
    const double t = 2.0 * (nu - bp.value) / bp.curvature;
    if (t < 0.0) return std::nullopt;
    return std::sqrt(t);
}

double mode_block_det(const TwoSpeciesParams& p, const SpectralKernel& spectral, int k) {
    const auto hk = h_k(spectral, p.sigma, p.L, k);
    if (!hk) return 1.0;    // identity block on dead modes
    const double h = *hk;
    return (1.0 + p.z1() / h) * (1.0 + p.z2() / h) - (p.gamma / h) * (p.gamma / h);
}

}  // namespace adlab
