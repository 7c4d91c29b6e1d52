#include "adlab/stability.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace adlab {

namespace {
constexpr double kPi = std::numbers::pi;
const double kInf = std::numeric_limits<double>::infinity();
}

void ScalarParams::validate() const {
    if (sigma <= 0.0) throw std::invalid_argument("params: sigma must be positive");
    if (L <= 0.0) throw std::invalid_argument("params: L must be positive");
    if (alpha < 0.0) throw std::invalid_argument("params: alpha must be >= 0");
}

void TwoSpeciesParams::validate() const {
    if (sigma <= 0.0) throw std::invalid_argument("params: sigma must be positive");
    if (L <= 0.0) throw std::invalid_argument("params: L must be positive");
    if (alpha1 < 0.0 || alpha2 < 0.0) throw std::invalid_argument("params: alpha_i must be >= 0");
    if (gamma < 0.0) throw std::invalid_argument("params: gamma must be >= 0");
    if ((chi1 != 1 && chi1 != -1) || (chi2 != 1 && chi2 != -1))
        throw std::invalid_argument("params: chi_i must be +1 or -1");
}

namespace {
// -(2 pi k/L)^2 (sigma + z W~(k)/sqrt(2L)); shared by the scalar relation and
// the gamma = 0 reduction so the decoupled eigenvalues match bitwise.
double dispersion(double sigma, double L, double z, double coef, int k) {
    const double w = 2.0 * kPi * k / L;
    return -w * w * (sigma + z * coef / std::sqrt(2.0 * L));
}
}

double scalar_eigenvalue(const ScalarParams& p, const SpectralKernel& spectral, int k) {
    if (k < 1) throw std::invalid_argument("scalar_eigenvalue: k >= 1 required");
    return dispersion(p.sigma, p.L, p.alpha, spectral.coef_at(k), k);
}

std::pair<double, double> two_species_eigenvalues(const TwoSpeciesParams& p,
                                                  const SpectralKernel& spectral, int k) {
    if (k < 1) throw std::invalid_argument("two_species_eigenvalues: k >= 1 required");
    const double coef = spectral.coef_at(k);
    if (p.gamma == 0.0) {
        // decoupled: exactly the two scalar eigenvalues
        const double l1 = dispersion(p.sigma, p.L, p.z1(), coef, k);
        const double l2 = dispersion(p.sigma, p.L, p.z2(), coef, k);
        return l1 <= l2 ? std::make_pair(l1, l2) : std::make_pair(l2, l1);
    }
    const double w2 = std::pow(2.0 * kPi * k / p.L, 2);
    const double c = coef / std::sqrt(2.0 * p.L);
    const double g1 = p.sigma + p.z1() * c;
    const double g2 = p.sigma + p.z2() * c;
    const double off = p.gamma * c;
    const double disc = std::sqrt((g1 - g2) * (g1 - g2) + 4.0 * off * off);
    return {0.5 * (-w2 * (g1 + g2) - w2 * disc), 0.5 * (-w2 * (g1 + g2) + w2 * disc)};
}

StabilityVerdict stability_verdict(const TwoSpeciesParams& p, const KernelSummary& summary) {
    const double A = summary.alpha_star_plus;     // alpha*(W)
    const double B = summary.alpha_star_minus;    // alpha*(-W)
    const double z1 = p.z1(), z2 = p.z2();

    StabilityVerdict v;
    v.necessary_box_ok = (-B < z1 && z1 < A) && (-B < z2 && z2 < A);

    // An infinite branch never binds: +inf short-circuits the min.
    const double plus_margin = std::isfinite(A)
                                   ? (A - z1) * (A - z2) - p.gamma * p.gamma
                                   : kInf;
    const double minus_margin = std::isfinite(B)
                                    ? (B + z1) * (B + z2) - p.gamma * p.gamma
                                    : kInf;
    if (plus_margin <= minus_margin) {
        v.margin = plus_margin;
        v.binding = std::isfinite(plus_margin) ? BindingBranch::plusW : BindingBranch::none;
    } else {
        v.margin = minus_margin;
        v.binding = BindingBranch::minusW;
    }

    if (std::isfinite(A) || std::isfinite(B)) {
        v.S_star = A - B - (z1 + z2);    // +-inf when exactly one branch is infinite
    } else {
        v.S_star = std::numeric_limits<double>::quiet_NaN();
    }
    if (std::isfinite(v.S_star)) {
        const double eps_deg = 1e-9 * (1.0 + std::abs(A) + std::abs(B));
        v.degenerate = std::abs(v.S_star) <= eps_deg;
    }

    // Mean condition: -alpha*(-W) < (z1+z2)/2 < alpha*(W); with the margin
    // condition this is the full iff of the dispersion analysis.
    const double mean = 0.5 * (z1 + z2);
    const bool mean_ok = (mean < A) && (-B < mean);
    v.stable = mean_ok && v.margin > 0.0;
    return v;
}

std::pair<double, double> xi_roots(const TwoSpeciesParams& p) {
    const double s = 0.5 * (p.z1() + p.z2());
    const double d = 0.5 * (p.z1() - p.z2());
    const double r = std::sqrt(d * d + p.gamma * p.gamma);
    return {-s - r, -s + r};
}

RegionBoundary region_boundary(const KernelSummary& summary, double gamma, int samples) {
    const double A = summary.alpha_star_plus;
    const double B = summary.alpha_star_minus;
    if (!std::isfinite(A) || !std::isfinite(B))
        throw std::invalid_argument("region_boundary: requires both alpha*(+-W) finite");
    if (gamma < 0.0) throw std::invalid_argument("region_boundary: gamma must be >= 0");
    if (samples < 2) throw std::invalid_argument("region_boundary: samples >= 2 required");

    RegionBoundary rb;
    const double gbar = 0.5 * (A + B);
    if (gamma >= gbar) {
        rb.empty_region = true;
        return rb;
    }

    // Intersections of the two boundary curves on S* = 0.
    const double mid = 0.5 * (A - B);
    const double half = std::sqrt(gbar * gbar - gamma * gamma);
    const double z1_lo = mid - half, z1_hi = mid + half;

    rb.upper.reserve(samples);
    rb.lower.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double t = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
        const double z1 = z1_lo + t * (z1_hi - z1_lo);
        double up, lo;
        if (gamma == 0.0) {
            up = A;
            lo = -B;
        } else {
            up = A - gamma * gamma / (A - z1);
            lo = -B + gamma * gamma / (B + z1);
        }
        rb.upper.push_back({z1, up});
        rb.lower.push_back({z1, lo});
    }
    return rb;
}

double max_growth_rate(const TwoSpeciesParams& p, const SpectralKernel& spectral) {
    double m = -kInf;
    for (int k = 1; k <= spectral.kmax(); ++k)
        m = std::max(m, two_species_eigenvalues(p, spectral, k).second);
    return m;
}

int max_growth_wavenumber(const TwoSpeciesParams& p, const SpectralKernel& spectral) {
    double m = -kInf;
    int km = 1;
    for (int k = 1; k <= spectral.kmax(); ++k) {
        const double l = two_species_eigenvalues(p, spectral, k).second;
        if (l > m) { m = l; km = k; }
    }
    return km;
}

}  // namespace adlab
