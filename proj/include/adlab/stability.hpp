#pragma once

#include <array>
#include <utility>
#include <vector>

#include "adlab/kernels.hpp"

namespace adlab {

struct ScalarParams {
    double sigma = 1.0;
    double L = 2.0 * 3.14159265358979323846;
    double alpha = 0.0;

    void validate() const;
};

/// Two-species coordinates (sigma, L, alpha_i, gamma, chi_i). Every formula
/// downstream runs on the composite coordinates z_i = chi_i * alpha_i.
struct TwoSpeciesParams {
    double sigma = 1.0;
    double L = 2.0 * 3.14159265358979323846;
    double alpha1 = 0.0, alpha2 = 0.0;
    double gamma = 0.0;
    int chi1 = +1, chi2 = +1;

    double z1() const { return chi1 * alpha1; }
    double z2() const { return chi2 * alpha2; }
    void validate() const;
};

/// lambda(k) = -(2 pi k/L)^2 (sigma + alpha W~(k)/sqrt(2L))
double scalar_eigenvalue(const ScalarParams& p, const SpectralKernel& spectral, int k);

/// Both roots of the 2x2 dispersion symbol, lambda_minus <= lambda_plus.
/// gamma == 0 returns the two scalar eigenvalues exactly.
std::pair<double, double> two_species_eigenvalues(const TwoSpeciesParams& p,
                                                  const SpectralKernel& spectral, int k);

enum class BindingBranch { plusW, minusW, none };

struct StabilityVerdict {
    bool stable = false;
    double S_star = 0.0;             // alpha*(W) - alpha*(-W) - (z1 + z2); NaN if both infinite
    BindingBranch binding = BindingBranch::none;
    double margin = 0.0;             // min of the two products minus gamma^2
    bool necessary_box_ok = false;   // -alpha*(-W) < z_i < alpha*(W), i = 1,2
    bool degenerate = false;         // |S*| below the degeneracy scale
};

StabilityVerdict stability_verdict(const TwoSpeciesParams& p, const KernelSummary& summary);

/// Roots of h^2 + (z1+z2) h + (z1 z2 - gamma^2): (xi-, xi+).
std::pair<double, double> xi_roots(const TwoSpeciesParams& p);

struct RegionBoundary {
    bool empty_region = false;                       // gamma >= gamma_bar
    std::vector<std::array<double, 2>> upper;        // (z1, z2) samples
    std::vector<std::array<double, 2>> lower;
};

/// Boundary of the linear-stability region in the (z1, z2)-plane at fixed
/// gamma, sampled between the two intersection points on S* = 0. Requires
/// both alpha*(+-W) finite.
RegionBoundary region_boundary(const KernelSummary& summary, double gamma, int samples);

/// Eigenvalue-scan oracle: max over k = 1..K_max of lambda_plus(k).
double max_growth_rate(const TwoSpeciesParams& p, const SpectralKernel& spectral);

/// Wavenumber attaining the scan maximum.
int max_growth_wavenumber(const TwoSpeciesParams& p, const SpectralKernel& spectral);

}  // namespace adlab
