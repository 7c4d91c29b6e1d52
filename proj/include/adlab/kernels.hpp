#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adlab/grid.hpp"

namespace adlab {

enum class KernelVariant { tophat, cosine, tabulated };

/// Declarative kernel description. All variants represent even, zero-mean
/// kernels; the constant Fourier mode is subtracted on construction.
struct KernelSpec {
    KernelVariant variant = KernelVariant::cosine;

    // tophat: sign/(2R) on |x| <= R, zero-mean shifted. Requires 0 < R < L/2.
    double R = 0.0;
    int sign = +1;

    // cosine: amplitude * cos(2*pi*m*x/L).
    int m = 1;
    double amplitude = 0.0;

    // tabulated: samples of one period, x ascending.
    std::vector<double> xs, values;

    static KernelSpec tophat(double R, int sign);
    static KernelSpec cosine(int m, double amplitude);
    static KernelSpec tabulated(std::vector<double> xs, std::vector<double> values);
};

enum class Provenance { analytic, quadrature };

/// Truncated cosine spectrum of a kernel plus the metadata downstream checks
/// need (tail certification, smoothness for the entropy bound, BV data).
struct SpectralKernel {
    double L = 0.0;
    std::vector<double> coef;          // W~(k), k = 1..K_max
    Provenance provenance = Provenance::analytic;

    KernelVariant variant = KernelVariant::cosine;
    double tophat_R = 0.0;             // valid for tophat
    int tophat_sign = +1;
    int cosine_m = 1;
    double cosine_amplitude = 0.0;
    bool smooth = true;                // false for tophat (BV only)

    int kmax() const { return static_cast<int>(coef.size()); }
    double coef_at(int k) const;       // 1-based, throws outside 1..K_max
    double max_abs_coef() const;
    double eps_zero() const;           // 1e-10 * max_k |W~(k)|

    // |W~(k)| bound for all k > kmax(), when a closed form is known.
    std::optional<double> tail_bound() const;

    // sup |W_xx| for smooth kernels (entropy-decay hypothesis); nullopt for tophat.
    std::optional<double> wxx_sup() const;

    static SpectralKernel from_coefficients(double L, std::vector<double> coef);
};

/// Cosine transform W~(k) = \int W w_k dx for k = 1..K_max. Closed forms for
/// tophat and cosine variants; composite Simpson on a refined grid for
/// tabulated samples. Tabulated input is rejected if its asymmetry exceeds
/// 1e-8 of the sup norm.
SpectralKernel cosine_transform(const KernelSpec& spec, double L, int K_max);

/// h_k = sigma*sqrt(2L)/W~(k); nullopt when |W~(k)| <= eps_zero.
std::optional<double> h_k(const SpectralKernel& spectral, double sigma, double L, int k);

struct KernelSummary {
    std::vector<int> k_plus;            // {k : W~(k) > eps_zero}
    std::vector<int> k_minus;           // {k : W~(k) < -eps_zero}
    double alpha_star_plus = 0.0;       // alpha*(W), +inf when k_minus empty
    double alpha_star_minus = 0.0;      // alpha*(-W), +inf when k_plus empty
    std::optional<int> k_W;             // argmin W~(k), absent on ties
    std::optional<int> k_minus_W;       // argmax W~(k), absent on ties
    bool simple_min = true;             // false when the argmin is attained twice
    bool simple_max = true;
    bool tail_certified = true;         // extremum provably interior to the scan
};

KernelSummary kernel_summary(const SpectralKernel& spectral, double sigma, double L);

/// Periodic convolution W*u as a truncated cosine-series product: mode k of u
/// is scaled by sqrt(L/2) * W~(k), mode 0 by zero. Exact for band-limited u.
/// Rejects 2*K_max > N (aliasing).
std::vector<double> convolve(const TorusGrid& grid, const SpectralKernel& spectral,
                             std::span<const double> u);

/// Same scaling applied directly in coefficient space.
TrigSpectrum convolve_spectrum(const SpectralKernel& spectral, const TrigSpectrum& u);

/// Direct O(N^2) quadrature convolution against the synthesized kernel grid;
/// reference path for tests and the benchmark.
std::vector<double> convolve_direct(const TorusGrid& grid, const SpectralKernel& spectral,
                                    std::span<const double> u);

/// Kernel values on the grid (synthesized from the truncated spectrum).
std::vector<double> kernel_on_grid(const TorusGrid& grid, const SpectralKernel& spectral);

}  // namespace adlab
