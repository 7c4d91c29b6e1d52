#pragma once

// Shared test-side oracles, kept independent of the library code paths they
// check: composite Simpson on smooth pieces, analytic top-hat convolution via
// the windowed antiderivative, and random band-limited kernel/parameter draws.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "adlab/kernels.hpp"
#include "adlab/stability.hpp"

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

// Composite Simpson with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int j = 1; j < n; ++j) s += (j % 2 ? 4.0 : 2.0) * f(a + j * h);
    return s * h / 3.0;
}

// Cosine transform of the (mean-subtracted) top-hat by quadrature, integrating
// the smooth piece [-R, R] only; the constant part contributes nothing to k>=1.
inline double tophat_coef_quadrature(double R, int sign, double L, int k, int nodes = 20000) {
    const double height = sign / (2.0 * R);
    const double w = 2.0 * kPi * k / L;
    auto f = [&](double x) { return height * std::sqrt(2.0 / L) * std::cos(w * x); };
    return simpson(f, -R, R, nodes);
}

// W*u for the top-hat against a band-limited u given by cosine coefficients
// a[k-1] (orthonormal basis), via the windowed antiderivative: exact.
inline double tophat_convolution_exact(double R, int sign, double L,
                                       const std::vector<double>& a, double x) {
    const double height = sign / (2.0 * R);
    const double mean = sign * 1.0 / L;    // subtracted constant: (2R*height)/L
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const int k = static_cast<int>(i) + 1;
        const double w = 2.0 * kPi * k / L;
        // int_{x-R}^{x+R} cos(w y) dy = (sin(w(x+R)) - sin(w(x-R)))/w
        s += a[i] * std::sqrt(2.0 / L) * (std::sin(w * (x + R)) - std::sin(w * (x - R))) / w;
    }
    // subtract the zero-mean shift acting on u's mean part: mean * (mass over window - 2R/L * mass)
    // u's nonconstant modes integrate to the window expression; the kernel's
    // subtracted constant kills u's constant mode only, which carries no a[k].
    return height * s - 0.0 * mean;
}

struct RandomDraw {
    adlab::SpectralKernel kernel;
    adlab::TwoSpeciesParams params;
};

// Band-limited synthetic kernels (6 active cosine modes) plus occasional
// top-hats; parameters over a box that exercises both stable and unstable
// verdicts.
inline RandomDraw random_draw(std::mt19937& rng, int K_max = 128) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);

    RandomDraw d;
    const double L = 2.0 * kPi * (0.5 + 1.5 * unit(rng));
    const double sigma = 0.5 + 1.5 * unit(rng);
    if (unit(rng) < 0.25) {
        const double R = L * (0.05 + 0.35 * unit(rng));
        d.kernel = adlab::cosine_transform(adlab::KernelSpec::tophat(R, unit(rng) < 0.5 ? 1 : -1),
                                           L, K_max);
    } else {
        std::vector<double> coef(K_max, 0.0);
        for (int m = 0; m < 6; ++m) {
            const int k = 1 + static_cast<int>(unit(rng) * 12);
            coef[k - 1] += amp(rng);
        }
        d.kernel = adlab::SpectralKernel::from_coefficients(L, coef);
    }
    d.params.sigma = sigma;
    d.params.L = L;
    d.params.alpha1 = 6.0 * unit(rng);
    d.params.alpha2 = 6.0 * unit(rng);
    d.params.gamma = 5.0 * unit(rng);
    d.params.chi1 = unit(rng) < 0.5 ? +1 : -1;
    d.params.chi2 = unit(rng) < 0.5 ? +1 : -1;
    return d;
}

inline std::vector<double> random_band_limited(std::mt19937& rng, const adlab::TorusGrid& g,
                                               int K, double scale = 1.0, bool even_only = false) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::vector<double> u(g.N, 0.0);
    for (int k = 1; k <= K; ++k) {
        const double a = scale * amp(rng) / k;
        const double b = even_only ? 0.0 : scale * amp(rng) / k;
        for (int j = 0; j < g.N; ++j) {
            const double th = 2.0 * kPi * k * g.node(j) / g.L;
            u[j] += std::sqrt(2.0 / g.L) * (a * std::cos(th) + b * std::sin(th));
        }
    }
    return u;
}

}  // namespace oracle
