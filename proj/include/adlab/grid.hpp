#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace adlab {

// Global thread budget for the OpenMP paths. 1 = serial reference path.
void set_threads(int n);
int threads();

/// Uniform periodic grid on the torus (-L/2, L/2), nodes x_j = -L/2 + j L/N.
struct TorusGrid {
    double L;
    int N;

    TorusGrid(double L_, int N_) : L(L_), N(N_) {
        if (L <= 0.0) throw std::invalid_argument("TorusGrid: L must be positive");
        if (N < 16 || N % 2 != 0) throw std::invalid_argument("TorusGrid: N must be an even integer >= 16");
    }

    double h() const { return L / N; }
    double node(int j) const { return -0.5 * L + j * h(); }
    std::vector<double> nodes() const;
};

// Trapezoidal quadrature on the uniform periodic grid (all weights h).
double integrate(const TorusGrid& g, std::span<const double> u);
double inner(const TorusGrid& g, std::span<const double> u, std::span<const double> v);
double l2_norm(const TorusGrid& g, std::span<const double> u);

/// Coefficients of a real periodic field against the orthonormal torus basis
///   w_0 = 1/sqrt(L),  w_k = sqrt(2/L) cos(2*pi*k x/L),  s_k = sqrt(2/L) sin(2*pi*k x/L).
struct TrigSpectrum {
    double a0 = 0.0;          // coefficient of w_0
    std::vector<double> a;    // cosine coefficients, k = 1..M
    std::vector<double> b;    // sine coefficients,   k = 1..M

    int modes() const { return static_cast<int>(a.size()); }
};

/// Precomputed mode tables for one (grid, M) pair. M <= N/2 - 1 so every
/// retained mode is alias-free on the grid. Analysis/synthesis run the OpenMP
/// path when threads() > 1 and an identical serial path otherwise; each output
/// entry is a self-contained inner loop, so both paths agree bitwise.
class TrigTransform {
public:
    TrigTransform(const TorusGrid& grid, int M);

    const TorusGrid& grid() const { return grid_; }
    int modes() const { return M_; }

    TrigSpectrum analyze(std::span<const double> u) const;
    std::vector<double> synthesize(const TrigSpectrum& s) const;

    // d/dx in coefficient space: cos_k -> -omega_k sin_k, sin_k -> +omega_k cos_k.
    TrigSpectrum derivative(const TrigSpectrum& s) const;

    double omega(int k) const;    // 2*pi*k/L

private:
    TorusGrid grid_;
    int M_;
    std::vector<double> cos_, sin_;    // [k-1][j] tables, row-major N per mode
};

// Spectral derivative of a grid field using all alias-free modes (M = N/2 - 1).
std::vector<double> spectral_derivative(const TorusGrid& g, std::span<const double> u);

// Even-part projection u(x) -> (u(x) + u(-x))/2, exact on the grid.
std::vector<double> symmetrize(std::span<const double> u);

// max_j |u(x_j) - u(-x_j)| asymmetry measure.
double evenness_defect(std::span<const double> u);

}  // namespace adlab
