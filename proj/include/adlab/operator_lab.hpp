#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "adlab/bifurcation.hpp"
#include "adlab/state.hpp"

namespace adlab {

/// 2x2 block of I - D_u T at the homogeneous state on span{(w_k,0),(0,w_k)}.
struct ModeBlock {
    int k = 1;
    double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;
    double det = 1.0;
    bool singular = false;
    std::optional<double> c;       // kernel direction (1, c) when singular, gamma > 0
    bool identity_fallback = false;    // h_k undefined: G acts as identity
};

ModeBlock assemble_mode_block(const TwoSpeciesParams& p, const SpectralKernel& spectral, int k);

struct DerivativeProbe {
    std::string label;
    int order = 1;                 // 1, 2, 3; mixed probes use 2
    double analytic = 0.0;         // closed-form value (field norm or inner product)
    double fd = 0.0;               // finite-difference counterpart
    double rel_err = 0.0;
    double step = 0.0;             // fd step actually used
    bool plateau_flagged = false;  // tri-step comparison found no consistent regime
    bool inconclusive = false;     // value below 10x the fd noise estimate
};

/// Central finite differences of T at the homogeneous state in the direction
/// (w_k, c w_k), compared against the closed-form derivatives on the same grid.
/// rel_err compares the full derivative fields in L2.
DerivativeProbe fd_frechet(const TwoSpeciesParams& p, const SpectralKernel& spectral,
                           const TorusGrid& grid, int order, int k, double c);
DerivativeProbe fd_frechet(const ScalarParams& p, const SpectralKernel& spectral,
                           const TorusGrid& grid, int order, int k);

/// c0^2 <D^2_uu G [(w_k, c w_k)^2], (w_k, c w_k)>: zero by odd moments.
/// analytic = grid quadrature of the closed-form field; fd = same inner
/// product on the fd field.
DerivativeProbe quadratic_inner_product(const TwoSpeciesParams& p, const SpectralKernel& spectral,
                                     const TorusGrid& grid, int k, double c);

/// c0^2 <D^3_uuu G [(w_k, c w_k)^3], (w_k, c w_k)>.
DerivativeProbe third_inner_product(const TwoSpeciesParams& p, const SpectralKernel& spectral,
                                    const TorusGrid& grid, int k, double c);
DerivativeProbe third_inner_product(const ScalarParams& p, const SpectralKernel& spectral,
                                    const TorusGrid& grid, int k);

/// c0^2 <D^2_{u nu} G [v], v> for nu = alpha1 or gamma (from bp.kind), plus the
/// transversality assertion.
std::vector<DerivativeProbe> mixed_derivative_checks(const TwoSpeciesParams& p,
                                                     const SpectralKernel& spectral,
                                                     const TorusGrid& grid,
                                                     const BifurcationPoint& bp);
std::vector<DerivativeProbe> mixed_derivative_checks(const ScalarParams& p,
                                                     const SpectralKernel& spectral,
                                                     const TorusGrid& grid,
                                                     const BifurcationPoint& bp);

/// Crandall-Rabinowitz quotient nu''(0) = -(1/3) <D3G[v^3],v> / <D2_{u nu}G[v],v>,
/// recomputed from the probes: analytic = analytic-route quotient, fd =
/// fd-route quotient, rel_err = |analytic - bp.curvature| / |bp.curvature|.
DerivativeProbe curvature_crosscheck(const BifurcationPoint& bp, const TwoSpeciesParams& p,
                                     const SpectralKernel& spectral, const TorusGrid& grid);
DerivativeProbe curvature_crosscheck(const BifurcationPoint& bp, const ScalarParams& p,
                                     const SpectralKernel& spectral, const TorusGrid& grid);

struct KernelDimension {
    int dimension = 0;
    std::vector<int> wavenumbers;
};

/// Number of mode blocks singular at the candidate critical value nu_star of
/// the given parameter.
KernelDimension kernel_dimension(const TwoSpeciesParams& p, const SpectralKernel& spectral,
                                 ParamKind kind, double nu_star);

/// fd image of D_u T at the homogeneous state in an arbitrary mean-zero
/// direction (test hook for the block-diagonal completeness check).
std::array<std::vector<double>, 2> fd_jacobian_column(const TwoSpeciesParams& p,
                                                      const SpectralKernel& spectral,
                                                      const TorusGrid& grid,
                                                      const std::vector<double>& eta1,
                                                      const std::vector<double>& eta2, double h);

/// ||(T_{nu+e}(u_inf) - T_{nu-e}(u_inf))/(2e)||_L2: D_nu G(0, nu) vanishes.
double fd_parameter_derivative_norm(const TwoSpeciesParams& p, const SpectralKernel& spectral,
                                    const TorusGrid& grid, ParamKind kind, double e);

}  // namespace adlab
