#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adlab/stability.hpp"
#include "adlab/state.hpp"

namespace adlab {

enum class ParamKind { scalar_alpha, alpha1, gamma };
enum class Criticality { supercritical, subcritical };
enum class Phase { in_phase, out_of_phase, not_applicable };

struct BifurcationPoint {
    ParamKind kind = ParamKind::scalar_alpha;
    double value = 0.0;                 // critical parameter, > 0
    int k = 1;                          // wavenumber
    std::optional<double> c;            // kernel direction (1, c); absent for scalar
    double curvature = 0.0;             // nu''(0)
    Criticality criticality = Criticality::supercritical;
    Phase phase = Phase::not_applicable;
    bool simple = true;                 // cardinality-one check against other candidates
};

/// Scalar pitchfork catalog: one point per k with W~(k) < 0,
/// alpha_k = -sigma sqrt(2L)/W~(k), curvature L alpha_k / 2, all supercritical.
std::vector<BifurcationPoint> scalar_points(const ScalarParams& p, const SpectralKernel& spectral);

struct Alpha1Catalog {
    std::vector<BifurcationPoint> points;    // sorted ascending by value
    std::vector<int> resonant_skipped;       // |h_k + chi2 alpha2| below resolution
};

/// alpha_1 catalog at fixed (chi2 alpha2, gamma):
/// alpha_{1,k} = -chi1 (h_k - gamma^2/(h_k + chi2 alpha2)), kept when > 0.
Alpha1Catalog alpha1_points(const TwoSpeciesParams& p, const SpectralKernel& spectral);

struct GammaCatalog {
    std::vector<BifurcationPoint> points;    // sorted ascending by value
    std::vector<int> excluded_sign_mismatch; // sign(h_k+z1) != sign(h_k+z2)
    std::vector<int> resonant_skipped;
};

/// gamma catalog at fixed (z1, z2): gamma_k = sqrt((h_k+z1)(h_k+z2)) where defined.
GammaCatalog gamma_points(const TwoSpeciesParams& p, const SpectralKernel& spectral);

enum class StabilityCase { one_point, two_points, none, degenerate };

struct CriticalPoint {
    double value = 0.0;
    enum class Direction { increasing, decreasing } direction = Direction::increasing;
    int k = 1;
    Criticality criticality = Criticality::supercritical;
    Phase phase = Phase::in_phase;
    bool exchange = true;    // Principle of Exchange of Stability applies (simple point)
};

struct CriticalStabilityReport {
    ParamKind kind = ParamKind::alpha1;
    StabilityCase status = StabilityCase::none;
    std::vector<CriticalPoint> points;
    // stable parameter interval clamped to [0, inf); empty when status == none
    std::optional<std::pair<double, double>> stable_interval;
    std::vector<int> degenerate_wavenumbers;
    std::string note;
};

/// Points of critical stability in alpha_1 at fixed (chi2 alpha2, gamma):
/// zero, one, or two, with directions, criticality and phase.
CriticalStabilityReport critical_stability_alpha1(const TwoSpeciesParams& p,
                                                  const KernelSummary& summary,
                                                  const SpectralKernel& spectral);

/// The unique point of critical stability in gamma (when the box holds):
/// gamma* = gamma_{k_W} if S* < 0, gamma_{k_{-W}} if S* > 0; always supercritical.
CriticalStabilityReport critical_stability_gamma(const TwoSpeciesParams& p,
                                                 const KernelSummary& summary,
                                                 const SpectralKernel& spectral);

/// First-order branch state (1/L + s w_k, 1/L + s c w_k) on the grid.
GridState branch_expansion(const BifurcationPoint& bp, double s, const TorusGrid& grid);

/// Quadratic parameter prediction nu(s) = nu* + nu''(0) s^2 / 2.
double branch_parameter_prediction(const BifurcationPoint& bp, double s);

/// Inverse prediction |s| for a target parameter on the existence side;
/// nullopt when the target lies on the non-existence side.
std::optional<double> predicted_amplitude(const BifurcationPoint& bp, double nu);

/// 2x2 mode block of I - D_u T at the homogeneous state (see operator_lab for
/// the probe machinery; the determinant here is what the catalogs zero out).
double mode_block_det(const TwoSpeciesParams& p, const SpectralKernel& spectral, int k);

}  // namespace adlab
