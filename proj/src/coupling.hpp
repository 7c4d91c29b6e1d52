#pragma once

// src-local glue shared by the stationary solver and the time stepper:
// both act on the coupled potentials phi_i = sum_j c[i][j] W*u_j.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "adlab/kernels.hpp"
#include "adlab/stability.hpp"
#include "adlab/state.hpp"

namespace adlab::detail {

struct Coupling {
    double sigma;
    double c[2][2];
    int n;
};

inline Coupling make_coupling(const TwoSpeciesParams& p) {
    p.validate();
    return {p.sigma, {{p.z1(), p.gamma}, {p.gamma, p.z2()}}, 2};
}

inline Coupling make_coupling(const ScalarParams& p) {
    p.validate();
    return {p.sigma, {{p.alpha, 0.0}, {0.0, 0.0}}, 1};
}

inline void check_state(const GridState& st, const Coupling& cp) {
    if (st.components() != cp.n)
        throw std::invalid_argument("state/model mismatch: wrong number of components");
    for (int i = 1; i <= cp.n; ++i) {
        const double m = st.mass(i);
        if (std::abs(m - 1.0) > 1e-6)
            throw std::invalid_argument("state: component mass must be 1 (normalized populations)");
    }
}

inline std::array<std::vector<double>, 2> potentials(const GridState& st, const Coupling& cp,
                                                     const SpectralKernel& ker) {
    std::array<std::vector<double>, 2> conv;
    for (int i = 0; i < cp.n; ++i) conv[i] = convolve(st.grid, ker, st.component(i + 1));
    std::array<std::vector<double>, 2> phi;
    for (int i = 0; i < cp.n; ++i) {
        phi[i].assign(st.grid.N, 0.0);
        for (int j = 0; j < cp.n; ++j)
            for (int x = 0; x < st.grid.N; ++x) phi[i][x] += cp.c[i][j] * conv[j][x];
    }
    return phi;
}

inline double energy_from_potentials(const GridState& st, const Coupling& cp,
                                     const std::array<std::vector<double>, 2>& phi,
                                     double* entropy_out) {
    double S = 0.0, E = 0.0;
    for (int i = 0; i < cp.n; ++i) {
        const auto& u = st.component(i + 1);
        double s = 0.0, e = 0.0;
        for (int j = 0; j < st.grid.N; ++j) {
            if (u[j] <= 0.0) throw std::domain_error("free_energy: density must be strictly positive");
            s += u[j] * std::log(u[j]);
            e += u[j] * phi[i][j];
        }
        S += s * st.grid.h();
        E += e * st.grid.h();
    }
    if (entropy_out) *entropy_out = S;
    return cp.sigma * S + 0.5 * E;
}

// Tolerant variant for dynamics diagnostics: the stepper asserts positivity to
// -1e-8; values inside that band get the 1e-30 floor inside the log.
inline double energy_floored(const GridState& st, const Coupling& cp,
                             const std::array<std::vector<double>, 2>& phi) {
    double S = 0.0, E = 0.0;
    for (int i = 0; i < cp.n; ++i) {
        const auto& u = st.component(i + 1);
        double s = 0.0, e = 0.0;
        for (int j = 0; j < st.grid.N; ++j) {
            s += u[j] * std::log(std::max(u[j], 1e-30));
            e += u[j] * phi[i][j];
        }
        S += s * st.grid.h();
        E += e * st.grid.h();
    }
    return cp.sigma * S + 0.5 * E;
}

}  // namespace adlab::detail
