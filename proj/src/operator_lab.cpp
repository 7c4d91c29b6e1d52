#include "adlab/operator_lab.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "adlab/stationary.hpp"
#include "coupling.hpp"

namespace adlab {

using detail::Coupling;
using detail::make_coupling;

namespace {

constexpr double kEpsMach = 2.220446049250313e-16;

std::vector<double> basis_wk(const TorusGrid& g, int k) {
    std::vector<double> w(g.N);
    const double norm = std::sqrt(2.0 / g.L);
    for (int j = 0; j < g.N; ++j)
        w[j] = norm * std::cos(2.0 * std::numbers::pi * k * g.node(j) / g.L);
    return w;
}

using Fields = std::array<std::vector<double>, 2>;

Fields apply_T_at(const Coupling& cp, const SpectralKernel& ker, const TorusGrid& grid,
                  const Fields& dir, double t) {
    GridState st = GridState::homogeneous(grid, cp.n == 2);
    for (int i = 0; i < cp.n; ++i)
        for (int j = 0; j < grid.N; ++j) st.component(i + 1)[j] += t * dir[i][j];
    const auto phi = detail::potentials(st, cp, ker);
    Fields out;
    for (int i = 0; i < cp.n; ++i) {
        out[i].resize(grid.N);
        double Z = 0.0;
        for (int j = 0; j < grid.N; ++j) {
            out[i][j] = std::exp(-phi[i][j] / cp.sigma);
            Z += out[i][j];
        }
        Z *= grid.h();
        for (int j = 0; j < grid.N; ++j) out[i][j] /= Z;
    }
    return out;
}

Fields combine(int n, std::initializer_list<std::pair<double, const Fields*>> terms) {
    Fields out;
    for (int i = 0; i < n; ++i) {
        out[i].assign((*terms.begin()->second)[i].size(), 0.0);
        for (const auto& [w, f] : terms)
            for (size_t j = 0; j < out[i].size(); ++j) out[i][j] += w * (*f)[i][j];
    }
    return out;
}

double field_l2(const TorusGrid& g, const Fields& f, int n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (double v : f[i]) acc += v * v;
    return std::sqrt(acc * g.h());
}

double field_inner(const TorusGrid& g, const Fields& a, const Fields& b, int n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (size_t j = 0; j < a[i].size(); ++j) acc += a[i][j] * b[i][j];
    return acc * g.h();
}

// fd derivative of T at the homogeneous state in direction dir, given order.
Fields fd_derivative(const Coupling& cp, const SpectralKernel& ker, const TorusGrid& grid,
                     const Fields& dir, int order, double h) {
    const auto T = [&](double t) { return apply_T_at(cp, ker, grid, dir, t); };
    switch (order) {
        case 1: {
            const Fields p = T(h), m = T(-h);
            return combine(cp.n, {{0.5 / h, &p}, {-0.5 / h, &m}});
        }
        case 2: {
            const Fields p = T(h), z = T(0.0), m = T(-h);
            return combine(cp.n, {{1.0 / (h * h), &p}, {-2.0 / (h * h), &z}, {1.0 / (h * h), &m}});
        }
        case 3: {
            const Fields p2 = T(2.0 * h), p1 = T(h), m1 = T(-h), m2 = T(-2.0 * h);
            const double w = 1.0 / (2.0 * h * h * h);
            return combine(cp.n, {{w, &p2}, {-2.0 * w, &p1}, {2.0 * w, &m1}, {-w, &m2}});
        }
        default:
            throw std::invalid_argument("fd_frechet: order must be 1, 2, or 3");
    }
}

// Closed forms of D^m T at the homogeneous state in direction (w_k, c w_k):
//   D^m T_i = (-1)^m L^{m-1} (p_i / h_k)^m q_m(w_k),
//   q_1 = w, q_2 = w^2 - 1/L, q_3 = w^3 - 3w/L, p_i = sum_j c[i][j] d_j.
Fields analytic_derivative(const Coupling& cp, const SpectralKernel& ker, const TorusGrid& grid,
                           int k, double c, int order, double sigma, double L) {
    const auto hk = h_k(ker, sigma, L, k);
    Fields out;
    const std::vector<double> w = basis_wk(grid, k);
    const double d[2] = {1.0, c};
    for (int i = 0; i < cp.n; ++i) {
        out[i].assign(grid.N, 0.0);
        if (!hk) continue;    // dead mode: all derivatives of T vanish
        double p = 0.0;
        for (int j = 0; j < cp.n; ++j) p += cp.c[i][j] * d[j];
        const double scale = (order % 2 ? -1.0 : 1.0) * std::pow(L, order - 1) *
                             std::pow(p / *hk, order);
        for (int j = 0; j < grid.N; ++j) {
            double q;
            if (order == 1)
                q = w[j];
            else if (order == 2)
                q = w[j] * w[j] - 1.0 / L;
            else
                q = w[j] * w[j] * w[j] - 3.0 * w[j] / L;
            out[i][j] = scale * q;
        }
    }
    return out;
}

double default_step(int order) {
    // truncation/round-off balance per derivative order
    switch (order) {
        case 1: return std::cbrt(kEpsMach);
        case 2: return std::cbrt(kEpsMach);
        default: return std::pow(kEpsMach, 0.2);
    }
}

struct TriStep {
    Fields best;
    double step;
    bool plateau;
};

// Evaluate the fd at {h/2, h, 2h}; keep the member of the best-agreeing pair
// and flag a plateau when no pair agrees to 10%.
TriStep tri_step(const Coupling& cp, const SpectralKernel& ker, const TorusGrid& grid,
                 const Fields& dir, int order, double h) {
    const Fields f0 = fd_derivative(cp, ker, grid, dir, order, 0.5 * h);
    const Fields f1 = fd_derivative(cp, ker, grid, dir, order, h);
    const Fields f2 = fd_derivative(cp, ker, grid, dir, order, 2.0 * h);
    const double n1 = field_l2(grid, f1, cp.n);
    const Fields d01 = combine(cp.n, {{1.0, &f0}, {-1.0, &f1}});
    const Fields d12 = combine(cp.n, {{1.0, &f1}, {-1.0, &f2}});
    const double e01 = field_l2(grid, d01, cp.n);
    const double e12 = field_l2(grid, d12, cp.n);
    TriStep r{f1, h, false};
    if (e01 > 0.1 * n1 && e12 > 0.1 * n1) r.plateau = true;
    if (e01 < e12) {
        r.best = f0;
        r.step = 0.5 * h;
    }
    return r;
}

DerivativeProbe field_probe(const Coupling& cp, const SpectralKernel& ker, const TorusGrid& grid,
                            int order, int k, double c, double sigma, double L) {
    Fields dir;
    const std::vector<double> w = basis_wk(grid, k);
    dir[0] = w;
    if (cp.n == 2) {
        dir[1].resize(grid.N);
        for (int j = 0; j < grid.N; ++j) dir[1][j] = c * w[j];
    }
    const Fields exact = analytic_derivative(cp, ker, grid, k, c, order, sigma, L);
    const TriStep fd = tri_step(cp, ker, grid, dir, order, default_step(order));

    DerivativeProbe probe;
    probe.label = "frechet_order_" + std::to_string(order);
    probe.order = order;
    probe.step = fd.step;
    probe.plateau_flagged = fd.plateau;
    probe.analytic = field_l2(grid, exact, cp.n);
    probe.fd = field_l2(grid, fd.best, cp.n);
    const Fields diff = combine(cp.n, {{1.0, &exact}, {-1.0, &fd.best}});
    const double denom = std::max(probe.analytic, 1e-300);
    probe.rel_err = field_l2(grid, diff, cp.n) / denom;
    return probe;
}

}    // namespace

ModeBlock assemble_mode_block(const TwoSpeciesParams& p, const SpectralKernel& ker, int k) {
    p.validate();
    ModeBlock b;
    b.k = k;
    const auto hk = h_k(ker, p.sigma, p.L, k);
    if (!hk) {
        b.identity_fallback = true;
        return b;
    }
    const double h = *hk;
    b.a11 = 1.0 + p.z1() / h;
    b.a12 = p.gamma / h;
    b.a21 = b.a12;
    b.a22 = 1.0 + p.z2() / h;
    b.det = b.a11 * b.a22 - b.a12 * b.a21;
    const double scale = std::max({1.0, std::abs(b.a11 * b.a22), b.a12 * b.a12});
    b.singular = std::abs(b.det) <= 1e-8 * scale;
    if (b.singular && p.gamma > 0.0) b.c = -(h + p.z1()) / p.gamma;
    return b;
}

DerivativeProbe fd_frechet(const TwoSpeciesParams& p, const SpectralKernel& ker,
                           const TorusGrid& grid, int order, int k, double c) {
    return field_probe(make_coupling(p), ker, grid, order, k, c, p.sigma, p.L);
}

DerivativeProbe fd_frechet(const ScalarParams& p, const SpectralKernel& ker, const TorusGrid& grid,
                           int order, int k) {
    return field_probe(make_coupling(p), ker, grid, order, k, 0.0, p.sigma, p.L);
}

namespace {

Fields direction_vk(const TorusGrid& grid, int k, double c, int n) {
    Fields dir;
    dir[0] = basis_wk(grid, k);
    if (n == 2) {
        dir[1].resize(grid.N);
        for (int j = 0; j < grid.N; ++j) dir[1][j] = c * dir[0][j];
    }
    return dir;
}

}    // namespace

DerivativeProbe quadratic_inner_product(const TwoSpeciesParams& p, const SpectralKernel& ker,
                                     const TorusGrid& grid, int k, double c) {
    const Coupling cp = make_coupling(p);
    const Fields dir = direction_vk(grid, k, c, cp.n);
    const double c0sq = 1.0 / (1.0 + c * c);
    // D^2 G = -D^2 T
    const Fields exact = analytic_derivative(cp, ker, grid, k, c, 2, p.sigma, p.L);
    const TriStep fd = tri_step(cp, ker, grid, dir, 2, default_step(2));

    DerivativeProbe probe;
    probe.label = "quadratic_inner_product";
    probe.order = 2;
    probe.step = fd.step;
    probe.plateau_flagged = fd.plateau;
    probe.analytic = -c0sq * field_inner(grid, exact, dir, cp.n);
    probe.fd = -c0sq * field_inner(grid, fd.best, dir, cp.n);
    probe.rel_err = std::abs(probe.analytic - probe.fd);
    return probe;
}

namespace {

DerivativeProbe third_inner_impl(const Coupling& cp, const SpectralKernel& ker,
                                 const TorusGrid& grid, int k, double c, double sigma, double L) {
    const Fields dir = direction_vk(grid, k, c, cp.n);
    const double c0sq = cp.n == 2 ? 1.0 / (1.0 + c * c) : 1.0;
    const auto hk = h_k(ker, sigma, L, k);
    if (!hk) throw std::invalid_argument("third_inner_product: h_k undefined at this wavenumber");
    const double h = *hk;

    // c0^2 <D^3 G [(w,cw)^3], (w,cw)> = -(3/2) c0^2 L h^-3 [d1 p1^3 + d2 p2^3]
    const double d[2] = {1.0, c};
    double bracket = 0.0;
    for (int i = 0; i < cp.n; ++i) {
        double p = 0.0;
        for (int j = 0; j < cp.n; ++j) p += cp.c[i][j] * d[j];
        bracket += d[i] * p * p * p;
    }
    const double analytic = -1.5 * c0sq * L * bracket / (h * h * h);

    const TriStep fd = tri_step(cp, ker, grid, dir, 3, default_step(3));
    DerivativeProbe probe;
    probe.label = "third_inner_product";
    probe.order = 3;
    probe.step = fd.step;
    probe.plateau_flagged = fd.plateau;
    probe.analytic = analytic;
    probe.fd = -c0sq * field_inner(grid, fd.best, dir, cp.n);
    probe.rel_err = std::abs(probe.analytic - probe.fd) / std::max(std::abs(probe.analytic), 1e-300);
    return probe;
}

}    // namespace

DerivativeProbe third_inner_product(const TwoSpeciesParams& p, const SpectralKernel& ker,
                                    const TorusGrid& grid, int k, double c) {
    return third_inner_impl(make_coupling(p), ker, grid, k, c, p.sigma, p.L);
}
DerivativeProbe third_inner_product(const ScalarParams& p, const SpectralKernel& ker,
                                    const TorusGrid& grid, int k) {
    return third_inner_impl(make_coupling(p), ker, grid, k, 0.0, p.sigma, p.L);
}

namespace {

template <typename Params>
std::vector<DerivativeProbe> mixed_impl(const Params& p, const SpectralKernel& ker,
                                        const TorusGrid& grid, const BifurcationPoint& bp) {
    constexpr bool scalar = std::is_same_v<Params, ScalarParams>;
    const auto hk = h_k(ker, p.sigma, p.L, bp.k);
    if (!hk) throw std::invalid_argument("mixed_derivative_checks: h_k undefined");
    const double h = *hk;
    const double c = bp.c.value_or(0.0);
    const double c0sq = scalar ? 1.0 : 1.0 / (1.0 + c * c);
    const Coupling cp = make_coupling(p);
    const Fields dir = direction_vk(grid, bp.k, c, cp.n);

    double analytic;
    if constexpr (scalar) {
        analytic = 1.0 / h;
    } else {
        if (bp.kind == ParamKind::alpha1)
            analytic = c0sq * p.chi1 / h;
        else
            analytic = 2.0 * c0sq * c / h;
    }

    // mixed central stencil on T, sign-folded to G = I - T
    const double e = std::sqrt(std::sqrt(kEpsMach));
    const double hs = e;
    auto T_at = [&](double dnu, double t) {
        Params q = p;
        if constexpr (scalar) {
            q.alpha += dnu;
        } else {
            if (bp.kind == ParamKind::alpha1)
                q.alpha1 += dnu;
            else
                q.gamma += dnu;
        }
        return apply_T_at(make_coupling(q), ker, grid, dir, t);
    };
    const Fields pp = T_at(e, hs), pm = T_at(e, -hs), mp = T_at(-e, hs), mm = T_at(-e, -hs);
    const double w = 1.0 / (4.0 * e * hs);
    const Fields mixed = combine(cp.n, {{w, &pp}, {-w, &pm}, {-w, &mp}, {w, &mm}});
    const double fd_val = -c0sq * field_inner(grid, mixed, dir, cp.n);

    DerivativeProbe probe;
    probe.label = bp.kind == ParamKind::gamma ? "mixed_u_gamma" : "mixed_u_alpha1";
    if constexpr (scalar) probe.label = "mixed_u_alpha";
    probe.order = 2;
    probe.analytic = analytic;
    probe.fd = fd_val;
    probe.step = hs;
    probe.rel_err = std::abs(analytic - fd_val) / std::max(std::abs(analytic), 1e-300);
    const double noise = kEpsMach / (e * hs);
    probe.inconclusive = std::abs(fd_val) < 10.0 * noise;

    DerivativeProbe trans;
    trans.label = "transversality_nonzero";
    trans.order = 2;
    trans.analytic = analytic;
    trans.fd = fd_val;
    trans.rel_err = probe.rel_err;
    trans.step = hs;
    trans.inconclusive = std::abs(analytic) <= 10.0 * noise;
    return {probe, trans};
}

template <typename Params>
DerivativeProbe curvature_impl(const BifurcationPoint& bp, const Params& p,
                               const SpectralKernel& ker, const TorusGrid& grid) {
    constexpr bool scalar = std::is_same_v<Params, ScalarParams>;
    DerivativeProbe third;
    if constexpr (scalar)
        third = third_inner_product(p, ker, grid, bp.k);
    else
        third = third_inner_product(p, ker, grid, bp.k, bp.c.value_or(0.0));
    const auto mixed = mixed_impl(p, ker, grid, bp);

    DerivativeProbe probe;
    probe.label = "curvature_quotient";
    probe.order = 3;
    if (std::abs(mixed[0].analytic) < 1e-14) {
        probe.inconclusive = true;
        probe.label = "curvature_quotient_degenerate";
        return probe;
    }
    probe.analytic = -third.analytic / (3.0 * mixed[0].analytic);
    probe.fd = -third.fd / (3.0 * mixed[0].fd);
    probe.step = third.step;
    probe.rel_err = std::abs(probe.analytic - bp.curvature) / std::max(std::abs(bp.curvature), 1e-300);
    return probe;
}

}    // namespace

std::vector<DerivativeProbe> mixed_derivative_checks(const TwoSpeciesParams& p,
                                                     const SpectralKernel& ker,
                                                     const TorusGrid& grid,
                                                     const BifurcationPoint& bp) {
    return mixed_impl(p, ker, grid, bp);
}
std::vector<DerivativeProbe> mixed_derivative_checks(const ScalarParams& p,
                                                     const SpectralKernel& ker,
                                                     const TorusGrid& grid,
                                                     const BifurcationPoint& bp) {
    return mixed_impl(p, ker, grid, bp);
}

DerivativeProbe curvature_crosscheck(const BifurcationPoint& bp, const TwoSpeciesParams& p,
                                     const SpectralKernel& ker, const TorusGrid& grid) {
    return curvature_impl(bp, p, ker, grid);
}
DerivativeProbe curvature_crosscheck(const BifurcationPoint& bp, const ScalarParams& p,
                                     const SpectralKernel& ker, const TorusGrid& grid) {
    return curvature_impl(bp, p, ker, grid);
}

KernelDimension kernel_dimension(const TwoSpeciesParams& p, const SpectralKernel& ker,
                                 ParamKind kind, double nu_star) {
    TwoSpeciesParams q = p;
    switch (kind) {
        case ParamKind::alpha1: q.alpha1 = nu_star; break;
        case ParamKind::gamma: q.gamma = nu_star; break;
        case ParamKind::scalar_alpha:
            throw std::invalid_argument("kernel_dimension: scalar kind needs ScalarParams");
    }
    KernelDimension kd;
    for (int k = 1; k <= ker.kmax(); ++k) {
        const ModeBlock b = assemble_mode_block(q, ker, k);
        if (!b.identity_fallback && b.singular) {
            ++kd.dimension;
            kd.wavenumbers.push_back(k);
        }
    }
    return kd;
}

std::array<std::vector<double>, 2> fd_jacobian_column(const TwoSpeciesParams& p,
                                                      const SpectralKernel& ker,
                                                      const TorusGrid& grid,
                                                      const std::vector<double>& eta1,
                                                      const std::vector<double>& eta2, double h) {
    const Coupling cp = make_coupling(p);
    Fields dir{eta1, eta2};
    return fd_derivative(cp, ker, grid, dir, 1, h);
}

double fd_parameter_derivative_norm(const TwoSpeciesParams& p, const SpectralKernel& ker,
                                    const TorusGrid& grid, ParamKind kind, double e) {
    TwoSpeciesParams qp = p, qm = p;
    if (kind == ParamKind::alpha1) {
        qp.alpha1 += e;
        qm.alpha1 -= e;
    } else {
        qp.gamma += e;
        qm.gamma -= e;
    }
    Fields zero;
    zero[0].assign(grid.N, 0.0);
    zero[1].assign(grid.N, 0.0);
    const Fields Tp = apply_T_at(make_coupling(qp), ker, grid, zero, 0.0);
    const Fields Tm = apply_T_at(make_coupling(qm), ker, grid, zero, 0.0);
    const Fields d = combine(2, {{0.5 / e, &Tp}, {-0.5 / e, &Tm}});
    return field_l2(grid, d, 2);
}

}  // namespace adlab
