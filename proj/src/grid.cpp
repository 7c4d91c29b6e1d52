#include "adlab/grid.hpp"

#include <cmath>
#include <numbers>

namespace adlab {

namespace {
int g_threads = 1;
}

void set_threads(int n) { g_threads = n < 1 ? 1 : n; }
int threads() { return g_threads; }

std::vector<double> TorusGrid::nodes() const {
    std::vector<double> x(N);
    for (int j = 0; j < N; ++j) x[j] = node(j);
    return x;
}

double integrate(const TorusGrid& g, std::span<const double> u) {
    double s = 0.0;
    for (double v : u) s += v;
    return s * g.h();
}

double inner(const TorusGrid& g, std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (size_t j = 0; j < u.size(); ++j) s += u[j] * v[j];
    return s * g.h();
}

double l2_norm(const TorusGrid& g, std::span<const double> u) {
    return std::sqrt(inner(g, u, u));
}

TrigTransform::TrigTransform(const TorusGrid& grid, int M) : grid_(grid), M_(M) {
    if (M < 0 || M > grid.N / 2 - 1)
        throw std::invalid_argument("TrigTransform: need 0 <= M <= N/2 - 1");
    const int N = grid.N;
    cos_.resize(static_cast<size_t>(M) * N);
    sin_.resize(static_cast<size_t>(M) * N);
    for (int k = 1; k <= M; ++k) {
        for (int j = 0; j < N; ++j) {
            const double th = 2.0 * std::numbers::pi * k * grid.node(j) / grid.L;
            cos_[static_cast<size_t>(k - 1) * N + j] = std::cos(th);
            sin_[static_cast<size_t>(k - 1) * N + j] = std::sin(th);
        }
    }
}

double TrigTransform::omega(int k) const { return 2.0 * std::numbers::pi * k / grid_.L; }

TrigSpectrum TrigTransform::analyze(std::span<const double> u) const {
    if (static_cast<int>(u.size()) != grid_.N)
        throw std::invalid_argument("TrigTransform::analyze: field size mismatch");
    const int N = grid_.N;
    const double h = grid_.h();
    const double norm = std::sqrt(2.0 / grid_.L);

    TrigSpectrum s;
    s.a.assign(M_, 0.0);
    s.b.assign(M_, 0.0);

    double m0 = 0.0;
    for (int j = 0; j < N; ++j) m0 += u[j];
    s.a0 = m0 * h / std::sqrt(grid_.L);

#pragma omp parallel for num_threads(g_threads) if (g_threads > 1) schedule(static)
    for (int k = 1; k <= M_; ++k) {
        const double* ck = cos_.data() + static_cast<size_t>(k - 1) * N;
        const double* sk = sin_.data() + static_cast<size_t>(k - 1) * N;
        double sc = 0.0, ss = 0.0;
        for (int j = 0; j < N; ++j) {
            sc += u[j] * ck[j];
            ss += u[j] * sk[j];
        }
        s.a[k - 1] = sc * h * norm;
        s.b[k - 1] = ss * h * norm;
    }
    return s;
}

std::vector<double> TrigTransform::synthesize(const TrigSpectrum& s) const {
    if (s.modes() != M_) throw std::invalid_argument("TrigTransform::synthesize: mode count mismatch");
    const int N = grid_.N;
    const double norm = std::sqrt(2.0 / grid_.L);
    const double mean = s.a0 / std::sqrt(grid_.L);

    std::vector<double> u(N);
#pragma omp parallel for num_threads(g_threads) if (g_threads > 1) schedule(static)
    for (int j = 0; j < N; ++j) {
        double v = mean;
        for (int k = 1; k <= M_; ++k) {
            const size_t idx = static_cast<size_t>(k - 1) * N + j;
            v += norm * (s.a[k - 1] * cos_[idx] + s.b[k - 1] * sin_[idx]);
        }
        u[j] = v;
    }
    return u;
}

TrigSpectrum TrigTransform::derivative(const TrigSpectrum& s) const {
    TrigSpectrum d;
    d.a0 = 0.0;
    d.a.assign(s.modes(), 0.0);
    d.b.assign(s.modes(), 0.0);
    for (int k = 1; k <= s.modes(); ++k) {
        const double w = omega(k);
        d.a[k - 1] = w * s.b[k - 1];
        d.b[k - 1] = -w * s.a[k - 1];
    }
    return d;
}

std::vector<double> spectral_derivative(const TorusGrid& g, std::span<const double> u) {
    TrigTransform t(g, g.N / 2 - 1);
    return t.synthesize(t.derivative(t.analyze(u)));
}

std::vector<double> symmetrize(std::span<const double> u) {
    const int N = static_cast<int>(u.size());
    std::vector<double> v(N);
    for (int j = 0; j < N; ++j) v[j] = 0.5 * (u[j] + u[(N - j) % N]);
    return v;
}

double evenness_defect(std::span<const double> u) {
    const int N = static_cast<int>(u.size());
    double m = 0.0;
    for (int j = 0; j < N; ++j) m = std::max(m, std::abs(u[j] - u[(N - j) % N]));
    return m;
}

}  // namespace adlab
