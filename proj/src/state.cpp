#include "adlab/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adlab {

double GridState::mass(int i) const {
    const auto& u = component(i);
    if (u.empty()) throw std::invalid_argument("GridState: component absent");
    return integrate(grid, u);
}

double GridState::min_density() const {
    double m = u1.empty() ? 0.0 : *std::min_element(u1.begin(), u1.end());
    if (!u2.empty()) m = std::min(m, *std::min_element(u2.begin(), u2.end()));
    return m;
}

GridState GridState::homogeneous(const TorusGrid& g, bool two_species) {
    GridState s{g, std::vector<double>(g.N, 1.0 / g.L), {}};
    if (two_species) s.u2.assign(g.N, 1.0 / g.L);
    return s;
}

double l2_distance(const GridState& a, const GridState& b) {
    if (a.grid.N != b.grid.N || a.components() != b.components())
        throw std::invalid_argument("l2_distance: incompatible states");
    double acc = 0.0;
    for (int i = 1; i <= a.components(); ++i) {
        const auto& u = a.component(i);
        const auto& v = b.component(i);
        double s = 0.0;
        for (int j = 0; j < a.grid.N; ++j) {
            const double d = u[j] - v[j];
            s += d * d;
        }
        acc += s;
    }
    return std::sqrt(acc * a.grid.h());
}

double l2_distance_to_homogeneous(const GridState& s) {
    return l2_distance(s, GridState::homogeneous(s.grid, !s.scalar()));
}

}  // namespace adlab
