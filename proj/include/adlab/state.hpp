#pragma once

#include <vector>

#include "adlab/grid.hpp"

namespace adlab {

/// Densities on a uniform torus grid; u2 empty in scalar mode.
struct GridState {
    TorusGrid grid;
    std::vector<double> u1;
    std::vector<double> u2;

    bool scalar() const { return u2.empty(); }
    int components() const { return scalar() ? 1 : 2; }

    double mass(int i) const;          // i = 1 or 2
    double min_density() const;

    const std::vector<double>& component(int i) const { return i == 1 ? u1 : u2; }
    std::vector<double>& component(int i) { return i == 1 ? u1 : u2; }

    static GridState homogeneous(const TorusGrid& g, bool two_species);
};

double l2_distance(const GridState& a, const GridState& b);
double l2_distance_to_homogeneous(const GridState& s);

}  // namespace adlab
