#pragma once

#include <cstddef>
#include <vector>

#include "opwlab/error.hpp"

namespace opwlab {

// Uniform 1-D grid x_j = x0 + j*dx, j = 0..n-1. The transform treats it as
// one period of a torus of circumference n*dx.
struct Grid1D {
  double x0 = 0.0;
  double dx = 1.0;
  std::size_t n = 2;

  double node(std::size_t j) const { return x0 + static_cast<double>(j) * dx; }
  double length() const { return static_cast<double>(n) * dx; }
  std::vector<double> nodes() const;

  // Induced frequency grid: spacing 1/(n*dx), left endpoint -floor(n/2)/(n*dx),
  // covering [-1/(2dx), 1/(2dx)). dual(dual(g)) == g exactly when
  // x0 == -floor(n/2)*dx (centered even-n grids and node-centered odd-n grids).
  Grid1D dual() const;

  bool operator==(const Grid1D&) const = default;
};

// Grid with x0 = center - half_width, dx = 2*half_width/n.
Grid1D make_grid(double center, double half_width, std::size_t n);

// Tolerant equality used by operations that require matching grids.
bool compatible(const Grid1D& a, const Grid1D& b);

// Comparison slack for classifying a node against an interval endpoint.
inline double node_slack(const Grid1D& g) { return 1e-9 * g.dx; }

}  // namespace opwlab
