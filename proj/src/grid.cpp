#include "opwlab/grid.hpp"

#include <cmath>

namespace opwlab {

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(n);
  for (std::size_t j = 0; j < n; ++j) xs[j] = node(j);
  return xs;
}

Grid1D Grid1D::dual() const {
  Grid1D d;
  d.dx = 1.0 / (static_cast<double>(n) * dx);
  d.x0 = -std::floor(static_cast<double>(n) / 2.0) * d.dx;
  d.n = n;
  return d;
}

Grid1D make_grid(double center, double half_width, std::size_t n) {
  if (!(half_width > 0.0)) {
    fail(Errc::invalid_argument, "make_grid: half_width must be positive");
  }
  if (n < 2) {
    fail(Errc::invalid_argument, "make_grid: n must be at least 2");
  }
  Grid1D g;
  g.x0 = center - half_width;
  g.dx = 2.0 * half_width / static_cast<double>(n);
  g.n = n;
  return g;
}

bool compatible(const Grid1D& a, const Grid1D& b) {
  if (a.n != b.n) return false;
  const double tol = 1e-9 * a.dx;
  return std::abs(a.dx - b.dx) <= tol && std::abs(a.x0 - b.x0) <= tol;
}

}  // namespace opwlab
