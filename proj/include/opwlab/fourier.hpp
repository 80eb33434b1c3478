#pragma once

#include "opwlab/signal.hpp"

namespace opwlab {

// Discrete transform calibrated to the continuous convention
// fhat(xi) = \int f(x) e^{-2 pi i x xi} dx:
//   dft(f)_k = dx * sum_j f_j e^{-2 pi i x_j xi_k}
// on the induced frequency grid f.grid.dual(). Parseval holds exactly under
// the dx / dxi quadratures, and idft is the exact algebraic inverse.
SampledSignal dft(const SampledSignal& f);

// Inverse onto an explicit output grid (required when the primal grid is not
// centered, since the frequency grid alone does not determine x0):
//   idft(F, out)_j = dxi * sum_k F_k e^{+2 pi i x_j xi_k}.
// Preconditions: out.n == F.n and out.dx * F.dx * n == 1.
SampledSignal idft(const SampledSignal& F, const Grid1D& out_grid);

// Convenience overload: output grid F.grid.dual() (the centered convention).
// For signals sampled on centered grids, idft(dft(f)) == f to machine
// precision.
SampledSignal idft(const SampledSignal& F);

// Spectrum of a compactly supported signal evaluated on an arbitrary
// frequency grid by direct summation (exact for any lattice):
//   out_k = dt * sum_i u_i e^{-2 pi i t_i xi_k}.
// Used for small factors (mollifiers, shifted kernels) whose own grid is much
// smaller than the signal grid. Cost O(len(u) * xi.n).
std::vector<cplx> spectrum_on(const SampledSignal& u, const Grid1D& xi_grid);

// Inverse-sense counterpart: W(x) = dv * sum_j w_j e^{+2 pi i x v_j},
// evaluated on x_grid.
std::vector<cplx> inverse_spectrum_on(const SampledSignal& w,
                                      const Grid1D& x_grid);

}  // namespace opwlab
