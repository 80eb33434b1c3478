#pragma once

#include <optional>
#include <variant>

#include "opwlab/fourier.hpp"
#include "opwlab/signal.hpp"

namespace opwlab {

// Discretization of R^2 for spreading functions (t, v) and symbols (x, xi).
// Axis roles: `tgrid` is the first-named axis (t for a spreading function,
// x for a symbol), `vgrid` the second (v resp. xi).
struct Grid2D {
  Grid1D tgrid;
  Grid1D vgrid;
};

// Complex 2-D array over a Grid2D, row-major: values[i * vgrid.n + j] is the
// sample at (t_i, v_j).
struct SpreadingGrid {
  Grid2D grid;
  std::vector<cplx> values;

  SpreadingGrid() = default;
  explicit SpreadingGrid(const Grid2D& g)
      : grid(g), values(g.tgrid.n * g.vgrid.n, cplx{}) {}
  SpreadingGrid(const Grid2D& g, std::vector<cplx> v);

  cplx& at(std::size_t i, std::size_t j) {
    return values[i * grid.vgrid.n + j];
  }
  cplx at(std::size_t i, std::size_t j) const {
    return values[i * grid.vgrid.n + j];
  }
};

// Operator representations. Separable encodes eta(t,v) = u(t) * mhat(v)
// (the theorem-1 shape); SeparableFreq encodes eta(t,v) = h(t) * w(v) with w
// a mollifier in v (the theorem-2 shape). Multiplication and Convolution
// have distributional spreading (a delta line) and are symbol-side reps.
struct Multiplication {
  SampledSignal m;
};
struct Convolution {
  SampledSignal h;
};
struct Separable {
  SampledSignal u;
  SampledSignal m;
};
struct SeparableFreq {
  SampledSignal h;
  SampledSignal w;
};
struct Dense {
  SpreadingGrid eta;
};
using OperatorRep =
    std::variant<Multiplication, Convolution, Separable, SeparableFreq, Dense>;

struct SupportBox {
  double t_min, t_max, v_min, v_max;
};

// Hf(x) = \iint eta(t,v) e^{2 pi i x v} f(x-t) dt dv on the torus.
// Structured reps use fast paths; Dense is the direct double-quadrature
// oracle (O(n_t * n_v * n_x)), subject to the dense size cap.
SampledSignal apply(const OperatorRep& op, const SampledSignal& f);

// Discrete symplectic Fourier transform (an involution): forward transform
// along the first axis (t -> xi) composed with the inverse-sense transform
// along the second (v -> x), transposed so the result is indexed (x, xi).
// Exact round trips require each axis to satisfy x0 == -floor(n/2)*dx.
SpreadingGrid spreading_to_symbol(const SpreadingGrid& eta);
SpreadingGrid symbol_to_spreading(const SpreadingGrid& sigma);

// ||eta||_{L^2(R^2)} (= ||sigma||, = the Hilbert-Schmidt norm). Structured
// reps use the factorization ||u|| * ||m|| etc.; Multiplication/Convolution
// throw Errc::not_hilbert_schmidt (distributional spreading).
double hs_norm(const OperatorRep& op);

// Max modulus of the symbol over its grid; closed forms for reps whose
// symbol factorizes (e.g. Separable(mollifier, m) -> max |m|).
double symbol_sup_norm(const OperatorRep& op);

// Smallest axis-aligned box containing all spreading nodes with
// |eta| > threshold * max|eta|; factor supports for structured reps.
// The zero operator yields the empty-support sentinel (nullopt).
std::optional<SupportBox> support_box(const OperatorRep& op,
                                      double threshold = 1e-10);

// u = (1/(2 delta)) chi_[-delta, delta] discretized by node-cell averaging,
// so the discrete integral sum u_j dx is exactly 1 whenever the grid cells
// cover [-delta, delta]. Requires delta >= 2*dx (Errc::resolution).
SampledSignal mollifier(double delta, const Grid1D& grid);

// Exact piecewise trapezoid for (mollifier * chi_[-B,B]): 0 outside
// [-B-delta, B+delta], 1 on [-B+delta, B-delta], linear ramps between.
// Requires 0 < delta < B.
SampledSignal boxcar_smoothed_indicator(double B, double delta,
                                        const Grid1D& grid);

// Materialize a structured rep's spreading function on a grid (outer product
// or delta-line evaluation); grid must cover the support box.
SpreadingGrid densify(const OperatorRep& op, const Grid2D& grid);

// Dense-apply size cap per spreading axis (default 256; env OPWLAB_DENSE_CAP).
std::size_t dense_cap();

// Adjoint of the dense oracle (used by the power-iteration diagnostic).
SampledSignal apply_adjoint_dense(const Dense& op, const SampledSignal& g);

// Power-iteration estimate of the operator norm of the densified kernel
// (iterates H* H from a fixed deterministic start).
double operator_norm_estimate(const Dense& op, const Grid1D& signal_grid,
                              int iters = 20);

}  // namespace opwlab
