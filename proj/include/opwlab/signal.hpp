#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "opwlab/grid.hpp"

namespace opwlab {

using cplx = std::complex<double>;

// Complex-valued function sampled on a uniform grid; quadrature weight dx.
struct SampledSignal {
  Grid1D grid;
  std::vector<cplx> samples;

  SampledSignal() = default;
  explicit SampledSignal(const Grid1D& g) : grid(g), samples(g.n, cplx{}) {}
  SampledSignal(const Grid1D& g, std::vector<cplx> v);
};

// Standard test signals. Indicator takes value 1 on the closed interval
// (endpoint convention fixed for determinism); Sinc(B) is
// phi_B(x) = sin(2 pi B x)/(pi x) with value 2B at x = 0; Sinusoid is
// sin(2 pi beta x + phase); Gaussian(width) is exp(-pi (x/width)^2).
struct Indicator {
  double B;
};
struct Sinc {
  double B;
};
struct Sinusoid {
  double beta;
  double phase = 0.0;
};
struct Gaussian {
  double width = 1.0;
};
struct Table {
  std::vector<cplx> values;
};
using SignalKind = std::variant<Indicator, Sinc, Sinusoid, Gaussian, Table>;

SampledSignal sample(const SignalKind& kind, const Grid1D& grid);

double l2_norm(const SampledSignal& f);
cplx inner(const SampledSignal& f, const SampledSignal& g);

// T_t f(x) = f(x-t): exact circular index shift when t is a multiple of dx,
// otherwise a frequency-domain phase ramp (periodic bandlimited interpolation).
SampledSignal translate(const SampledSignal& f, double t);

// M_v f(x) = e^{2 pi i v x} f(x): exact pointwise multiplication.
SampledSignal modulate(const SampledSignal& f, double v);

// Quadrature of |y|^2 over grid nodes with |x| > B (strict).
double tail_energy(const SampledSignal& y, double B);

// Quadrature of |y|^2 over grid nodes with |x| <= B; complements tail_energy.
double interval_energy(const SampledSignal& y, double B);

// Smallest grid-aligned B (a node coordinate |x_j|) with
// tail_energy(y, B) < budget. Only radii strictly inside the grid qualify:
// at the outermost radius the discrete tail is zero by truncation, not by
// decay, so it is no evidence the budget was met. Throws Errc::grid_too_small
// if no interior radius attains the budget.
double choose_B(const SampledSignal& y, double budget);

}  // namespace opwlab
