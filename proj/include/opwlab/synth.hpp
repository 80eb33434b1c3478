#pragma once

#include "opwlab/signal.hpp"

namespace opwlab {

// Solver parameters for the superoscillation engine.
struct SynthesisConfig {
  double alpha = 1.0;       // bandwidth: m lies in PW[-alpha, alpha]
  double B = 1.0;           // approximation interval half-width
  double extent_factor = 3.0;  // basis centers span [-extent*B, extent*B]
  double lambda = 1e-10;       // Tikhonov weight
  int oversample = 8;          // collocation points per Nyquist step 1/(2a)
};

// Nyquist-spaced translate basis for PW[-alpha, alpha], realized as the
// exact periodization of 2a*sinc(2a(x-c)) onto the torus of circumference L:
//   b_c(x) = (1/L) sin((2J+1) pi (x-c)/L) / sin(pi (x-c)/L),  J = floor(a L)
// (the Dirichlet kernel; boundary frequency included when a*L is an integer,
// matching the closed-indicator endpoint convention). On the periodic grid
// this is exactly bandlimited and evaluable in closed form anywhere.
struct SincBasis {
  double alpha = 1.0;
  double L = 1.0;       // torus circumference of the evaluation grid
  long J = 0;           // highest retained harmonic
  std::vector<double> centers;  // spacing 1/(2 alpha), symmetric about 0

  static SincBasis build(double alpha, double B, double extent_factor,
                         double L);
  double eval(double x, double center) const;
};

struct SynthesisResult {
  SampledSignal m;
  std::vector<cplx> coefficients;
  double residual = 0.0;         // L2 error on [-B, B]
  double total_energy = 0.0;     // ||m||^2 over the full grid
  double interval_energy = 0.0;  // ||m||^2 on [-B, B]
  double energy_ratio = 1.0;     // total / interval (>= 1; 1 for zero target)
  double leakage = 0.0;          // fraction of ||mhat||^2 outside [-a, a]
};

// Regularized least-squares fit of the basis expansion to `target` on
// [-B, B] (collocation on grid nodes, trapezoid weights, SVD-filtered
// Tikhonov solve). Grid must extend past extent_factor*B by at least one
// Nyquist step.
SynthesisResult synthesize(const SampledSignal& target,
                           const SynthesisConfig& cfg);

// sqrt of the quadrature of |m - y|^2 over |x| <= B.
double residual_on_interval(const SampledSignal& m, const SampledSignal& y,
                            double B);

// tail_energy(dft(m), alpha) / ||dft(m)||^2. Errc::undefined_ratio for the
// zero signal.
double bandlimit_leakage(const SampledSignal& m, double alpha);

struct EnergyReport {
  double total_energy;
  double interval_energy;
  double energy_ratio;
  double sup_norm;
};

EnergyReport energy_report(const SynthesisResult& result);

}  // namespace opwlab
