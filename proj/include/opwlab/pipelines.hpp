#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "opwlab/op.hpp"
#include "opwlab/synth.hpp"

namespace opwlab {

// Total L2 error target epsilon and tail share c: the squared budget splits
// as tail < c eps^2, residual^2 < (1-c) eps^2 / 2, mollifier boundary term
// < (1-c) eps^2 / 2.
struct BudgetSplit {
  double epsilon = 0.1;
  double c = 0.5;
};

struct TheoremReport {
  double B = 0.0;
  double delta = 0.0;
  double achieved_error = 0.0;
  double residual = 0.0;
  double tail = 0.0;
  double mollifier_boundary_term = 0.0;
  double hs_norm = 0.0;
  double symbol_sup = 0.0;
  double energy_ratio = 1.0;
  std::optional<SupportBox> support_box;
  BudgetSplit budget;
  bool converged = false;

  // Reproducibility fields.
  std::string pipeline;  // "t1" | "t2"
  Grid1D grid;
  SynthesisConfig cfg;
  double lambda_used = 0.0;
  std::uint64_t seed = 0;
};

// Pipeline knobs beyond the spec signatures: the lambda schedule walked by
// the synthesis step (first value meeting the residual share wins; best
// residual kept otherwise) and optional overrides used by parameter sweeps.
struct PipelineOptions {
  std::vector<double> lambda_schedule;
  std::optional<double> b_override;
  std::optional<double> delta_override;
  std::uint64_t seed = 1234;
};

std::vector<double> default_lambda_schedule();

// Theorem-1 construction (box input): choose B from the tail budget,
// synthesize the multiplier m on [-B-gamma/2, B+gamma/2], halve the
// mollifier width delta from gamma/2 until the boundary term meets its share
// (floor 2*dx; on a floor miss the measured error decides convergence), and
// return Separable(mollifier(delta), m) with the directly measured
// achieved_error = ||apply(op, chi_[-B,B]) - y||.
std::pair<OperatorRep, TheoremReport> build_theorem1(
    const SampledSignal& y, double alpha, double gamma,
    const BudgetSplit& budget, const SynthesisConfig& cfg,
    const PipelineOptions& opts = {});

// Fourier-dual construction (sinc input): B chosen from the tail of yhat,
// the kernel spectrum hhat synthesized on the frequency grid (so that
// h = idft(hhat) is supported in [-alpha, alpha]), the v-mollifier width
// halved from beta/2 until ||(W-1)(h * phi_B)|| meets its share, returning
// SeparableFreq(h, mollifier in v) measured on the sampled sinc input.
std::pair<OperatorRep, TheoremReport> build_theorem2(
    const SampledSignal& y, double alpha, double beta,
    const BudgetSplit& budget, const SynthesisConfig& cfg,
    const PipelineOptions& opts = {});

struct ObstructionResult {
  double min_error = 0.0;        // min ||H chi - T_N chi|| over the family
  double max_leak_fraction = 0.0;  // max energy fraction outside [-1/2-a, 1/2+a]
  int trials = 0;
};

// Family: `trials` seeded random Dense spreadings on [-alpha, alpha]^2 plus
// any caller-supplied structured operators (the CLI passes the ops built in
// the session). Contract: result.min_error >= 1 - 1e-6, because apply output
// is confined to [-1/2 - alpha, 1/2 + alpha].
ObstructionResult verify_obstruction_full(
    double alpha, double N, const Grid1D& grid, std::uint64_t seed = 1234,
    int trials = 32, const std::vector<OperatorRep>& structured = {});

double verify_obstruction(double alpha, double N, const Grid1D& grid,
                          std::uint64_t seed = 1234, int trials = 32,
                          const std::vector<OperatorRep>& structured = {});

// Remark 3.1(a): modified target y/g on [-B, B], zero outside. Errors with
// Errc::division_floor if |g| drops below `floor` at a node inside [-B, B].
SampledSignal input_substitution(const SampledSignal& g,
                                 const SampledSignal& y, double B,
                                 double floor = 1e-8);

}  // namespace opwlab
