#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opwlab/signal.hpp"

namespace opwlab {

// Declarative experiment description parsed from the flat dotted key/value
// config format. Unknown keys are rejected with line diagnostics.

enum class TheoremKind { t1, t2, obstruction, synth_only };

struct TargetSpec {
  std::string kind;  // indicator | sinc | sinusoid | gaussian | table
  double b = 1.0;        // indicator / sinc half-width
  double beta = 1.0;     // sinusoid frequency
  double phase = 0.0;    // sinusoid phase
  double width = 1.0;    // gaussian width
  std::string path;      // table signal file
  std::optional<double> window_b;  // zero the target outside [-window_b, window_b]
};

struct Experiment {
  double grid_center = 0.0;
  double grid_half_width = 0.0;
  std::size_t grid_n = 0;

  TheoremKind theorem = TheoremKind::t1;
  std::optional<TargetSpec> target;

  double alpha = 1.0;
  double gamma = 1.0;  // t1 box half-width in t
  double beta = 1.0;   // t2 box half-width in v

  std::optional<double> epsilon_abs;
  std::optional<double> epsilon_rel;  // epsilon = epsilon_rel * ||y||
  double c = 0.5;

  double extent_factor = 6.0;
  int oversample = 8;
  std::vector<double> lambda_schedule;  // default schedule when empty
  std::optional<double> synth_b;        // fit half-width for synth-only
  double synth_lambda = 1e-10;          // single lambda for synth-only

  std::optional<double> b_override;
  std::optional<double> delta_override;

  double obstruction_N = 2.0;
  int obstruction_trials = 32;

  std::uint64_t seed = 1234;
  std::string output_dir = ".";
};

// Throws Errc::parse with file/line diagnostics on malformed input or
// unknown keys; Errc::io if the file cannot be read.
Experiment parse_experiment_file(const std::string& path);
Experiment parse_experiment_text(const std::string& text,
                                 const std::string& origin);

Grid1D experiment_grid(const Experiment& ex);
SampledSignal build_target(const TargetSpec& spec, const Grid1D& grid);

}  // namespace opwlab
