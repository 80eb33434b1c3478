#include "opwlab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "opwlab/error.hpp"
#include "opwlab/fourier.hpp"
#include "opwlab/lstsq.hpp"

namespace opwlab {
namespace {

constexpr double kPi = std::numbers::pi;

void validate(const SynthesisConfig& cfg) {
  if (!(cfg.alpha > 0.0)) {
    fail(Errc::invalid_argument, "synthesize: alpha must be > 0");
  }
  if (!(cfg.B > 0.0)) {
    fail(Errc::invalid_argument, "synthesize: B must be > 0");
  }
  if (!(cfg.extent_factor >= 1.0)) {
    fail(Errc::invalid_argument, "synthesize: extent_factor must be >= 1");
  }
  if (!(cfg.lambda >= 0.0)) {
    fail(Errc::invalid_argument, "synthesize: lambda must be >= 0");
  }
  if (cfg.oversample < 2) {
    fail(Errc::invalid_argument, "synthesize: oversample must be >= 2");
  }
}

}  // namespace

SincBasis SincBasis::build(double alpha, double B, double extent_factor,
                           double L) {
  if (!(alpha > 0.0) || !(B > 0.0) || !(extent_factor >= 1.0) || !(L > 0.0)) {
    fail(Errc::invalid_argument, "SincBasis: invalid parameters");
  }
  SincBasis basis;
  basis.alpha = alpha;
  basis.L = L;
  basis.J = static_cast<long>(std::floor(alpha * L + 1e-9));
  if (basis.J < 1) {
    fail(Errc::invalid_argument,
         "SincBasis: grid period too short for the bandwidth");
  }
  const double spacing = 1.0 / (2.0 * alpha);
  const long kmax =
      static_cast<long>(std::floor(extent_factor * B / spacing + 1e-9));
  basis.centers.reserve(static_cast<std::size_t>(2 * kmax + 1));
  for (long k = -kmax; k <= kmax; ++k) {
    basis.centers.push_back(static_cast<double>(k) * spacing);
  }
  return basis;
}

double SincBasis::eval(double x, double center) const {
  const double r = (x - center) / L;
  const double s = std::sin(kPi * r);
  const double q = 2.0 * static_cast<double>(J) + 1.0;
  if (std::abs(s) < 1e-12) return q / L;  // limit at the center lattice
  return std::sin(q * kPi * r) / (L * s);
}

SynthesisResult synthesize(const SampledSignal& target,
                           const SynthesisConfig& cfg) {
  validate(cfg);
  const Grid1D& g = target.grid;
  const double L = g.length();
  const SincBasis basis = SincBasis::build(cfg.alpha, cfg.B, cfg.extent_factor, L);

  // Grid half-width must extend a couple of Nyquist steps past the
  // basis-center span. The torus circumference is n*dx, so the covered
  // half-width is measured from the period edges, not the extreme nodes.
  const double need = cfg.extent_factor * cfg.B + 1.0 / cfg.alpha;
  const double slack = node_slack(g);
  const double half = std::min(-g.x0, g.x0 + L);
  if (half < need - slack) {
    fail(Errc::invalid_argument,
         "synthesize: grid too narrow for the basis extent");
  }

  // Collocation nodes: grid nodes inside [-B, B], strided to the requested
  // oversampling of the Nyquist step, with trapezoid weights.
  const double h_want = 1.0 / (2.0 * cfg.alpha * cfg.oversample);
  const long stride = std::max(1L, std::lround(h_want / g.dx));
  std::vector<std::size_t> in_band;
  for (std::size_t j = 0; j < g.n; ++j) {
    if (std::abs(g.node(j)) <= cfg.B + slack) in_band.push_back(j);
  }
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < in_band.size(); k += static_cast<std::size_t>(stride)) {
    idx.push_back(in_band[k]);
  }
  const std::size_t rows = idx.size();
  const std::size_t cols = basis.centers.size();
  if (rows < 2 || rows < cols / 8) {
    fail(Errc::invalid_argument, "synthesize: too few collocation nodes");
  }

  Eigen::MatrixXd G(rows, cols);
  Eigen::VectorXd w(rows);
  Eigen::VectorXcd yc(rows);
  const double wbase = static_cast<double>(stride) * g.dx;
  for (std::size_t r = 0; r < rows; ++r) {
    const double x = g.node(idx[r]);
    for (std::size_t k = 0; k < cols; ++k) {
      G(r, k) = basis.eval(x, basis.centers[k]);
    }
    w(r) = wbase;
    yc(r) = target.samples[idx[r]];
  }
  w(0) *= 0.5;
  w(rows - 1) *= 0.5;

  const Eigen::VectorXcd c = solve_tikhonov_svd(G, w, yc, cfg.lambda);

  SynthesisResult result;
  result.coefficients.assign(c.data(), c.data() + c.size());
  result.m = SampledSignal(g);
  for (std::size_t j = 0; j < g.n; ++j) {
    const double x = g.node(j);
    cplx acc{};
    for (std::size_t k = 0; k < cols; ++k) {
      acc += result.coefficients[k] * basis.eval(x, basis.centers[k]);
    }
    result.m.samples[j] = acc;
  }

  result.residual = residual_on_interval(result.m, target, cfg.B);
  result.total_energy = l2_norm(result.m);
  result.total_energy *= result.total_energy;
  result.interval_energy = interval_energy(result.m, cfg.B);
  if (result.total_energy == 0.0) {
    result.energy_ratio = 1.0;  // zero-target convention
    result.leakage = 0.0;
  } else {
    if (result.interval_energy == 0.0) {
      fail(Errc::undefined_ratio,
           "synthesize: zero interval energy with nonzero total energy");
    }
    result.energy_ratio = result.total_energy / result.interval_energy;
    result.leakage = bandlimit_leakage(result.m, cfg.alpha);
  }
  return result;
}

double residual_on_interval(const SampledSignal& m, const SampledSignal& y,
                            double B) {
  if (!compatible(m.grid, y.grid)) {
    fail(Errc::invalid_argument, "residual_on_interval: grid mismatch");
  }
  SampledSignal diff(m.grid);
  for (std::size_t j = 0; j < m.grid.n; ++j) {
    diff.samples[j] = m.samples[j] - y.samples[j];
  }
  return std::sqrt(interval_energy(diff, B));
}

double bandlimit_leakage(const SampledSignal& m, double alpha) {
  if (!(alpha > 0.0)) {
    fail(Errc::invalid_argument, "bandlimit_leakage: alpha must be > 0");
  }
  const SampledSignal F = dft(m);
  const double norm = l2_norm(F);
  if (norm == 0.0) {
    fail(Errc::undefined_ratio, "bandlimit_leakage: zero signal");
  }
  return std::min(1.0, tail_energy(F, alpha) / (norm * norm));
}

EnergyReport energy_report(const SynthesisResult& result) {
  double sup = 0.0;
  for (const cplx& z : result.m.samples) {
    sup = std::max(sup, std::abs(z));
  }
  return {result.total_energy, result.interval_energy, result.energy_ratio,
          sup};
}

}  // namespace opwlab
