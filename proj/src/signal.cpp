#include "opwlab/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "opwlab/fourier.hpp"
#include "opwlab/kernels.hpp"

namespace opwlab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

SampledSignal::SampledSignal(const Grid1D& g, std::vector<cplx> v)
    : grid(g), samples(std::move(v)) {
  if (samples.size() != grid.n) {
    fail(Errc::invalid_argument, "SampledSignal: sample count != grid.n");
  }
}

SampledSignal sample(const SignalKind& kind, const Grid1D& grid) {
  SampledSignal out(grid);
  const double slack = node_slack(grid);
  if (const auto* ind = std::get_if<Indicator>(&kind)) {
    if (!(ind->B > 0.0)) {
      fail(Errc::invalid_argument, "Indicator: B must be positive");
    }
    for (std::size_t j = 0; j < grid.n; ++j) {
      out.samples[j] = (std::abs(grid.node(j)) <= ind->B + slack) ? 1.0 : 0.0;
    }
  } else if (const auto* sc = std::get_if<Sinc>(&kind)) {
    if (!(sc->B > 0.0)) {
      fail(Errc::invalid_argument, "Sinc: B must be positive");
    }
    for (std::size_t j = 0; j < grid.n; ++j) {
      const double x = grid.node(j);
      out.samples[j] = (std::abs(x) < 1e-12 * grid.dx)
                           ? 2.0 * sc->B
                           : std::sin(kTwoPi * sc->B * x) / (kPi * x);
    }
  } else if (const auto* sn = std::get_if<Sinusoid>(&kind)) {
    for (std::size_t j = 0; j < grid.n; ++j) {
      out.samples[j] = std::sin(kTwoPi * sn->beta * grid.node(j) + sn->phase);
    }
  } else if (const auto* ga = std::get_if<Gaussian>(&kind)) {
    if (!(ga->width > 0.0)) {
      fail(Errc::invalid_argument, "Gaussian: width must be positive");
    }
    for (std::size_t j = 0; j < grid.n; ++j) {
      const double r = grid.node(j) / ga->width;
      out.samples[j] = std::exp(-kPi * r * r);
    }
  } else if (const auto* tb = std::get_if<Table>(&kind)) {
    if (tb->values.size() != grid.n) {
      fail(Errc::invalid_argument, "Table: value count != grid.n");
    }
    out.samples = tb->values;
  }
  return out;
}

double l2_norm(const SampledSignal& f) {
  return std::sqrt(f.grid.dx * kern::sumsq(f.samples.data(), f.samples.size()));
}

cplx inner(const SampledSignal& f, const SampledSignal& g) {
  if (!compatible(f.grid, g.grid)) {
    fail(Errc::invalid_argument, "inner: signals live on different grids");
  }
  return f.grid.dx * kern::cdot(f.samples.data(), g.samples.data(), f.grid.n);
}

SampledSignal translate(const SampledSignal& f, double t) {
  const std::size_t n = f.grid.n;
  const double steps = t / f.grid.dx;
  const double rounded = std::round(steps);
  SampledSignal out(f.grid);
  if (std::abs(steps - rounded) < 1e-9) {
    // Exact circular index shift: out_j = f_{(j - s) mod n}.
    const long long s =
        static_cast<long long>(rounded) % static_cast<long long>(n);
    const std::size_t shift = static_cast<std::size_t>(
        (s % static_cast<long long>(n) + static_cast<long long>(n)) %
        static_cast<long long>(n));
    for (std::size_t j = 0; j < n; ++j) {
      out.samples[j] = f.samples[(j + n - shift) % n];
    }
    return out;
  }
  // Off-lattice shift: frequency-domain phase ramp (periodic bandlimited
  // interpolation).
  SampledSignal F = dft(f);
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = -kTwoPi * F.grid.node(k) * t;
    F.samples[k] *= cplx{std::cos(phi), std::sin(phi)};
  }
  return idft(F, f.grid);
}

SampledSignal modulate(const SampledSignal& f, double v) {
  SampledSignal out(f.grid);
  for (std::size_t j = 0; j < f.grid.n; ++j) {
    const double phi = kTwoPi * v * f.grid.node(j);
    out.samples[j] = f.samples[j] * cplx{std::cos(phi), std::sin(phi)};
  }
  return out;
}

namespace {

// Index ranges [0, lo) and (hi, n) of nodes with |x| > B; the grid is
// monotone so each side is contiguous.
struct TailRanges {
  std::size_t lo;  // first index with x_j >= -B
  std::size_t hi;  // last index with x_j <= B (one past)
};

TailRanges tail_ranges(const Grid1D& g, double B) {
  const double slack = node_slack(g);
  // lo = count of nodes with x < -B - slack
  double lo_f = std::ceil((-B - slack - g.x0) / g.dx);
  double hi_f = std::floor((B + slack - g.x0) / g.dx);
  long long lo = std::max(0LL, static_cast<long long>(lo_f));
  long long hi = std::min(static_cast<long long>(g.n) - 1,
                          static_cast<long long>(hi_f));
  if (hi < lo) {  // no nodes inside [-B, B]
    return {0, 0};
  }
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi) + 1};
}

}  // namespace

double tail_energy(const SampledSignal& y, double B) {
  if (!(B > 0.0)) {
    fail(Errc::invalid_argument, "tail_energy: B must be positive");
  }
  const auto r = tail_ranges(y.grid, B);
  const cplx* d = y.samples.data();
  double acc = kern::sumsq(d, r.lo);
  acc += kern::sumsq(d + r.hi, y.grid.n - r.hi);
  return y.grid.dx * acc;
}

double interval_energy(const SampledSignal& y, double B) {
  const auto r = tail_ranges(y.grid, B);
  return y.grid.dx * kern::sumsq(y.samples.data() + r.lo, r.hi - r.lo);
}

double choose_B(const SampledSignal& y, double budget) {
  if (!(budget > 0.0)) {
    fail(Errc::invalid_argument, "choose_B: budget must be positive");
  }
  const double total = y.grid.dx * kern::sumsq(y.samples.data(), y.grid.n);
  if (!(total > 0.0)) {
    fail(Errc::invalid_argument, "choose_B: zero signal");
  }
  // Scan candidates |x_j| in increasing order, accumulating the tail sum
  // from the outside in: tail(B) = sum over |x_j| > B of |y_j|^2 dx.
  const std::size_t n = y.grid.n;
  std::vector<std::pair<double, double>> items(n);  // (|x_j|, |y_j|^2 dx)
  for (std::size_t j = 0; j < n; ++j) {
    items[j] = {std::abs(y.grid.node(j)),
                std::norm(y.samples[j]) * y.grid.dx};
  }
  std::sort(items.begin(), items.end());
  const double slack = node_slack(y.grid);
  // Suffix sums give the tail without cancellation: subtracting an inside
  // accumulator from the total would round tails below ~1e-16 * total to
  // zero and falsely attain microscopic budgets.
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    suffix[k] = suffix[k + 1] + items[k].second;
  }
  // Walk from the smallest candidate up; tail(candidate) excludes every item
  // with |x| <= candidate + slack. The outermost radius never qualifies: its
  // tail is zero by grid truncation, which is no evidence of decay.
  const double max_radius = items[n - 1].first;
  std::size_t i = 0;
  while (i < n) {
    const double cand = items[i].first;
    // absorb all nodes at (numerically) this radius
    std::size_t j = i;
    while (j < n && items[j].first <= cand + slack) ++j;
    const double tail = suffix[j];
    if (cand > 0.0 && cand < max_radius - slack && tail < budget) return cand;
    i = j;
  }
  fail(Errc::grid_too_small,
       "choose_B: tail budget unattainable on this grid");
}

}  // namespace opwlab
