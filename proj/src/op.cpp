#include "opwlab/op.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "opwlab/error.hpp"
#include "opwlab/kernels.hpp"

namespace opwlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx cis(double t) { return {std::cos(t), std::sin(t)}; }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const cplx& z : v) m = std::max(m, std::abs(z));
  return m;
}

// Number of lattice steps of width dx in the offset t; t must sit on the
// lattice (multiples of dx) for pointwise evaluation of f(x - t).
long lattice_steps(double t, double dx, const char* what) {
  const double pos = t / dx;
  const double r = std::round(pos);
  if (std::abs(pos - r) > 1e-6) {
    fail(Errc::invalid_argument,
         std::string(what) + ": node offset is not a lattice multiple");
  }
  return static_cast<long>(r);
}

// A[k] += a * f[(k - s) mod n], the circular-shifted axpy used by the dense
// quadrature (two contiguous segments).
void shifted_caxpy(cplx a, const std::vector<cplx>& f, std::vector<cplx>& A,
                   long steps) {
  const std::size_t n = f.size();
  const long m = static_cast<long>(n);
  const std::size_t s = static_cast<std::size_t>(((steps % m) + m) % m);
  kern::caxpy(a, f.data(), A.data() + s, n - s);
  kern::caxpy(a, f.data() + (n - s), A.data(), s);
}

// A[k] += a * g[(k + s) mod n] (the adjoint shift direction).
void shifted_caxpy_rev(cplx a, const std::vector<cplx>& g,
                       std::vector<cplx>& A, long steps) {
  const std::size_t n = g.size();
  const long m = static_cast<long>(n);
  const std::size_t s = static_cast<std::size_t>(((steps % m) + m) % m);
  kern::caxpy(a, g.data() + s, A.data(), n - s);
  kern::caxpy(a, g.data(), A.data() + (n - s), s);
}

// u * f on the torus via the frequency domain. The kernel may live on the
// full signal grid (plain dft) or on a smaller same-spacing grid (direct
// spectrum evaluation, exact for lattice kernels).
SampledSignal convolve(const SampledSignal& f, const SampledSignal& u,
                       const char* what) {
  SampledSignal F = dft(f);
  std::vector<cplx> uh;
  if (compatible(u.grid, f.grid)) {
    uh = dft(u).samples;
  } else {
    if (std::abs(u.grid.dx - f.grid.dx) > 1e-9 * f.grid.dx) {
      fail(Errc::invalid_argument,
           std::string(what) + ": kernel spacing differs from signal spacing");
    }
    if (u.grid.length() > f.grid.length() + node_slack(f.grid)) {
      fail(Errc::invalid_argument,
           std::string(what) + ": kernel support exceeds the signal grid");
    }
    uh = spectrum_on(u, F.grid);
  }
  for (std::size_t k = 0; k < F.samples.size(); ++k) F.samples[k] *= uh[k];
  return idft(F, f.grid);
}

SampledSignal apply_mult(const Multiplication& rep, const SampledSignal& f) {
  if (!compatible(rep.m.grid, f.grid)) {
    fail(Errc::invalid_argument, "apply: multiplier grid mismatch");
  }
  SampledSignal out(f.grid);
  kern::cmul(rep.m.samples.data(), f.samples.data(), out.samples.data(),
             f.grid.n);
  return out;
}

SampledSignal apply_dense(const Dense& rep, const SampledSignal& f) {
  const Grid1D& tg = rep.eta.grid.tgrid;
  const Grid1D& vg = rep.eta.grid.vgrid;
  if (tg.n > dense_cap() || vg.n > dense_cap()) {
    fail(Errc::size_cap, "apply: spreading grid exceeds the dense size cap (" +
                             std::to_string(dense_cap()) + " per axis)");
  }
  const std::size_t n = f.grid.n;
  std::vector<long> steps(tg.n);
  for (std::size_t i = 0; i < tg.n; ++i) {
    steps[i] = lattice_steps(tg.node(i), f.grid.dx, "apply");
  }
  const double dtdv = tg.dx * vg.dx;
  std::vector<cplx> A(n), phase(n);
  SampledSignal out(f.grid);
  for (std::size_t j = 0; j < vg.n; ++j) {
    std::fill(A.begin(), A.end(), cplx{});
    bool any = false;
    for (std::size_t i = 0; i < tg.n; ++i) {
      const cplx a = rep.eta.at(i, j);
      if (a == cplx{}) continue;
      any = true;
      shifted_caxpy(a, f.samples, A, steps[i]);
    }
    if (!any) continue;
    const double v = vg.node(j);
    for (std::size_t k = 0; k < n; ++k) {
      phase[k] = cis(kTwoPi * f.grid.node(k) * v);
    }
    kern::cmul_acc(cplx{dtdv, 0.0}, A.data(), phase.data(),
                   out.samples.data(), n);
  }
  return out;
}

// Evaluate a factor signal at position x: exact node lookup inside its grid,
// zero outside; misaligned positions inside the grid are an error.
cplx factor_at(const SampledSignal& s, double x, const char* what) {
  const Grid1D& g = s.grid;
  const double pos = (x - g.x0) / g.dx;
  const double r = std::round(pos);
  if (std::abs(pos - r) > 1e-6) {
    if (x < g.node(0) - 0.5 * g.dx || x > g.node(g.n - 1) + 0.5 * g.dx) {
      return cplx{};
    }
    fail(Errc::invalid_argument,
         std::string(what) + ": node misaligned with factor grid");
  }
  const long idx = static_cast<long>(r);
  if (idx < 0 || idx >= static_cast<long>(g.n)) return cplx{};
  return s.samples[static_cast<std::size_t>(idx)];
}

// Support of a sampled factor at a relative threshold; nullopt for zero.
std::optional<std::pair<double, double>> signal_support(const SampledSignal& s,
                                                        double threshold) {
  double peak = 0.0;
  for (const cplx& z : s.samples) peak = std::max(peak, std::abs(z));
  if (peak == 0.0) return std::nullopt;
  const double cut = threshold * peak;
  double lo = 0.0, hi = 0.0;
  bool found = false;
  for (std::size_t j = 0; j < s.grid.n; ++j) {
    if (std::abs(s.samples[j]) > cut) {
      const double x = s.grid.node(j);
      if (!found) {
        lo = hi = x;
        found = true;
      } else {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    }
  }
  if (!found) return std::nullopt;
  return std::make_pair(lo, hi);
}

// Peak modulus of the discrete spectrum dt * sum u_i e^{-2 pi i t_i xi} over
// one full period of the u lattice, sampled densely (includes xi = 0).
double spectrum_sup(const SampledSignal& u) {
  const Grid1D fine = make_grid(0.0, 0.5 / u.grid.dx, 4096);
  return max_abs(spectrum_on(u, fine));
}

// Peak modulus of W(x) = dv * sum w_j e^{+2 pi i x v_j}, same sampling.
double inverse_spectrum_sup(const SampledSignal& w) {
  const Grid1D fine = make_grid(0.0, 0.5 / w.grid.dx, 4096);
  return max_abs(inverse_spectrum_on(w, fine));
}

}  // namespace

SpreadingGrid::SpreadingGrid(const Grid2D& g, std::vector<cplx> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.tgrid.n * grid.vgrid.n) {
    fail(Errc::invalid_argument, "SpreadingGrid: value count does not match grid");
  }
  for (const cplx& z : values) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      fail(Errc::invalid_argument, "SpreadingGrid: non-finite entry");
    }
  }
}

SampledSignal apply(const OperatorRep& op, const SampledSignal& f) {
  return std::visit(
      overloaded{
          [&](const Multiplication& rep) { return apply_mult(rep, f); },
          [&](const Convolution& rep) { return convolve(f, rep.h, "apply"); },
          [&](const Separable& rep) {
            if (!compatible(rep.m.grid, f.grid)) {
              fail(Errc::invalid_argument, "apply: multiplier grid mismatch");
            }
            const SampledSignal conv = convolve(f, rep.u, "apply");
            SampledSignal out(f.grid);
            kern::cmul(rep.m.samples.data(), conv.samples.data(),
                       out.samples.data(), f.grid.n);
            return out;
          },
          [&](const SeparableFreq& rep) {
            const SampledSignal conv = convolve(f, rep.h, "apply");
            const std::vector<cplx> W = inverse_spectrum_on(rep.w, f.grid);
            SampledSignal out(f.grid);
            kern::cmul(W.data(), conv.samples.data(), out.samples.data(),
                       f.grid.n);
            return out;
          },
          [&](const Dense& rep) { return apply_dense(rep, f); },
      },
      op);
}

double hs_norm(const OperatorRep& op) {
  return std::visit(
      overloaded{
          [](const Multiplication&) -> double {
            fail(Errc::not_hilbert_schmidt,
                 "hs_norm: multiplication operators have distributional "
                 "spreading");
          },
          [](const Convolution&) -> double {
            fail(Errc::not_hilbert_schmidt,
                 "hs_norm: convolution operators have distributional "
                 "spreading");
          },
          [](const Separable& rep) { return l2_norm(rep.u) * l2_norm(rep.m); },
          [](const SeparableFreq& rep) {
            return l2_norm(rep.h) * l2_norm(rep.w);
          },
          [](const Dense& rep) {
            const double q =
                kern::sumsq(rep.eta.values.data(), rep.eta.values.size());
            return std::sqrt(q * rep.eta.grid.tgrid.dx * rep.eta.grid.vgrid.dx);
          },
      },
      op);
}

double symbol_sup_norm(const OperatorRep& op) {
  return std::visit(
      overloaded{
          [](const Multiplication& rep) { return max_abs(rep.m.samples); },
          [](const Convolution& rep) { return max_abs(dft(rep.h).samples); },
          [](const Separable& rep) {
            // sigma(x, xi) = m(x) * uhat(xi); for a mollifier u the spectrum
            // peaks at uhat(0) = 1 exactly.
            return max_abs(rep.m.samples) * spectrum_sup(rep.u);
          },
          [](const SeparableFreq& rep) {
            return max_abs(dft(rep.h).samples) * inverse_spectrum_sup(rep.w);
          },
          [](const Dense& rep) {
            return max_abs(spreading_to_symbol(rep.eta).values);
          },
      },
      op);
}

std::optional<SupportBox> support_box(const OperatorRep& op, double threshold) {
  if (threshold < 0.0) {
    fail(Errc::invalid_argument, "support_box: threshold must be >= 0");
  }
  using Range = std::optional<std::pair<double, double>>;
  return std::visit(
      overloaded{
          [&](const Multiplication& rep) -> std::optional<SupportBox> {
            const Range rv = signal_support(dft(rep.m), threshold);
            if (!rv) return std::nullopt;
            return SupportBox{0.0, 0.0, rv->first, rv->second};
          },
          [&](const Convolution& rep) -> std::optional<SupportBox> {
            const Range rt = signal_support(rep.h, threshold);
            if (!rt) return std::nullopt;
            return SupportBox{rt->first, rt->second, 0.0, 0.0};
          },
          [&](const Separable& rep) -> std::optional<SupportBox> {
            const Range rt = signal_support(rep.u, threshold);
            const Range rv = signal_support(dft(rep.m), threshold);
            if (!rt || !rv) return std::nullopt;
            return SupportBox{rt->first, rt->second, rv->first, rv->second};
          },
          [&](const SeparableFreq& rep) -> std::optional<SupportBox> {
            const Range rt = signal_support(rep.h, threshold);
            const Range rv = signal_support(rep.w, threshold);
            if (!rt || !rv) return std::nullopt;
            return SupportBox{rt->first, rt->second, rv->first, rv->second};
          },
          [&](const Dense& rep) -> std::optional<SupportBox> {
            double peak = 0.0;
            for (const cplx& z : rep.eta.values) {
              peak = std::max(peak, std::abs(z));
            }
            if (peak == 0.0) return std::nullopt;
            const double cut = threshold * peak;
            const Grid1D& tg = rep.eta.grid.tgrid;
            const Grid1D& vg = rep.eta.grid.vgrid;
            bool found = false;
            SupportBox box{};
            for (std::size_t i = 0; i < tg.n; ++i) {
              for (std::size_t j = 0; j < vg.n; ++j) {
                if (std::abs(rep.eta.at(i, j)) <= cut) continue;
                const double t = tg.node(i);
                const double v = vg.node(j);
                if (!found) {
                  box = SupportBox{t, t, v, v};
                  found = true;
                } else {
                  box.t_min = std::min(box.t_min, t);
                  box.t_max = std::max(box.t_max, t);
                  box.v_min = std::min(box.v_min, v);
                  box.v_max = std::max(box.v_max, v);
                }
              }
            }
            if (!found) return std::nullopt;
            return box;
          },
      },
      op);
}

SampledSignal mollifier(double delta, const Grid1D& grid) {
  if (!(delta > 0.0)) {
    fail(Errc::invalid_argument, "mollifier: delta must be > 0");
  }
  if (delta < 2.0 * grid.dx) {
    fail(Errc::resolution,
         "mollifier: delta below the 2*dx resolution floor");
  }
  // Node-cell averaging of (1/(2 delta)) chi_[-delta, delta]: the discrete
  // integral sum u_j dx equals the covered fraction of [-delta, delta]
  // exactly (1 whenever the grid cells cover the support).
  SampledSignal u(grid);
  const double half = 0.5 * grid.dx;
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double x = grid.node(j);
    const double overlap =
        std::max(0.0, std::min(delta, x + half) - std::max(-delta, x - half));
    u.samples[j] = cplx{overlap / (2.0 * delta * grid.dx), 0.0};
  }
  return u;
}

SampledSignal boxcar_smoothed_indicator(double B, double delta,
                                        const Grid1D& grid) {
  if (!(delta > 0.0) || !(delta < B)) {
    fail(Errc::invalid_argument,
         "boxcar_smoothed_indicator: need 0 < delta < B");
  }
  SampledSignal out(grid);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double x = grid.node(j);
    const double ramp = std::min(x + B + delta, -(x - B - delta));
    out.samples[j] =
        cplx{std::clamp(ramp / (2.0 * delta), 0.0, 1.0), 0.0};
  }
  return out;
}

SpreadingGrid densify(const OperatorRep& op, const Grid2D& grid) {
  if (std::holds_alternative<Dense>(op)) {
    fail(Errc::invalid_argument, "densify: expects a structured representation");
  }
  const Grid1D& tg = grid.tgrid;
  const Grid1D& vg = grid.vgrid;
  const std::optional<SupportBox> box = support_box(op);
  if (box) {
    const double ts = node_slack(tg);
    const double vs = node_slack(vg);
    if (box->t_min < tg.node(0) - ts || box->t_max > tg.node(tg.n - 1) + ts ||
        box->v_min < vg.node(0) - vs || box->v_max > vg.node(vg.n - 1) + vs) {
      fail(Errc::invalid_argument,
           "densify: grid does not cover the operator support box");
    }
  }

  SpreadingGrid eta(grid);
  std::visit(
      overloaded{
          [&](const Multiplication& rep) {
            std::optional<std::size_t> i0;
            for (std::size_t i = 0; i < tg.n; ++i) {
              if (std::abs(tg.node(i)) <= 1e-6 * tg.dx) i0 = i;
            }
            if (!i0) {
              fail(Errc::invalid_argument,
                   "densify: no t-node at 0 for the delta line");
            }
            const std::vector<cplx> mhat = spectrum_on(rep.m, vg);
            for (std::size_t j = 0; j < vg.n; ++j) {
              eta.at(*i0, j) = mhat[j] / tg.dx;
            }
          },
          [&](const Convolution& rep) {
            std::optional<std::size_t> j0;
            for (std::size_t j = 0; j < vg.n; ++j) {
              if (std::abs(vg.node(j)) <= 1e-6 * vg.dx) j0 = j;
            }
            if (!j0) {
              fail(Errc::invalid_argument,
                   "densify: no v-node at 0 for the delta line");
            }
            for (std::size_t i = 0; i < tg.n; ++i) {
              eta.at(i, *j0) = factor_at(rep.h, tg.node(i), "densify") / vg.dx;
            }
          },
          [&](const Separable& rep) {
            const std::vector<cplx> mhat = spectrum_on(rep.m, vg);
            for (std::size_t i = 0; i < tg.n; ++i) {
              const cplx ui = factor_at(rep.u, tg.node(i), "densify");
              if (ui == cplx{}) continue;
              for (std::size_t j = 0; j < vg.n; ++j) {
                eta.at(i, j) = ui * mhat[j];
              }
            }
          },
          [&](const SeparableFreq& rep) {
            std::vector<cplx> wv(vg.n);
            for (std::size_t j = 0; j < vg.n; ++j) {
              wv[j] = factor_at(rep.w, vg.node(j), "densify");
            }
            for (std::size_t i = 0; i < tg.n; ++i) {
              const cplx hi = factor_at(rep.h, tg.node(i), "densify");
              if (hi == cplx{}) continue;
              for (std::size_t j = 0; j < vg.n; ++j) {
                eta.at(i, j) = hi * wv[j];
              }
            }
          },
          [&](const Dense&) {},
      },
      op);
  return eta;
}

std::size_t dense_cap() {
  static const std::size_t cap = [] {
    if (const char* env = std::getenv("OPWLAB_DENSE_CAP")) {
      char* end = nullptr;
      const unsigned long v = std::strtoul(env, &end, 10);
      if (end != env && *end == '\0' && v >= 2) {
        return static_cast<std::size_t>(v);
      }
    }
    return static_cast<std::size_t>(256);
  }();
  return cap;
}

SampledSignal apply_adjoint_dense(const Dense& op, const SampledSignal& g) {
  const Grid1D& tg = op.eta.grid.tgrid;
  const Grid1D& vg = op.eta.grid.vgrid;
  if (tg.n > dense_cap() || vg.n > dense_cap()) {
    fail(Errc::size_cap, "apply_adjoint_dense: spreading grid exceeds the "
                         "dense size cap");
  }
  const std::size_t n = g.grid.n;
  std::vector<long> steps(tg.n);
  for (std::size_t i = 0; i < tg.n; ++i) {
    steps[i] = lattice_steps(tg.node(i), g.grid.dx, "apply_adjoint_dense");
  }
  const double dtdv = tg.dx * vg.dx;
  std::vector<cplx> A(n), phase(n);
  SampledSignal out(g.grid);
  for (std::size_t j = 0; j < vg.n; ++j) {
    const double v = vg.node(j);
    std::fill(A.begin(), A.end(), cplx{});
    bool any = false;
    for (std::size_t i = 0; i < tg.n; ++i) {
      const cplx a = op.eta.at(i, j);
      if (a == cplx{}) continue;
      any = true;
      shifted_caxpy_rev(std::conj(a) * cis(-kTwoPi * tg.node(i) * v),
                        g.samples, A, steps[i]);
    }
    if (!any) continue;
    for (std::size_t k = 0; k < n; ++k) {
      phase[k] = cis(-kTwoPi * g.grid.node(k) * v);
    }
    kern::cmul_acc(cplx{dtdv, 0.0}, A.data(), phase.data(),
                   out.samples.data(), n);
  }
  return out;
}

double operator_norm_estimate(const Dense& op, const Grid1D& signal_grid,
                              int iters) {
  if (iters < 1) {
    fail(Errc::invalid_argument, "operator_norm_estimate: iters must be >= 1");
  }
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  SampledSignal f(signal_grid);
  for (cplx& z : f.samples) z = {unif(rng), unif(rng)};
  const double nf = l2_norm(f);
  for (cplx& z : f.samples) z /= nf;

  double estimate = 0.0;
  for (int it = 0; it < iters; ++it) {
    const SampledSignal u = apply_dense(op, f);
    const SampledSignal b = apply_adjoint_dense(op, u);
    const double s = l2_norm(b);
    if (s == 0.0) return 0.0;
    estimate = std::sqrt(s);
    f = b;
    for (cplx& z : f.samples) z /= s;
  }
  return estimate;
}

}  // namespace opwlab
