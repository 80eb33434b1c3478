#include "opwlab/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace opwlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW plan cache. Plans are created once per (n, sign) with
// FFTW_ESTIMATE | FFTW_UNALIGNED (so they can execute on any buffer via the
// new-array interface) and reused; creation is serialized, execution is
// thread-safe.
class PlanCache {
 public:
  void execute(int sign, std::size_t n, const cplx* in, cplx* out) {
    fftw_plan p;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto key = std::make_pair(n, sign);
      auto it = plans_.find(key);
      if (it == plans_.end()) {
        // Planned out-of-place to match how execute_dft is invoked below.
        std::vector<cplx> din(n), dout(n);
        p = fftw_plan_dft_1d(static_cast<int>(n),
                             reinterpret_cast<fftw_complex*>(din.data()),
                             reinterpret_cast<fftw_complex*>(dout.data()),
                             sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
      } else {
        p = it->second;
      }
    }
    fftw_execute_dft(
        p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
        reinterpret_cast<fftw_complex*>(out));
  }

 private:
  std::mutex mu_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

inline cplx cis(double phi) { return {std::cos(phi), std::sin(phi)}; }

}  // namespace

SampledSignal dft(const SampledSignal& f) {
  const Grid1D& g = f.grid;
  const Grid1D fg = g.dual();
  const std::size_t n = g.n;
  // F_k = dx e^{-2 pi i x0 xi_k} FFT[f_j e^{-2 pi i j k0 / n}]_k with
  // k0 = -floor(n/2); both ramps come from expanding x_j * xi_k.
  const double k0 = std::floor(static_cast<double>(n) / 2.0);
  std::vector<cplx> buf(n);
  for (std::size_t j = 0; j < n; ++j) {
    buf[j] = f.samples[j] *
             cis(kTwoPi * static_cast<double>(j) * k0 / static_cast<double>(n));
  }
  SampledSignal out(fg);
  plan_cache().execute(FFTW_FORWARD, n, buf.data(), out.samples.data());
  for (std::size_t k = 0; k < n; ++k) {
    out.samples[k] *= g.dx * cis(-kTwoPi * g.x0 * fg.node(k));
  }
  return out;
}

SampledSignal idft(const SampledSignal& F, const Grid1D& out_grid) {
  const Grid1D& fg = F.grid;
  const std::size_t n = fg.n;
  if (out_grid.n != n ||
      std::abs(out_grid.dx * fg.dx * static_cast<double>(n) - 1.0) > 1e-9) {
    fail(Errc::invalid_argument,
         "idft: output grid is not dual to the input grid");
  }
  // O_j = dxi e^{2 pi i j dx xi0} FFT^{-1}-kernel sum of F_k e^{2 pi i x0 xi_k}
  // (the backward FFTW transform is unnormalized, which supplies the bare
  // kernel e^{+2 pi i jk/n}).
  std::vector<cplx> buf(n);
  for (std::size_t k = 0; k < n; ++k) {
    buf[k] = F.samples[k] * cis(kTwoPi * out_grid.x0 * fg.node(k));
  }
  SampledSignal out(out_grid);
  plan_cache().execute(FFTW_BACKWARD, n, buf.data(), out.samples.data());
  for (std::size_t j = 0; j < n; ++j) {
    out.samples[j] *=
        fg.dx * cis(kTwoPi * static_cast<double>(j) * out_grid.dx * fg.x0);
  }
  return out;
}

SampledSignal idft(const SampledSignal& F) { return idft(F, F.grid.dual()); }

std::vector<cplx> spectrum_on(const SampledSignal& u, const Grid1D& xi_grid) {
  std::vector<cplx> out(xi_grid.n, cplx{});
  for (std::size_t k = 0; k < xi_grid.n; ++k) {
    const double xi = xi_grid.node(k);
    cplx acc{};
    for (std::size_t i = 0; i < u.grid.n; ++i) {
      acc += u.samples[i] * cis(-kTwoPi * u.grid.node(i) * xi);
    }
    out[k] = u.grid.dx * acc;
  }
  return out;
}

std::vector<cplx> inverse_spectrum_on(const SampledSignal& w,
                                      const Grid1D& x_grid) {
  std::vector<cplx> out(x_grid.n, cplx{});
  for (std::size_t k = 0; k < x_grid.n; ++k) {
    const double x = x_grid.node(k);
    cplx acc{};
    for (std::size_t i = 0; i < w.grid.n; ++i) {
      acc += w.samples[i] * cis(kTwoPi * w.grid.node(i) * x);
    }
    out[k] = w.grid.dx * acc;
  }
  return out;
}

}  // namespace opwlab
