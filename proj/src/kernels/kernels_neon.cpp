#include <arm_neon.h>

#include "opwlab/kernels.hpp"

// NEON (aarch64) variants. vld2q_f64 deinterleaves a pair of complex doubles
// into separate re/im registers, making the complex arithmetic direct.

namespace opwlab::kern {
namespace {

void caxpy_neon(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const float64x2_t ar = vdupq_n_f64(a.real());
  const float64x2_t ai = vdupq_n_f64(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2x2_t xv = vld2q_f64(xp + 2 * i);
    float64x2x2_t yv = vld2q_f64(yp + 2 * i);
    yv.val[0] = vfmaq_f64(vfmsq_f64(yv.val[0], ai, xv.val[1]), ar, xv.val[0]);
    yv.val[1] = vfmaq_f64(vfmaq_f64(yv.val[1], ai, xv.val[0]), ar, xv.val[1]);
    vst2q_f64(yp + 2 * i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void cmul_neon(const cplx* x, const cplx* y, cplx* z, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  double* zp = reinterpret_cast<double*>(z);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2x2_t xv = vld2q_f64(xp + 2 * i);
    float64x2x2_t yv = vld2q_f64(yp + 2 * i);
    float64x2x2_t zv;
    zv.val[0] = vfmsq_f64(vmulq_f64(xv.val[0], yv.val[0]), xv.val[1], yv.val[1]);
    zv.val[1] = vfmaq_f64(vmulq_f64(xv.val[0], yv.val[1]), xv.val[1], yv.val[0]);
    vst2q_f64(zp + 2 * i, zv);
  }
  for (; i < n; ++i) z[i] = x[i] * y[i];
}

void cmul_acc_neon(cplx a, const cplx* x, const cplx* y, cplx* z,
                   std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  double* zp = reinterpret_cast<double*>(z);
  const float64x2_t ar = vdupq_n_f64(a.real());
  const float64x2_t ai = vdupq_n_f64(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2x2_t xv = vld2q_f64(xp + 2 * i);
    float64x2x2_t yv = vld2q_f64(yp + 2 * i);
    float64x2_t wr =
        vfmsq_f64(vmulq_f64(xv.val[0], yv.val[0]), xv.val[1], yv.val[1]);
    float64x2_t wi =
        vfmaq_f64(vmulq_f64(xv.val[0], yv.val[1]), xv.val[1], yv.val[0]);
    float64x2x2_t zv = vld2q_f64(zp + 2 * i);
    zv.val[0] = vfmaq_f64(vfmsq_f64(zv.val[0], ai, wi), ar, wr);
    zv.val[1] = vfmaq_f64(vfmaq_f64(zv.val[1], ai, wr), ar, wi);
    vst2q_f64(zp + 2 * i, zv);
  }
  for (; i < n; ++i) z[i] += a * x[i] * y[i];
}

double sumsq_neon(const cplx* x, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2x2_t xv = vld2q_f64(xp + 2 * i);
    acc = vfmaq_f64(acc, xv.val[0], xv.val[0]);
    acc = vfmaq_f64(acc, xv.val[1], xv.val[1]);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return s;
}

cplx cdot_neon(const cplx* x, const cplx* y, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  float64x2_t re_acc = vdupq_n_f64(0.0);
  float64x2_t im_acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2x2_t xv = vld2q_f64(xp + 2 * i);
    float64x2x2_t yv = vld2q_f64(yp + 2 * i);
    re_acc = vfmaq_f64(re_acc, xv.val[0], yv.val[0]);
    re_acc = vfmaq_f64(re_acc, xv.val[1], yv.val[1]);
    im_acc = vfmaq_f64(im_acc, xv.val[0], yv.val[1]);
    im_acc = vfmsq_f64(im_acc, xv.val[1], yv.val[0]);
  }
  double re = vaddvq_f64(re_acc);
  double im = vaddvq_f64(im_acc);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

}  // namespace

const Table& neon_table() {
  static const Table t{caxpy_neon, cmul_neon, cmul_acc_neon, sumsq_neon,
                       cdot_neon};
  return t;
}

}  // namespace opwlab::kern
