#include <immintrin.h>

#include "opwlab/kernels.hpp"

// AVX2+FMA variants. Layout: interleaved re/im, two complex doubles per
// 256-bit vector [re0 im0 re1 im1]. Complex multiply uses the standard
// movedup / permute / fmaddsub pattern:
//   (a+bi)(c+di): even lanes a*c - b*d, odd lanes b*c + a*d.
// Reductions accumulate lanewise and fold at the end, so their rounding
// differs from the scalar path by reassociation only.

namespace opwlab::kern {
namespace {

inline __m256d cmul_pd(__m256d x, __m256d y) {
  __m256d yr = _mm256_movedup_pd(y);              // [c0 c0 c1 c1]
  __m256d yi = _mm256_permute_pd(y, 0xF);         // [d0 d0 d1 d1]
  __m256d xs = _mm256_permute_pd(x, 0x5);         // [b0 a0 b1 a1]
  return _mm256_fmaddsub_pd(x, yr, _mm256_mul_pd(xs, yi));
}

inline double hsum_pd(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void caxpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    __m256d xs = _mm256_permute_pd(xv, 0x5);
    __m256d prod = _mm256_fmaddsub_pd(xv, ar, _mm256_mul_pd(xs, ai));
    __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(yv, prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void cmul_avx2(const cplx* x, const cplx* y, cplx* z, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  double* zp = reinterpret_cast<double*>(z);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    _mm256_storeu_pd(zp + 2 * i, cmul_pd(xv, yv));
  }
  for (; i < n; ++i) z[i] = x[i] * y[i];
}

void cmul_acc_avx2(cplx a, const cplx* x, const cplx* y, cplx* z,
                   std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  double* zp = reinterpret_cast<double*>(z);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d w = cmul_pd(_mm256_loadu_pd(xp + 2 * i),
                        _mm256_loadu_pd(yp + 2 * i));
    __m256d ws = _mm256_permute_pd(w, 0x5);
    __m256d prod = _mm256_fmaddsub_pd(w, ar, _mm256_mul_pd(ws, ai));
    __m256d zv = _mm256_loadu_pd(zp + 2 * i);
    _mm256_storeu_pd(zp + 2 * i, _mm256_add_pd(zv, prod));
  }
  for (; i < n; ++i) z[i] += a * x[i] * y[i];
}

double sumsq_avx2(const cplx* x, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  double s = hsum_pd(acc);
  for (; i < n; ++i) {
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return s;
}

cplx cdot_avx2(const cplx* x, const cplx* y, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  __m256d re_acc = _mm256_setzero_pd();
  __m256d im_acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    // conj(x)*y: real part sums xr*yr + xi*yi lanewise.
    re_acc = _mm256_fmadd_pd(xv, yv, re_acc);
    // imag part sums xr*yi - xi*yr: addsub accumulates -xi*yr in even
    // lanes and +xr*yi in odd lanes of [xi*yr, xr*yi, ...].
    __m256d xs = _mm256_permute_pd(xv, 0x5);
    im_acc = _mm256_addsub_pd(im_acc, _mm256_mul_pd(xs, yv));
  }
  double re = hsum_pd(re_acc);
  double im = hsum_pd(im_acc);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

}  // namespace

const Table& avx2_table() {
  static const Table t{caxpy_avx2, cmul_avx2, cmul_acc_avx2, sumsq_avx2,
                       cdot_avx2};
  return t;
}

}  // namespace opwlab::kern
