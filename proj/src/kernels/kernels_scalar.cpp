#include "opwlab/kernels.hpp"

// Reference implementations. Plain loops over std::complex<double>; every
// SIMD variant must match these to reduction-roundoff tolerance.

namespace opwlab::kern {
namespace {

void caxpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void cmul_scalar(const cplx* x, const cplx* y, cplx* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

void cmul_acc_scalar(cplx a, const cplx* x, const cplx* y, cplx* z,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] += a * x[i] * y[i];
}

double sumsq_scalar(const cplx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return acc;
}

cplx cdot_scalar(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

}  // namespace

const Table& scalar_table() {
  static const Table t{caxpy_scalar, cmul_scalar, cmul_acc_scalar,
                       sumsq_scalar, cdot_scalar};
  return t;
}

}  // namespace opwlab::kern
