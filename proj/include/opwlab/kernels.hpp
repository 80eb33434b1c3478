#pragma once

#include <complex>
#include <cstddef>

// Low-level array kernels behind the quadrature loops: scalar reference
// implementations plus SIMD variants selected at runtime. All higher-level
// operations go through these entry points, so the scalar/SIMD equivalence
// tests cover every numeric path.

namespace opwlab::kern {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);

// ISA selected by the dispatcher (best available unless forced).
Isa active_isa();

// Test hook: pin the implementation. Throws Errc::invalid_argument if the
// requested variant is not compiled in or not supported by the host.
void force_isa(Isa isa);

// Variants compiled into this binary (always includes scalar).
bool isa_available(Isa isa);

// y[i] += a * x[i]
void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n);

// z[i] = x[i] * y[i]
void cmul(const cplx* x, const cplx* y, cplx* z, std::size_t n);

// z[i] += a * x[i] * y[i]
void cmul_acc(cplx a, const cplx* x, const cplx* y, cplx* z, std::size_t n);

// sum_i |x[i]|^2
double sumsq(const cplx* x, std::size_t n);

// sum_i conj(x[i]) * y[i]
cplx cdot(const cplx* x, const cplx* y, std::size_t n);

// The raw function tables, one per variant (null entries when not built).
struct Table {
  void (*caxpy)(cplx, const cplx*, cplx*, std::size_t) = nullptr;
  void (*cmul)(const cplx*, const cplx*, cplx*, std::size_t) = nullptr;
  void (*cmul_acc)(cplx, const cplx*, const cplx*, cplx*, std::size_t) = nullptr;
  double (*sumsq)(const cplx*, std::size_t) = nullptr;
  cplx (*cdot)(const cplx*, const cplx*, std::size_t) = nullptr;
};

const Table& scalar_table();
#ifdef OPWLAB_BUILD_AVX2
const Table& avx2_table();
#endif
#ifdef OPWLAB_BUILD_NEON
const Table& neon_table();
#endif

}  // namespace opwlab::kern
