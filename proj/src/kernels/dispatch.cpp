#include <atomic>

#include "opwlab/error.hpp"
#include "opwlab/kernels.hpp"

namespace opwlab::kern {
namespace {

bool host_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(OPWLAB_BUILD_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(OPWLAB_BUILD_NEON)
      return true;  // NEON is baseline on aarch64
#else
      return false;
#endif
  }
  return false;
}

const Table* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &scalar_table();
    case Isa::avx2:
#if defined(OPWLAB_BUILD_AVX2)
      return &avx2_table();
#else
      return nullptr;
#endif
    case Isa::neon:
#if defined(OPWLAB_BUILD_NEON)
      return &neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Isa detect_best() {
  if (host_supports(Isa::avx2)) return Isa::avx2;
  if (host_supports(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

struct Dispatch {
  std::atomic<const Table*> table;
  std::atomic<Isa> isa;
  Dispatch() {
    Isa best = detect_best();
    isa.store(best);
    table.store(table_for(best));
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "?";
}

Isa active_isa() { return dispatch().isa.load(); }

bool isa_available(Isa isa) { return host_supports(isa); }

void force_isa(Isa isa) {
  if (!host_supports(isa)) {
    fail(Errc::invalid_argument,
         std::string("kernel variant not available on this host: ") +
             isa_name(isa));
  }
  dispatch().isa.store(isa);
  dispatch().table.store(table_for(isa));
}

void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  dispatch().table.load()->caxpy(a, x, y, n);
}
void cmul(const cplx* x, const cplx* y, cplx* z, std::size_t n) {
  dispatch().table.load()->cmul(x, y, z, n);
}
void cmul_acc(cplx a, const cplx* x, const cplx* y, cplx* z, std::size_t n) {
  dispatch().table.load()->cmul_acc(a, x, y, z, n);
}
double sumsq(const cplx* x, std::size_t n) {
  return dispatch().table.load()->sumsq(x, n);
}
cplx cdot(const cplx* x, const cplx* y, std::size_t n) {
  return dispatch().table.load()->cdot(x, y, n);
}

}  // namespace opwlab::kern
