#include "opwlab/fourier.hpp"
#include "opwlab/op.hpp"

namespace opwlab {
namespace {

// Shared core of the symplectic transform and its inverse (the involution):
// forward calibrated transform along axis 0, inverse-sense transform along
// axis 1, transposed so the output is indexed (dual-of-axis-1,
// dual-of-axis-0). For eta(t, v) this yields sigma(x, xi); applied again it
// returns eta on the original axes whenever both axes satisfy
// x0 == -floor(n/2)*dx.
SpreadingGrid symplectic_transform(const SpreadingGrid& in) {
  const Grid1D& ag = in.grid.tgrid;
  const Grid1D& bg = in.grid.vgrid;
  const std::size_t na = ag.n;
  const std::size_t nb = bg.n;

  // Forward along axis 0 (t -> xi).
  std::vector<cplx> mid(na * nb);  // indexed [k (xi), j (axis 1)]
  SampledSignal col(ag);
  for (std::size_t j = 0; j < nb; ++j) {
    for (std::size_t i = 0; i < na; ++i) col.samples[i] = in.at(i, j);
    const SampledSignal C = dft(col);
    for (std::size_t k = 0; k < na; ++k) mid[k * nb + j] = C.samples[k];
  }

  // Inverse-sense along axis 1 (v -> x), writing the transpose.
  SpreadingGrid out(Grid2D{bg.dual(), ag.dual()});
  SampledSignal row(bg);
  for (std::size_t k = 0; k < na; ++k) {
    for (std::size_t j = 0; j < nb; ++j) row.samples[j] = mid[k * nb + j];
    const SampledSignal R = idft(row, out.grid.tgrid);
    for (std::size_t l = 0; l < nb; ++l) out.at(l, k) = R.samples[l];
  }
  return out;
}

}  // namespace

SpreadingGrid spreading_to_symbol(const SpreadingGrid& eta) {
  return symplectic_transform(eta);
}

SpreadingGrid symbol_to_spreading(const SpreadingGrid& sigma) {
  return symplectic_transform(sigma);
}

}  // namespace opwlab
