#pragma once

#include <string>

#include "opwlab/op.hpp"
#include "opwlab/signal.hpp"

namespace opwlab {

// Columnar signal format:
//   # x0=<float> dx=<float> n=<int>
//   <re> <im>            (one pair per line, >= 15 significant digits)
// An optional second header line `# centers alpha=<float>` marks a
// coefficient record (coefficients laid out on the grid of basis centers).
void write_signal(const std::string& path, const SampledSignal& f);
SampledSignal read_signal(const std::string& path);

void write_coefficients(const std::string& path, const SampledSignal& coeffs,
                        double alpha);
std::pair<SampledSignal, double> read_coefficients(const std::string& path);

// Spreading-grid format:
//   # t0 dt nt v0 dv nv
//   <re> <im>            (row-major, nt*nv lines)
void write_spreading(const std::string& path, const SpreadingGrid& g);
SpreadingGrid read_spreading(const std::string& path);

// Operator record: a tag line plus factor references (paths relative to the
// record's directory):
//   # opwlab-operator kind=<Multiplication|Convolution|Separable|SeparableFreq|Dense>
//   factor <role> <path>   (roles m, h, u, w)
//   dense <path>           (Dense only)
void write_operator(const std::string& path, const OperatorRep& op);
OperatorRep read_operator(const std::string& path);

}  // namespace opwlab
