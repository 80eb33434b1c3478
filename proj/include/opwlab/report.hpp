#pragma once

#include <string>

#include "opwlab/pipelines.hpp"
#include "opwlab/synth.hpp"

namespace opwlab {

// JSON-style key/value serialization of pipeline and synthesis reports.
// Key order is fixed so identical runs produce byte-identical files.
std::string report_to_json(const TheoremReport& r);
std::string synthesis_to_json(const SynthesisResult& r,
                              const SynthesisConfig& cfg);
std::string obstruction_to_json(const ObstructionResult& r, double alpha,
                                double N, std::uint64_t seed);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace opwlab
