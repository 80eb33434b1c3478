#include "opwlab/report.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "opwlab/error.hpp"

namespace opwlab {
namespace {

using ordered = nlohmann::ordered_json;

ordered box_json(const std::optional<SupportBox>& box) {
  if (!box) return nullptr;
  ordered j;
  j["t_min"] = box->t_min;
  j["t_max"] = box->t_max;
  j["v_min"] = box->v_min;
  j["v_max"] = box->v_max;
  return j;
}

ordered grid_json(const Grid1D& g) {
  ordered j;
  j["x0"] = g.x0;
  j["dx"] = g.dx;
  j["n"] = g.n;
  return j;
}

ordered cfg_json(const SynthesisConfig& cfg) {
  ordered j;
  j["alpha"] = cfg.alpha;
  j["B"] = cfg.B;
  j["extent_factor"] = cfg.extent_factor;
  j["lambda"] = cfg.lambda;
  j["oversample"] = cfg.oversample;
  return j;
}

}  // namespace

std::string report_to_json(const TheoremReport& r) {
  ordered j;
  j["pipeline"] = r.pipeline;
  j["B"] = r.B;
  j["delta"] = r.delta;
  j["achieved_error"] = r.achieved_error;
  j["residual"] = r.residual;
  j["tail"] = r.tail;
  j["mollifier_boundary_term"] = r.mollifier_boundary_term;
  j["hs_norm"] = r.hs_norm;
  j["symbol_sup"] = r.symbol_sup;
  j["energy_ratio"] = r.energy_ratio;
  j["support_box"] = box_json(r.support_box);
  j["budget"] = ordered{{"epsilon", r.budget.epsilon}, {"c", r.budget.c}};
  j["converged"] = r.converged;
  j["grid"] = grid_json(r.grid);
  j["cfg"] = cfg_json(r.cfg);
  j["lambda_used"] = r.lambda_used;
  j["seed"] = r.seed;
  return j.dump(2) + "\n";
}

std::string synthesis_to_json(const SynthesisResult& r,
                              const SynthesisConfig& cfg) {
  const EnergyReport e = energy_report(r);
  ordered j;
  j["pipeline"] = "synth-only";
  j["residual"] = r.residual;
  j["total_energy"] = r.total_energy;
  j["interval_energy"] = r.interval_energy;
  j["energy_ratio"] = r.energy_ratio;
  j["leakage"] = r.leakage;
  j["sup_norm"] = e.sup_norm;
  j["n_coefficients"] = r.coefficients.size();
  j["grid"] = grid_json(r.m.grid);
  j["cfg"] = cfg_json(cfg);
  return j.dump(2) + "\n";
}

std::string obstruction_to_json(const ObstructionResult& r, double alpha,
                                double N, std::uint64_t seed) {
  ordered j;
  j["pipeline"] = "obstruction";
  j["alpha"] = alpha;
  j["N"] = N;
  j["min_error"] = r.min_error;
  j["max_leak_fraction"] = r.max_leak_fraction;
  j["trials"] = r.trials;
  j["obstruction_confirmed"] = r.min_error >= 1.0 - 1e-6;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  std::ofstream out(path);
  if (!out) fail(Errc::io, "cannot open for writing: " + path);
  out << content;
  if (!out) fail(Errc::io, "write failed: " + path);
}

}  // namespace opwlab
