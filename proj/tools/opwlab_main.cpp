#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opwlab/config.hpp"
#include "opwlab/error.hpp"
#include "opwlab/fourier.hpp"
#include "opwlab/op.hpp"
#include "opwlab/pipelines.hpp"
#include "opwlab/report.hpp"
#include "opwlab/serialize.hpp"
#include "opwlab/synth.hpp"

namespace fs = std::filesystem;
using namespace opwlab;

namespace {

std::string fmt(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string fmt6(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

std::string joinp(const std::string& dir, const std::string& leaf) {
  return (fs::path(dir) / leaf).string();
}

struct RowData {
  double residual = 0.0;
  double achieved = 0.0;
  double energy_ratio = 1.0;
  double hs = 0.0;
  double sup = 0.0;
  bool converged = false;
};

int run_pipeline(const Experiment& ex, const std::string& outdir,
                 RowData* row) {
  const Grid1D grid = experiment_grid(ex);

  if (ex.theorem == TheoremKind::obstruction) {
    const ObstructionResult res =
        verify_obstruction_full(ex.alpha, ex.obstruction_N, grid, ex.seed,
                                ex.obstruction_trials, {});
    write_text_file(joinp(outdir, "report.json"),
                    obstruction_to_json(res, ex.alpha, ex.obstruction_N,
                                        ex.seed));
    const bool ok = res.min_error >= 1.0 - 1e-6;
    std::cout << "obstruction alpha=" << fmt6(ex.alpha)
              << " N=" << fmt6(ex.obstruction_N)
              << " min_error=" << fmt6(res.min_error)
              << " max_leak_fraction=" << fmt6(res.max_leak_fraction)
              << " trials=" << res.trials
              << " confirmed=" << (ok ? "true" : "false") << "\n";
    return ok ? 0 : 2;
  }

  const SampledSignal y = build_target(*ex.target, grid);

  if (ex.theorem == TheoremKind::synth_only) {
    SynthesisConfig cfg{ex.alpha, *ex.synth_b, ex.extent_factor,
                        ex.synth_lambda, ex.oversample};
    const SynthesisResult r = synthesize(y, cfg);
    write_text_file(joinp(outdir, "report.json"), synthesis_to_json(r, cfg));
    write_signal(joinp(outdir, "target.sig"), y);
    write_signal(joinp(outdir, "m.sig"), r.m);
    const double spacing = 1.0 / (2.0 * ex.alpha);
    const std::size_t nc = r.coefficients.size();
    const Grid1D centers{-spacing * (static_cast<double>(nc - 1) / 2.0),
                         spacing, nc};
    write_coefficients(joinp(outdir, "coefficients.sig"),
                       SampledSignal(centers, r.coefficients), ex.alpha);
    std::cout << "synth-only residual=" << fmt6(r.residual)
              << " energy_ratio=" << fmt6(r.energy_ratio)
              << " leakage=" << fmt6(r.leakage) << "\n";
    if (row) {
      *row = {r.residual, r.residual, r.energy_ratio, 0.0,
              energy_report(r).sup_norm, true};
    }
    return 0;
  }

  const double eps =
      ex.epsilon_abs ? *ex.epsilon_abs : *ex.epsilon_rel * l2_norm(y);
  const BudgetSplit budget{eps, ex.c};
  SynthesisConfig cfg;
  cfg.alpha = ex.alpha;
  cfg.B = 1.0;  // pipeline overrides with its chosen fit interval
  cfg.extent_factor = ex.extent_factor;
  cfg.oversample = ex.oversample;
  const PipelineOptions opts{ex.lambda_schedule, ex.b_override,
                             ex.delta_override, ex.seed};

  std::pair<OperatorRep, TheoremReport> built =
      ex.theorem == TheoremKind::t1
          ? build_theorem1(y, ex.alpha, ex.gamma, budget, cfg, opts)
          : build_theorem2(y, ex.alpha, ex.beta, budget, cfg, opts);
  const OperatorRep& op = built.first;
  const TheoremReport& rep = built.second;

  const SampledSignal input = ex.theorem == TheoremKind::t1
                                  ? sample(Indicator{rep.B}, grid)
                                  : sample(Sinc{rep.B}, grid);
  const SampledSignal out = opwlab::apply(op, input);

  write_text_file(joinp(outdir, "report.json"), report_to_json(rep));
  write_signal(joinp(outdir, "input.sig"), input);
  write_signal(joinp(outdir, "output.sig"), out);
  write_signal(joinp(outdir, "target.sig"), y);
  if (ex.theorem == TheoremKind::t1) {
    const auto& sep = std::get<Separable>(op);
    write_signal(joinp(outdir, "m.sig"), sep.m);
    if (rep.delta < rep.B) {
      write_signal(joinp(outdir, "smoothed_indicator.sig"),
                   boxcar_smoothed_indicator(rep.B, rep.delta, grid));
    }
  } else {
    const auto& sf = std::get<SeparableFreq>(op);
    write_signal(joinp(outdir, "h.sig"), sf.h);
  }
  write_operator(joinp(outdir, "operator.op"), op);

  std::cout << rep.pipeline
            << " converged=" << (rep.converged ? "true" : "false")
            << " B=" << fmt6(rep.B) << " delta=" << fmt6(rep.delta)
            << " achieved_error=" << fmt6(rep.achieved_error)
            << " epsilon=" << fmt6(eps)
            << " energy_ratio=" << fmt6(rep.energy_ratio)
            << " hs_norm=" << fmt6(rep.hs_norm) << "\n";
  if (row) {
    *row = {rep.residual, rep.achieved_error, rep.energy_ratio, rep.hs_norm,
            rep.symbol_sup, rep.converged};
  }
  return rep.converged ? 0 : 2;
}

int cmd_run(const std::string& cfg_path) {
  const Experiment ex = parse_experiment_file(cfg_path);
  return run_pipeline(ex, ex.output_dir, nullptr);
}

int cmd_sweep(const std::string& cfg_path, const std::string& param,
              const std::string& values_csv) {
  const Experiment base = parse_experiment_file(cfg_path);
  if (base.theorem != TheoremKind::t1 && base.theorem != TheoremKind::t2) {
    fail(Errc::invalid_argument, "sweep requires a t1 or t2 config");
  }
  if (param != "B" && param != "lambda" && param != "alpha" &&
      param != "delta" && param != "epsilon") {
    fail(Errc::invalid_argument,
         "sweep parameter must be one of B, lambda, alpha, delta, epsilon");
  }
  std::vector<std::string> tokens;
  {
    std::stringstream ss(values_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) tokens.push_back(item);
    }
  }
  if (tokens.empty()) {
    fail(Errc::invalid_argument, "sweep: empty value list");
  }

  std::ostringstream csv;
  csv << "value,residual,achieved_error,energy_ratio,hs_norm,symbol_sup,"
         "converged\n";
  int final_code = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    char* end = nullptr;
    const double v = std::strtod(tokens[i].c_str(), &end);
    if (end == tokens[i].c_str() || *end != '\0') {
      fail(Errc::invalid_argument,
           "sweep: bad value '" + tokens[i] + "'");
    }
    Experiment ex = base;
    if (param == "B") {
      ex.b_override = v;
    } else if (param == "lambda") {
      ex.lambda_schedule = {v};
    } else if (param == "alpha") {
      ex.alpha = v;
    } else if (param == "delta") {
      ex.delta_override = v;
    } else {
      ex.epsilon_abs = v;
      ex.epsilon_rel.reset();
    }
    RowData row;
    const int rc =
        run_pipeline(ex, joinp(base.output_dir, "run_" + std::to_string(i)),
                     &row);
    if (rc != 0) final_code = 2;
    csv << tokens[i] << ',' << fmt(row.residual) << ',' << fmt(row.achieved)
        << ',' << fmt(row.energy_ratio) << ',' << fmt(row.hs) << ','
        << fmt(row.sup) << ',' << (row.converged ? "true" : "false") << "\n";
  }
  write_text_file(joinp(base.output_dir, "sweep.csv"), csv.str());
  return final_code;
}

// Natural spreading grid for a structured rep read from disk: the factor
// grids where they exist, support-truncated lattices on the missing axis.
Grid2D natural_grid(const OperatorRep& op) {
  const std::optional<SupportBox> box = support_box(op);
  auto symmetric_axis = [](double extent, double step,
                           std::size_t hard_cap) -> Grid1D {
    long R = std::lround(std::ceil(extent / step - 1e-9));
    if (R < 1) R = 1;
    const std::size_t n = static_cast<std::size_t>(2 * R + 1);
    if (n >= hard_cap) return Grid1D{};  // sentinel, caller falls back
    return Grid1D{-static_cast<double>(R) * step, step, n};
  };
  return std::visit(
      [&](const auto& rep) -> Grid2D {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, Dense>) {
          return rep.eta.grid;
        } else if constexpr (std::is_same_v<T, Multiplication>) {
          const Grid1D dual = rep.m.grid.dual();
          Grid1D vg = symmetric_axis(
              box ? std::max(std::abs(box->v_min), std::abs(box->v_max)) : 1.0,
              dual.dx, rep.m.grid.n);
          if (vg.n < 3) vg = dual;
          return Grid2D{Grid1D{0.0, rep.m.grid.dx, 1}, vg};
        } else if constexpr (std::is_same_v<T, Convolution>) {
          const Grid1D dual = rep.h.grid.dual();
          Grid1D tg = symmetric_axis(
              box ? std::max(std::abs(box->t_min), std::abs(box->t_max)) : 1.0,
              rep.h.grid.dx, rep.h.grid.n);
          if (tg.n < 3) tg = rep.h.grid;
          return Grid2D{tg, Grid1D{0.0, dual.dx, 1}};
        } else if constexpr (std::is_same_v<T, Separable>) {
          const Grid1D dual = rep.m.grid.dual();
          Grid1D vg = symmetric_axis(
              box ? std::max(std::abs(box->v_min), std::abs(box->v_max)) : 1.0,
              dual.dx, rep.m.grid.n);
          if (vg.n < 3) vg = dual;
          return Grid2D{rep.u.grid, vg};
        } else {
          const SeparableFreq& sf = rep;
          Grid1D tg = symmetric_axis(
              box ? std::max(std::abs(box->t_min), std::abs(box->t_max)) : 1.0,
              sf.h.grid.dx, sf.h.grid.n);
          if (tg.n < 3) tg = sf.h.grid;
          return Grid2D{tg, sf.w.grid};
        }
      },
      op);
}

const char* kind_name(const OperatorRep& op) {
  return std::visit(
      [](const auto& rep) {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, Multiplication>) return "Multiplication";
        if constexpr (std::is_same_v<T, Convolution>) return "Convolution";
        if constexpr (std::is_same_v<T, Separable>) return "Separable";
        if constexpr (std::is_same_v<T, SeparableFreq>) return "SeparableFreq";
        return "Dense";
      },
      op);
}

int cmd_inspect(const std::string& path, bool want_symbol, bool want_spreading,
                bool want_hs, bool want_involution) {
  const OperatorRep op = read_operator(path);
  const bool any = want_symbol || want_spreading || want_hs || want_involution;

  auto materialize = [&]() -> SpreadingGrid {
    if (const Dense* d = std::get_if<Dense>(&op)) return d->eta;
    return densify(op, natural_grid(op));
  };

  if (want_spreading) {
    const std::string outp = path + ".spreading";
    write_spreading(outp, materialize());
    std::cout << "spreading written: " << outp << "\n";
  }
  if (want_symbol) {
    const std::string outp = path + ".symbol";
    write_spreading(outp, spreading_to_symbol(materialize()));
    std::cout << "symbol written: " << outp << "\n";
  }
  if (want_hs) {
    std::cout << "hs_norm: " << fmt(hs_norm(op)) << "\n";
  }
  if (want_involution) {
    const SpreadingGrid eta = materialize();
    const SpreadingGrid back = symbol_to_spreading(spreading_to_symbol(eta));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < eta.values.size(); ++i) {
      num += std::norm(back.values[i] - eta.values[i]);
      den += std::norm(eta.values[i]);
    }
    const double rel = den > 0.0 ? std::sqrt(num / den) : 0.0;
    std::cout << "involution relative error: " << fmt(rel) << "\n";
  }

  if (!any) {
    std::cout << "kind: " << kind_name(op) << "\n";
    try {
      std::cout << "hs_norm: " << fmt(hs_norm(op)) << "\n";
    } catch (const Error& e) {
      if (e.code() != Errc::not_hilbert_schmidt) throw;
      std::cout << "hs_norm: undefined (distributional spreading)\n";
    }
    std::cout << "symbol_sup: " << fmt(symbol_sup_norm(op)) << "\n";
    if (const std::optional<SupportBox> box = support_box(op)) {
      std::cout << "support_box: [" << fmt6(box->t_min) << ", "
                << fmt6(box->t_max) << "] x [" << fmt6(box->v_min) << ", "
                << fmt6(box->v_max) << "]\n";
    } else {
      std::cout << "support_box: empty\n";
    }
    if (const Dense* d = std::get_if<Dense>(&op)) {
      const Grid1D& tg = d->eta.grid.tgrid;
      std::size_t n = 4 * tg.n;
      if (n % 2 != 0) ++n;
      const Grid1D fgrid{-static_cast<double>(n / 2) * tg.dx, tg.dx, n};
      std::cout << "operator_norm_estimate: "
                << fmt(operator_norm_estimate(*d, fgrid)) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for operators with band-shaped "
               "spreading support"};
  app.require_subcommand(1);

  std::string run_cfg;
  CLI::App* run =
      app.add_subcommand("run", "run an experiment described by a config file");
  run->add_option("config", run_cfg, "experiment config file")->required();

  std::string sweep_cfg, sweep_param, sweep_values;
  CLI::App* sweep =
      app.add_subcommand("sweep", "run a parameter sweep over a base config");
  sweep->add_option("config", sweep_cfg, "experiment config file")->required();
  sweep->add_option("--param", sweep_param,
                    "parameter to sweep (B, lambda, alpha, delta, epsilon)")
      ->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")
      ->required();

  std::string inspect_path;
  bool f_symbol = false, f_spreading = false, f_hs = false, f_invol = false;
  CLI::App* inspect =
      app.add_subcommand("inspect", "inspect a serialized operator");
  inspect->add_option("operator", inspect_path, "operator record file")
      ->required();
  inspect->add_flag("--symbol", f_symbol, "write the symbol grid");
  inspect->add_flag("--spreading", f_spreading, "write the spreading grid");
  inspect->add_flag("--hs-norm", f_hs, "print the Hilbert-Schmidt norm");
  inspect->add_flag("--check-involution", f_invol,
                    "run the symplectic round trip and print the error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run->parsed()) return cmd_run(run_cfg);
    if (sweep->parsed()) return cmd_sweep(sweep_cfg, sweep_param, sweep_values);
    if (inspect->parsed()) {
      return cmd_inspect(inspect_path, f_symbol, f_spreading, f_hs, f_invol);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
