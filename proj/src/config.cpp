#include "opwlab/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "opwlab/error.hpp"
#include "opwlab/serialize.hpp"

namespace opwlab {
namespace {

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(const std::string& origin, std::size_t line,
                             const std::string& msg) {
  fail(Errc::parse, origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, const std::string& origin,
                    std::size_t line) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') {
    parse_fail(origin, line, "expected a number, got '" + v + "'");
  }
  return d;
}

long parse_long(const std::string& v, const std::string& origin,
                std::size_t line) {
  char* end = nullptr;
  const long l = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') {
    parse_fail(origin, line, "expected an integer, got '" + v + "'");
  }
  return l;
}

std::vector<double> parse_double_list(const std::string& v,
                                      const std::string& origin,
                                      std::size_t line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) parse_fail(origin, line, "empty list entry");
    out.push_back(parse_double(item, origin, line));
  }
  if (out.empty()) parse_fail(origin, line, "empty list");
  return out;
}

}  // namespace

Experiment parse_experiment_text(const std::string& text,
                                 const std::string& origin) {
  Experiment ex;
  std::set<std::string> seen;
  bool have_grid_center = false, have_grid_hw = false, have_grid_n = false;
  bool have_theorem = false, have_target = false, have_alpha = false;
  bool have_gamma = false, have_beta = false, have_synth_b = false;
  TargetSpec target;

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      parse_fail(origin, lineno, "expected 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) parse_fail(origin, lineno, "empty key");
    if (value.empty()) parse_fail(origin, lineno, "empty value for '" + key + "'");
    if (!seen.insert(key).second) {
      parse_fail(origin, lineno, "duplicate key '" + key + "'");
    }

    if (key == "grid.center") {
      ex.grid_center = parse_double(value, origin, lineno);
      have_grid_center = true;
    } else if (key == "grid.half_width") {
      ex.grid_half_width = parse_double(value, origin, lineno);
      have_grid_hw = true;
    } else if (key == "grid.n") {
      const long n = parse_long(value, origin, lineno);
      if (n < 2) parse_fail(origin, lineno, "grid.n must be >= 2");
      ex.grid_n = static_cast<std::size_t>(n);
      have_grid_n = true;
    } else if (key == "theorem") {
      if (value == "t1") {
        ex.theorem = TheoremKind::t1;
      } else if (value == "t2") {
        ex.theorem = TheoremKind::t2;
      } else if (value == "obstruction") {
        ex.theorem = TheoremKind::obstruction;
      } else if (value == "synth-only") {
        ex.theorem = TheoremKind::synth_only;
      } else {
        parse_fail(origin, lineno,
                   "theorem must be one of t1, t2, obstruction, synth-only");
      }
      have_theorem = true;
    } else if (key == "target.kind") {
      if (value != "indicator" && value != "sinc" && value != "sinusoid" &&
          value != "gaussian" && value != "table") {
        parse_fail(origin, lineno, "unknown target.kind '" + value + "'");
      }
      target.kind = value;
      have_target = true;
    } else if (key == "target.b") {
      target.b = parse_double(value, origin, lineno);
    } else if (key == "target.beta") {
      target.beta = parse_double(value, origin, lineno);
    } else if (key == "target.phase") {
      target.phase = parse_double(value, origin, lineno);
    } else if (key == "target.width") {
      target.width = parse_double(value, origin, lineno);
    } else if (key == "target.path") {
      target.path = value;
    } else if (key == "target.window_b") {
      target.window_b = parse_double(value, origin, lineno);
    } else if (key == "box.alpha") {
      ex.alpha = parse_double(value, origin, lineno);
      have_alpha = true;
    } else if (key == "box.gamma") {
      ex.gamma = parse_double(value, origin, lineno);
      have_gamma = true;
    } else if (key == "box.beta") {
      ex.beta = parse_double(value, origin, lineno);
      have_beta = true;
    } else if (key == "budget.epsilon") {
      ex.epsilon_abs = parse_double(value, origin, lineno);
    } else if (key == "budget.epsilon_rel") {
      ex.epsilon_rel = parse_double(value, origin, lineno);
    } else if (key == "budget.c") {
      ex.c = parse_double(value, origin, lineno);
    } else if (key == "synth.extent_factor") {
      ex.extent_factor = parse_double(value, origin, lineno);
    } else if (key == "synth.oversample") {
      const long o = parse_long(value, origin, lineno);
      if (o < 2) parse_fail(origin, lineno, "synth.oversample must be >= 2");
      ex.oversample = static_cast<int>(o);
    } else if (key == "synth.lambda_schedule") {
      ex.lambda_schedule = parse_double_list(value, origin, lineno);
    } else if (key == "synth.lambda") {
      ex.synth_lambda = parse_double(value, origin, lineno);
    } else if (key == "synth.b") {
      ex.synth_b = parse_double(value, origin, lineno);
      have_synth_b = true;
    } else if (key == "pipeline.b_override") {
      ex.b_override = parse_double(value, origin, lineno);
    } else if (key == "pipeline.delta_override") {
      ex.delta_override = parse_double(value, origin, lineno);
    } else if (key == "obstruction.n") {
      ex.obstruction_N = parse_double(value, origin, lineno);
    } else if (key == "obstruction.trials") {
      const long tr = parse_long(value, origin, lineno);
      if (tr < 0) parse_fail(origin, lineno, "obstruction.trials must be >= 0");
      ex.obstruction_trials = static_cast<int>(tr);
    } else if (key == "rng.seed") {
      const long s = parse_long(value, origin, lineno);
      if (s < 0) parse_fail(origin, lineno, "rng.seed must be >= 0");
      ex.seed = static_cast<std::uint64_t>(s);
    } else if (key == "output.dir") {
      ex.output_dir = value;
    } else {
      parse_fail(origin, lineno, "unknown key '" + key + "'");
    }
  }

  // Cross-field requirements.
  auto missing = [&](const std::string& what) {
    fail(Errc::parse, origin + ": missing required key " + what);
  };
  if (!have_grid_center) missing("grid.center");
  if (!have_grid_hw) missing("grid.half_width");
  if (!have_grid_n) missing("grid.n");
  if (!(ex.grid_half_width > 0.0)) {
    fail(Errc::parse, origin + ": grid.half_width must be > 0");
  }
  if (!have_theorem) missing("theorem");
  if (have_target) ex.target = target;

  const bool needs_target = ex.theorem == TheoremKind::t1 ||
                            ex.theorem == TheoremKind::t2 ||
                            ex.theorem == TheoremKind::synth_only;
  if (needs_target && !have_target) missing("target.kind");
  if (target.kind == "table" && target.path.empty() && have_target) {
    fail(Errc::parse, origin + ": target.kind=table requires target.path");
  }
  if (!have_alpha) missing("box.alpha");
  if (ex.theorem == TheoremKind::t1 && !have_gamma) missing("box.gamma");
  if (ex.theorem == TheoremKind::t2 && !have_beta) missing("box.beta");
  if (ex.theorem == TheoremKind::synth_only && !have_synth_b) {
    missing("synth.b");
  }
  if (ex.theorem == TheoremKind::t1 || ex.theorem == TheoremKind::t2) {
    if (!ex.epsilon_abs && !ex.epsilon_rel) {
      missing("budget.epsilon (or budget.epsilon_rel)");
    }
    if (ex.epsilon_abs && ex.epsilon_rel) {
      fail(Errc::parse,
           origin + ": budget.epsilon and budget.epsilon_rel are exclusive");
    }
  }
  if (!(ex.c > 0.0) || !(ex.c < 1.0)) {
    fail(Errc::parse, origin + ": budget.c must lie in (0, 1)");
  }
  return ex;
}

Experiment parse_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_text(ss.str(), path);
}

Grid1D experiment_grid(const Experiment& ex) {
  return make_grid(ex.grid_center, ex.grid_half_width, ex.grid_n);
}

SampledSignal build_target(const TargetSpec& spec, const Grid1D& grid) {
  SampledSignal y;
  if (spec.kind == "indicator") {
    y = sample(Indicator{spec.b}, grid);
  } else if (spec.kind == "sinc") {
    y = sample(Sinc{spec.b}, grid);
  } else if (spec.kind == "sinusoid") {
    y = sample(Sinusoid{spec.beta, spec.phase}, grid);
  } else if (spec.kind == "gaussian") {
    y = sample(Gaussian{spec.width}, grid);
  } else if (spec.kind == "table") {
    y = read_signal(spec.path);
    if (!compatible(y.grid, grid)) {
      fail(Errc::invalid_argument,
           "target table grid does not match the experiment grid");
    }
  } else {
    fail(Errc::invalid_argument, "unknown target kind '" + spec.kind + "'");
  }
  if (spec.window_b) {
    const double slack = node_slack(grid);
    for (std::size_t j = 0; j < grid.n; ++j) {
      if (std::abs(grid.node(j)) > *spec.window_b + slack) {
        y.samples[j] = cplx{};
      }
    }
  }
  return y;
}

}  // namespace opwlab
