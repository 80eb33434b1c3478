#include "opwlab/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string_view>

#include "opwlab/error.hpp"

namespace fs = std::filesystem;

namespace opwlab {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ensure_parent(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
  }
}

std::ofstream open_out(const std::string& path) {
  ensure_parent(path);
  std::ofstream out(path);
  if (!out) fail(Errc::io, "cannot open for writing: " + path);
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open for reading: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Extracts the value of a `key=value` token from a header line.
std::string header_value(const std::string& line, const std::string& key,
                         const std::string& path) {
  const std::string needle = key + "=";
  std::size_t pos = 0;
  while (true) {
    pos = line.find(needle, pos);
    if (pos == std::string::npos) {
      fail(Errc::parse, path + ": header missing field '" + key + "'");
    }
    // Token boundary: preceded by whitespace or '#'.
    if (pos == 0 || line[pos - 1] == ' ' || line[pos - 1] == '\t' ||
        line[pos - 1] == '#') {
      break;
    }
    pos += needle.size();
  }
  pos += needle.size();
  const std::size_t end = line.find_first_of(" \t", pos);
  return line.substr(pos, end == std::string::npos ? std::string::npos
                                                   : end - pos);
}

double to_double(const std::string& s, const std::string& what,
                 const std::string& path) {
  char* endp = nullptr;
  const double v = std::strtod(s.c_str(), &endp);
  if (endp == s.c_str() || *endp != '\0') {
    fail(Errc::parse, path + ": bad numeric value for " + what + ": '" + s +
                          "'");
  }
  return v;
}

std::size_t to_size(const std::string& s, const std::string& what,
                    const std::string& path) {
  char* endp = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &endp, 10);
  if (endp == s.c_str() || *endp != '\0') {
    fail(Errc::parse, path + ": bad integer value for " + what + ": '" + s +
                          "'");
  }
  return static_cast<std::size_t>(v);
}

cplx parse_pair(const std::string& line, std::size_t lineno,
                const std::string& path) {
  char* endp = nullptr;
  const char* c = line.c_str();
  const double re = std::strtod(c, &endp);
  if (endp == c) {
    fail(Errc::parse,
         path + ":" + std::to_string(lineno) + ": expected 're im' pair");
  }
  c = endp;
  const double im = std::strtod(c, &endp);
  if (endp == c) {
    fail(Errc::parse,
         path + ":" + std::to_string(lineno) + ": expected 're im' pair");
  }
  while (*endp == ' ' || *endp == '\t') ++endp;
  if (*endp != '\0') {
    fail(Errc::parse, path + ":" + std::to_string(lineno) +
                          ": trailing characters after pair");
  }
  return {re, im};
}

void write_pairs(std::ostream& out, const std::vector<cplx>& v) {
  for (const cplx& z : v) {
    out << fmt(z.real()) << ' ' << fmt(z.imag()) << '\n';
  }
}

std::vector<cplx> parse_pairs(const std::vector<std::string>& lines,
                              std::size_t first, std::size_t count,
                              const std::string& path) {
  if (lines.size() < first + count) {
    fail(Errc::parse, path + ": expected " + std::to_string(count) +
                          " sample lines, found " +
                          std::to_string(lines.size() - first));
  }
  std::vector<cplx> v;
  v.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    v.push_back(parse_pair(lines[first + i], first + i + 1, path));
  }
  for (std::size_t i = first + count; i < lines.size(); ++i) {
    if (!lines[i].empty()) {
      fail(Errc::parse,
           path + ":" + std::to_string(i + 1) + ": extra content after data");
    }
  }
  return v;
}

}  // namespace

void write_signal(const std::string& path, const SampledSignal& f) {
  std::ofstream out = open_out(path);
  out << "# x0=" << fmt(f.grid.x0) << " dx=" << fmt(f.grid.dx)
      << " n=" << f.grid.n << '\n';
  write_pairs(out, f.samples);
  if (!out) fail(Errc::io, "write failed: " + path);
}

SampledSignal read_signal(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || lines[0].empty() || lines[0][0] != '#') {
    fail(Errc::parse, path + ": missing signal header line");
  }
  Grid1D g;
  g.x0 = to_double(header_value(lines[0], "x0", path), "x0", path);
  g.dx = to_double(header_value(lines[0], "dx", path), "dx", path);
  g.n = to_size(header_value(lines[0], "n", path), "n", path);
  if (g.n < 1 || g.dx <= 0.0) {
    fail(Errc::parse, path + ": invalid grid header (n >= 1, dx > 0 required)");
  }
  // Skip an optional extension header (e.g. `# centers alpha=...`).
  std::size_t first = 1;
  while (first < lines.size() && !lines[first].empty() &&
         lines[first][0] == '#') {
    ++first;
  }
  return {g, parse_pairs(lines, first, g.n, path)};
}

void write_coefficients(const std::string& path, const SampledSignal& coeffs,
                        double alpha) {
  std::ofstream out = open_out(path);
  out << "# x0=" << fmt(coeffs.grid.x0) << " dx=" << fmt(coeffs.grid.dx)
      << " n=" << coeffs.grid.n << '\n';
  out << "# centers alpha=" << fmt(alpha) << '\n';
  write_pairs(out, coeffs.samples);
  if (!out) fail(Errc::io, "write failed: " + path);
}

std::pair<SampledSignal, double> read_coefficients(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.size() < 2 || lines[0].empty() || lines[0][0] != '#') {
    fail(Errc::parse, path + ": missing coefficient headers");
  }
  if (lines[1].rfind("# centers", 0) != 0) {
    fail(Errc::parse, path + ": missing '# centers' header line");
  }
  const double alpha =
      to_double(header_value(lines[1], "alpha", path), "alpha", path);
  Grid1D g;
  g.x0 = to_double(header_value(lines[0], "x0", path), "x0", path);
  g.dx = to_double(header_value(lines[0], "dx", path), "dx", path);
  g.n = to_size(header_value(lines[0], "n", path), "n", path);
  if (g.n < 1 || g.dx <= 0.0) {
    fail(Errc::parse, path + ": invalid grid header (n >= 1, dx > 0 required)");
  }
  return {SampledSignal(g, parse_pairs(lines, 2, g.n, path)), alpha};
}

void write_spreading(const std::string& path, const SpreadingGrid& g) {
  std::ofstream out = open_out(path);
  out << "# t0=" << fmt(g.grid.tgrid.x0) << " dt=" << fmt(g.grid.tgrid.dx)
      << " nt=" << g.grid.tgrid.n << " v0=" << fmt(g.grid.vgrid.x0)
      << " dv=" << fmt(g.grid.vgrid.dx) << " nv=" << g.grid.vgrid.n << '\n';
  write_pairs(out, g.values);
  if (!out) fail(Errc::io, "write failed: " + path);
}

SpreadingGrid read_spreading(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || lines[0].empty() || lines[0][0] != '#') {
    fail(Errc::parse, path + ": missing spreading header line");
  }
  Grid2D g;
  g.tgrid.x0 = to_double(header_value(lines[0], "t0", path), "t0", path);
  g.tgrid.dx = to_double(header_value(lines[0], "dt", path), "dt", path);
  g.tgrid.n = to_size(header_value(lines[0], "nt", path), "nt", path);
  g.vgrid.x0 = to_double(header_value(lines[0], "v0", path), "v0", path);
  g.vgrid.dx = to_double(header_value(lines[0], "dv", path), "dv", path);
  g.vgrid.n = to_size(header_value(lines[0], "nv", path), "nv", path);
  if (g.tgrid.n < 1 || g.vgrid.n < 1 || g.tgrid.dx <= 0.0 ||
      g.vgrid.dx <= 0.0) {
    fail(Errc::parse, path + ": invalid spreading header");
  }
  return {g, parse_pairs(lines, 1, g.tgrid.n * g.vgrid.n, path)};
}

namespace {

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

std::string sibling(const std::string& record_path, const std::string& leaf) {
  return (fs::path(record_path).parent_path() / leaf).string();
}

}  // namespace

void write_operator(const std::string& path, const OperatorRep& op) {
  ensure_parent(path);
  const std::string stem = stem_of(path);
  std::ostringstream record;
  std::visit(
      [&](const auto& rep) {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, Multiplication>) {
          record << "# opwlab-operator kind=Multiplication\n";
          const std::string leaf = stem + ".m.sig";
          write_signal(sibling(path, leaf), rep.m);
          record << "factor m " << leaf << '\n';
        } else if constexpr (std::is_same_v<T, Convolution>) {
          record << "# opwlab-operator kind=Convolution\n";
          const std::string leaf = stem + ".h.sig";
          write_signal(sibling(path, leaf), rep.h);
          record << "factor h " << leaf << '\n';
        } else if constexpr (std::is_same_v<T, Separable>) {
          record << "# opwlab-operator kind=Separable\n";
          const std::string uleaf = stem + ".u.sig";
          const std::string mleaf = stem + ".m.sig";
          write_signal(sibling(path, uleaf), rep.u);
          write_signal(sibling(path, mleaf), rep.m);
          record << "factor u " << uleaf << '\n';
          record << "factor m " << mleaf << '\n';
        } else if constexpr (std::is_same_v<T, SeparableFreq>) {
          record << "# opwlab-operator kind=SeparableFreq\n";
          const std::string hleaf = stem + ".h.sig";
          const std::string wleaf = stem + ".w.sig";
          write_signal(sibling(path, hleaf), rep.h);
          write_signal(sibling(path, wleaf), rep.w);
          record << "factor h " << hleaf << '\n';
          record << "factor w " << wleaf << '\n';
        } else {
          record << "# opwlab-operator kind=Dense\n";
          const std::string leaf = stem + ".eta.spread";
          write_spreading(sibling(path, leaf), rep.eta);
          record << "dense " << leaf << '\n';
        }
      },
      op);
  std::ofstream out(path);
  if (!out) fail(Errc::io, "cannot open for writing: " + path);
  out << record.str();
  if (!out) fail(Errc::io, "write failed: " + path);
}

OperatorRep read_operator(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || lines[0].rfind("# opwlab-operator", 0) != 0) {
    fail(Errc::parse, path + ": not an operator record");
  }
  const std::string kind = header_value(lines[0], "kind", path);

  std::string dense_leaf;
  std::vector<std::pair<std::string, std::string>> factors;  // role -> leaf
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    std::istringstream iss(line);
    std::string tag;
    iss >> tag;
    if (tag == "factor") {
      std::string role, leaf;
      iss >> role >> leaf;
      if (role.empty() || leaf.empty()) {
        fail(Errc::parse,
             path + ":" + std::to_string(i + 1) + ": malformed factor line");
      }
      factors.emplace_back(role, leaf);
    } else if (tag == "dense") {
      iss >> dense_leaf;
      if (dense_leaf.empty()) {
        fail(Errc::parse,
             path + ":" + std::to_string(i + 1) + ": malformed dense line");
      }
    } else {
      fail(Errc::parse, path + ":" + std::to_string(i + 1) +
                            ": unknown record line '" + tag + "'");
    }
  }

  auto factor = [&](const std::string& role) -> SampledSignal {
    for (const auto& [r, leaf] : factors) {
      if (r == role) return read_signal(sibling(path, leaf));
    }
    fail(Errc::parse, path + ": missing factor '" + role + "' for kind=" + kind);
  };

  if (kind == "Multiplication") return Multiplication{factor("m")};
  if (kind == "Convolution") return Convolution{factor("h")};
  if (kind == "Separable") return Separable{factor("u"), factor("m")};
  if (kind == "SeparableFreq") return SeparableFreq{factor("h"), factor("w")};
  if (kind == "Dense") {
    if (dense_leaf.empty()) {
      fail(Errc::parse, path + ": Dense record missing dense line");
    }
    return Dense{read_spreading(sibling(path, dense_leaf))};
  }
  fail(Errc::parse, path + ": unknown operator kind '" + kind + "'");
}

}  // namespace opwlab
