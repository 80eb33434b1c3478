#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <random>

#include "opwlab/error.hpp"
#include "opwlab/fourier.hpp"
#include "opwlab/grid.hpp"
#include "opwlab/serialize.hpp"
#include "opwlab/signal.hpp"

using namespace opwlab;

namespace {

SampledSignal random_signal(std::mt19937_64& rng, const Grid1D& g) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  SampledSignal f(g);
  for (cplx& z : f.samples) z = {unif(rng), unif(rng)};
  return f;
}

double rel_l2(const SampledSignal& a, const SampledSignal& b) {
  REQUIRE(compatible(a.grid, b.grid));
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < a.grid.n; ++j) {
    num += std::norm(a.samples[j] - b.samples[j]);
    den += std::norm(b.samples[j]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

TEST_CASE("grid construction and duality") {
  const Grid1D g = make_grid(0.0, 4.0, 256);
  CHECK(g.n == 256);
  CHECK(g.dx == doctest::Approx(8.0 / 256).epsilon(1e-15));
  CHECK(g.x0 == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(g.node(0) == doctest::Approx(-4.0));
  CHECK(g.length() == doctest::Approx(8.0));

  const Grid1D d = g.dual();
  CHECK(d.n == g.n);
  CHECK(d.dx == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
  // Centered grids are self-dual-dual.
  const Grid1D dd = d.dual();
  CHECK(dd.x0 == doctest::Approx(g.x0).epsilon(1e-15));
  CHECK(dd.dx == doctest::Approx(g.dx).epsilon(1e-15));

  CHECK_THROWS_AS(make_grid(0.0, -1.0, 16), opwlab::Error);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 1), opwlab::Error);
}

TEST_CASE("sample point values") {
  // dx = 1/12 puts 1/6 on the lattice; half-width 2 covers every probe.
  const Grid1D g{-2.0, 1.0 / 12.0, 48};
  const SampledSignal s = sample(Sinc{1.0}, g);
  CHECK(std::abs(s.samples[24] - cplx{2.0, 0.0}) < 1e-12);  // x = 0 -> 2B

  const SampledSignal ind = sample(Indicator{1.0}, g);
  CHECK(ind.samples[30].real() == 1.0);  // x = 0.5
  CHECK(ind.samples[42].real() == 0.0);  // x = 1.5
  CHECK(ind.samples[36].real() == 1.0);  // x = 1 exactly: endpoint value 1

  const SampledSignal sin15 = sample(Sinusoid{1.5, 0.0}, g);
  CHECK(std::abs(sin15.samples[26] - cplx{1.0, 0.0}) < 1e-12);  // x = 1/6

  const SampledSignal gau = sample(Gaussian{1.0}, g);
  CHECK(gau.samples[24].real() == doctest::Approx(1.0));
  CHECK(gau.samples[36].real() ==
        doctest::Approx(std::exp(-M_PI)).epsilon(1e-12));
}

TEST_CASE("dft matches the continuous transform on a Gaussian") {
  const Grid1D g = make_grid(0.0, 4.0, 4096);
  const SampledSignal f = sample(Gaussian{1.0}, g);
  const SampledSignal F = dft(f);
  // e^{-pi x^2} is its own transform under this convention.
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < F.grid.n; ++k) {
    const double xi = F.grid.node(k);
    if (std::abs(xi) > 4.0) continue;
    const double want = std::exp(-M_PI * xi * xi);
    num += std::norm(F.samples[k] - cplx{want, 0.0});
    den += want * want;
  }
  CHECK(std::sqrt(num / den) < 1e-10);
}

TEST_CASE("dft of an indicator approximates the sinc kernel") {
  const Grid1D g = make_grid(0.0, 32.0, 8192);
  const SampledSignal f = sample(Indicator{1.0}, g);
  const SampledSignal F = dft(f);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < F.grid.n; ++k) {
    const double xi = F.grid.node(k);
    if (std::abs(xi) > 4.0) continue;
    const double want =
        std::abs(xi) < 1e-12 ? 2.0 : std::sin(2.0 * M_PI * xi) / (M_PI * xi);
    num += std::norm(F.samples[k] - cplx{want, 0.0});
    den += want * want;
  }
  // Grid-dependent tolerance: the endpoint samples of the discontinuous
  // indicator contribute O(dx) to the quadrature.
  CHECK(std::sqrt(num / den) < 2.0 * g.dx);
}

TEST_CASE("dft and idft round trips") {
  std::mt19937_64 rng(7);
  for (const Grid1D& g : {make_grid(0.0, 4.0, 128), make_grid(1.5, 3.0, 81),
                          Grid1D{-2.0, 0.125, 37}}) {
    const SampledSignal f = random_signal(rng, g);
    CHECK(rel_l2(idft(dft(f), g), f) < 1e-12);
  }
  const Grid1D g = make_grid(0.0, 4.0, 64);
  SampledSignal z(g);
  const SampledSignal Z = dft(z);
  for (const cplx& v : Z.samples) CHECK(std::abs(v) == 0.0);
  const SampledSignal back = idft(Z, g);
  for (const cplx& v : back.samples) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("Parseval identity") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_int_distribution<int> pick_n(16, 300);
    const std::size_t n = static_cast<std::size_t>(pick_n(rng));
    std::uniform_real_distribution<double> pick_dx(0.01, 0.5);
    const Grid1D g = make_grid(0.0, 0.5 * pick_dx(rng) * double(n), n);
    const SampledSignal f = random_signal(rng, g);
    CHECK(std::abs(l2_norm(dft(f)) - l2_norm(f)) <= 1e-9 * l2_norm(f));
  }
}

TEST_CASE("norms and inner products") {
  const Grid1D g = make_grid(0.0, 4.0, 1024);  // dx = 1/128, node at 1
  const SampledSignal ind = sample(Indicator{1.0}, g);
  const double n2 = l2_norm(ind) * l2_norm(ind);
  CHECK(std::abs(n2 - 2.0) <= 2.1 * g.dx);  // endpoint samples carry weight

  SampledSignal z(g);
  CHECK(l2_norm(z) == 0.0);

  std::mt19937_64 rng(3);
  const SampledSignal f = random_signal(rng, g);
  const cplx self = inner(f, f);
  CHECK(std::abs(self.imag()) < 1e-12 * std::abs(self.real()));
  CHECK(self.real() == doctest::Approx(l2_norm(f) * l2_norm(f)));

  const SampledSignal other = random_signal(rng, make_grid(0.0, 4.0, 512));
  CHECK_THROWS_AS(inner(f, other), opwlab::Error);
}

TEST_CASE("translate and modulate") {
  const Grid1D g = make_grid(0.0, 8.0, 2048);  // dx = 1/128
  std::mt19937_64 rng(5);
  const SampledSignal f = random_signal(rng, g);

  SUBCASE("identity cases") {
    CHECK(rel_l2(translate(f, 0.0), f) < 1e-15);
    CHECK(rel_l2(modulate(f, 0.0), f) < 1e-15);
  }

  SUBCASE("grid-multiple translation is an exact index shift") {
    const double t = 17.0 * g.dx;
    const SampledSignal ft = translate(f, t);
    for (std::size_t j = 0; j < g.n; ++j) {
      const std::size_t src = (j + g.n - 17) % g.n;
      CHECK(std::abs(ft.samples[j] - f.samples[src]) < 1e-12);
    }
  }

  SUBCASE("translated indicator support") {
    const SampledSignal moved = translate(sample(Indicator{0.5}, g), 2.0);
    for (std::size_t j = 0; j < g.n; ++j) {
      const double x = g.node(j);
      if (x < 1.5 - 1e-9 || x > 2.5 + 1e-9) {
        CHECK(std::abs(moved.samples[j]) < 1e-12);
      }
    }
  }

  SUBCASE("commutation relation") {
    const double t = 0.25, nu = 1.5;
    const SampledSignal a = modulate(translate(f, t), nu);
    const SampledSignal b = translate(modulate(f, nu), t);
    // T_t M_nu = e^{-2 pi i nu t} M_nu T_t.
    const cplx phase = std::exp(cplx{0.0, -2.0 * M_PI * nu * t});
    for (std::size_t j = 0; j < g.n; j += 97) {
      CHECK(std::abs(b.samples[j] - phase * a.samples[j]) < 1e-12);
    }
  }
}

TEST_CASE("tail energy") {
  const Grid1D g = make_grid(0.0, 4.0, 1024);
  const SampledSignal ind2 = sample(Indicator{2.0}, g);
  CHECK(std::abs(tail_energy(ind2, 1.0) - 2.0) <= 2.1 * g.dx);

  // Supported in [-M, M] with B = M: nothing strictly outside.
  CHECK(tail_energy(sample(Indicator{1.5}, g), 1.5) == 0.0);

  CHECK(tail_energy(sample(Gaussian{1.0}, g), 4.0) == 0.0);

  std::mt19937_64 rng(17);
  const SampledSignal f = random_signal(rng, g);
  double prev = tail_energy(f, 0.25);
  for (double B : {0.5, 1.0, 2.0, 3.0}) {
    const double cur = tail_energy(f, B);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
  // tail + interval partition the whole norm exactly.
  for (double B : {0.5, 1.0, 2.5}) {
    const double total = l2_norm(f) * l2_norm(f);
    CHECK(std::abs(tail_energy(f, B) + interval_energy(f, B) - total) <=
          1e-12 * total);
  }
}

TEST_CASE("choose_B") {
  const Grid1D g = make_grid(0.0, 8.0, 2048);

  // Supported target: B never exceeds the support radius.
  const SampledSignal ind = sample(Indicator{1.5}, g);
  CHECK(choose_B(ind, 1e-12) <= 1.5 + 1e-9);

  // Huge budget: the smallest positive node radius wins.
  CHECK(choose_B(sample(Indicator{1.0}, g), 10.0) ==
        doctest::Approx(g.dx).epsilon(1e-12));

  // Gaussian against the direct cumulative-scan oracle.
  const SampledSignal gau = sample(Gaussian{1.0}, g);
  const double budget = 1e-6;
  const double got = choose_B(gau, budget);
  double oracle = 0.0;
  for (std::size_t j = g.n / 2; j < g.n; ++j) {
    const double cand = g.node(j);
    if (cand > 0.0 && tail_energy(gau, cand) < budget) {
      oracle = cand;
      break;
    }
  }
  CHECK(got == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(tail_energy(gau, got) < budget);

  CHECK_THROWS_AS(choose_B(SampledSignal(g), 1.0), opwlab::Error);
  CHECK_THROWS_AS(choose_B(gau, 1e-300), opwlab::Error);
}

TEST_CASE("signal serialization round trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "opwlab_sig_test";
  fs::create_directories(dir);

  std::mt19937_64 rng(23);
  const SampledSignal f = random_signal(rng, Grid1D{-1.75, 0.03125, 113});
  const std::string path = (dir / "roundtrip.sig").string();
  write_signal(path, f);
  const SampledSignal back = read_signal(path);
  CHECK(back.grid.x0 == f.grid.x0);
  CHECK(back.grid.dx == f.grid.dx);
  CHECK(back.grid.n == f.grid.n);
  for (std::size_t j = 0; j < f.grid.n; ++j) {
    CHECK(back.samples[j] == f.samples[j]);  // 17 significant digits
  }

  std::FILE* fp = std::fopen((dir / "bad.sig").string().c_str(), "w");
  REQUIRE(fp != nullptr);
  std::fputs("# x0=0 dx=nope n=4\n0 0\n", fp);
  std::fclose(fp);
  CHECK_THROWS_AS(read_signal((dir / "bad.sig").string()), opwlab::Error);
  CHECK_THROWS_AS(read_signal((dir / "missing.sig").string()), opwlab::Error);
}
