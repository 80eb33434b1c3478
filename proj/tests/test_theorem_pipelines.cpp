#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "opwlab/error.hpp"
#include "opwlab/fourier.hpp"
#include "opwlab/op.hpp"
#include "opwlab/pipelines.hpp"
#include "opwlab/signal.hpp"
#include "opwlab/synth.hpp"

using namespace opwlab;

namespace {

double norm_diff(const SampledSignal& a, const SampledSignal& b) {
  REQUIRE(compatible(a.grid, b.grid));
  SampledSignal d(a.grid);
  for (std::size_t j = 0; j < a.grid.n; ++j) {
    d.samples[j] = a.samples[j] - b.samples[j];
  }
  return l2_norm(d);
}

// Compactly supported low-frequency target: sin(2 pi 0.25 x) on [-2, 2].
// Bandlimited well inside alpha = 1, so theorem-1 converges without
// superoscillation and with little headroom used.
SampledSignal easy_t1_target(const Grid1D& g) {
  SampledSignal y = sample(Sinusoid{0.25, 0.0}, g);
  const SampledSignal chi = sample(Indicator{2.0}, g);
  for (std::size_t j = 0; j < g.n; ++j) y.samples[j] *= chi.samples[j];
  return y;
}

void check_report_populated(const TheoremReport& rep) {
  CHECK(rep.B > 0.0);
  CHECK(rep.delta > 0.0);
  CHECK(std::isfinite(rep.achieved_error));
  CHECK(rep.residual >= 0.0);
  CHECK(rep.tail >= 0.0);
  CHECK(rep.mollifier_boundary_term >= 0.0);
  CHECK(std::isfinite(rep.hs_norm));
  CHECK(rep.hs_norm > 0.0);
  CHECK(rep.symbol_sup > 0.0);
  CHECK(rep.energy_ratio >= 1.0);
  CHECK(rep.support_box.has_value());
  CHECK(rep.lambda_used > 0.0);
}

}  // namespace

TEST_CASE("theorem 1: supported target gives B <= M and a converged report") {
  const Grid1D g = make_grid(0.0, 16.0, 1024);  // dx = 1/32
  const SampledSignal y = easy_t1_target(g);
  BudgetSplit budget;
  budget.epsilon = 0.1 * l2_norm(y);
  budget.c = 0.5;

  auto [op, rep] = build_theorem1(y, 1.0, 1.0, budget, SynthesisConfig{});

  // Support radius M = 2: the discrete tail vanishes at B = 2, so the chosen
  // B never exceeds it.
  CHECK(rep.B <= 2.0 + 1e-9);
  CHECK(rep.tail == tail_energy(y, rep.B));
  CHECK(rep.tail < budget.c * budget.epsilon * budget.epsilon);

  check_report_populated(rep);
  CHECK(rep.pipeline == "t1");
  CHECK(rep.grid == g);
  CHECK(rep.converged);
  CHECK(rep.achieved_error < budget.epsilon);

  // Post-hoc measurement contract: the reported error is exactly the norm of
  // apply(op, Indicator(B)) - y, recomputable from the returned operator.
  const SampledSignal chi = sample(Indicator{rep.B}, g);
  const SampledSignal out = opwlab::apply(op, chi);
  CHECK(norm_diff(out, y) == doctest::Approx(rep.achieved_error).epsilon(1e-12));

  // Support guarantee inside the requested box [-gamma, gamma] x [-alpha, alpha].
  REQUIRE(rep.support_box.has_value());
  CHECK(rep.support_box->t_min >= -1.0 - 1e-9);
  CHECK(rep.support_box->t_max <= 1.0 + 1e-9);
  CHECK(rep.support_box->v_min >= -1.0 - 1e-9);
  CHECK(rep.support_box->v_max <= 1.0 + 1e-9);

  // The mollifier width starts at gamma/2 and only ever shrinks.
  CHECK(rep.delta <= 0.5 + 1e-12);
  CHECK(rep.delta >= 2.0 * g.dx - 1e-12);

  SUBCASE("monotone budget: enlarging epsilon keeps convergence") {
    BudgetSplit wider = budget;
    wider.epsilon = 1.3 * budget.epsilon;
    auto [op2, rep2] = build_theorem1(y, 1.0, 1.0, wider, SynthesisConfig{});
    CHECK(rep2.converged);
    CHECK(rep2.achieved_error < wider.epsilon);
  }
}

TEST_CASE("theorem 1: bandlimited sinc target needs no superoscillation") {
  // y = phi_alpha itself (alpha = 1): the multiplier can track the target, so
  // the energy ratio stays near 1 and the HS norm stays modest.
  const Grid1D g = make_grid(0.0, 64.0, 4096);  // dx = 1/32
  const SampledSignal y = sample(Sinc{1.0}, g);
  BudgetSplit budget;
  budget.epsilon = 0.1 * l2_norm(y);

  auto [op, rep] = build_theorem1(y, 1.0, 1.0, budget, SynthesisConfig{});

  CHECK(rep.converged);
  CHECK(rep.achieved_error < budget.epsilon);
  // The 1/x^2 energy tail forces B near 1/(pi^2 * tail_share) ~ 10.
  CHECK(rep.B >= 8.0);
  CHECK(rep.B <= 13.0);
  CHECK(rep.energy_ratio >= 1.0);
  CHECK(rep.energy_ratio < 1.5);
  CHECK(rep.hs_norm < 10.0);
  check_report_populated(rep);
}

TEST_CASE("theorem 1: overrides pin B and the mollifier width") {
  const Grid1D g = make_grid(0.0, 16.0, 1024);  // dx = 1/32
  const SampledSignal y = easy_t1_target(g);
  BudgetSplit budget;
  budget.epsilon = 0.1 * l2_norm(y);

  PipelineOptions opts;
  opts.b_override = 1.2;
  opts.delta_override = 0.1;  // snaps to round(0.1 * 32) = 3 steps = 0.09375
  auto [op, rep] = build_theorem1(y, 1.0, 1.0, budget, SynthesisConfig{}, opts);

  CHECK(rep.B == 1.2);
  CHECK(rep.tail == tail_energy(y, 1.2));
  CHECK(rep.delta == doctest::Approx(0.09375).epsilon(1e-15));
  check_report_populated(rep);
}

TEST_CASE("theorem 1: missed budget yields a populated non-converged report") {
  const Grid1D g = make_grid(0.0, 16.0, 1024);
  const SampledSignal y = easy_t1_target(g);
  BudgetSplit budget;
  budget.epsilon = 1e-8 * l2_norm(y);  // unreachable residual share

  auto [op, rep] = build_theorem1(y, 1.0, 1.0, budget, SynthesisConfig{});

  CHECK_FALSE(rep.converged);
  CHECK(rep.achieved_error >= budget.epsilon);
  // Even the microscopic tail share is attainable at the support edge; only
  // the residual share is out of reach.
  CHECK(rep.B <= 2.0 + 1e-9);
  CHECK(rep.tail < budget.c * budget.epsilon * budget.epsilon);
  check_report_populated(rep);
}

TEST_CASE("theorem 1: precondition failures") {
  const Grid1D g = make_grid(0.0, 16.0, 1024);  // dx = 1/32
  const SampledSignal y = easy_t1_target(g);
  BudgetSplit budget;
  budget.epsilon = 0.1 * l2_norm(y);

  SUBCASE("zero target") {
    const SampledSignal z(g);
    CHECK_THROWS_AS(build_theorem1(z, 1.0, 1.0, budget, SynthesisConfig{}),
                    Error);
  }
  SUBCASE("nonpositive box parameters") {
    CHECK_THROWS_AS(build_theorem1(y, 0.0, 1.0, budget, SynthesisConfig{}),
                    Error);
    CHECK_THROWS_AS(build_theorem1(y, 1.0, -1.0, budget, SynthesisConfig{}),
                    Error);
  }
  SUBCASE("invalid budget") {
    BudgetSplit bad = budget;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(build_theorem1(y, 1.0, 1.0, bad, SynthesisConfig{}), Error);
    bad = budget;
    bad.c = 0.0;
    CHECK_THROWS_AS(build_theorem1(y, 1.0, 1.0, bad, SynthesisConfig{}), Error);
    bad.c = 1.0;
    CHECK_THROWS_AS(build_theorem1(y, 1.0, 1.0, bad, SynthesisConfig{}), Error);
  }
  SUBCASE("gamma below the mollifier resolution floor") {
    try {
      build_theorem1(y, 1.0, 0.1, budget, SynthesisConfig{});  // 0.05 < 2*dx
      FAIL("expected a resolution error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::resolution);
    }
  }
}

TEST_CASE("theorem 2: narrow Gaussian converges with energy ratio near 1") {
  // y essentially supported in [-0.5, 0.5] = [-alpha, alpha]: the kernel can
  // reproduce it without superoscillation.
  const Grid1D g = make_grid(0.0, 8.0, 1024);  // dx = 1/64, dnu = 1/16
  const SampledSignal y = sample(Gaussian{0.18}, g);
  BudgetSplit budget;
  budget.epsilon = 0.1 * l2_norm(y);
  budget.c = 0.5;

  auto [op, rep] = build_theorem2(y, 0.5, 0.5, budget, SynthesisConfig{});

  CHECK(rep.converged);
  CHECK(rep.achieved_error < budget.epsilon);
  CHECK(rep.energy_ratio >= 1.0);
  CHECK(rep.energy_ratio < 1.1);
  CHECK(rep.pipeline == "t2");
  check_report_populated(rep);

  // Measurement contract on the sinc input.
  const SampledSignal phiB = sample(Sinc{rep.B}, g);
  const SampledSignal out = opwlab::apply(op, phiB);
  CHECK(norm_diff(out, y) == doctest::Approx(rep.achieved_error).epsilon(1e-12));

  // Support guarantee: kernel support in t, mollifier width in nu.
  REQUIRE(rep.support_box.has_value());
  CHECK(rep.support_box->t_min >= -0.5 - 1e-9);
  CHECK(rep.support_box->t_max <= 0.5 + 1e-9);
  CHECK(rep.support_box->v_min >= -0.25 - 1e-9);
  CHECK(rep.support_box->v_max <= 0.25 + 1e-9);

  SUBCASE("duality with theorem 1 on the Fourier side") {
    // Feeding yhat to the theorem-1 pipeline on the frequency grid must make
    // the same B choice and synthesize the same multiplier that theorem 2
    // realized as the kernel spectrum.
    const SampledSignal yhat = dft(y);
    BudgetSplit dual_budget = budget;  // l2_norm(yhat) == l2_norm(y) (Parseval)
    auto [op1, rep1] =
        build_theorem1(yhat, 0.5, 0.5, dual_budget, SynthesisConfig{});

    CHECK(rep1.converged);
    CHECK(std::abs(rep1.B - rep.B) < 1e-9);

    const auto* sep = std::get_if<Separable>(&op1);
    const auto* sfq = std::get_if<SeparableFreq>(&op);
    REQUIRE(sep != nullptr);
    REQUIRE(sfq != nullptr);
    const SampledSignal hhat = dft(sfq->h);  // recover the kernel spectrum
    REQUIRE(compatible(hhat.grid, sep->m.grid));
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < hhat.grid.n; ++k) {
      num += std::norm(hhat.samples[k] - sep->m.samples[k]);
      den += std::norm(sep->m.samples[k]);
    }
    CHECK(std::sqrt(num / den) < 1e-6);
  }
}

TEST_CASE("theorem 2: bandlimited target accepts B at the band edge") {
  // yhat = Indicator(0.35) up to truncation ringing; the tail budget is met
  // just past the band edge, so B lands on the first lattice radius >= 0.35.
  const Grid1D g = make_grid(0.0, 64.0, 4096);  // dx = 1/32, dnu = 1/128
  const SampledSignal y = sample(Sinc{0.35}, g);
  BudgetSplit budget;
  budget.epsilon = 0.1 * l2_norm(y);

  auto [op, rep] = build_theorem2(y, 0.5, 0.5, budget, SynthesisConfig{});

  CHECK(rep.B >= 0.34);
  CHECK(rep.B <= 0.37);
  check_report_populated(rep);
  if (rep.converged) {
    CHECK(rep.achieved_error < budget.epsilon);
    REQUIRE(rep.support_box.has_value());
    CHECK(rep.support_box->t_min >= -0.5 - 1e-9);
    CHECK(rep.support_box->t_max <= 0.5 + 1e-9);
  }
}

TEST_CASE("theorem 2: precondition failures") {
  const Grid1D g = make_grid(0.0, 8.0, 256);  // dx = 1/16, dnu = 1/16
  const SampledSignal y = sample(Gaussian{0.5}, g);
  BudgetSplit budget;
  budget.epsilon = 0.1 * l2_norm(y);

  SUBCASE("zero target") {
    CHECK_THROWS_AS(
        build_theorem2(SampledSignal(g), 0.5, 0.5, budget, SynthesisConfig{}),
        Error);
  }
  SUBCASE("beta below the frequency resolution floor") {
    try {
      build_theorem2(y, 0.5, 0.2, budget, SynthesisConfig{});  // 0.1 < 2*dnu
      FAIL("expected a resolution error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::resolution);
    }
  }
}

TEST_CASE("obstruction: zero operator error is exactly the shifted box norm") {
  const Grid1D g = make_grid(0.0, 8.0, 512);  // dx = 1/64; covers [-1, 3]
  const double dx = g.dx;
  const Grid2D box{Grid1D{-dx, dx, 3}, Grid1D{-g.dual().dx, g.dual().dx, 3}};
  std::vector<OperatorRep> zero_only;
  zero_only.emplace_back(Dense{SpreadingGrid(box)});

  const ObstructionResult r =
      verify_obstruction_full(0.25, 2.0, g, 1234, 0, zero_only);

  CHECK(r.trials == 1);
  const SampledSignal target = translate(sample(Indicator{0.5}, g), 2.0);
  CHECK(r.min_error == doctest::Approx(l2_norm(target)).epsilon(1e-12));
  CHECK(r.min_error >= 1.0);   // discrete norm of the shifted box is sqrt(1+dx)
  CHECK(r.max_leak_fraction == 0.0);  // zero image carries no energy at all
}

TEST_CASE("obstruction: random family stays above the support gap") {
  const Grid1D g = make_grid(0.0, 8.0, 512);

  SUBCASE("alpha = 0.25, N = 2") {
    const ObstructionResult r = verify_obstruction_full(0.25, 2.0, g, 99, 8);
    CHECK(r.trials == 8);
    CHECK(r.min_error >= 1.0 - 1e-6);
    CHECK(r.max_leak_fraction < 1e-8);
  }
  SUBCASE("boundary case N = 1 + alpha") {
    const ObstructionResult r = verify_obstruction_full(0.25, 1.25, g, 99, 8);
    CHECK(r.min_error >= 1.0 - 1e-6);
  }
  SUBCASE("determinism: same seed, same minimum") {
    const ObstructionResult a = verify_obstruction_full(0.25, 2.0, g, 7, 4);
    const ObstructionResult b = verify_obstruction_full(0.25, 2.0, g, 7, 4);
    CHECK(a.min_error == b.min_error);
    CHECK(a.max_leak_fraction == b.max_leak_fraction);
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(verify_obstruction_full(0.25, 1.1, g, 1, 1), Error);
    CHECK_THROWS_AS(verify_obstruction_full(-1.0, 2.0, g, 1, 1), Error);
    const Grid1D narrow = make_grid(0.0, 2.0, 64);  // misses N + 1 = 3
    CHECK_THROWS_AS(verify_obstruction_full(0.25, 2.0, narrow, 1, 1), Error);
  }
}

TEST_CASE("input substitution implements the modified-target remark") {
  const Grid1D g = make_grid(0.0, 4.0, 256);  // dx = 1/32
  std::mt19937_64 rng(0xfeed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  SampledSignal y(g);
  for (cplx& z : y.samples) z = {unif(rng), unif(rng)};
  const double B = 1.5;
  const double slack = node_slack(g);

  SUBCASE("indicator input restricts the target") {
    const SampledSignal gsig = sample(Indicator{B}, g);
    const SampledSignal out = input_substitution(gsig, y, B);
    for (std::size_t j = 0; j < g.n; ++j) {
      if (std::abs(g.node(j)) <= B + slack) {
        CHECK(std::abs(out.samples[j] - y.samples[j]) < 1e-15);
      } else {
        CHECK(out.samples[j] == cplx{0.0, 0.0});
      }
    }
  }
  SUBCASE("scaled indicator halves the target") {
    SampledSignal gsig = sample(Indicator{B}, g);
    for (cplx& z : gsig.samples) z *= 2.0;
    const SampledSignal out = input_substitution(gsig, y, B);
    for (std::size_t j = 0; j < g.n; ++j) {
      if (std::abs(g.node(j)) <= B + slack) {
        CHECK(std::abs(out.samples[j] - 0.5 * y.samples[j]) < 1e-15);
      }
    }
  }
  SUBCASE("positive bump verified by re-multiplication") {
    SampledSignal gsig = sample(Gaussian{1.0}, g);
    for (cplx& z : gsig.samples) z += 0.5;  // |g| >= 0.5 everywhere
    const SampledSignal out = input_substitution(gsig, y, B);
    for (std::size_t j = 0; j < g.n; ++j) {
      if (std::abs(g.node(j)) <= B + slack) {
        CHECK(std::abs(gsig.samples[j] * out.samples[j] - y.samples[j]) <
              1e-10);
      } else {
        CHECK(out.samples[j] == cplx{0.0, 0.0});
      }
    }
  }
  SUBCASE("zeros inside the interval trip the division floor") {
    const SampledSignal gsig = sample(Indicator{1.0}, g);  // 0 on (1, 1.5]
    try {
      input_substitution(gsig, y, B);
      FAIL("expected a division-floor error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::division_floor);
    }
  }
  SUBCASE("grid mismatch and bad B") {
    const Grid1D other = make_grid(0.0, 4.0, 128);
    CHECK_THROWS_AS(input_substitution(SampledSignal(other), y, B), Error);
    CHECK_THROWS_AS(input_substitution(y, y, 0.0), Error);
  }
}
