#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "evolflow/curves.hpp"
#include "evolflow/flows.hpp"
#include "evolflow/generator.hpp"
#include "evolflow/markov.hpp"
#include "oracles.hpp"

namespace evolflow {
namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
void expect_error(ErrorKind kind, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

std::vector<double> grid(double a, double b, int points) {
  std::vector<double> g;
  for (int k = 0; k < points; ++k) g.push_back(a + (b - a) * k / (points - 1));
  return g;
}

Generator constant_generator(const Matrix& x) {
  return [x](double) { return x; };
}

double rk4_error(const Matrix& x, double h, double horizon) {
  const auto line = integrate_right(constant_generator(x), Matrix::identity(x.size()), {h, horizon});
  return frob_norm(line.samples.back().value - oracle::series_expm(horizon * x));
}

TEST(Flow, RejectsGeneratorOutsideAlgebra) {
  expect_error(ErrorKind::NotInAlgebra,
               [] { Flow(Matrix::real({{1, 0}, {0, 1}}), GroupId::make(GroupTag::SL, 2)); });
  expect_error(ErrorKind::NotInAlgebra,
               [] { Flow(Matrix::real({{0, 1}, {1, 0}}), GroupId::make(GroupTag::SO, 2)); });
  EXPECT_NO_THROW(Flow(Matrix::real({{0, 1}, {-1, 0}}), GroupId::make(GroupTag::SO, 2)));
}

TEST(FlowApply, Examples) {
  const Flow so2(Matrix::real({{0, 1}, {-1, 0}}), GroupId::make(GroupTag::SO, 2));
  const Matrix r = so2_element(0.6);
  EXPECT_EQ(flow_apply(so2, 0.0, r), r);
  EXPECT_LE(oracle::max_abs_diff(flow_apply(so2, kPi / 2, Matrix::identity(2)), Matrix::real({{0, 1}, {-1, 0}})),
            1e-15);

  const Flow boost(Matrix::real({{0, 1}, {1, 0}}), GroupId::make(GroupTag::O11, 2));
  const Matrix a4 = Matrix::real({{-1, 0}, {0, 1}});
  for (double t : grid(-3.0, 3.0, 25)) {
    const Matrix m = flow_apply(boost, t, a4);
    EXPECT_LT(det(m).real(), 0.0);
    EXPECT_LT(m(0, 0).real(), 0.0);
    EXPECT_EQ(o11_component(m), 4);
  }
  expect_error(ErrorKind::NotInGroup, [&] { flow_apply(so2, 1.0, Matrix::real({{2, 0}, {0, 1}})); });
}

TEST(FlowApply, LeftSide) {
  const Matrix x = Matrix::real({{0.1, 0.4}, {-0.3, 0.2}});
  const Matrix a = Matrix::real({{1, 2}, {0.5, 3}});
  const Flow right(x, GroupId::make(GroupTag::GL, 2));
  const Flow left(x, GroupId::make(GroupTag::GL, 2), Side::Left);
  EXPECT_LE(frob_norm(right(0.7, a) - a * oracle::series_expm(0.7 * x)), 1e-13);
  EXPECT_LE(frob_norm(left(0.7, a) - oracle::series_expm(0.7 * x) * a), 1e-13);
}

TEST(FlowAxioms, Examples) {
  std::mt19937_64 rng(71);
  const std::vector<double> g = grid(-1.0, 1.0, 9);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix x = oracle::random_real(3, rng);
    const Flow f(x, GroupId::make(GroupTag::GL, 3));
    const std::vector<Matrix> bases{Matrix::identity(3), oracle::random_real(3, rng) + 2.0 * Matrix::identity(3)};
    const auto r = flow_axioms(f, bases, g, 1e-9);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.identity_residual, 0.0);
    EXPECT_LE(r.composition_residual, 1e-9);
  }
  const Flow f(Matrix::real({{0, 1}, {-1, 0}}), GroupId::make(GroupTag::SO, 2));
  const std::vector<Matrix> bases{so2_element(0.3)};
  const auto zero = flow_axioms(f, bases, std::vector<double>{0.0}, 1e-9);
  EXPECT_EQ(zero.identity_residual, 0.0);
  EXPECT_EQ(zero.composition_residual, 0.0);
}

TEST(FlowAxioms, BrokenFlowFails) {
  // A (I + tX) composes to A (I + (s+t)X + st X^2), off by s t A X^2.
  const Matrix x = Matrix::real({{0, 1}, {-1, 0}});
  const FlowMap broken = [x](double t, const Matrix& a) { return a * (Matrix::identity(2) + t * x); };
  const std::vector<Matrix> bases{Matrix::identity(2)};
  const std::vector<double> g{1.0};
  const auto r = flow_axioms(broken, bases, g, 1e-9);
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.identity_residual, 0.0);
  const double scale = std::max(1.0, frob_norm(Matrix::identity(2) + 2.0 * x));
  EXPECT_NEAR(r.composition_residual, frob_norm(x * x) / scale, 1e-14);

  // Plain translation A + tX is additive in t and so satisfies both axioms.
  const FlowMap translation = [x](double t, const Matrix& a) { return a + t * x; };
  EXPECT_TRUE(flow_axioms(translation, bases, grid(-1.0, 1.0, 5), 1e-9).passed);
}

TEST(FlowLine, Examples) {
  const auto q = flip_flop_rate(1.0);
  const Flow markov(q.q(), GroupId::make(GroupTag::StochasticS, 2));
  const std::vector<double> g{0.0, 0.5, 1.0, 2.0};
  const auto line = flow_line(markov, Matrix::identity(2), g);
  ASSERT_EQ(line.samples.size(), 4u);
  for (const auto& s : line.samples) {
    EXPECT_LE(oracle::max_abs_diff(s.value, oracle::flip_flop_closed_form(1.0, s.t)), 1e-12);
  }

  const auto single = flow_line(markov, Matrix::identity(2), std::vector<double>{0.0});
  ASSERT_EQ(single.samples.size(), 1u);
  EXPECT_EQ(single.samples[0].t, 0.0);
  EXPECT_EQ(single.samples[0].value, Matrix::identity(2));

  const auto unsorted = flow_line(markov, Matrix::identity(2), std::vector<double>{1.0, -1.0});
  ASSERT_EQ(unsorted.samples.size(), 3u);
  EXPECT_EQ(unsorted.samples[0].t, 0.0);
  expect_error(ErrorKind::NotInGroup,
               [&] { flow_line(markov, Matrix::real({{2, 0}, {0, 1}}), std::vector<double>{0.5}); });
}

TEST(FlowLine, DerivativeAtOriginFromSamples) {
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = oracle::random_real(3, rng);
    const Matrix a = oracle::random_real(3, rng) + 2.0 * Matrix::identity(3);
    const Flow f(x, GroupId::make(GroupTag::GL, 3));
    const double h = 1e-3;
    const auto line = flow_line(f, a, std::vector<double>{-h, h});
    const Matrix fd = (1.0 / (2 * h)) * (line.samples[2].value - line.samples[1].value);
    EXPECT_LE(frob_norm(fd - a * x), 1e-4 * frob_norm(a * x));
  }
}

TEST(FlowLine, EqualsExpLineSamples) {
  std::mt19937_64 rng(73);
  const Matrix x = oracle::random_real(3, rng);
  const Matrix a = oracle::random_real(3, rng) + 2.0 * Matrix::identity(3);
  const Flow f(x, GroupId::make(GroupTag::GL, 3));
  const curve::ExpLine line{a, x};
  for (const auto& s : flow_line(f, a, grid(-2.0, 2.0, 41)).samples) {
    EXPECT_EQ(s.value, eval_curve(line, s.t)) << s.t;
  }
}

TEST(FlowLine, OrbitsStayInGroup) {
  std::mt19937_64 rng(74);
  const auto g = grid(-2.0, 2.0, 41);
  struct Case {
    Matrix x;
    GroupId group;
    Matrix base;
  };
  const Matrix skew3 = [&] {
    const Matrix r = oracle::random_real(3, rng);
    return r - transpose(r);
  }();
  const std::vector<Case> cases{
      {skew3, GroupId::make(GroupTag::SO, 3), expm(0.5 * skew3)},
      {random_rate_matrix(4, rng).q(), GroupId::make(GroupTag::StochasticS, 4), Matrix::identity(4)},
      {heisenberg_generator(1, -2, 0.5), GroupId::make(GroupTag::Heisenberg3, 3), heisenberg_element(0.1, 0.2, 0.3)},
      {Matrix::real({{0, 1}, {1, 0}}), GroupId::make(GroupTag::O11, 2), o11_representative(3)},
      {Matrix::real({{0.5, 1}, {2, -0.5}}), GroupId::make(GroupTag::SL, 2), sl2_iwasawa(0.3, 0.1, -1)},
  };
  for (const auto& c : cases) {
    const Flow f(c.x, c.group);
    const auto report = check_flow_line(f, flow_line(f, c.base, g));
    EXPECT_TRUE(report.all_in_group) << to_string(c.group.tag) << " " << report.max_group_residual;
    EXPECT_LE(report.max_group_residual, 1e-9);
    EXPECT_TRUE(report.sign_constant);
  }
}

TEST(Integrator, Examples) {
  const Matrix a0 = Matrix::real({{1, 2}, {3, 4}});
  const auto still = integrate_right(constant_generator(Matrix::zero(2)), a0, {0.1, 1.0});
  for (const auto& s : still.samples) EXPECT_EQ(s.value, a0);
  EXPECT_EQ(still.samples.size(), 11u);

  const Matrix q = flip_flop_rate(1.0).q();
  const auto line = integrate_right(constant_generator(q), Matrix::identity(2), {1e-3, 1.0});
  EXPECT_NEAR(line.samples.back().t, 1.0, 1e-15);
  EXPECT_LE(oracle::max_abs_diff(line.samples.back().value, oracle::series_expm(q)), 1e-10);
}

TEST(Integrator, ShortTailStepLandsOnHorizon) {
  const Matrix x = Matrix::real({{0, 1}, {-1, 0}});
  const auto line = integrate_right(constant_generator(x), Matrix::identity(2), {0.3, 1.0});
  EXPECT_EQ(line.samples.back().t, 1.0);
  EXPECT_LE(frob_norm(line.samples.back().value - so2_element(1.0)), 1e-4);
}

TEST(Integrator, FourthOrderConvergence) {
  const std::vector<Matrix> generators{
      Matrix::real({{0, 3}, {-3, 0}}),
      Matrix::real({{-1.5, 1.5}, {2.0, -2.0}}),
      Matrix::real({{0.5, 2.0, 0.0}, {-1.0, 0.2, 1.0}, {0.3, -0.8, -0.4}}),
  };
  for (const auto& x : generators) {
    const double ratio = rk4_error(x, 1e-2, 1.0) / rk4_error(x, 5e-3, 1.0);
    EXPECT_GE(ratio, 12.0);
    EXPECT_LE(ratio, 20.0);
  }
}

TEST(Integrator, LeftSideSolvesLeftEquation) {
  const Matrix x = Matrix::real({{0.1, 0.7}, {-0.4, 0.3}});
  const Matrix a0 = Matrix::real({{1, 2}, {0, 1}});
  const auto line = integrate_right(constant_generator(x), a0, {1e-3, 1.0}, Side::Left);
  EXPECT_LE(frob_norm(line.samples.back().value - oracle::series_expm(x) * a0), 1e-11);
}

TEST(Integrator, OrthogonalityDriftIsFourthOrder) {
  std::mt19937_64 rng(75);
  for (int trial = 0; trial < 4; ++trial) {
    const Matrix r = oracle::random_real(3, rng);
    const Matrix x = r - transpose(r);
    const double c = std::max(1.0, std::pow(frob_norm(x), 6));
    for (double horizon : {1.0, 10.0}) {
      for (double h : {2e-2, 1e-2}) {
        const auto line = integrate_right(constant_generator(x), Matrix::identity(3), {h, horizon});
        const Matrix& a = line.samples.back().value;
        const double drift = frob_norm(transpose(a) * a - Matrix::identity(3));
        EXPECT_LE(drift, c * std::pow(h, 4) * horizon) << "h " << h << " T " << horizon;
      }
    }
  }
}

TEST(Integrator, Errors) {
  EXPECT_THROW(integrate_right(constant_generator(Matrix::zero(2)), Matrix::identity(2), {-1.0, 1.0}), Error);
  expect_error(ErrorKind::DimensionMismatch, [] {
    integrate_right(constant_generator(Matrix::zero(3)), Matrix::identity(2), {0.1, 1.0});
  });
  expect_error(ErrorKind::NonFiniteGenerator, [] {
    integrate_right([](double) { return Matrix::real({{NAN, 0}, {0, 0}}); }, Matrix::identity(2), {0.1, 1.0});
  });
}

TEST(Magnus, ConstantGeneratorReducesToExponential) {
  std::mt19937_64 rng(76);
  const Matrix x = oracle::random_real(3, rng);
  const Matrix a0 = oracle::random_real(3, rng);
  for (double t : {-1.0, 0.5, 2.0}) {
    EXPECT_LE(frob_norm(commuting_magnus(constant_generator(x), a0, t) - a0 * oracle::series_expm(t * x)),
              1e-10 * std::max(1.0, frob_norm(a0 * oracle::series_expm(t * x))));
  }
}

TEST(Magnus, ScalarMultipleOfFlipFlop) {
  const Matrix q = flip_flop_rate(1.0).q();
  const Matrix a0 = Matrix::real({{0.2, 0.8}, {0.6, 0.4}});
  const auto gen = [q](double tau) { return std::cos(tau) * q; };
  EXPECT_LE(frob_norm(commuting_magnus(gen, a0, kPi / 2) - a0 * oracle::series_expm(q)), 1e-8);
  for (double t : {0.3, 1.0, 2.5}) {
    EXPECT_LE(frob_norm(commuting_magnus(gen, a0, t) - a0 * oracle::series_expm(std::sin(t) * q)), 1e-8);
  }
}

TEST(Magnus, NonCommutingFamilyRejected) {
  const Matrix x1 = Matrix::real({{0, 1}, {0, 0}});
  const Matrix x2 = Matrix::real({{0, 0}, {1, 0}});
  ASSERT_GT(frob_norm(commutator(x1, x2)), 0.5);
  expect_error(ErrorKind::CommutatorTooLarge, [&] {
    commuting_magnus([&](double tau) { return x1 + tau * x2; }, Matrix::identity(2), 1.0);
  });
}

TEST(Magnus, AgreesWithIntegratorOnCommutingFamilies) {
  const Matrix q = flip_flop_rate(0.8).q();
  const Matrix d = Matrix::real({{0.5, 0}, {0, -0.25}});
  GeneratorSpec spec;
  spec.terms.push_back({ScalarFn::periodic(ScalarFn::Kind::Sin, 2.0), q});
  spec.terms.push_back({ScalarFn::poly({1.0, -0.5}), 2.0 * q});
  ASSERT_TRUE(spec.commuting_family());
  GeneratorSpec diag;
  diag.terms.push_back({ScalarFn::periodic(ScalarFn::Kind::Exp, 0.3), d});
  diag.terms.push_back({ScalarFn::periodic(ScalarFn::Kind::Cos), Matrix::identity(2)});
  ASSERT_TRUE(diag.commuting_family());
  const double h = 1e-3;
  for (const auto& g : {spec, diag}) {
    const Matrix a0 = Matrix::real({{1, 0.5}, {0.25, 2}});
    const auto line = integrate_right(g.as_generator(), a0, {h, 1.5});
    const Matrix magnus = commuting_magnus(g.as_generator(), a0, 1.5);
    EXPECT_LE(frob_norm(magnus - line.samples.back().value), std::max(1e-7, 10 * std::pow(h, 4)));
  }
}

TEST(Magnus, SimpsonIntegralOfPolynomialIsExact) {
  const Matrix x = Matrix::real({{1, 2}, {3, 4}});
  const auto gen = [x](double tau) { return (tau * tau * tau - 2 * tau) * x; };
  const double t = 1.7;
  const double exact = std::pow(t, 4) / 4 - t * t;
  EXPECT_LE(frob_norm(integrate_generator(gen, t, 2) - exact * x), 1e-12);
}

}  // namespace
}  // namespace evolflow
