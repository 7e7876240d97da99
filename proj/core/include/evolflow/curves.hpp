#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "evolflow/matcore.hpp"
#include "evolflow/ode.hpp"

namespace evolflow {

/// Scalar function from a fixed catalog with an exact derivative:
/// amp * f(scale * t + shift) for f in {sin, cos, exp, cosh, sinh}, or a
/// polynomial sum_k coeffs[k] t^k.
struct ScalarFn {
  enum class Kind { Poly, Sin, Cos, Exp, Cosh, Sinh };

  Kind kind = Kind::Poly;
  std::vector<double> coeffs;  // Poly only, lowest degree first
  double amp = 1.0;
  double scale = 1.0;
  double shift = 0.0;

  static ScalarFn constant(double c) { return poly({c}); }
  static ScalarFn poly(std::vector<double> coeffs);
  static ScalarFn periodic(Kind kind, double scale = 1.0, double shift = 0.0, double amp = 1.0);

  double operator()(double t) const;
  double derivative(double t) const;
};

namespace curve {

struct Constant {
  Matrix a;
};

/// gamma(t) = I + t A.
struct AffineLine {
  Matrix a;
};

/// gamma(t) = A0 exp(t X), the solution of A' = A X with A(0) = A0.
struct ExpLine {
  Matrix a0;
  Matrix x;
};

/// gamma(t) = B exp(t B^-1 V): passes through B with velocity V.
class TangentInduced {
 public:
  /// Throws SingularMatrix when B is not invertible.
  TangentInduced(Matrix b, Matrix v);

  const Matrix& base() const noexcept { return b_; }
  const Matrix& velocity() const noexcept { return v_; }
  const Matrix& generator() const noexcept { return x_; }

 private:
  Matrix b_, v_, x_;
};

/// [[cos t, sin t], [-sin t, cos t]].
struct SO2 {};

/// o11_element(index, t); index 1 is the Lorentz boost itself.
struct Lorentz11 {
  int index = 1;
};

/// [[1, alpha(t), beta(t)], [0, 1, delta(t)], [0, 0, 1]].
struct Heisenberg {
  ScalarFn alpha, beta, delta;
};

/// exp([[0, a(t), b(t)], [0, 0, c(t)], [0, 0, 0]]).
struct HeisenbergExp {
  ScalarFn a, b, c;
};

struct SL2Iwasawa {
  ScalarFn alpha, beta, delta;
};

/// Two-state flip-flop semigroup with rate lambda.
struct FlipFlop {
  double lambda = 1.0;
};

/// Numerical solution of A' = A X(t) on [0, horizon].
///
/// The trajectory is integrated once at construction and then read-only;
/// values between nodes use cubic Hermite interpolation with the exact
/// node derivatives A(t_k) X(t_k).
class Numeric {
 public:
  Numeric(Matrix a0, Generator generator, IntegratorConfig cfg);

  std::size_t dimension() const noexcept { return a0_.size(); }
  double horizon() const noexcept { return cfg_.horizon; }
  const Matrix& initial() const noexcept { return a0_; }
  const Generator& generator() const noexcept { return generator_; }
  const FlowLine& trajectory() const noexcept { return line_; }

  /// Throws HorizonExceeded outside [0, horizon].
  Matrix eval(double t) const;

 private:
  Matrix a0_;
  Generator generator_;
  IntegratorConfig cfg_;
  FlowLine line_;
  std::vector<Matrix> slopes_;
};

}  // namespace curve

/// A differentiable structure-matrix curve t -> A(t).
using CurveSpec =
    std::variant<curve::Constant, curve::AffineLine, curve::ExpLine, curve::TangentInduced,
                 curve::SO2, curve::Lorentz11, curve::Heisenberg, curve::HeisenbergExp,
                 curve::SL2Iwasawa, curve::FlipFlop, curve::Numeric>;

std::size_t dimension(const CurveSpec& c);

Matrix eval_curve(const CurveSpec& c, double t);

/// Exact for every closed form; Numeric uses a central difference with
/// step 1e-5 (one-sided second order at the horizon ends).
Matrix derivative(const CurveSpec& c, double t);

/// Value of the derivative at t = 0.
struct VelocityVector {
  Matrix x;
};

VelocityVector velocity_at_origin(const CurveSpec& c);

/// 1 / rho(A) for AffineLine(A): I + tA is invertible for |t| below it.
/// Infinite when the spectral radius estimate is <= 1e-12. Throws WrongVariant.
double nonsingularity_interval(const CurveSpec& c);

struct SubgroupReport {
  double identity_residual = 0.0;      // ||gamma(0) - I||_F
  double homomorphism_residual = 0.0;  // max scaled ||gamma(s+t) - gamma(s) gamma(t)||_F
  bool passed = false;

  double max_residual() const noexcept {
    return identity_residual > homomorphism_residual ? identity_residual : homomorphism_residual;
  }
};

/// Residuals are scaled by max(1, ||gamma(s+t)||_F) so growing curves are
/// judged relative to their size.
SubgroupReport check_one_parameter_subgroup(const CurveSpec& c, std::span<const double> grid,
                                            double tol);

struct OdeReport {
  double residual = 0.0;  // max scaled ||A'(t) - A(t) X||_F
  bool passed = false;
};

OdeReport check_ode(const CurveSpec& c, const Matrix& x, std::span<const double> grid, double tol);

struct PerfectnessSample {
  double t = 0.0;
  Scalar det;
  double abs_det = 0.0;
  int sign = 0;  // sign of a real determinant; 0 when singular or complex
  bool perfect = false;
};

struct PerfectnessProfile {
  std::vector<PerfectnessSample> samples;
  bool all_perfect = false;
  bool none_perfect = false;
  std::optional<bool> sign_constant;  // set when every sample is real and perfect
  /// For ExpLine: all perfect with constant sign when A0 is invertible, none
  /// perfect otherwise. Always true for other variants.
  bool consistent = true;
};

PerfectnessProfile perfectness_profile(const CurveSpec& c, std::span<const double> grid);

}  // namespace evolflow
