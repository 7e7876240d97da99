#pragma once

#include <functional>
#include <span>
#include <vector>

#include "evolflow/lie.hpp"
#include "evolflow/matcore.hpp"
#include "evolflow/ode.hpp"

namespace evolflow {

inline constexpr double kDefaultCommutatorTol = 1e-8;

/// Global flow Phi(t, A) = A exp(tX) generated by a left-invariant vector
/// field on a matrix Lie group (or exp(tX) A with Side::Left).
class Flow {
 public:
  /// Throws NotInAlgebra unless X lies in the Lie algebra of `group`.
  Flow(Matrix generator, GroupId group, Side side = Side::Right,
       double tol = kDefaultMembershipTol);

  const Matrix& generator() const noexcept { return x_; }
  const GroupId& group() const noexcept { return group_; }
  Side side() const noexcept { return side_; }
  double tol() const noexcept { return tol_; }

  /// Phi(t, A) without the membership check on A.
  Matrix operator()(double t, const Matrix& a) const;

 private:
  Matrix x_;
  GroupId group_;
  Side side_;
  double tol_;
};

/// Phi(t, A). Throws NotInGroup when A is outside the declared group.
Matrix flow_apply(const Flow& f, double t, const Matrix& a);

using FlowMap = std::function<Matrix(double, const Matrix&)>;

struct FlowAxiomsReport {
  double identity_residual = 0.0;     // max ||Phi(0, A) - A||_F
  double composition_residual = 0.0;  // max scaled ||Phi(s, Phi(t, A)) - Phi(s+t, A)||_F
  bool passed = false;
};

/// Checks Phi(0, A) = A and Phi(s, Phi(t, A)) = Phi(s+t, A) over every base
/// and every (s, t) grid pair. Composition residuals are scaled by
/// max(1, ||Phi(s+t, A)||_F).
FlowAxiomsReport flow_axioms(const FlowMap& phi, std::span<const Matrix> bases,
                             std::span<const double> grid, double tol);
FlowAxiomsReport flow_axioms(const Flow& f, std::span<const Matrix> bases,
                             std::span<const double> grid, double tol);

/// Orbit of A sampled at t = 0 followed by the remaining grid points in
/// order. Throws NotInGroup.
FlowLine flow_line(const Flow& f, const Matrix& a, std::span<const double> grid);

struct FlowLineReport {
  double max_group_residual = 0.0;
  bool all_in_group = false;
  bool sign_constant = true;  // sign(det) along the orbit, real groups only
  std::vector<double> group_residuals;
};

FlowLineReport check_flow_line(const Flow& f, const FlowLine& line);

/// A0 exp(Omega(t)), Omega(t) = int_0^t X(tau) dtau by composite Simpson
/// (128 intervals, doubled until the change is <= 1e-11).
///
/// Valid only while X(t) commutes with Omega(t); throws CommutatorTooLarge
/// when ||[X(t), Omega(t)]|| > tol ||X(t)|| ||Omega(t)||.
Matrix commuting_magnus(const Generator& generator, const Matrix& a0, double t,
                        double tol = kDefaultCommutatorTol);

/// Omega(t) alone, as used by commuting_magnus; n is the matrix dimension.
Matrix integrate_generator(const Generator& generator, double t, std::size_t n);

}  // namespace evolflow
