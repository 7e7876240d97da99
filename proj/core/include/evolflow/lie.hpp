#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "evolflow/matcore.hpp"

namespace evolflow {

inline constexpr double kDefaultMembershipTol = 1e-9;

enum class GroupTag {
  GL,
  SL,
  O,
  SO,
  U,
  SU,
  StochasticS,          // invertible, row sums one
  GenDoublyStochastic,  // invertible, row and column sums equal to s
  Lorentz11,
  O11,
  Heisenberg3,
  Affine,  // invertible, last column e_n (image of stochastic_affine_embed)
};

enum class AlgebraTag {
  gl,
  sl,      // traceless
  so,      // real skew-symmetric
  u,       // skew-hermitian
  su,      // skew-hermitian and traceless
  rate,    // Markov generator
  stoch,   // row sums zero; Lie algebra of StochasticS
  omega0,  // row and column sums zero
  heis3,   // strictly upper triangular 3x3
  lor11,   // multiples of [[0,1],[1,0]]
  aff,     // last column zero
};

struct GroupId {
  GroupTag tag = GroupTag::GL;
  std::size_t n = 1;
  double s = 1.0;  // row/column sum, GenDoublyStochastic only

  static GroupId make(GroupTag tag, std::size_t n, double s = 1.0);
};

struct AlgebraId {
  AlgebraTag tag = AlgebraTag::gl;
  std::size_t n = 1;

  static AlgebraId make(AlgebraTag tag, std::size_t n);
};

struct MembershipReport {
  bool belongs = false;
  double residual = 0.0;
  std::optional<int> component;  // sign of det for real nonsingular inputs
};

std::string_view to_string(GroupTag tag) noexcept;
std::string_view to_string(AlgebraTag tag) noexcept;
/// Accepts the lower-case CLI names ("so", "stochastic", "o11", ...).
GroupTag parse_group_tag(std::string_view name);
AlgebraTag parse_algebra_tag(std::string_view name);

/// The Lie algebra whose exponentials stay in the group.
AlgebraId algebra_of(const GroupId& g);

MembershipReport in_group(const Matrix& m, const GroupId& g, double tol = kDefaultMembershipTol);
MembershipReport in_algebra(const Matrix& x, const AlgebraId& a, double tol = kDefaultMembershipTol);

/// sign(det M) for a real nonsingular matrix.
int connected_component_sign(const Matrix& m);

/// O(1,1) component index 1..4 from (sign det, sign M_11): (+,+)=1, (+,-)=2,
/// (-,+)=3, (-,-)=4, matching the coset representatives used by o11_element.
int o11_component(const Matrix& m);

/// [[1,alpha,beta],[0,1,delta],[0,0,1]].
Matrix heisenberg_element(double alpha, double beta, double delta);
/// [[0,a,b],[0,0,c],[0,0,0]].
Matrix heisenberg_generator(double a, double b, double c);
/// exp of heisenberg_generator(a,b,c) in closed form: A(a, b + ac/2, c).
Matrix heisenberg_exp(double a, double b, double c);

/// rotation(alpha) * diag(e^beta, e^-beta) * [[1,delta],[0,1]], the product
/// exp(alpha E1) exp(beta E2) exp(delta E3) with E1 = E21 - E12,
/// E2 = E11 - E22 and E3 = E12.
Matrix sl2_iwasawa(double alpha, double beta, double delta);

/// [[cos t, sin t], [-sin t, cos t]] = exp(t [[0,1],[-1,0]]).
Matrix so2_element(double t);
/// [[cosh t, sinh t], [sinh t, cosh t]].
Matrix lorentz_boost(double t);
/// Coset representative i in {1,2,3,4}: I, -I, diag(1,-1), diag(-1,1).
Matrix o11_representative(int i);
/// o11_representative(i) * lorentz_boost(t).
Matrix o11_element(int i, double t);

/// Q^-1 M Q with Q = [e_1, ..., e_{n-1}, 1]. Maps S(n) onto matrices whose
/// last column is e_n and is multiplicative. Throws NotStochastic.
Matrix stochastic_affine_embed(const Matrix& m, double tol = kDefaultMembershipTol);

}  // namespace evolflow
