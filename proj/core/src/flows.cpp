#include "evolflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace evolflow {

Flow::Flow(Matrix generator, GroupId group, Side side, double tol)
    : x_(std::move(generator)), group_(group), side_(side), tol_(tol) {
  require_finite(x_, "Flow");
  const auto rep = in_algebra(x_, algebra_of(group_), tol_);
  if (!rep.belongs) {
    throw Error(ErrorKind::NotInAlgebra,
                "generator is not in " + std::string(to_string(algebra_of(group_).tag)) +
                    ": residual " + std::to_string(rep.residual));
  }
}

Matrix Flow::operator()(double t, const Matrix& a) const {
  if (t == 0.0) return a;
  const Matrix e = expm(t * x_);
  return side_ == Side::Right ? a * e : e * a;
}

namespace {

void require_member(const Flow& f, const Matrix& a) {
  const auto rep = in_group(a, f.group(), f.tol());
  if (!rep.belongs) {
    throw Error(ErrorKind::NotInGroup, "base point is not in " +
                                           std::string(to_string(f.group().tag)) + ": residual " +
                                           std::to_string(rep.residual));
  }
}

}  // namespace

Matrix flow_apply(const Flow& f, double t, const Matrix& a) {
  require_member(f, a);
  return f(t, a);
}

FlowAxiomsReport flow_axioms(const FlowMap& phi, std::span<const Matrix> bases,
                             std::span<const double> grid, double tol) {
  FlowAxiomsReport rep;
  for (const auto& a : bases) {
    rep.identity_residual = std::max(rep.identity_residual, frob_norm(phi(0.0, a) - a));
    for (double s : grid) {
      for (double t : grid) {
        const Matrix composed = phi(s, phi(t, a));
        const Matrix direct = phi(s + t, a);
        const double r = frob_norm(composed - direct) / std::max(1.0, frob_norm(direct));
        rep.composition_residual = std::max(rep.composition_residual, r);
      }
    }
  }
  rep.passed = rep.identity_residual <= tol && rep.composition_residual <= tol;
  return rep;
}

FlowAxiomsReport flow_axioms(const Flow& f, std::span<const Matrix> bases,
                             std::span<const double> grid, double tol) {
  return flow_axioms([&f](double t, const Matrix& a) { return f(t, a); }, bases, grid, tol);
}

FlowLine flow_line(const Flow& f, const Matrix& a, std::span<const double> grid) {
  require_member(f, a);
  FlowLine line{a, {}};
  line.samples.reserve(grid.size() + 1);
  line.samples.push_back({0.0, a});
  for (double t : grid) {
    if (t == 0.0) continue;
    line.samples.push_back({t, f(t, a)});
  }
  return line;
}

FlowLineReport check_flow_line(const Flow& f, const FlowLine& line) {
  FlowLineReport rep;
  rep.all_in_group = true;
  std::optional<int> first_sign;
  for (const auto& s : line.samples) {
    const auto m = in_group(s.value, f.group(), f.tol());
    rep.group_residuals.push_back(m.residual);
    rep.max_group_residual = std::max(rep.max_group_residual, m.residual);
    rep.all_in_group = rep.all_in_group && m.belongs;
    if (m.component) {
      if (!first_sign) first_sign = m.component;
      rep.sign_constant = rep.sign_constant && *m.component == *first_sign;
    }
  }
  return rep;
}

namespace {

Matrix simpson(const Generator& generator, double t, std::size_t n, std::size_t intervals) {
  const double h = t / static_cast<double>(intervals);
  Matrix acc(n);
  for (std::size_t k = 0; k <= intervals; ++k) {
    Matrix x = generator(h * static_cast<double>(k));
    if (x.size() != n) throw Error(ErrorKind::DimensionMismatch, "generator dimension mismatch");
    if (!x.all_finite()) throw Error(ErrorKind::NonFiniteGenerator, "generator is not finite");
    const double w = (k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc += w * x;
  }
  return (h / 3.0) * acc;
}

}  // namespace

Matrix integrate_generator(const Generator& generator, double t, std::size_t n) {
  constexpr std::size_t kMinIntervals = 128;
  constexpr std::size_t kMaxIntervals = std::size_t{1} << 20;
  constexpr double kStableChange = 1e-11;
  if (!std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "magnus time must be finite");
  if (t == 0.0) return Matrix(n);
  std::size_t intervals = kMinIntervals;
  Matrix omega = simpson(generator, t, n, intervals);
  while (intervals < kMaxIntervals) {
    intervals *= 2;
    Matrix refined = simpson(generator, t, n, intervals);
    const double change = frob_norm(refined - omega);
    omega = std::move(refined);
    if (change <= kStableChange * std::max(1.0, frob_norm(omega))) break;
  }
  return omega;
}

Matrix commuting_magnus(const Generator& generator, const Matrix& a0, double t, double tol) {
  require_finite(a0, "commuting_magnus");
  const std::size_t n = a0.size();
  const Matrix omega = integrate_generator(generator, t, n);
  const Matrix xt = generator(t);
  const double defect = frob_norm(commutator(xt, omega));
  const double bound = tol * frob_norm(xt) * frob_norm(omega);
  if (defect > bound) {
    throw Error(ErrorKind::CommutatorTooLarge,
                "||[X(t), Omega(t)]|| = " + std::to_string(defect) + " exceeds " +
                    std::to_string(bound));
  }
  return a0 * expm(omega);
}

}  // namespace evolflow
