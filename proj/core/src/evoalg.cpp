#include "evolflow/evoalg.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace evolflow {

Element Element::basis(std::size_t n, std::size_t i) {
  if (i >= n) throw Error(ErrorKind::InvalidArgument, "basis index out of range");
  Element e{std::vector<Scalar>(n)};
  e.coords[i] = 1.0;
  return e;
}

Element Element::evolution_element(std::size_t n) {
  return Element{std::vector<Scalar>(n, Scalar{1.0})};
}

EvolutionAlgebra::EvolutionAlgebra(Matrix structure) : a_(std::move(structure)) {
  if (a_.size() == 0) throw Error(ErrorKind::DimensionMismatch, "evolution algebra of dimension 0");
  require_finite(a_, "EvolutionAlgebra");
}

namespace {

void require_dim(const EvolutionAlgebra& alg, const Element& x) {
  if (x.size() != alg.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "element has " + std::to_string(x.size()) +
                                                  " coordinates, algebra dimension is " +
                                                  std::to_string(alg.dimension()));
  }
}

}  // namespace

Element evo_mul(const EvolutionAlgebra& alg, const Element& x, const Element& y) {
  require_dim(alg, x);
  require_dim(alg, y);
  const Matrix& a = alg.structure();
  const std::size_t n = alg.dimension();
  Element out{std::vector<Scalar>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    // x_i*y_i is symmetric in (x, y), so the result is bitwise commutative.
    const Scalar w = x.coords[i] * y.coords[i];
    if (w == Scalar{}) continue;
    for (std::size_t j = 0; j < n; ++j) out.coords[j] += w * a(i, j);
  }
  return out;
}

Matrix evolution_operator(const EvolutionAlgebra& alg) { return transpose(alg.structure()); }

Element iterate_evolution_operator(const EvolutionAlgebra& alg, Element x, std::size_t steps) {
  require_dim(alg, x);
  const Matrix le = evolution_operator(alg);
  const std::size_t n = alg.dimension();
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<Scalar> next(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next[i] += le(i, j) * x.coords[j];
    x.coords = std::move(next);
  }
  return x;
}

PerfectnessResult is_perfect(const EvolutionAlgebra& alg) {
  const Scalar d = det(alg.structure());
  return {!is_singular(alg.structure()), std::abs(d)};
}

bool is_markov_algebra(const EvolutionAlgebra& alg, double tol) {
  const Matrix& a = alg.structure();
  if (!a.is_real(tol)) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a(i, j).real() < -tol) return false;
      row += a(i, j).real();
    }
    if (std::abs(row - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace evolflow
