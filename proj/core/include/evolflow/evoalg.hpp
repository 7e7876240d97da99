#pragma once

#include <cstddef>
#include <vector>

#include "evolflow/matcore.hpp"

namespace evolflow {

/// Coordinates of an algebra element in the fixed natural basis e_1..e_n.
struct Element {
  std::vector<Scalar> coords;

  static Element basis(std::size_t n, std::size_t i);
  static Element evolution_element(std::size_t n);  // e = e_1 + ... + e_n
  std::size_t size() const noexcept { return coords.size(); }
  friend bool operator==(const Element&, const Element&) = default;
};

/// One time-slice of a continuous evolution algebra.
///
/// Row i of the structure matrix holds the coordinates of e_i^2; products of
/// distinct basis elements vanish and are never stored.
class EvolutionAlgebra {
 public:
  explicit EvolutionAlgebra(Matrix structure);

  std::size_t dimension() const noexcept { return a_.size(); }
  const Matrix& structure() const noexcept { return a_; }

 private:
  Matrix a_;
};

/// x*y = sum_i x_i y_i (row i of A). Bilinear and commutative.
Element evo_mul(const EvolutionAlgebra& alg, const Element& x, const Element& y);

/// Matrix of left multiplication by e = sum e_i, column i = coords of e_i^2.
/// This is the transpose of the structure matrix, so L_e * x == e*x.
Matrix evolution_operator(const EvolutionAlgebra& alg);

/// Applies L_e `steps` times to x.
Element iterate_evolution_operator(const EvolutionAlgebra& alg, Element x, std::size_t steps);

struct PerfectnessResult {
  bool perfect = false;
  double abs_det = 0.0;
};

/// Perfect (A^2 = A) iff the structure matrix is nonsingular.
PerfectnessResult is_perfect(const EvolutionAlgebra& alg);

/// Real, entries >= -tol and row sums within tol of one.
bool is_markov_algebra(const EvolutionAlgebra& alg, double tol);

}  // namespace evolflow
