#pragma once

#include <vector>

#include "evolflow/curves.hpp"
#include "evolflow/matcore.hpp"
#include "evolflow/ode.hpp"

namespace evolflow {

/// X(t) = sum_k f_k(t) X_k with each f_k from the ScalarFn catalog.
struct GeneratorSpec {
  struct Term {
    ScalarFn fn;
    Matrix x;
  };
  std::vector<Term> terms;

  static GeneratorSpec constant(Matrix x);

  std::size_t dimension() const;
  Matrix operator()(double t) const;
  Generator as_generator() const;
  /// True when there is a single term, or every pair of term matrices
  /// commutes within tol.
  bool commuting_family(double tol = 1e-12) const;
};

}  // namespace evolflow
