#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "evolflow/matcore.hpp"

namespace evolflow {

/// Time-dependent generator t -> X(t).
using Generator = std::function<Matrix(double)>;

/// Which side the generator multiplies on: A' = A X (right) or A' = X A (left).
enum class Side { Right, Left };

struct IntegratorConfig {
  double step = 1e-3;    // h > 0
  double horizon = 1.0;  // T > 0, h <= T

  void validate() const;
};

struct TimedMatrix {
  double t = 0.0;
  Matrix value;
};

/// Sampled orbit through `base`; samples.front() is (0, base).
struct FlowLine {
  Matrix base;
  std::vector<TimedMatrix> samples;
};

/// Classical fourth-order Runge-Kutta for A' = A X(t) (or X(t) A), A(0) = a0,
/// sampled every cfg.step on [0, cfg.horizon]; the final step is shortened
/// to land on the horizon. Throws NonFiniteGenerator when X(t) is not finite.
FlowLine integrate_right(const Generator& generator, const Matrix& a0, const IntegratorConfig& cfg,
                         Side side = Side::Right);

}  // namespace evolflow
