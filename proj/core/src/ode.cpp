#include "evolflow/ode.hpp"

#include <cmath>
#include <string>

namespace evolflow {

void IntegratorConfig::validate() const {
  if (!(std::isfinite(step) && step > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "integrator step must be positive");
  }
  if (!(std::isfinite(horizon) && horizon > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "integrator horizon must be positive");
  }
  if (step > horizon) throw Error(ErrorKind::InvalidArgument, "integrator step exceeds horizon");
}

namespace {

Matrix eval_generator(const Generator& generator, double t, std::size_t n) {
  Matrix x = generator(t);
  if (x.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "generator dimension differs from initial value");
  }
  if (!x.all_finite()) {
    throw Error(ErrorKind::NonFiniteGenerator, "generator is not finite at t = " + std::to_string(t));
  }
  return x;
}

Matrix apply(const Matrix& a, const Matrix& x, Side side) {
  return side == Side::Right ? a * x : x * a;
}

}  // namespace

FlowLine integrate_right(const Generator& generator, const Matrix& a0, const IntegratorConfig& cfg,
                         Side side) {
  cfg.validate();
  require_finite(a0, "integrate_right");
  const std::size_t n = a0.size();
  const double h = cfg.step;
  // Number of full steps, tolerating T/h landing a hair below an integer.
  auto full_steps = static_cast<std::size_t>(std::floor(cfg.horizon / h + 1e-9));
  const double covered = static_cast<double>(full_steps) * h;
  const bool short_tail = cfg.horizon - covered > 1e-12 * cfg.horizon;

  FlowLine line{a0, {}};
  line.samples.reserve(full_steps + 2);
  line.samples.push_back({0.0, a0});

  Matrix a = a0;
  auto step_once = [&](double t, double dt) {
    const Matrix x0 = eval_generator(generator, t, n);
    const Matrix xm = eval_generator(generator, t + 0.5 * dt, n);
    const Matrix x1 = eval_generator(generator, t + dt, n);
    const Matrix k1 = apply(a, x0, side);
    const Matrix k2 = apply(a + (0.5 * dt) * k1, xm, side);
    const Matrix k3 = apply(a + (0.5 * dt) * k2, xm, side);
    const Matrix k4 = apply(a + dt * k3, x1, side);
    a += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  for (std::size_t k = 0; k < full_steps; ++k) {
    const double t = static_cast<double>(k) * h;
    step_once(t, h);
    const double t_next = (k + 1 == full_steps && !short_tail) ? cfg.horizon
                                                               : static_cast<double>(k + 1) * h;
    line.samples.push_back({t_next, a});
  }
  if (short_tail) {
    step_once(covered, cfg.horizon - covered);
    line.samples.push_back({cfg.horizon, a});
  }
  return line;
}

}  // namespace evolflow
