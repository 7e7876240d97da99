#include "evolflow/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>

#include "evolflow/lie.hpp"

namespace evolflow {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ScalarFn ScalarFn::poly(std::vector<double> coeffs) {
  ScalarFn f;
  f.kind = Kind::Poly;
  f.coeffs = std::move(coeffs);
  return f;
}

ScalarFn ScalarFn::periodic(Kind kind, double scale, double shift, double amp) {
  if (kind == Kind::Poly) throw Error(ErrorKind::InvalidArgument, "use ScalarFn::poly");
  ScalarFn f;
  f.kind = kind;
  f.scale = scale;
  f.shift = shift;
  f.amp = amp;
  return f;
}

double ScalarFn::operator()(double t) const {
  const double u = scale * t + shift;
  switch (kind) {
    case Kind::Poly: {
      double acc = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
      return acc;
    }
    case Kind::Sin: return amp * std::sin(u);
    case Kind::Cos: return amp * std::cos(u);
    case Kind::Exp: return amp * std::exp(u);
    case Kind::Cosh: return amp * std::cosh(u);
    case Kind::Sinh: return amp * std::sinh(u);
  }
  return 0.0;
}

double ScalarFn::derivative(double t) const {
  const double u = scale * t + shift;
  switch (kind) {
    case Kind::Poly: {
      double acc = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * coeffs[k];
      return acc;
    }
    case Kind::Sin: return amp * scale * std::cos(u);
    case Kind::Cos: return -amp * scale * std::sin(u);
    case Kind::Exp: return amp * scale * std::exp(u);
    case Kind::Cosh: return amp * scale * std::sinh(u);
    case Kind::Sinh: return amp * scale * std::cosh(u);
  }
  return 0.0;
}

namespace curve {

TangentInduced::TangentInduced(Matrix b, Matrix v) : b_(std::move(b)), v_(std::move(v)) {
  require_same_size(b_, v_, "TangentInduced");
  x_ = inv(b_) * v_;
}

Numeric::Numeric(Matrix a0, Generator generator, IntegratorConfig cfg)
    : a0_(std::move(a0)), generator_(std::move(generator)), cfg_(cfg) {
  line_ = integrate_right(generator_, a0_, cfg_);
  slopes_.reserve(line_.samples.size());
  for (const auto& s : line_.samples) slopes_.push_back(s.value * generator_(s.t));
}

Matrix Numeric::eval(double t) const {
  const auto& samples = line_.samples;
  if (!(t >= 0.0 && t <= cfg_.horizon)) {
    throw Error(ErrorKind::HorizonExceeded,
                "t = " + std::to_string(t) + " outside [0, " + std::to_string(cfg_.horizon) + "]");
  }
  auto it = std::upper_bound(samples.begin(), samples.end(), t,
                             [](double v, const TimedMatrix& s) { return v < s.t; });
  std::size_t hi = static_cast<std::size_t>(it - samples.begin());
  if (hi == 0) return samples.front().value;
  if (hi == samples.size()) return samples.back().value;
  const std::size_t lo = hi - 1;
  const double t0 = samples[lo].t;
  const double dt = samples[hi].t - t0;
  const double s = (t - t0) / dt;
  if (s == 0.0) return samples[lo].value;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * samples[lo].value + (h10 * dt) * slopes_[lo] + h01 * samples[hi].value +
         (h11 * dt) * slopes_[hi];
}

}  // namespace curve

std::size_t dimension(const CurveSpec& c) {
  return std::visit(overloaded{
                        [](const curve::Constant& v) { return v.a.size(); },
                        [](const curve::AffineLine& v) { return v.a.size(); },
                        [](const curve::ExpLine& v) { return v.a0.size(); },
                        [](const curve::TangentInduced& v) { return v.base().size(); },
                        [](const curve::SO2&) -> std::size_t { return 2; },
                        [](const curve::Lorentz11&) -> std::size_t { return 2; },
                        [](const curve::Heisenberg&) -> std::size_t { return 3; },
                        [](const curve::HeisenbergExp&) -> std::size_t { return 3; },
                        [](const curve::SL2Iwasawa&) -> std::size_t { return 2; },
                        [](const curve::FlipFlop&) -> std::size_t { return 2; },
                        [](const curve::Numeric& v) { return v.dimension(); },
                    },
                    c);
}

Matrix eval_curve(const CurveSpec& c, double t) {
  if (!std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "curve time must be finite");
  return std::visit(
      overloaded{
          [](const curve::Constant& v) { return v.a; },
          [t](const curve::AffineLine& v) { return Matrix::identity(v.a.size()) + t * v.a; },
          [t](const curve::ExpLine& v) { return v.a0 * expm(t * v.x); },
          [t](const curve::TangentInduced& v) { return v.base() * expm(t * v.generator()); },
          [t](const curve::SO2&) { return so2_element(t); },
          [t](const curve::Lorentz11& v) { return o11_element(v.index, t); },
          [t](const curve::Heisenberg& v) {
            return heisenberg_element(v.alpha(t), v.beta(t), v.delta(t));
          },
          [t](const curve::HeisenbergExp& v) { return heisenberg_exp(v.a(t), v.b(t), v.c(t)); },
          [t](const curve::SL2Iwasawa& v) { return sl2_iwasawa(v.alpha(t), v.beta(t), v.delta(t)); },
          [t](const curve::FlipFlop& v) {
            const double e = std::exp(-2.0 * v.lambda * t);
            return Matrix::real({{0.5 * (1 + e), 0.5 * (1 - e)}, {0.5 * (1 - e), 0.5 * (1 + e)}});
          },
          [t](const curve::Numeric& v) { return v.eval(t); },
      },
      c);
}

namespace {

constexpr double kFiniteDifferenceStep = 1e-5;

Matrix numeric_derivative(const curve::Numeric& v, double t) {
  const double h = kFiniteDifferenceStep;
  if (t - h >= 0.0 && t + h <= v.horizon()) {
    return (0.5 / h) * (v.eval(t + h) - v.eval(t - h));
  }
  if (t + 2 * h <= v.horizon()) {
    return (0.5 / h) * (-3.0 * v.eval(t) + 4.0 * v.eval(t + h) - v.eval(t + 2 * h));
  }
  return (0.5 / h) * (3.0 * v.eval(t) - 4.0 * v.eval(t - h) + v.eval(t - 2 * h));
}

}  // namespace

Matrix derivative(const CurveSpec& c, double t) {
  if (!std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "curve time must be finite");
  return std::visit(
      overloaded{
          [](const curve::Constant& v) { return Matrix::zero(v.a.size()); },
          [](const curve::AffineLine& v) { return v.a; },
          [t](const curve::ExpLine& v) { return v.a0 * expm(t * v.x) * v.x; },
          [t](const curve::TangentInduced& v) {
            return v.base() * expm(t * v.generator()) * v.generator();
          },
          [t](const curve::SO2&) {
            const double c = std::cos(t), s = std::sin(t);
            return Matrix::real({{-s, c}, {-c, -s}});
          },
          [t](const curve::Lorentz11& v) {
            const double c = std::cosh(t), s = std::sinh(t);
            return o11_representative(v.index) * Matrix::real({{s, c}, {c, s}});
          },
          [t](const curve::Heisenberg& v) {
            return heisenberg_generator(v.alpha.derivative(t), v.beta.derivative(t),
                                        v.delta.derivative(t));
          },
          [t](const curve::HeisenbergExp& v) {
            const double a = v.a(t), c = v.c(t);
            const double da = v.a.derivative(t), db = v.b.derivative(t), dc = v.c.derivative(t);
            return heisenberg_generator(da, db + 0.5 * (da * c + a * dc), dc);
          },
          [t](const curve::SL2Iwasawa& v) {
            const double al = v.alpha(t), be = v.beta(t), de = v.delta(t);
            const double ca = std::cos(al), sa = std::sin(al);
            const Matrix rot = Matrix::real({{ca, -sa}, {sa, ca}});
            const Matrix drot = Matrix::real({{-sa, -ca}, {ca, -sa}});
            const Matrix dia = Matrix::real({{std::exp(be), 0}, {0, std::exp(-be)}});
            const Matrix ddia = Matrix::real({{std::exp(be), 0}, {0, -std::exp(-be)}});
            const Matrix nil = Matrix::real({{1, de}, {0, 1}});
            const Matrix dnil = Matrix::real({{0, 1}, {0, 0}});
            return v.alpha.derivative(t) * (drot * dia * nil) +
                   v.beta.derivative(t) * (rot * ddia * nil) +
                   v.delta.derivative(t) * (rot * dia * dnil);
          },
          [t](const curve::FlipFlop& v) {
            const double k = v.lambda * std::exp(-2.0 * v.lambda * t);
            return Matrix::real({{-k, k}, {k, -k}});
          },
          [t](const curve::Numeric& v) { return numeric_derivative(v, t); },
      },
      c);
}

VelocityVector velocity_at_origin(const CurveSpec& c) { return {derivative(c, 0.0)}; }

double nonsingularity_interval(const CurveSpec& c) {
  const auto* line = std::get_if<curve::AffineLine>(&c);
  if (line == nullptr) {
    throw Error(ErrorKind::WrongVariant, "nonsingularity_interval needs an AffineLine curve");
  }
  const double rho = spectral_radius_estimate(line->a);
  if (rho <= 1e-12) return std::numeric_limits<double>::infinity();
  return 1.0 / rho;
}

namespace {

double scaled_defect(const Matrix& value, const Matrix& reference) {
  return frob_norm(value - reference) / std::max(1.0, frob_norm(reference));
}

}  // namespace

SubgroupReport check_one_parameter_subgroup(const CurveSpec& c, std::span<const double> grid,
                                            double tol) {
  if (grid.empty()) throw Error(ErrorKind::BadGrid, "subgroup check needs a nonempty grid");
  SubgroupReport rep;
  rep.identity_residual = frob_norm(eval_curve(c, 0.0) - Matrix::identity(dimension(c)));

  std::vector<Matrix> values;
  values.reserve(grid.size());
  for (double t : grid) values.push_back(eval_curve(c, t));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const Matrix sum = eval_curve(c, grid[i] + grid[j]);
      rep.homomorphism_residual =
          std::max(rep.homomorphism_residual, scaled_defect(values[i] * values[j], sum));
    }
  }
  rep.passed = rep.max_residual() <= tol;
  return rep;
}

OdeReport check_ode(const CurveSpec& c, const Matrix& x, std::span<const double> grid, double tol) {
  if (x.size() != dimension(c)) {
    throw Error(ErrorKind::DimensionMismatch, "check_ode generator dimension mismatch");
  }
  OdeReport rep;
  for (double t : grid) {
    const Matrix rhs = eval_curve(c, t) * x;
    rep.residual = std::max(rep.residual, scaled_defect(derivative(c, t), rhs));
  }
  rep.passed = rep.residual <= tol;
  return rep;
}

PerfectnessProfile perfectness_profile(const CurveSpec& c, std::span<const double> grid) {
  PerfectnessProfile prof;
  prof.samples.reserve(grid.size());
  bool all_real = true;
  std::size_t perfect_count = 0;
  for (double t : grid) {
    const Matrix a = eval_curve(c, t);
    PerfectnessSample s;
    s.t = t;
    s.det = det(a);
    s.abs_det = std::abs(s.det);
    s.perfect = !is_singular(a);
    const bool real = a.is_real();
    all_real = all_real && real;
    if (s.perfect && real) s.sign = s.det.real() > 0 ? 1 : -1;
    perfect_count += s.perfect ? 1 : 0;
    prof.samples.push_back(s);
  }
  prof.all_perfect = perfect_count == prof.samples.size();
  prof.none_perfect = perfect_count == 0;
  if (all_real && prof.all_perfect && !prof.samples.empty()) {
    const int first = prof.samples.front().sign;
    prof.sign_constant = std::all_of(prof.samples.begin(), prof.samples.end(),
                                     [first](const PerfectnessSample& s) { return s.sign == first; });
  }
  if (const auto* line = std::get_if<curve::ExpLine>(&c)) {
    if (is_singular(line->a0)) {
      prof.consistent = prof.none_perfect;
    } else {
      prof.consistent = prof.all_perfect && (!line->a0.is_real() || !line->x.is_real() ||
                                             prof.sign_constant.value_or(false));
    }
  }
  return prof;
}

}  // namespace evolflow
