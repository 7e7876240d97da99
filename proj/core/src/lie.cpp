#include "evolflow/lie.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace evolflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double imag_mass(const Matrix& m) {
  double s = 0.0;
  for (const auto& z : m.entries()) s = std::max(s, std::abs(z.imag()));
  return s;
}

double row_sum_defect(const Matrix& m, double target) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    Scalar row{};
    for (std::size_t j = 0; j < m.size(); ++j) row += m(i, j);
    worst = std::max(worst, std::abs(row - target));
  }
  return worst;
}

double col_sum_defect(const Matrix& m, double target) {
  return row_sum_defect(transpose(m), target);
}

double orthogonality_defect(const Matrix& m) {
  return frob_norm(transpose(m) * m - Matrix::identity(m.size()));
}

double unitarity_defect(const Matrix& m) {
  return frob_norm(conj_transpose(m) * m - Matrix::identity(m.size()));
}

// Singular inputs cannot lie in any group; report an infinite defect.
double invertibility_defect(const Matrix& m) { return is_singular(m) ? kInf : 0.0; }

void require_n(const Matrix& m, std::size_t n, const char* what) {
  if (m.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " expects " + std::to_string(n) +
                                                  "x" + std::to_string(n) + ", got " +
                                                  std::to_string(m.size()));
  }
}

std::size_t fixed_dimension(GroupTag tag) {
  switch (tag) {
    case GroupTag::Lorentz11:
    case GroupTag::O11: return 2;
    case GroupTag::Heisenberg3: return 3;
    default: return 0;
  }
}

std::size_t fixed_dimension(AlgebraTag tag) {
  switch (tag) {
    case AlgebraTag::lor11: return 2;
    case AlgebraTag::heis3: return 3;
    default: return 0;
  }
}

}  // namespace

GroupId GroupId::make(GroupTag tag, std::size_t n, double s) {
  if (const auto fixed = fixed_dimension(tag); fixed != 0) n = fixed;
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "group dimension must be positive");
  return GroupId{tag, n, s};
}

AlgebraId AlgebraId::make(AlgebraTag tag, std::size_t n) {
  if (const auto fixed = fixed_dimension(tag); fixed != 0) n = fixed;
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "algebra dimension must be positive");
  return AlgebraId{tag, n};
}

std::string_view to_string(GroupTag tag) noexcept {
  switch (tag) {
    case GroupTag::GL: return "gl";
    case GroupTag::SL: return "sl";
    case GroupTag::O: return "o";
    case GroupTag::SO: return "so";
    case GroupTag::U: return "u";
    case GroupTag::SU: return "su";
    case GroupTag::StochasticS: return "stochastic";
    case GroupTag::GenDoublyStochastic: return "omega";
    case GroupTag::Lorentz11: return "lorentz11";
    case GroupTag::O11: return "o11";
    case GroupTag::Heisenberg3: return "heisenberg3";
    case GroupTag::Affine: return "affine";
  }
  return "?";
}

std::string_view to_string(AlgebraTag tag) noexcept {
  switch (tag) {
    case AlgebraTag::gl: return "gl";
    case AlgebraTag::sl: return "sl";
    case AlgebraTag::so: return "so";
    case AlgebraTag::u: return "u";
    case AlgebraTag::su: return "su";
    case AlgebraTag::rate: return "rate";
    case AlgebraTag::stoch: return "stoch";
    case AlgebraTag::omega0: return "omega0";
    case AlgebraTag::heis3: return "heis3";
    case AlgebraTag::lor11: return "lor11";
    case AlgebraTag::aff: return "aff";
  }
  return "?";
}

GroupTag parse_group_tag(std::string_view name) {
  for (auto tag : {GroupTag::GL, GroupTag::SL, GroupTag::O, GroupTag::SO, GroupTag::U, GroupTag::SU,
                   GroupTag::StochasticS, GroupTag::GenDoublyStochastic, GroupTag::Lorentz11,
                   GroupTag::O11, GroupTag::Heisenberg3, GroupTag::Affine}) {
    if (name == to_string(tag)) return tag;
  }
  if (name == "heis3" || name == "h3") return GroupTag::Heisenberg3;
  if (name == "lor11") return GroupTag::Lorentz11;
  throw Error(ErrorKind::InvalidArgument, "unknown group '" + std::string(name) + "'");
}

AlgebraTag parse_algebra_tag(std::string_view name) {
  for (auto tag : {AlgebraTag::gl, AlgebraTag::sl, AlgebraTag::so, AlgebraTag::u, AlgebraTag::su,
                   AlgebraTag::rate, AlgebraTag::stoch, AlgebraTag::omega0, AlgebraTag::heis3,
                   AlgebraTag::lor11, AlgebraTag::aff}) {
    if (name == to_string(tag)) return tag;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown algebra '" + std::string(name) + "'");
}

AlgebraId algebra_of(const GroupId& g) {
  switch (g.tag) {
    case GroupTag::GL: return AlgebraId::make(AlgebraTag::gl, g.n);
    case GroupTag::SL: return AlgebraId::make(AlgebraTag::sl, g.n);
    case GroupTag::O:
    case GroupTag::SO: return AlgebraId::make(AlgebraTag::so, g.n);
    case GroupTag::U: return AlgebraId::make(AlgebraTag::u, g.n);
    case GroupTag::SU: return AlgebraId::make(AlgebraTag::su, g.n);
    case GroupTag::StochasticS: return AlgebraId::make(AlgebraTag::stoch, g.n);
    case GroupTag::GenDoublyStochastic: return AlgebraId::make(AlgebraTag::omega0, g.n);
    case GroupTag::Lorentz11:
    case GroupTag::O11: return AlgebraId::make(AlgebraTag::lor11, 2);
    case GroupTag::Heisenberg3: return AlgebraId::make(AlgebraTag::heis3, 3);
    case GroupTag::Affine: return AlgebraId::make(AlgebraTag::aff, g.n);
  }
  return AlgebraId::make(AlgebraTag::gl, g.n);
}

MembershipReport in_group(const Matrix& m, const GroupId& g, double tol) {
  require_n(m, g.n, "in_group");
  require_finite(m, "in_group");
  const std::size_t n = m.size();
  double r = 0.0;
  switch (g.tag) {
    case GroupTag::GL: r = invertibility_defect(m); break;
    case GroupTag::SL: r = std::abs(det(m) - 1.0); break;
    case GroupTag::O: r = std::max(imag_mass(m), orthogonality_defect(m)); break;
    case GroupTag::SO:
      r = std::max({imag_mass(m), orthogonality_defect(m), std::abs(det(m) - 1.0)});
      break;
    case GroupTag::U: r = unitarity_defect(m); break;
    case GroupTag::SU: r = std::max(unitarity_defect(m), std::abs(det(m) - 1.0)); break;
    case GroupTag::StochasticS:
      r = std::max({imag_mass(m), row_sum_defect(m, 1.0), invertibility_defect(m)});
      break;
    case GroupTag::GenDoublyStochastic:
      r = std::max({imag_mass(m), row_sum_defect(m, g.s), col_sum_defect(m, g.s),
                    invertibility_defect(m)});
      break;
    case GroupTag::Lorentz11: {
      const double a = m(0, 0).real(), b = m(0, 1).real(), c = m(1, 0).real(), d = m(1, 1).real();
      // Boosts: symmetric, equal diagonal, a^2 - b^2 = 1 and a >= 1.
      r = std::max({imag_mass(m), std::abs(a - d), std::abs(b - c), std::abs(a * a - b * b - 1.0),
                    std::max(0.0, 1.0 - a)});
      break;
    }
    case GroupTag::O11: {
      const Matrix j = Matrix::real({{1, 0}, {0, -1}});
      r = std::max(imag_mass(m), frob_norm(transpose(m) * j * m - j));
      break;
    }
    case GroupTag::Heisenberg3: {
      double defect = imag_mass(m);
      for (std::size_t i = 0; i < n; ++i) {
        defect = std::max(defect, std::abs(m(i, i) - 1.0));
        for (std::size_t j = 0; j < i; ++j) defect = std::max(defect, std::abs(m(i, j)));
      }
      r = defect;
      break;
    }
    case GroupTag::Affine: {
      double defect = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const Scalar target = (i + 1 == n) ? 1.0 : 0.0;
        defect = std::max(defect, std::abs(m(i, n - 1) - target));
      }
      r = std::max({imag_mass(m), defect, invertibility_defect(m)});
      break;
    }
  }
  MembershipReport rep{r <= tol, r, std::nullopt};
  if (m.is_real(tol) && !is_singular(m)) rep.component = det(m).real() > 0 ? 1 : -1;
  return rep;
}

MembershipReport in_algebra(const Matrix& x, const AlgebraId& a, double tol) {
  require_n(x, a.n, "in_algebra");
  require_finite(x, "in_algebra");
  const std::size_t n = x.size();
  double r = 0.0;
  switch (a.tag) {
    case AlgebraTag::gl: r = 0.0; break;
    case AlgebraTag::sl: r = std::abs(trace(x)); break;
    case AlgebraTag::so: r = std::max(imag_mass(x), frob_norm(x + transpose(x))); break;
    case AlgebraTag::u: r = frob_norm(x + conj_transpose(x)); break;
    case AlgebraTag::su: r = std::max(frob_norm(x + conj_transpose(x)), std::abs(trace(x))); break;
    case AlgebraTag::rate: {
      double neg = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) neg = std::max(neg, -x(i, j).real());
      r = std::max({imag_mass(x), neg, row_sum_defect(x, 0.0)});
      break;
    }
    case AlgebraTag::stoch: r = std::max(imag_mass(x), row_sum_defect(x, 0.0)); break;
    case AlgebraTag::omega0:
      r = std::max({imag_mass(x), row_sum_defect(x, 0.0), col_sum_defect(x, 0.0)});
      break;
    case AlgebraTag::heis3: {
      double defect = imag_mass(x);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) defect = std::max(defect, std::abs(x(i, j)));
      r = defect;
      break;
    }
    case AlgebraTag::lor11:
      r = std::max({imag_mass(x), std::abs(x(0, 0)), std::abs(x(1, 1)), std::abs(x(0, 1) - x(1, 0))});
      break;
    case AlgebraTag::aff: {
      double defect = imag_mass(x);
      for (std::size_t i = 0; i < n; ++i) defect = std::max(defect, std::abs(x(i, n - 1)));
      r = defect;
      break;
    }
  }
  return MembershipReport{r <= tol, r, std::nullopt};
}

int connected_component_sign(const Matrix& m) {
  if (!m.is_real()) throw Error(ErrorKind::NotReal, "connected_component_sign needs a real matrix");
  if (is_singular(m)) throw Error(ErrorKind::SingularMatrix, "no component for a singular matrix");
  return det(m).real() > 0 ? 1 : -1;
}

int o11_component(const Matrix& m) {
  require_n(m, 2, "o11_component");
  const int det_sign = connected_component_sign(m);
  const bool first_positive = m(0, 0).real() > 0;
  if (det_sign > 0) return first_positive ? 1 : 2;
  return first_positive ? 3 : 4;
}

Matrix heisenberg_element(double alpha, double beta, double delta) {
  return Matrix::real({{1, alpha, beta}, {0, 1, delta}, {0, 0, 1}});
}

Matrix heisenberg_generator(double a, double b, double c) {
  return Matrix::real({{0, a, b}, {0, 0, c}, {0, 0, 0}});
}

Matrix heisenberg_exp(double a, double b, double c) {
  return heisenberg_element(a, b + 0.5 * a * c, c);
}

Matrix sl2_iwasawa(double alpha, double beta, double delta) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double ep = std::exp(beta), em = std::exp(-beta);
  // [[ca,-sa],[sa,ca]] * diag(ep,em) * [[1,delta],[0,1]]
  return Matrix::real({{ca * ep, ca * ep * delta - sa * em}, {sa * ep, sa * ep * delta + ca * em}});
}

Matrix so2_element(double t) {
  const double c = std::cos(t), s = std::sin(t);
  return Matrix::real({{c, s}, {-s, c}});
}

Matrix lorentz_boost(double t) {
  const double c = std::cosh(t), s = std::sinh(t);
  return Matrix::real({{c, s}, {s, c}});
}

Matrix o11_representative(int i) {
  switch (i) {
    case 1: return Matrix::real({{1, 0}, {0, 1}});
    case 2: return Matrix::real({{-1, 0}, {0, -1}});
    case 3: return Matrix::real({{1, 0}, {0, -1}});
    case 4: return Matrix::real({{-1, 0}, {0, 1}});
    default:
      throw Error(ErrorKind::InvalidArgument, "O(1,1) representative index must be 1..4");
  }
}

Matrix o11_element(int i, double t) { return o11_representative(i) * lorentz_boost(t); }

Matrix stochastic_affine_embed(const Matrix& m, double tol) {
  const auto rep = in_group(m, GroupId::make(GroupTag::StochasticS, m.size()), tol);
  if (!rep.belongs) {
    throw Error(ErrorKind::NotStochastic,
                "matrix is not in S(n): residual " + std::to_string(rep.residual));
  }
  const std::size_t n = m.size();
  // Q = I + u e_n^T with u = 1 - e_n, so Q^-1 = I - u e_n^T.
  Matrix q = Matrix::identity(n);
  Matrix q_inv = Matrix::identity(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    q(i, n - 1) = 1.0;
    q_inv(i, n - 1) = -1.0;
  }
  return q_inv * m * q;
}

}  // namespace evolflow
