#include "evolflow/markov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace evolflow {

std::vector<RateDefect> rate_defects(const Matrix& q, double tol) {
  std::vector<RateDefect> out;
  const std::size_t n = q.size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const Scalar v = q(i, j);
      if (std::abs(v.imag()) > tol) out.push_back({RateDefect::Kind::NotReal, i, j, v.imag()});
      if (i != j && v.real() < -tol) {
        out.push_back({RateDefect::Kind::NegativeOffDiagonal, i, j, v.real()});
      }
      row += v.real();
    }
    if (std::abs(row) > tol) out.push_back({RateDefect::Kind::RowSumNonzero, i, i, row});
  }
  return out;
}

RateMatrix validate_rate(const Matrix& q, double tol) {
  if (q.size() == 0) throw Error(ErrorKind::DimensionMismatch, "empty rate matrix");
  require_finite(q, "validate_rate");
  const auto defects = rate_defects(q, tol);
  if (!defects.empty()) {
    const auto& d = defects.front();
    const std::string where = " at (" + std::to_string(d.row) + ", " + std::to_string(d.col) +
                              "): " + std::to_string(d.value);
    switch (d.kind) {
      case RateDefect::Kind::NotReal: throw Error(ErrorKind::NotReal, "complex entry" + where);
      case RateDefect::Kind::NegativeOffDiagonal:
        throw Error(ErrorKind::NegativeOffDiagonal, "negative off-diagonal rate" + where);
      case RateDefect::Kind::RowSumNonzero:
        throw Error(ErrorKind::RowSumNonzero, "row sum" + where);
    }
  }
  Matrix real_q(q.size());
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) real_q(i, j) = q(i, j).real();
  return RateMatrix(std::move(real_q));
}

RateMatrix flip_flop_rate(double lambda) {
  return validate_rate(Matrix::real({{-lambda, lambda}, {lambda, -lambda}}));
}

RateMatrix random_rate_matrix(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix q(n);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = unif(rng);
      q(i, j) = v;
      row += v;
    }
    q(i, i) = -row;
  }
  // Forcing the diagonal leaves row sums at rounding level.
  return validate_rate(q, 1e-12 * static_cast<double>(n));
}

SemigroupSample semigroup_at(const RateMatrix& q, double t) {
  SemigroupSample s{expm(t * q.q()), t < 0.0};
  if (!s.non_markov_range) {
    for (auto& z : s.a.entries()) {
      if (z.real() < 0.0 && z.real() >= -kMarkovClampTol) z = 0.0;
    }
  }
  return s;
}

Matrix semigroup_derivative(const RateMatrix& q, double t) {
  const std::size_t n = q.size();
  Matrix block(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      block(i, j) = t * q.q()(i, j);
      block(n + i, n + j) = t * q.q()(i, j);
      block(i, n + j) = q.q()(i, j);
    }
  }
  const Matrix e = expm(block);
  Matrix d(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d(i, j) = e(i, n + j);
  return d;
}

double markov_defect(const Matrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const Scalar v = a(i, j);
      worst = std::max({worst, -v.real(), std::abs(v.imag())});
      row += v.real();
    }
    worst = std::max(worst, std::abs(row - 1.0));
  }
  return worst;
}

namespace {

void require_nonnegative_grid(std::span<const double> grid) {
  for (double t : grid) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw Error(ErrorKind::InvalidArgument, "semigroup axioms need grid points t >= 0");
    }
  }
}

}  // namespace

AxiomsReport axioms_report(const RateMatrix& q, std::span<const double> grid, double tol) {
  require_nonnegative_grid(grid);
  const std::size_t n = q.size();
  AxiomsReport rep;

  std::vector<Matrix> values;
  values.reserve(grid.size());
  for (double t : grid) {
    values.push_back(semigroup_at(q, t).a);
    rep.markov_residual = std::max(rep.markov_residual, markov_defect(values.back()));
  }
  rep.identity_residual = frob_norm(semigroup_at(q, 0.0).a - Matrix::identity(n));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const Matrix sum = semigroup_at(q, grid[i] + grid[j]).a;
      rep.chapman_kolmogorov_residual =
          std::max(rep.chapman_kolmogorov_residual, frob_norm(sum - values[i] * values[j]));
    }
  }

  rep.continuity_monotone = true;
  for (int k = 1; k <= 20; ++k) {
    const double h = std::ldexp(1.0, -k);
    const double d = frob_norm(semigroup_at(q, h).a - Matrix::identity(n));
    if (!rep.continuity_sequence.empty() && d > rep.continuity_sequence.back() + tol) {
      rep.continuity_monotone = false;
    }
    rep.continuity_sequence.push_back(d);
  }
  // ||e^(hQ) - I|| <= h ||Q|| e^(h ||Q||).
  const double qn = frob_norm(q.q());
  const double h_last = std::ldexp(1.0, -20);
  const bool vanishes = rep.continuity_sequence.back() <= h_last * qn * std::exp(h_last * qn) + tol;

  rep.passed = rep.markov_residual <= tol && rep.identity_residual <= tol &&
               rep.chapman_kolmogorov_residual <= tol && rep.continuity_monotone && vanishes;
  return rep;
}

KolmogorovResiduals kolmogorov_residuals(const RateMatrix& q, std::span<const double> grid) {
  KolmogorovResiduals r;
  for (double t : grid) {
    const Matrix a = expm(t * q.q());
    const Matrix da = semigroup_derivative(q, t);
    r.backward = std::max(r.backward, frob_norm(da - q.q() * a));
    r.forward = std::max(r.forward, frob_norm(da - a * q.q()));
  }
  r.origin = frob_norm(semigroup_derivative(q, 0.0) - q.q());
  return r;
}

double det_trace_identity(const RateMatrix& q, std::span<const double> grid) {
  const double tr = trace(q.q()).real();
  double worst = 0.0;
  for (double t : grid) {
    const double expected = std::exp(t * tr);
    const double got = det(expm(t * q.q())).real();
    worst = std::max(worst, std::abs(got - expected) / expected);
  }
  return worst;
}

StationaryDistribution::StationaryDistribution(std::vector<double> pi, double tol)
    : pi_(std::move(pi)) {
  if (pi_.empty()) throw Error(ErrorKind::InvalidDistribution, "empty distribution");
  double sum = 0.0;
  for (double p : pi_) {
    if (!std::isfinite(p) || p < -tol) {
      throw Error(ErrorKind::InvalidDistribution, "negative or non-finite probability");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw Error(ErrorKind::InvalidDistribution, "probabilities sum to " + std::to_string(sum));
  }
}

BalanceReport detailed_balance(const RateMatrix& q, const StationaryDistribution& pi, double tol) {
  if (pi.size() != q.size()) {
    throw Error(ErrorKind::DimensionMismatch, "distribution and rate matrix sizes differ");
  }
  BalanceReport rep;
  const Matrix& m = q.q();
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = i + 1; j < q.size(); ++j) {
      const double d = std::abs(pi[i] * m(i, j).real() - pi[j] * m(j, i).real());
      if (d > rep.max_defect) {
        rep.max_defect = d;
        rep.worst_i = i;
        rep.worst_j = j;
      }
    }
  }
  rep.passed = rep.max_defect <= tol;
  return rep;
}

namespace {

void require_subset(std::span<const std::size_t> subset, std::size_t n) {
  if (subset.size() < 2) throw Error(ErrorKind::SubsetTooSmall, "truncation needs at least 2 states");
  std::vector<bool> seen(n, false);
  for (std::size_t s : subset) {
    if (s >= n) throw Error(ErrorKind::InvalidArgument, "state index out of range");
    if (seen[s]) throw Error(ErrorKind::InvalidArgument, "duplicate state in subset");
    seen[s] = true;
  }
}

}  // namespace

RateMatrix truncate_reversible(const RateMatrix& q, std::span<const std::size_t> subset) {
  require_subset(subset, q.size());
  const std::size_t m = subset.size();
  Matrix out(m);
  for (std::size_t a = 0; a < m; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      const double v = q.q()(subset[a], subset[b]).real();
      out(a, b) = v;
      row += v;
    }
    out(a, a) = -row;
  }
  return validate_rate(out, 1e-12 * std::max(1.0, frob_norm(out)));
}

StationaryDistribution restrict_distribution(const StationaryDistribution& pi,
                                             std::span<const std::size_t> subset) {
  require_subset(subset, pi.size());
  std::vector<double> out;
  double total = 0.0;
  for (std::size_t s : subset) {
    out.push_back(pi[s]);
    total += pi[s];
  }
  if (!(total > 0.0)) throw Error(ErrorKind::InvalidDistribution, "subset has zero mass");
  for (double& p : out) p /= total;
  return StationaryDistribution(std::move(out));
}

std::vector<double> propagate(std::span<const double> p, const Matrix& a) {
  if (p.size() != a.size()) throw Error(ErrorKind::DimensionMismatch, "propagate size mismatch");
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out[j] += p[i] * a(i, j).real();
  return out;
}

}  // namespace evolflow
