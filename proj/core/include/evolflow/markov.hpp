#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "evolflow/matcore.hpp"

namespace evolflow {

inline constexpr double kDefaultRateTol = 1e-12;
// Semigroup entries in [-kMarkovClampTol, 0) at t >= 0 are rounding noise
// and are clamped to zero.
inline constexpr double kMarkovClampTol = 1e-12;

struct RateDefect {
  enum class Kind { NegativeOffDiagonal, RowSumNonzero, NotReal };
  Kind kind;
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

/// A validated Markov generator: real, off-diagonals >= -tol, zero row sums.
class RateMatrix {
 public:
  const Matrix& q() const noexcept { return q_; }
  std::size_t size() const noexcept { return q_.size(); }

 private:
  explicit RateMatrix(Matrix q) : q_(std::move(q)) {}
  friend RateMatrix validate_rate(const Matrix& q, double tol);
  Matrix q_;
};

/// Every rate-matrix violation of q; empty when q is a valid generator.
std::vector<RateDefect> rate_defects(const Matrix& q, double tol = kDefaultRateTol);

/// Throws NegativeOffDiagonal, RowSumNonzero or NotReal for the first defect.
RateMatrix validate_rate(const Matrix& q, double tol = kDefaultRateTol);

/// [[-lambda, lambda], [lambda, -lambda]].
RateMatrix flip_flop_rate(double lambda);

/// Off-diagonals i.i.d. uniform [0, 1), diagonal minus the row sum.
RateMatrix random_rate_matrix(std::size_t n, std::mt19937_64& rng);

struct SemigroupSample {
  Matrix a;
  bool non_markov_range = false;  // t < 0: entries may be negative
};

/// exp(tQ). For t >= 0 tiny negative rounding is clamped to zero.
SemigroupSample semigroup_at(const RateMatrix& q, double t);

/// A'(t) = d/dt exp(tQ), from the Frechet derivative of exp at tQ in
/// direction Q (upper-right block of exp([[tQ, Q], [0, tQ]])).
Matrix semigroup_derivative(const RateMatrix& q, double t);

/// Largest violation of the Markov-matrix conditions (negative entries,
/// row sums away from one).
double markov_defect(const Matrix& a);

struct AxiomsReport {
  double markov_residual = 0.0;           // (i)   A(t) is a Markov matrix
  double identity_residual = 0.0;         // (ii)  A(0) = I
  double chapman_kolmogorov_residual = 0.0;  // (iii) A(t+s) = A(t) A(s)
  std::vector<double> continuity_sequence;    // (iv)  ||A(2^-k) - I||, k = 1..20
  bool continuity_monotone = false;
  bool passed = false;
};

/// Grid must lie in [0, inf); throws InvalidArgument otherwise.
AxiomsReport axioms_report(const RateMatrix& q, std::span<const double> grid, double tol);

struct KolmogorovResiduals {
  double backward = 0.0;  // max ||A'(t) - Q A(t)||_F
  double forward = 0.0;   // max ||A'(t) - A(t) Q||_F
  double origin = 0.0;    // ||A'(0) - Q||_F
};

KolmogorovResiduals kolmogorov_residuals(const RateMatrix& q, std::span<const double> grid);

/// max over the grid of |det exp(tQ) - e^(t tr Q)| / e^(t tr Q).
double det_trace_identity(const RateMatrix& q, std::span<const double> grid);

/// Probability vector: nonnegative entries summing to one within tol.
class StationaryDistribution {
 public:
  /// Throws InvalidDistribution.
  explicit StationaryDistribution(std::vector<double> pi, double tol = 1e-9);

  std::span<const double> values() const noexcept { return pi_; }
  std::size_t size() const noexcept { return pi_.size(); }
  double operator[](std::size_t i) const noexcept { return pi_[i]; }

 private:
  std::vector<double> pi_;
};

struct BalanceReport {
  double max_defect = 0.0;  // max_{i != j} |pi_i q_ij - pi_j q_ji|
  std::size_t worst_i = 0;
  std::size_t worst_j = 0;
  bool passed = false;
};

BalanceReport detailed_balance(const RateMatrix& q, const StationaryDistribution& pi, double tol);

/// Restricts q to the states in `subset` (in the given order) and resets each
/// diagonal to minus the kept row sum. Throws SubsetTooSmall for |S| < 2.
RateMatrix truncate_reversible(const RateMatrix& q, std::span<const std::size_t> subset);

/// pi restricted to `subset` and renormalised.
StationaryDistribution restrict_distribution(const StationaryDistribution& pi,
                                             std::span<const std::size_t> subset);

/// Row vector p times A.
std::vector<double> propagate(std::span<const double> p, const Matrix& a);

}  // namespace evolflow
