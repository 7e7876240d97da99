#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "evolflow/error.hpp"

namespace evolflow {

// Real scalars are complex values with a zero imaginary part.
using Scalar = std::complex<double>;

// Entries of magnitude below this fraction of scale are treated as zero when
// deciding singularity; see is_singular().
inline constexpr double kSingularTol = 1e-12;

/// Dense square matrix over the complex numbers, stored row-major.
///
/// A default-constructed Matrix has dimension 0 and is only useful as a
/// placeholder; every numerical routine requires n >= 1.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n);
  Matrix(std::size_t n, std::vector<Scalar> entries);

  /// Real matrix from nested rows, e.g. Matrix::real({{0, 1}, {-1, 0}}).
  static Matrix real(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_rows(const std::vector<std::vector<Scalar>>& rows);
  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t n) { return Matrix(n); }
  static Matrix diagonal(std::span<const double> d);

  std::size_t size() const noexcept { return n_; }

  Scalar& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * n_ + j];
  }

  std::span<Scalar> entries() noexcept { return data_; }
  std::span<const Scalar> entries() const noexcept { return data_; }

  bool all_finite() const noexcept;
  /// True when every |im| <= tol.
  bool is_real(double tol = 0.0) const noexcept;
  double max_abs() const noexcept;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(Scalar s) noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Scalar> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(Scalar s, Matrix a);
Matrix operator*(Matrix a, Scalar s);

inline Matrix mat_add(const Matrix& a, const Matrix& b) { return a + b; }
inline Matrix mat_mul(const Matrix& a, const Matrix& b) { return a * b; }
inline Matrix mat_scale(const Matrix& a, Scalar s) { return s * a; }

Matrix transpose(const Matrix& m);
Matrix conj_transpose(const Matrix& m);
Scalar trace(const Matrix& m);
Matrix commutator(const Matrix& a, const Matrix& b);

double frob_norm(const Matrix& m);
/// Induced 1-norm: maximum absolute column sum.
double one_norm(const Matrix& m);

/// Determinant by LU with partial pivoting.
Scalar det(const Matrix& m);

/// |det m| <= kSingularTol * prod_i ||row_i||_2; the zero matrix is singular.
bool is_singular(const Matrix& m);

/// Throws Error{SingularMatrix} when is_singular(m).
Matrix inv(const Matrix& m);

/// Solves a * x = b for the square right-hand side b.
Matrix solve(const Matrix& a, const Matrix& b);

/// Upper estimate of the spectral radius, ||M^(2^8)||_1^(1/2^8).
///
/// Never below rho(M) and never above ||M||_1; exact for diagonal and
/// nilpotent inputs up to rounding.
double spectral_radius_estimate(const Matrix& m);

/// e^X by scaling and squaring around a degree-13 diagonal Pade approximant.
///
/// Throws Error{NonFiniteInput} for NaN/Inf input and when the result
/// overflows.
Matrix expm(const Matrix& x);

void require_finite(const Matrix& m, const char* what);
void require_same_size(const Matrix& a, const Matrix& b, const char* what);

}  // namespace evolflow
