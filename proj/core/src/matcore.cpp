#include "evolflow/matcore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace evolflow {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotReal: return "NotReal";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::HorizonExceeded: return "HorizonExceeded";
    case ErrorKind::WrongVariant: return "WrongVariant";
    case ErrorKind::NotStochastic: return "NotStochastic";
    case ErrorKind::NegativeOffDiagonal: return "NegativeOffDiagonal";
    case ErrorKind::RowSumNonzero: return "RowSumNonzero";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::SubsetTooSmall: return "SubsetTooSmall";
    case ErrorKind::NotInGroup: return "NotInGroup";
    case ErrorKind::NotInAlgebra: return "NotInAlgebra";
    case ErrorKind::NonFiniteGenerator: return "NonFiniteGenerator";
    case ErrorKind::CommutatorTooLarge: return "CommutatorTooLarge";
    case ErrorKind::BadGrid: return "BadGrid";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Matrix::Matrix(std::size_t n) : n_(n), data_(n * n) {}

Matrix::Matrix(std::size_t n, std::vector<Scalar> entries) : n_(n), data_(std::move(entries)) {
  if (data_.size() != n * n) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(n * n) + " entries, got " +
                    std::to_string(data_.size()));
  }
}

Matrix Matrix::real(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  Matrix m(n);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != n) throw Error(ErrorKind::DimensionMismatch, "matrix rows must be square");
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Scalar>>& rows) {
  const std::size_t n = rows.size();
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw Error(ErrorKind::DimensionMismatch, "matrix rows must be square");
    std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * n));
  }
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

bool Matrix::is_real(double tol) const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [tol](const Scalar& z) { return std::abs(z.imag()) <= tol; });
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_size(*this, other, "matrix addition");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_size(*this, other, "matrix subtraction");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(Scalar s) noexcept {
  for (auto& z : data_) z *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(Scalar s, Matrix a) { return a *= s; }
Matrix operator*(Matrix a, Scalar s) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_size(a, b, "matrix product");
  const std::size_t n = a.size();
  Matrix c(n);
  // i-k-j order keeps the inner loop contiguous in both b and c.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Scalar aik = a(i, k);
      if (aik == Scalar{}) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) t(j, i) = m(i, j);
  return t;
}

Matrix conj_transpose(const Matrix& m) {
  Matrix t(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) t(j, i) = std::conj(m(i, j));
  return t;
}

Scalar trace(const Matrix& m) {
  Scalar s{};
  for (std::size_t i = 0; i < m.size(); ++i) s += m(i, i);
  return s;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double frob_norm(const Matrix& m) {
  double s = 0.0;
  for (const auto& z : m.entries()) s += std::norm(z);
  return std::sqrt(s);
}

double one_norm(const Matrix& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) col += std::abs(m(i, j));
    best = std::max(best, col);
  }
  return best;
}

namespace {

// LU with partial pivoting; rows are swapped in place and recorded in perm.
struct LU {
  Matrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool exact_zero_pivot = false;
};

LU lu_decompose(const Matrix& m) {
  const std::size_t n = m.size();
  LU f{m, std::vector<std::size_t>(n), 1, false};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  auto& a = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (const double v = std::abs(a(i, k)); v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) {
      f.exact_zero_pivot = true;
      continue;
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(f.perm[k], f.perm[p]);
      f.sign = -f.sign;
    }
    const Scalar pivot = a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Scalar factor = a(i, k) / pivot;
      a(i, k) = factor;
      if (factor == Scalar{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
    }
  }
  return f;
}

Scalar lu_det(const LU& f) {
  if (f.exact_zero_pivot) return Scalar{};
  Scalar d = static_cast<double>(f.sign);
  for (std::size_t i = 0; i < f.lu.size(); ++i) d *= f.lu(i, i);
  return d;
}

Matrix lu_solve(const LU& f, const Matrix& b) {
  const std::size_t n = b.size();
  const auto& a = f.lu;
  Matrix x(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) = b(f.perm[i], j);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 1; i < n; ++i) {
      Scalar s = x(i, col);
      for (std::size_t k = 0; k < i; ++k) s -= a(i, k) * x(k, col);
      x(i, col) = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      Scalar s = x(ii, col);
      for (std::size_t k = ii + 1; k < n; ++k) s -= a(ii, k) * x(k, col);
      x(ii, col) = s / a(ii, ii);
    }
  }
  return x;
}

// Hadamard bound: |det m| never exceeds the product of the row 2-norms.
bool singular_by_scale(const Matrix& m, Scalar d) {
  const std::size_t n = m.size();
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::norm(m(i, j));
    scale *= std::sqrt(row);
  }
  return !(std::abs(d) > kSingularTol * scale);
}

}  // namespace

Scalar det(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  return lu_det(lu_decompose(m));
}

bool is_singular(const Matrix& m) { return singular_by_scale(m, det(m)); }

Matrix inv(const Matrix& m) {
  require_finite(m, "inv");
  const LU f = lu_decompose(m);
  if (singular_by_scale(m, lu_det(f))) {
    throw Error(ErrorKind::SingularMatrix, "matrix is singular to working tolerance");
  }
  return lu_solve(f, Matrix::identity(m.size()));
}

Matrix solve(const Matrix& a, const Matrix& b) {
  require_same_size(a, b, "solve");
  const LU f = lu_decompose(a);
  if (f.exact_zero_pivot) throw Error(ErrorKind::SingularMatrix, "solve: zero pivot");
  return lu_solve(f, b);
}

double spectral_radius_estimate(const Matrix& m) {
  require_finite(m, "spectral_radius_estimate");
  const double c = one_norm(m);
  if (c == 0.0) return 0.0;
  // Track B^(2^k) = sigma_k * C_k with ||C_k||_1 = 1 to avoid over/underflow.
  constexpr int kSquarings = 8;
  Matrix cur = (1.0 / c) * m;
  double log_sigma = 0.0;
  for (int k = 0; k < kSquarings; ++k) {
    Matrix sq = cur * cur;
    const double nu = one_norm(sq);
    if (nu == 0.0) return 0.0;
    log_sigma = 2.0 * log_sigma + std::log(nu);
    cur = (1.0 / nu) * std::move(sq);
  }
  const double estimate = c * std::exp(log_sigma / static_cast<double>(1 << kSquarings));
  return std::min(estimate, c);
}

namespace {

// Coefficients of the [13/13] Pade approximant to exp.
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// Largest 1-norm for which the [13/13] approximant is accurate to unit roundoff.
constexpr double kTheta13 = 5.371920351148152;

}  // namespace

Matrix expm(const Matrix& x) {
  require_finite(x, "expm");
  const std::size_t n = x.size();
  if (n == 0) throw Error(ErrorKind::DimensionMismatch, "expm of an empty matrix");

  const double norm = one_norm(x);
  int squarings = 0;
  if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  const Matrix a = std::ldexp(1.0, -squarings) * x;

  const Matrix id = Matrix::identity(n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const auto& b = kPade13;

  Matrix u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  u_inner = a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  const Matrix u = a * u_inner;
  Matrix v = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v = a6 * v + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  Matrix r = solve(v - u, v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  if (!r.all_finite()) throw Error(ErrorKind::NonFiniteInput, "expm overflowed");
  return r;
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.all_finite()) throw Error(ErrorKind::NonFiniteInput, std::string(what) + ": non-finite entry");
}

void require_same_size(const Matrix& a, const Matrix& b, const char* what) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
}

}  // namespace evolflow
