#pragma once

// Dense real-matrix kernel shared by every other module.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace riclab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Order p of a Schatten norm: a real p >= 1 or infinity.
class NormOrder {
 public:
  /// Throws ErrorKind::Domain for p < 1 or NaN.
  explicit NormOrder(double p);
  static NormOrder infinity() { return NormOrder(std::numeric_limits<double>::infinity()); }
  /// Accepts a decimal number or "inf"/"infinity".
  static NormOrder parse(const std::string& text);

  bool is_infinite() const noexcept { return std::isinf(p_); }
  double value() const noexcept { return p_; }
  std::string str() const;

  friend bool operator==(const NormOrder&, const NormOrder&) = default;

 private:
  double p_;
};

struct SingularSpectrum {
  std::vector<double> values;  // descending, all >= 0
  std::size_t rows = 0;
  std::size_t cols = 0;

  double max() const { return values.empty() ? 0.0 : values.front(); }
};

SingularSpectrum singular_values(const Matrix& m);

double schatten_norm(const SingularSpectrum& spectrum, NormOrder p);
double schatten_norm(const Matrix& m, NormOrder p);

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// Orthogonal factor U of the polar decomposition F = U P (U^T U = I, P
/// symmetric PSD). Requires full column rank.
Matrix polar_orthogonal_factor(const Matrix& f, double rel_tol = 1e-12);

struct ProjectorRounding {
  Matrix projector;
  bool tie = false;          // eigenvalues k and k+1 within tie_tol
  double gap = 0.0;          // lambda_k - lambda_{k+1}
};

/// Rounds a symmetric matrix to the orthogonal projector onto the span of its
/// k leading eigenvectors. Ties are resolved by eigenvalue then index.
ProjectorRounding nearest_rank_k_projector(const Matrix& s, int k, double tie_tol = 1e-12);

/// Number of singular values exceeding rel_tol times the largest.
int numeric_rank(const Matrix& m, double rel_tol = 1e-8);

Matrix hadamard(const Matrix& a, const Matrix& b);

struct SymmetricEigen {
  Vector values;   // descending
  Matrix vectors;  // columns matched to values
};

/// Eigendecomposition of a symmetric matrix, sorted by descending eigenvalue
/// with ascending original index breaking exact ties.
SymmetricEigen symmetric_eigen(const Matrix& s);

/// Throws ErrorKind::InvalidInput when any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

}  // namespace riclab
