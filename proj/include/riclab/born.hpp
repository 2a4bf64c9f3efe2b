#pragma once

// Born matrix Phi of a reference device and the Born rule in the form
// Q(E) = P(E|R) Phi P(R).

#include "riclab/matcore.hpp"
#include "riclab/povm.hpp"

#include <string>
#include <vector>

namespace riclab {

/// Phi together with the singular spectrum of I - Phi.
struct BornMatrix {
  Matrix phi;
  SingularSpectrum defect_spectrum;
  std::string device_label;
  double inverse_condition = 0.0;  // condition number of the matrix that was inverted
  std::vector<std::string> warnings;

  int size() const noexcept { return static_cast<int>(phi.rows()); }
};

/// N entries, each >= -1e-12, summing to 1 within 1e-9.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(Vector entries);
  static ProbabilityVector uniform(int n);

  const Vector& entries() const noexcept { return p_; }
  int size() const noexcept { return static_cast<int>(p_.size()); }

 private:
  Vector p_;
};

/// M x N matrix whose column i is the distribution P(E|R_i).
class ConditionalMatrix {
 public:
  explicit ConditionalMatrix(Matrix m);

  const Matrix& matrix() const noexcept { return m_; }
  int outcomes() const noexcept { return static_cast<int>(m_.rows()); }
  int references() const noexcept { return static_cast<int>(m_.cols()); }

 private:
  Matrix m_;
};

inline constexpr double kConditionWarning = 1e10;

/// [Phi^{-1}]_ij = tr R_i sigma_j.
Matrix born_matrix_inverse(const ReferenceDevice& device);

/// Phi = [tr R_i sigma_j]^{-1}. Throws NotInvertible when singular.
BornMatrix born_matrix(const ReferenceDevice& device);

/// Wraps an explicit Phi (analytic forms, closed forms).
BornMatrix make_born_matrix(Matrix phi, std::string label = {});

/// Rank-1 parallel shortcut Phi = D o G^{-1} with D_ij = g_ii.
Matrix phi_from_little_gram(const Matrix& g);

struct BornEvaluation {
  Vector q;
  /// Indices whose value left [-1e-9, 1 + 1e-9]; values are never clamped.
  std::vector<int> out_of_range;
};

/// Q = P(E|R) Phi P(R).
BornEvaluation born_evaluate(const Matrix& phi, const ProbabilityVector& p_r,
                             const ConditionalMatrix& p_e_given_r);

/// Law of total probability P(E) = P(E|R) P(R) (the Phi = I case).
Vector ltp_evaluate(const ProbabilityVector& p_r, const ConditionalMatrix& p_e_given_r);

/// ||I - Phi||_p.
double quantumness(const BornMatrix& born, NormOrder p);
double quantumness(const ReferenceDevice& device, NormOrder p);

enum class Field { Real, Complex };

/// Phi of a hypothetical SIC with the parallel update. Real: N = d(d+1)/2,
/// Phi = ((d+2)/2) I - J/(d+1). Complex: N = d^2, Phi = (d+1) I - J/d.
Matrix hypothetical_sic_phi(int d, Field field);

/// P(R_i) = tr R_i rho.
Vector reference_probabilities(const ReferenceDevice& device, const Matrix& rho);

/// [P(E|R)]_ji = tr E_j sigma_i.
Matrix conditional_probabilities(const std::vector<Matrix>& measurement,
                                 const ReferenceDevice& device);

}  // namespace riclab
