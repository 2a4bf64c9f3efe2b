#pragma once

// Frames, reference devices and their Gram matrices.
//
// Conventions: a frame stores the unnormalized vectors |phi_i> as rows, so the
// weights e_i = <phi_i|phi_i> are absorbed into the rows and the little Gram
// matrix is simply F F^T. A frame is a valid rank-1 POVM iff its columns are
// orthonormal.

#include "riclab/matcore.hpp"

#include <optional>
#include <string>
#include <vector>

namespace riclab {

inline constexpr double kPovmTolerance = 1e-9;

/// N x d matrix whose rows are the unnormalized frame vectors.
class FrameMatrix {
 public:
  FrameMatrix() = default;
  /// Throws InvalidInput for non-finite entries or N < d.
  explicit FrameMatrix(Matrix rows);

  const Matrix& rows() const noexcept { return rows_; }
  int dim() const noexcept { return static_cast<int>(rows_.cols()); }
  int count() const noexcept { return static_cast<int>(rows_.rows()); }

  Vector row(int i) const { return rows_.row(i).transpose(); }
  /// e_i = <phi_i|phi_i>.
  Vector weights() const { return rows_.rowwise().squaredNorm(); }

  /// ||F^T F - I||_2.
  double povm_residual() const;
  bool is_povm(double tol = kPovmTolerance) const { return povm_residual() < tol; }

 private:
  Matrix rows_;
};

/// A reference measurement {R_i} followed by the preparation of sigma_i on
/// outcome i. Elements are stored densely whatever their rank.
class ReferenceDevice {
 public:
  /// Validates sum R_i = I, PSD elements and unit-trace PSD post-states.
  /// Empty post_states selects the parallel update sigma_i = R_i / tr R_i.
  static ReferenceDevice make(int dim, std::vector<Matrix> elements,
                              std::vector<Matrix> post_states = {}, std::string label = {},
                              double tol = kPovmTolerance);

  int dim() const noexcept { return dim_; }
  int count() const noexcept { return static_cast<int>(elements_.size()); }
  const std::vector<Matrix>& elements() const noexcept { return elements_; }
  const std::vector<Matrix>& post_states() const noexcept { return post_states_; }
  bool parallel_update() const noexcept { return parallel_; }
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  /// r_i = tr R_i.
  Vector traces() const;
  /// rho_i = R_i / r_i.
  Matrix normalized_element(int i) const { return elements_[i] / elements_[i].trace(); }

  /// The generating frame when the device was built from one.
  const std::optional<FrameMatrix>& frame() const noexcept { return frame_; }

  /// ||sum_i R_i - I||_2.
  double completeness_residual() const;

 private:
  friend ReferenceDevice frame_to_device(const FrameMatrix&, std::vector<Matrix>, double);

  int dim_ = 0;
  std::vector<Matrix> elements_;
  std::vector<Matrix> post_states_;
  bool parallel_ = true;
  std::string label_;
  std::optional<FrameMatrix> frame_;
};

struct GramPair {
  Matrix little;
  Matrix big;
};

/// R_i = |phi_i><phi_i|. Empty post_states gives the parallel update.
/// Throws NotAPovmError carrying ||F^T F - I||_2 when validity fails.
ReferenceDevice frame_to_device(const FrameMatrix& frame, std::vector<Matrix> post_states = {},
                                double tol = kPovmTolerance);

Matrix little_gram(const FrameMatrix& frame);

/// [G]_ij = tr R_i R_j.
Matrix big_gram(const ReferenceDevice& device);

/// Little and big Gram of a frame; the big Gram is g o g.
GramPair gram_pair(const FrameMatrix& frame);

struct Rank1Check {
  bool ok = false;
  double idempotence_residual = 0.0;  // ||g^2 - g||_2
  double trace_residual = 0.0;        // |tr g - d|
};

/// g describes a rank-1 POVM in dimension d iff it is a rank-d projector.
Rank1Check is_rank1_povm(const Matrix& g, int d, double tol = kPovmTolerance);

/// N = d(d+1)/2 and rank G = N.
bool is_informationally_complete(const ReferenceDevice& device, double rel_tol = 1e-8);

/// Every r_i within tol of d/N.
bool is_unbiased(const ReferenceDevice& device, double tol = 1e-9);

/// Recovers a frame with F F^T = g. The gauge is fixed by taking the leading
/// eigenvectors (descending eigenvalue, then index) with the first nonzero
/// entry of each column made positive.
FrameMatrix frame_from_gram(const Matrix& g, int d, double tol = kPovmTolerance);

/// Coefficients alpha with rho = sum_j alpha_j sigma_j.
Vector decompose_state(const Matrix& rho, const ReferenceDevice& device);

/// Mutual trace inner products tr sigma_j sigma_k of the post-states.
Matrix post_state_gram(const ReferenceDevice& device);

/// Residual ||sum_j alpha_j sigma_j - rho||_2.
double reconstruction_residual(const Matrix& rho, const ReferenceDevice& device, const Vector& alpha);

}  // namespace riclab
