#include "riclab/povm.hpp"

#include "riclab/error.hpp"

#include <cmath>
#include <sstream>

namespace riclab {

namespace {

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

FrameMatrix::FrameMatrix(Matrix rows) : rows_(std::move(rows)) {
  require_finite(rows_, "FrameMatrix");
  if (rows_.rows() < rows_.cols()) {
    throw Error(ErrorKind::InvalidInput, "FrameMatrix: need N >= d");
  }
}

double FrameMatrix::povm_residual() const {
  const Eigen::Index d = rows_.cols();
  return spectral_norm(rows_.transpose() * rows_ - Matrix::Identity(d, d));
}

ReferenceDevice ReferenceDevice::make(int dim, std::vector<Matrix> elements,
                                      std::vector<Matrix> post_states, std::string label,
                                      double tol) {
  if (dim < 1) throw Error(ErrorKind::InvalidInput, "device dimension must be positive");
  if (elements.empty()) throw Error(ErrorKind::InvalidInput, "device has no elements");
  Matrix sum = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    Matrix& e = elements[i];
    if (e.rows() != dim || e.cols() != dim) {
      throw Error(ErrorKind::DimensionMismatch, "element " + std::to_string(i) + " has wrong shape");
    }
    require_finite(e, "device element");
    if ((e - e.transpose()).cwiseAbs().maxCoeff() > tol) {
      throw Error(ErrorKind::InvalidInput, "element " + std::to_string(i) + " is not symmetric");
    }
    e = 0.5 * (e + e.transpose());
    if (min_eigenvalue(e) < -tol) {
      throw Error(ErrorKind::InvalidInput, "element " + std::to_string(i) + " is not PSD");
    }
    sum += e;
  }
  const double residual = spectral_norm(sum - Matrix::Identity(dim, dim));
  if (residual >= tol) {
    std::ostringstream os;
    os << "elements do not sum to the identity: residual " << residual;
    throw NotAPovmError(residual, os.str());
  }

  ReferenceDevice dev;
  dev.dim_ = dim;
  dev.label_ = std::move(label);
  if (post_states.empty()) {
    dev.parallel_ = true;
    dev.post_states_.reserve(elements.size());
    for (const Matrix& e : elements) dev.post_states_.push_back(e / e.trace());
  } else {
    if (post_states.size() != elements.size()) {
      throw Error(ErrorKind::DimensionMismatch, "post_states count differs from element count");
    }
    for (std::size_t i = 0; i < post_states.size(); ++i) {
      Matrix& s = post_states[i];
      if (s.rows() != dim || s.cols() != dim) {
        throw Error(ErrorKind::DimensionMismatch, "post state " + std::to_string(i) + " has wrong shape");
      }
      require_finite(s, "post state");
      s = 0.5 * (s + s.transpose());
      if (std::abs(s.trace() - 1.0) > tol || min_eigenvalue(s) < -tol) {
        throw Error(ErrorKind::InvalidInput,
                    "post state " + std::to_string(i) + " is not a density matrix");
      }
    }
    dev.parallel_ = false;
    dev.post_states_ = std::move(post_states);
  }
  dev.elements_ = std::move(elements);
  return dev;
}

Vector ReferenceDevice::traces() const {
  Vector r(count());
  for (int i = 0; i < count(); ++i) r(i) = elements_[i].trace();
  return r;
}

double ReferenceDevice::completeness_residual() const {
  Matrix sum = Matrix::Zero(dim_, dim_);
  for (const Matrix& e : elements_) sum += e;
  return spectral_norm(sum - Matrix::Identity(dim_, dim_));
}

ReferenceDevice frame_to_device(const FrameMatrix& frame, std::vector<Matrix> post_states,
                                double tol) {
  const double residual = frame.povm_residual();
  if (!(residual < tol)) {
    std::ostringstream os;
    os << "frame is not a POVM: ||F^T F - I||_2 = " << residual;
    throw NotAPovmError(residual, os.str());
  }
  std::vector<Matrix> elements;
  elements.reserve(static_cast<std::size_t>(frame.count()));
  for (int i = 0; i < frame.count(); ++i) {
    const Vector v = frame.row(i);
    elements.push_back(v * v.transpose());
  }
  // The frame check is tighter than make()'s element-sum check (same norm).
  ReferenceDevice dev = ReferenceDevice::make(frame.dim(), std::move(elements),
                                              std::move(post_states), {}, tol);
  dev.frame_ = frame;
  return dev;
}

Matrix little_gram(const FrameMatrix& frame) {
  return frame.rows() * frame.rows().transpose();
}

Matrix big_gram(const ReferenceDevice& device) {
  const int n = device.count();
  Matrix g(n, n);
  const auto& e = device.elements();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      g(i, j) = g(j, i) = e[i].cwiseProduct(e[j]).sum();
    }
  }
  return g;
}

GramPair gram_pair(const FrameMatrix& frame) {
  Matrix g = little_gram(frame);
  Matrix big = g.cwiseProduct(g);
  return {std::move(g), std::move(big)};
}

Rank1Check is_rank1_povm(const Matrix& g, int d, double tol) {
  Rank1Check out;
  if (g.rows() != g.cols()) return out;
  out.idempotence_residual = spectral_norm(g * g - g);
  out.trace_residual = std::abs(g.trace() - d);
  out.ok = out.idempotence_residual < tol && out.trace_residual < tol;
  return out;
}

bool is_informationally_complete(const ReferenceDevice& device, double rel_tol) {
  const int d = device.dim();
  const int n = device.count();
  if (n != d * (d + 1) / 2) return false;
  return numeric_rank(big_gram(device), rel_tol) == n;
}

bool is_unbiased(const ReferenceDevice& device, double tol) {
  const double target = static_cast<double>(device.dim()) / device.count();
  const Vector r = device.traces();
  return (r.array() - target).abs().maxCoeff() <= tol;
}

FrameMatrix frame_from_gram(const Matrix& g, int d, double tol) {
  const Rank1Check check = is_rank1_povm(g, d, tol);
  if (!check.ok) {
    std::ostringstream os;
    os << "Gram matrix is not a rank-" << d << " projector (||g^2-g|| = "
       << check.idempotence_residual << ", |tr g - d| = " << check.trace_residual << ")";
    throw Error(ErrorKind::InvalidGram, os.str());
  }
  const SymmetricEigen eig = symmetric_eigen(g);
  Matrix f = eig.vectors.leftCols(d);
  for (int c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < f.rows(); ++r) {
      if (std::abs(f(r, c)) > 1e-12) {
        if (f(r, c) < 0) f.col(c) *= -1.0;
        break;
      }
    }
  }
  return FrameMatrix(std::move(f));
}

Matrix post_state_gram(const ReferenceDevice& device) {
  const int n = device.count();
  const auto& s = device.post_states();
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) out(i, j) = out(j, i) = s[i].cwiseProduct(s[j]).sum();
  }
  return out;
}

Vector decompose_state(const Matrix& rho, const ReferenceDevice& device) {
  const int d = device.dim();
  if (rho.rows() != d || rho.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "decompose_state: state has wrong shape");
  }
  const Matrix s = post_state_gram(device);
  if (numeric_rank(s, 1e-8) != device.count()) {
    throw Error(ErrorKind::SingularBasis, "decompose_state: post-states are linearly dependent");
  }
  Vector b(device.count());
  for (int j = 0; j < device.count(); ++j) b(j) = device.post_states()[j].cwiseProduct(rho).sum();
  return s.partialPivLu().solve(b);
}

double reconstruction_residual(const Matrix& rho, const ReferenceDevice& device, const Vector& alpha) {
  Matrix sum = Matrix::Zero(rho.rows(), rho.cols());
  for (int j = 0; j < device.count(); ++j) sum += alpha(j) * device.post_states()[j];
  return spectral_norm(sum - rho);
}

}  // namespace riclab
