#include "riclab/born.hpp"

#include "riclab/error.hpp"

#include <cmath>
#include <sstream>

namespace riclab {

ProbabilityVector::ProbabilityVector(Vector entries) : p_(std::move(entries)) {
  if (p_.size() == 0) throw Error(ErrorKind::InvalidInput, "probability vector is empty");
  require_finite(p_, "ProbabilityVector");
  if (p_.minCoeff() < -1e-12) {
    throw Error(ErrorKind::InvalidInput, "probability vector has negative entries");
  }
  if (std::abs(p_.sum() - 1.0) >= 1e-9) {
    std::ostringstream os;
    os << "probability vector sums to " << p_.sum();
    throw Error(ErrorKind::InvalidInput, os.str());
  }
}

ProbabilityVector ProbabilityVector::uniform(int n) {
  return ProbabilityVector(Vector::Constant(n, 1.0 / n));
}

ConditionalMatrix::ConditionalMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.size() == 0) throw Error(ErrorKind::InvalidInput, "conditional matrix is empty");
  require_finite(m_, "ConditionalMatrix");
  if (m_.minCoeff() < -1e-12 || m_.maxCoeff() > 1.0 + 1e-12) {
    throw Error(ErrorKind::InvalidInput, "conditional matrix has entries outside [0, 1]");
  }
  const Vector sums = m_.colwise().sum().transpose();
  if ((sums.array() - 1.0).abs().maxCoeff() >= 1e-9) {
    throw Error(ErrorKind::InvalidInput, "conditional matrix is not column-stochastic");
  }
}

Matrix born_matrix_inverse(const ReferenceDevice& device) {
  const int n = device.count();
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = device.elements()[i].cwiseProduct(device.post_states()[j]).sum();
    }
  }
  return a;
}

BornMatrix make_born_matrix(Matrix phi, std::string label) {
  require_finite(phi, "born matrix");
  BornMatrix out;
  const Eigen::Index n = phi.rows();
  out.defect_spectrum = singular_values(Matrix::Identity(n, n) - phi);
  out.phi = std::move(phi);
  out.device_label = std::move(label);
  return out;
}

BornMatrix born_matrix(const ReferenceDevice& device) {
  const Matrix a = born_matrix_inverse(device);
  const SingularSpectrum sv = singular_values(a);
  const double smin = sv.values.back();
  if (!(smin > 1e-14 * sv.max())) {
    throw Error(ErrorKind::NotInvertible,
                "Born matrix inverse is singular (device not IC or post-states dependent)");
  }
  BornMatrix out = make_born_matrix(a.partialPivLu().inverse(), device.label());
  out.inverse_condition = sv.max() / smin;
  if (out.inverse_condition > kConditionWarning) {
    std::ostringstream os;
    os << "ill-conditioned Born matrix inverse (condition " << out.inverse_condition << ")";
    out.warnings.push_back(os.str());
  }
  return out;
}

Matrix phi_from_little_gram(const Matrix& g) {
  const Matrix big = g.cwiseProduct(g);
  const Matrix inv = big.partialPivLu().inverse();
  return g.diagonal().asDiagonal() * inv;
}

BornEvaluation born_evaluate(const Matrix& phi, const ProbabilityVector& p_r,
                             const ConditionalMatrix& p_e_given_r) {
  if (phi.rows() != phi.cols() || phi.cols() != p_r.size() ||
      p_e_given_r.references() != phi.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "born_evaluate: dimensions disagree");
  }
  BornEvaluation out;
  out.q = p_e_given_r.matrix() * (phi * p_r.entries());
  for (Eigen::Index j = 0; j < out.q.size(); ++j) {
    if (out.q(j) < -1e-9 || out.q(j) > 1.0 + 1e-9) out.out_of_range.push_back(static_cast<int>(j));
  }
  return out;
}

Vector ltp_evaluate(const ProbabilityVector& p_r, const ConditionalMatrix& p_e_given_r) {
  if (p_e_given_r.references() != p_r.size()) {
    throw Error(ErrorKind::DimensionMismatch, "ltp_evaluate: dimensions disagree");
  }
  return p_e_given_r.matrix() * p_r.entries();
}

double quantumness(const BornMatrix& born, NormOrder p) {
  return schatten_norm(born.defect_spectrum, p);
}

double quantumness(const ReferenceDevice& device, NormOrder p) {
  return quantumness(born_matrix(device), p);
}

Matrix hypothetical_sic_phi(int d, Field field) {
  if (d < 2) throw Error(ErrorKind::Domain, "hypothetical_sic_phi: need d >= 2");
  if (field == Field::Real) {
    const int n = d * (d + 1) / 2;
    return ((d + 2) / 2.0) * Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / (d + 1));
  }
  const int n = d * d;
  return (d + 1.0) * Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / d);
}

Vector reference_probabilities(const ReferenceDevice& device, const Matrix& rho) {
  Vector p(device.count());
  for (int i = 0; i < device.count(); ++i) p(i) = device.elements()[i].cwiseProduct(rho).sum();
  return p;
}

Matrix conditional_probabilities(const std::vector<Matrix>& measurement,
                                 const ReferenceDevice& device) {
  Matrix m(static_cast<Eigen::Index>(measurement.size()), device.count());
  for (std::size_t j = 0; j < measurement.size(); ++j) {
    for (int i = 0; i < device.count(); ++i) {
      m(static_cast<Eigen::Index>(j), i) = measurement[j].cwiseProduct(device.post_states()[i]).sum();
    }
  }
  return m;
}

}  // namespace riclab
