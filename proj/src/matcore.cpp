#include "riclab/matcore.hpp"

#include "riclab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace riclab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Degenerate: return "degenerate-input";
    case ErrorKind::NotAPovm: return "not-a-povm";
    case ErrorKind::InvalidGram: return "invalid-gram";
    case ErrorKind::SingularBasis: return "singular-basis";
    case ErrorKind::NotInvertible: return "not-invertible";
    case ErrorKind::NotInformationallyComplete: return "not-informationally-complete";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::FitError: return "fit-error";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

NormOrder::NormOrder(double p) : p_(p) {
  if (std::isnan(p) || p < 1.0) {
    std::ostringstream os;
    os << "Schatten order must satisfy p >= 1, got " << p;
    throw Error(ErrorKind::Domain, os.str());
  }
}

NormOrder NormOrder::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "oo") {
    return infinity();
  }
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "cannot parse norm order '" + text + "'");
  }
  if (used != text.size()) {
    throw Error(ErrorKind::InvalidInput, "cannot parse norm order '" + text + "'");
  }
  return NormOrder(p);
}

std::string NormOrder::str() const {
  if (is_infinite()) return "inf";
  std::ostringstream os;
  os << p_;
  return os.str();
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": matrix has non-finite entries");
  }
}

SingularSpectrum singular_values(const Matrix& m) {
  require_finite(m, "singular_values");
  SingularSpectrum out;
  out.rows = static_cast<std::size_t>(m.rows());
  out.cols = static_cast<std::size_t>(m.cols());
  if (m.size() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  out.values.assign(s.data(), s.data() + s.size());
  // JacobiSVD already sorts, but clamp tiny negative zeros for the invariant.
  for (double& v : out.values) v = std::max(v, 0.0);
  std::sort(out.values.begin(), out.values.end(), std::greater<>());
  return out;
}

double schatten_norm(const SingularSpectrum& spectrum, NormOrder p) {
  if (spectrum.values.empty()) return 0.0;
  if (p.is_infinite()) return spectrum.max();
  const double smax = spectrum.max();
  if (smax == 0.0) return 0.0;
  // Scale by the largest value so large p does not overflow.
  double acc = 0.0;
  for (double s : spectrum.values) acc += std::pow(s / smax, p.value());
  return smax * std::pow(acc, 1.0 / p.value());
}

double schatten_norm(const Matrix& m, NormOrder p) {
  return schatten_norm(singular_values(m), p);
}

double spectral_norm(const Matrix& m) { return singular_values(m).max(); }

Matrix polar_orthogonal_factor(const Matrix& f, double rel_tol) {
  require_finite(f, "polar_orthogonal_factor");
  if (f.cols() > f.rows()) {
    throw Error(ErrorKind::InvalidInput, "polar_orthogonal_factor: need rows >= cols");
  }
  Eigen::JacobiSVD<Matrix> svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= rel_tol * s(0)) {
    throw Error(ErrorKind::Degenerate, "polar_orthogonal_factor: matrix is not of full column rank");
  }
  return svd.matrixU() * svd.matrixV().transpose();
}

SymmetricEigen symmetric_eigen(const Matrix& s) {
  require_finite(s, "symmetric_eigen");
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const Eigen::Index n = sym.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Vector& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return ev(a) > ev(b); });
  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values(j) = ev(order[static_cast<std::size_t>(j)]);
    out.vectors.col(j) = es.eigenvectors().col(order[static_cast<std::size_t>(j)]);
  }
  return out;
}

ProjectorRounding nearest_rank_k_projector(const Matrix& s, int k, double tie_tol) {
  if (s.rows() != s.cols()) {
    throw Error(ErrorKind::InvalidInput, "nearest_rank_k_projector: matrix must be square");
  }
  if (k < 0 || k > s.rows()) {
    throw Error(ErrorKind::Domain, "nearest_rank_k_projector: k out of range");
  }
  const SymmetricEigen eig = symmetric_eigen(s);
  ProjectorRounding out;
  const Matrix v = eig.vectors.leftCols(k);
  out.projector = v * v.transpose();
  if (k > 0 && k < s.rows()) {
    out.gap = eig.values(k - 1) - eig.values(k);
    out.tie = out.gap < tie_tol;
  }
  return out;
}

int numeric_rank(const Matrix& m, double rel_tol) {
  if (!(rel_tol > 0.0)) throw Error(ErrorKind::Domain, "numeric_rank: rel_tol must be positive");
  const SingularSpectrum sv = singular_values(m);
  if (sv.values.empty() || sv.max() == 0.0) return 0;
  const double cut = rel_tol * sv.max();
  return static_cast<int>(std::count_if(sv.values.begin(), sv.values.end(),
                                        [cut](double v) { return v > cut; }));
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "hadamard: shapes differ");
  }
  return a.cwiseProduct(b);
}

}  // namespace riclab
