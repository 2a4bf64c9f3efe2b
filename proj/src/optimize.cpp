#include "riclab/optimize.hpp"

#include "riclab/error.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "riclab/lbfgs.hpp"

namespace riclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

// Parallel-update 2-quantumness of a rank-1 frame; +inf when G is singular.
double frame_quantumness_2(const FrameMatrix& frame) {
  const Matrix g = little_gram(frame);
  const Matrix big = g.cwiseProduct(g);
  Eigen::PartialPivLU<Matrix> lu(big);
  if (!(lu.rcond() > 1e-14)) return kInf;
  const Matrix phi = g.diagonal().asDiagonal() * lu.inverse();
  const Eigen::Index n = phi.rows();
  const double q = schatten_norm(Matrix(Matrix::Identity(n, n) - phi), NormOrder(2.0));
  return std::isfinite(q) ? q : kInf;
}

void normalize_rows(Matrix& f, double norm) {
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    const double r = f.row(i).norm();
    if (r > 0.0) f.row(i) *= norm / r;
  }
}

struct ProjectionOutcome {
  Matrix frame;
  int iterations = 0;
  bool degenerate = false;
};

ProjectionOutcome project_unbiased(Matrix f, const AltProjOptions& opts) {
  const double w = std::sqrt(static_cast<double>(opts.dim) / opts.count);
  const Matrix eye = Matrix::Identity(opts.dim, opts.dim);
  ProjectionOutcome out;
  for (int it = 0; it < opts.max_iters; ++it) {
    out.iterations = it + 1;
    try {
      f = polar_orthogonal_factor(f);
    } catch (const Error&) {
      out.degenerate = true;
      break;
    }
    normalize_rows(f, w);
    if (spectral_norm(f.transpose() * f - eye) < opts.stop_tol) break;
  }
  out.frame = std::move(f);
  return out;
}

void fill_residuals(AltProjResult& r, const AltProjOptions& opts) {
  const double target = static_cast<double>(opts.dim) / opts.count;
  r.povm_residual = r.frame.povm_residual();
  r.bias_residual = (r.frame.weights().array() - target).abs().maxCoeff();
  r.converged = r.povm_residual < opts.accept_tol && r.bias_residual < opts.accept_tol;
}

}  // namespace

// ------------------------------------------------------------------ config

const char* to_string(RankModel m) noexcept { return m == RankModel::One ? "one" : "any"; }

const char* to_string(PostStateModel m) noexcept {
  switch (m) {
    case PostStateModel::Parallel: return "parallel";
    case PostStateModel::FreePovmRescalable: return "free_povm_rescalable";
    case PostStateModel::FreeIndependent: return "free_independent";
  }
  return "parallel";
}

RankModel parse_rank_model(const std::string& s) {
  if (s == "one" || s == "1") return RankModel::One;
  if (s == "any") return RankModel::Any;
  throw Error(ErrorKind::InvalidInput, "rank must be 'one' or 'any', got '" + s + "'");
}

PostStateModel parse_post_state_model(const std::string& s) {
  if (s == "parallel") return PostStateModel::Parallel;
  if (s == "free_povm_rescalable" || s == "rescalable") return PostStateModel::FreePovmRescalable;
  if (s == "free_independent" || s == "free" || s == "independent") return PostStateModel::FreeIndependent;
  throw Error(ErrorKind::InvalidInput, "unknown post-state model '" + s + "'");
}

void OptConfig::validate() const {
  if (restarts < 1) throw Error(ErrorKind::InvalidInput, "restarts must be >= 1");
  if (dim < 2) throw Error(ErrorKind::InvalidInput, "dimension must be >= 2");
  if (!(tol_constraint > 0.0) || !(tol_objective > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "tolerances must be positive");
  }
  if (max_iters < 1 || max_outer < 1) throw Error(ErrorKind::InvalidInput, "iteration limits must be positive");
}

int OptConfig::default_restarts(PostStateModel post) {
  return post == PostStateModel::Parallel ? 32 : 128;
}

double ConstraintResiduals::max() const {
  return std::max({completeness, bias, post_completeness});
}

std::uint64_t restart_seed(std::uint64_t seed, int k) {
  return splitmix64(splitmix64(seed) + static_cast<std::uint64_t>(k));
}

// ------------------------------------------------------------------ frames

FrameMatrix random_frame(int d, int n, std::uint64_t seed) {
  if (n < d) throw Error(ErrorKind::InvalidInput, "random_frame: need N >= d");
  std::mt19937_64 rng(seed);
  return FrameMatrix(polar_orthogonal_factor(gaussian_matrix(n, d, rng)));
}

AltProjResult alternating_projection_ric(const FrameMatrix& start, const AltProjOptions& opts) {
  if (start.dim() != opts.dim || start.count() != opts.count) {
    throw Error(ErrorKind::DimensionMismatch, "alternating_projection_ric: frame shape differs from options");
  }
  ProjectionOutcome proj = project_unbiased(start.rows(), opts);
  AltProjResult out;
  out.frame = FrameMatrix(proj.frame);
  out.iterations = proj.iterations;
  fill_residuals(out, opts);
  if (opts.knockdown_rounds <= 0 || !out.converged) return out;

  out.quantumness_2 = frame_quantumness_2(out.frame);
  FrameMatrix current = out.frame;
  for (int round = 0; round < opts.knockdown_rounds; ++round) {
    const KnockdownResult kd = knockdown_step(current);
    if (!kd.accepted) break;
    ProjectionOutcome next = project_unbiased(kd.frame.rows(), opts);
    if (next.degenerate) break;
    AltProjResult candidate;
    candidate.frame = FrameMatrix(std::move(next.frame));
    fill_residuals(candidate, opts);
    if (!candidate.converged) break;
    const double q = frame_quantumness_2(candidate.frame);
    if (!std::isfinite(q)) break;
    ++out.knockdowns_accepted;
    current = candidate.frame;
    if (q < out.quantumness_2) {
      out.frame = candidate.frame;
      out.quantumness_2 = q;
      out.povm_residual = candidate.povm_residual;
      out.bias_residual = candidate.bias_residual;
    }
  }
  return out;
}

AltProjResult alternating_projection_ric(std::uint64_t seed, const AltProjOptions& opts) {
  std::mt19937_64 rng(seed);
  return alternating_projection_ric(FrameMatrix(gaussian_matrix(opts.count, opts.dim, rng)), opts);
}

KnockdownResult knockdown_step(const FrameMatrix& frame) {
  KnockdownResult out;
  out.frame = frame;
  const int d = frame.dim();
  const int n = frame.count();
  const double scale = static_cast<double>(d) / n;
  const Matrix g = little_gram(frame);
  Eigen::PartialPivLU<Matrix> lu_big(g.cwiseProduct(g));
  if (!(lu_big.rcond() > 1e-13)) {
    out.diagnostic = "big Gram matrix is singular";
    return out;
  }
  const Matrix phi = scale * lu_big.inverse();
  const Matrix eye = Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(eye - phi, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  Eigen::Index support = 0;
  while (support < s.size() && s(support) > 1e-12 * s(0)) ++support;
  const Matrix isometry = svd.matrixU().leftCols(support) * svd.matrixV().leftCols(support).transpose();
  const Matrix phi_new = eye - isometry;
  Eigen::PartialPivLU<Matrix> lu_phi(phi_new);
  if (!(lu_phi.rcond() > 1e-12)) {
    out.diagnostic = "replacement Born matrix is singular";
    return out;
  }
  Matrix big_new = scale * lu_phi.inverse();
  out.symmetry_residual = (big_new - big_new.transpose()).cwiseAbs().maxCoeff();
  big_new = 0.5 * (big_new + big_new.transpose());
  if (big_new.minCoeff() < -1e-6) {
    std::ostringstream os;
    os << "implied big Gram has negative entries (min " << big_new.minCoeff() << ")";
    out.diagnostic = os.str();
    return out;
  }
  Matrix g_new(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double sign = g(i, j) < 0.0 ? -1.0 : 1.0;
      g_new(i, j) = sign * std::sqrt(std::max(big_new(i, j), 0.0));
    }
  }
  const SymmetricEigen eig = symmetric_eigen(g_new);
  const Matrix f_new = eig.vectors.leftCols(d);
  // Orthogonal Procrustes alignment with the incoming frame.
  Matrix rotation;
  try {
    rotation = polar_orthogonal_factor(f_new.transpose() * frame.rows());
  } catch (const Error&) {
    rotation = Matrix::Identity(d, d);
  }
  out.frame = FrameMatrix(f_new * rotation);
  out.accepted = true;
  return out;
}

// ------------------------------------------------------------------ objective

DeviceObjective::DeviceObjective(const OptConfig& config) : config_(config) {
  config_.validate();
  d_ = config.dim;
  n_ = config.count();
  block_ = config.constraints.rank == RankModel::One ? n_ * d_ : n_ * d_ * d_;
  switch (config.constraints.post_states) {
    case PostStateModel::Parallel: nparams_ = block_; break;
    case PostStateModel::FreeIndependent: nparams_ = block_ + n_ * d_ * d_; break;
    case PostStateModel::FreePovmRescalable: nparams_ = 2 * block_; break;
  }
}

namespace {

// Elements of one parameter block: rows phi_i (rank one) or Kraus factors K_i.
std::vector<Matrix> block_elements(const double* x, RankModel rank, int n, int d) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (rank == RankModel::One) {
      const Eigen::Map<const Vector> phi(x + i * d, d);
      out.push_back(phi * phi.transpose());
    } else {
      const Eigen::Map<const Matrix> k(x + i * d * d, d, d);
      out.push_back(k.transpose() * k);
    }
  }
  return out;
}

// Pulls dJ/dE_i back to the block parameters.
void chain_block(const double* x, RankModel rank, int n, int d, const std::vector<Matrix>& g_elem,
                 double* grad) {
  for (int i = 0; i < n; ++i) {
    const Matrix sym = g_elem[static_cast<std::size_t>(i)] + g_elem[static_cast<std::size_t>(i)].transpose();
    if (rank == RankModel::One) {
      const Eigen::Map<const Vector> phi(x + i * d, d);
      Eigen::Map<Vector>(grad + i * d, d) += sym * phi;
    } else {
      const Eigen::Map<const Matrix> k(x + i * d * d, d, d);
      Eigen::Map<Matrix>(grad + i * d * d, d, d) += k * sym;
    }
  }
}

// Gradient of sigma = S / tr S with respect to S, given dJ/dsigma.
Matrix normalization_pullback(const Matrix& g_sigma, const Matrix& s) {
  const double t = s.trace();
  const double inner = g_sigma.cwiseProduct(s).sum();
  return g_sigma / t - (inner / (t * t)) * Matrix::Identity(s.rows(), s.cols());
}

// Upper-triangle entries (a <= b) of sum E - I.
void append_completeness(const std::vector<Matrix>& e, int d, Vector& c, Eigen::Index& at) {
  Matrix sum = -Matrix::Identity(d, d);
  for (const Matrix& m : e) sum += m;
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) c(at++) = sum(a, b);
  }
}

Matrix completeness_weight(const Vector& w, int d, Eigen::Index& at) {
  Matrix m = Matrix::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) m(a, b) = w(at++);
  }
  return m;
}

}  // namespace

std::vector<Matrix> DeviceObjective::elements(const Vector& x) const {
  return block_elements(x.data(), config_.constraints.rank, n_, d_);
}

std::vector<Matrix> DeviceObjective::post_states(const Vector& x) const {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(n_));
  switch (config_.constraints.post_states) {
    case PostStateModel::Parallel:
      for (const Matrix& e : elements(x)) out.push_back(e / e.trace());
      break;
    case PostStateModel::FreePovmRescalable:
      for (const Matrix& e : block_elements(x.data() + block_, config_.constraints.rank, n_, d_)) {
        out.push_back(e / e.trace());
      }
      break;
    case PostStateModel::FreeIndependent:
      for (int j = 0; j < n_; ++j) {
        const Eigen::Map<const Matrix> l(x.data() + block_ + j * d_ * d_, d_, d_);
        const Matrix s = l * l.transpose();
        out.push_back(s / s.trace());
      }
      break;
  }
  return out;
}

Vector DeviceObjective::initial_point(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  Vector x(nparams_);
  auto fill_block = [&](double* dst) {
    if (config_.constraints.rank == RankModel::One) {
      const Matrix f = polar_orthogonal_factor(gaussian_matrix(n_, d_, rng));
      for (int i = 0; i < n_; ++i) Eigen::Map<Vector>(dst + i * d_, d_) = f.row(i).transpose();
    } else {
      std::vector<Matrix> ks;
      Matrix sum = Matrix::Zero(d_, d_);
      for (int i = 0; i < n_; ++i) {
        ks.push_back(gaussian_matrix(d_, d_, rng));
        sum += ks.back().transpose() * ks.back();
      }
      // K_i S^{-1/2} makes sum K_i^T K_i = I.
      Eigen::SelfAdjointEigenSolver<Matrix> es(sum);
      const Matrix inv_sqrt = es.operatorInverseSqrt();
      for (int i = 0; i < n_; ++i) {
        Eigen::Map<Matrix>(dst + i * d_ * d_, d_, d_) = ks[static_cast<std::size_t>(i)] * inv_sqrt;
      }
    }
  };
  fill_block(x.data());
  switch (config_.constraints.post_states) {
    case PostStateModel::Parallel: break;
    case PostStateModel::FreePovmRescalable: fill_block(x.data() + block_); break;
    case PostStateModel::FreeIndependent: {
      // Start near the parallel update: L_j = E_j + small noise.
      std::normal_distribution<double> normal(0.0, 1.0);
      const std::vector<Matrix> e = elements(x);
      for (int j = 0; j < n_; ++j) {
        Matrix l = e[static_cast<std::size_t>(j)] / e[static_cast<std::size_t>(j)].trace();
        for (int a = 0; a < d_; ++a) {
          for (int b = 0; b < d_; ++b) l(a, b) += 0.01 * normal(rng);
        }
        Eigen::Map<Matrix>(x.data() + block_ + j * d_ * d_, d_, d_) = l;
      }
      break;
    }
  }
  return x;
}

double DeviceObjective::quantumness(const Vector& x, Vector* grad) const {
  const std::vector<Matrix> e = elements(x);
  const std::vector<Matrix> sigma = post_states(x);
  Matrix a(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      a(i, j) = e[static_cast<std::size_t>(i)].cwiseProduct(sigma[static_cast<std::size_t>(j)]).sum();
    }
  }
  if (!a.allFinite()) return kInf;
  Eigen::PartialPivLU<Matrix> lu(a);
  if (!(lu.rcond() > 1e-14)) return kInf;
  const Matrix phi = lu.inverse();
  const Matrix defect = Matrix::Identity(n_, n_) - phi;
  if (!defect.allFinite()) return kInf;
  const NormOrder p = config_.p;
  if (grad == nullptr) return schatten_norm(defect, p);

  Eigen::JacobiSVD<Matrix> svd(defect, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  SingularSpectrum spectrum;
  spectrum.values.assign(s.data(), s.data() + s.size());
  const double value = schatten_norm(spectrum, p);
  Vector weight(n_);
  for (int i = 0; i < n_; ++i) {
    if (p.is_infinite()) {
      weight(i) = i == 0 ? 1.0 : 0.0;
    } else if (value > 0.0 && s(i) > 0.0) {
      weight(i) = std::pow(s(i) / value, p.value() - 1.0);
    } else {
      weight(i) = 0.0;
    }
  }
  // dJ/dX, then dJ/dA = Phi^T W Phi^T since dX = Phi dA Phi.
  const Matrix w = svd.matrixU() * weight.asDiagonal() * svd.matrixV().transpose();
  const Matrix g_a = phi.transpose() * w * phi.transpose();

  std::vector<Matrix> g_elem(static_cast<std::size_t>(n_), Matrix::Zero(d_, d_));
  std::vector<Matrix> g_post(static_cast<std::size_t>(n_), Matrix::Zero(d_, d_));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      g_elem[static_cast<std::size_t>(i)] += g_a(i, j) * sigma[static_cast<std::size_t>(j)];
      g_post[static_cast<std::size_t>(j)] += g_a(i, j) * e[static_cast<std::size_t>(i)];
    }
  }
  grad->setZero(nparams_);
  element_gradient(x, g_elem, g_post, *grad);
  return value;
}

void DeviceObjective::element_gradient(const Vector& x, const std::vector<Matrix>& g_elements,
                                       const std::vector<Matrix>& g_post, Vector& grad) const {
  std::vector<Matrix> g_elem = g_elements;
  switch (config_.constraints.post_states) {
    case PostStateModel::Parallel: {
      const std::vector<Matrix> e = elements(x);
      for (int j = 0; j < n_; ++j) {
        g_elem[static_cast<std::size_t>(j)] +=
            normalization_pullback(g_post[static_cast<std::size_t>(j)], e[static_cast<std::size_t>(j)]);
      }
      break;
    }
    case PostStateModel::FreePovmRescalable: {
      const std::vector<Matrix> e2 = block_elements(x.data() + block_, config_.constraints.rank, n_, d_);
      std::vector<Matrix> g2(static_cast<std::size_t>(n_));
      for (int j = 0; j < n_; ++j) {
        g2[static_cast<std::size_t>(j)] =
            normalization_pullback(g_post[static_cast<std::size_t>(j)], e2[static_cast<std::size_t>(j)]);
      }
      chain_block(x.data() + block_, config_.constraints.rank, n_, d_, g2, grad.data() + block_);
      break;
    }
    case PostStateModel::FreeIndependent: {
      for (int j = 0; j < n_; ++j) {
        const Eigen::Map<const Matrix> l(x.data() + block_ + j * d_ * d_, d_, d_);
        const Matrix s = l * l.transpose();
        const Matrix g_s = normalization_pullback(g_post[static_cast<std::size_t>(j)], s);
        Eigen::Map<Matrix>(grad.data() + block_ + j * d_ * d_, d_, d_) += (g_s + g_s.transpose()) * l;
      }
      break;
    }
  }
  chain_block(x.data(), config_.constraints.rank, n_, d_, g_elem, grad.data());
}

Vector DeviceObjective::constraints(const Vector& x) const {
  const int tri = d_ * (d_ + 1) / 2;
  const bool rescalable = config_.constraints.post_states == PostStateModel::FreePovmRescalable;
  Vector c(tri + (config_.constraints.unbiased ? n_ : 0) + (rescalable ? tri : 0));
  Eigen::Index at = 0;
  const std::vector<Matrix> e = elements(x);
  append_completeness(e, d_, c, at);
  if (config_.constraints.unbiased) {
    const double target = static_cast<double>(d_) / n_;
    for (const Matrix& m : e) c(at++) = m.trace() - target;
  }
  if (rescalable) {
    append_completeness(block_elements(x.data() + block_, config_.constraints.rank, n_, d_), d_, c, at);
  }
  return c;
}

double DeviceObjective::augmented(const Vector& x, const Vector& lambda, double mu, Vector& grad) const {
  const double f = quantumness(x, &grad);
  if (!std::isfinite(f)) return kInf;
  const Vector c = constraints(x);
  const Vector w = lambda + mu * c;
  Eigen::Index at = 0;
  const Matrix m = completeness_weight(w, d_, at);
  std::vector<Matrix> g_elem(static_cast<std::size_t>(n_), m);
  if (config_.constraints.unbiased) {
    for (int i = 0; i < n_; ++i) g_elem[static_cast<std::size_t>(i)].diagonal().array() += w(at++);
  }
  chain_block(x.data(), config_.constraints.rank, n_, d_, g_elem, grad.data());
  if (config_.constraints.post_states == PostStateModel::FreePovmRescalable) {
    const Matrix m2 = completeness_weight(w, d_, at);
    chain_block(x.data() + block_, config_.constraints.rank, n_, d_,
                std::vector<Matrix>(static_cast<std::size_t>(n_), m2), grad.data() + block_);
  }
  return f + lambda.dot(c) + 0.5 * mu * c.squaredNorm();
}

ConstraintResiduals DeviceObjective::residuals(const Vector& x) const {
  const Vector c = constraints(x);
  const int tri = d_ * (d_ + 1) / 2;
  ConstraintResiduals r;
  r.completeness = c.head(tri).cwiseAbs().maxCoeff();
  Eigen::Index at = tri;
  if (config_.constraints.unbiased) {
    r.bias = c.segment(at, n_).cwiseAbs().maxCoeff();
    at += n_;
  }
  if (config_.constraints.post_states == PostStateModel::FreePovmRescalable) {
    r.post_completeness = c.segment(at, tri).cwiseAbs().maxCoeff();
  }
  return r;
}

ReferenceDevice DeviceObjective::device(const Vector& x) const {
  std::vector<Matrix> post;
  if (config_.constraints.post_states != PostStateModel::Parallel) post = post_states(x);
  if (config_.constraints.rank == RankModel::One) {
    Matrix rows(n_, d_);
    for (int i = 0; i < n_; ++i) rows.row(i) = Eigen::Map<const Vector>(x.data() + i * d_, d_).transpose();
    return frame_to_device(FrameMatrix(std::move(rows)), std::move(post));
  }
  return ReferenceDevice::make(d_, elements(x), std::move(post));
}

// ------------------------------------------------------------------ minimization

namespace {

struct RestartOutcome {
  RestartSummary summary;
  Vector x;
  int iterations = 0;
};

struct StageResult {
  Vector x;
  int iterations = 0;
  bool feasible = false;
};

StageResult augmented_lagrangian(const DeviceObjective& objective, const OptConfig& config, Vector x) {
  StageResult out;
  Vector lambda = Vector::Zero(objective.constraints(x).size());
  double mu = 10.0;
  double previous_violation = kInf;
  LbfgsOptions inner;
  inner.max_iterations = config.max_iters;
  inner.gradient_tol = config.tol_objective;
  for (int outer = 0; outer < config.max_outer; ++outer) {
    const Objective fn = [&](const Vector& z, Vector& g) { return objective.augmented(z, lambda, mu, g); };
    const LbfgsResult r = lbfgs_minimize(fn, x, inner);
    out.iterations += r.iterations;
    if (!std::isfinite(r.value)) break;
    x = r.x;
    const Vector c = objective.constraints(x);
    const double violation = c.cwiseAbs().maxCoeff();
    lambda += mu * c;
    if (violation < config.tol_constraint) break;
    if (violation > 0.25 * previous_violation) mu = std::min(mu * 5.0, 1e9);
    previous_violation = violation;
  }
  out.feasible = std::isfinite(objective.quantumness(x, nullptr)) && objective.residuals(x).max() < config.tol_constraint;
  out.x = std::move(x);
  return out;
}

// The spectral norm is not smooth, so p = inf is approached through finite orders.
std::vector<NormOrder> stage_orders(NormOrder p) {
  if (!p.is_infinite()) return {p};
  return {NormOrder(2.0), NormOrder(8.0), NormOrder(32.0), NormOrder(128.0), p};
}

RestartOutcome run_restart(const DeviceObjective& objective, const OptConfig& config, std::uint64_t seed) {
  RestartOutcome out;
  out.summary.seed = seed;
  Vector x = objective.initial_point(seed);
  bool have_feasible = false;
  for (const NormOrder& order : stage_orders(config.p)) {
    OptConfig stage = config;
    stage.p = order;
    const StageResult r = augmented_lagrangian(order == config.p ? objective : DeviceObjective(stage), stage, x);
    out.iterations += r.iterations;
    if (r.feasible) {
      x = r.x;
      have_feasible = true;
    } else if (!have_feasible) {
      x = r.x;
    }
  }
  out.x = x;
  out.summary.value = objective.quantumness(x, nullptr);
  out.summary.residual = objective.residuals(x).max();
  out.summary.feasible = std::isfinite(out.summary.value) && out.summary.residual < config.tol_constraint;
  return out;
}

}  // namespace

OptRun minimize_quantumness(const OptConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const DeviceObjective objective(config);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int k = next++; k < config.restarts; k = next++) {
      outcomes[static_cast<std::size_t>(k)] = run_restart(objective, config, restart_seed(config.seed, k));
    }
  };
  int threads = config.threads > 0 ? config.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, config.restarts);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  // Reduce: lowest feasible value, seed breaks ties.
  const RestartOutcome* best = nullptr;
  for (const RestartOutcome& o : outcomes) {
    if (!o.summary.feasible) continue;
    if (best == nullptr || o.summary.value < best->summary.value ||
        (o.summary.value == best->summary.value && o.summary.seed < best->summary.seed)) {
      best = &o;
    }
  }
  if (best == nullptr) {
    throw Error(ErrorKind::Infeasible, "no restart reached the constraint tolerance");
  }
  OptRun run;
  run.best_device = objective.device(best->x);
  run.best_value = riclab::quantumness(run.best_device, config.p);
  run.constraint_residuals = objective.residuals(best->x);
  run.iterations = best->iterations;
  run.converged = best->summary.feasible;
  run.seed = best->summary.seed;
  for (const RestartOutcome& o : outcomes) run.restarts.push_back(o.summary);
  run.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

}  // namespace riclab
