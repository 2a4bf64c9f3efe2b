#pragma once

// Search engines over reference devices: seeded random frames, alternating
// projections (with an optional quantumness knockdown), constrained
// minimization of ||I - Phi||_p, random sampling and Levy fitting.

#include "riclab/born.hpp"
#include "riclab/matcore.hpp"
#include "riclab/povm.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace riclab {

// ---------------------------------------------------------------- config

enum class RankModel { One, Any };
enum class PostStateModel { Parallel, FreePovmRescalable, FreeIndependent };

const char* to_string(RankModel m) noexcept;
const char* to_string(PostStateModel m) noexcept;
RankModel parse_rank_model(const std::string& s);
PostStateModel parse_post_state_model(const std::string& s);

struct ConstraintSet {
  bool povm_required = true;  // sum E_i = I is always imposed; kept for the record format
  bool unbiased = true;
  RankModel rank = RankModel::One;
  PostStateModel post_states = PostStateModel::Parallel;
};

struct OptConfig {
  NormOrder p{2.0};
  ConstraintSet constraints;
  int dim = 4;
  int restarts = 32;
  std::uint64_t seed = 1;
  int max_iters = 3000;         // inner L-BFGS iterations per outer round
  int max_outer = 40;           // augmented-Lagrangian rounds
  double tol_constraint = 1e-10;
  double tol_objective = 1e-12;
  int threads = 0;              // 0: hardware concurrency

  int count() const { return dim * (dim + 1) / 2; }
  /// Throws InvalidInput when tolerances are not positive or restarts < 1.
  void validate() const;
  /// Default restarts: 32 for parallel updates, 128 otherwise.
  static int default_restarts(PostStateModel post);
};

struct ConstraintResiduals {
  double completeness = 0.0;       // ||sum E_i - I||_max
  double bias = 0.0;               // max |tr E_i - d/N| (0 when unconstrained)
  double post_completeness = 0.0;  // rescalable post-state POVM
  double max() const;
};

struct RestartSummary {
  std::uint64_t seed = 0;
  double value = 0.0;
  double residual = 0.0;
  bool feasible = false;
};

struct OptRun {
  double best_value = 0.0;
  ReferenceDevice best_device;
  ConstraintResiduals constraint_residuals;
  int iterations = 0;  // inner iterations of the winning restart
  bool converged = false;
  std::uint64_t seed = 0;  // seed of the winning restart
  double wall_time = 0.0;  // seconds, whole multi-start
  std::vector<RestartSummary> restarts;
};

/// Seed of restart k derived from the configured seed (splitmix64).
std::uint64_t restart_seed(std::uint64_t seed, int k);

// ---------------------------------------------------------------- frames

/// N x d Gaussian matrix with orthonormalized columns, deterministic per seed.
FrameMatrix random_frame(int d, int n, std::uint64_t seed);

struct AltProjOptions {
  int dim = 4;
  int count = 10;
  int max_iters = 5000;
  double stop_tol = 1e-13;    // iterate until ||F^T F - I||_2 < stop_tol
  double accept_tol = 1e-9;   // converged when both residuals end below this
  int knockdown_rounds = 0;   // 0 disables the knockdown projection
};

struct AltProjResult {
  FrameMatrix frame;
  bool converged = false;
  int iterations = 0;
  double povm_residual = 0.0;  // ||F^T F - I||_2
  double bias_residual = 0.0;  // max_i |<phi_i|phi_i> - d/N|
  double quantumness_2 = 0.0;  // parallel-update 2-quantumness (knockdown runs)
  int knockdowns_accepted = 0;
};

/// Alternates the POVM projection (polar factor) with row normalization to
/// sqrt(d/N) until an unbiased rank-1 RIC is reached.
AltProjResult alternating_projection_ric(std::uint64_t seed, const AltProjOptions& opts = {});
AltProjResult alternating_projection_ric(const FrameMatrix& start, const AltProjOptions& opts = {});

struct KnockdownResult {
  FrameMatrix frame;
  bool accepted = false;
  std::string diagnostic;
  double symmetry_residual = 0.0;  // ||G' - G'^T||_max before symmetrization
};

/// One knockdown: I - Phi = U S V^T is replaced by its partial isometry
/// U V^T (on the support of S); the implied big Gram (d/N) Phi'^{-1} is
/// square-rooted with the signs of the current little Gram, rounded to a
/// rank-d projector and turned back into a frame aligned with the input.
KnockdownResult knockdown_step(const FrameMatrix& frame);

// ---------------------------------------------------------------- minimization

/// Multi-start augmented-Lagrangian minimization of ||I - Phi||_p.
/// Throws Infeasible when no restart meets tol_constraint.
OptRun minimize_quantumness(const OptConfig& config);

/// Objective and analytic gradient for one parameterization; exposed so tests
/// can compare against finite differences.
class DeviceObjective {
 public:
  explicit DeviceObjective(const OptConfig& config);

  int parameter_count() const noexcept { return nparams_; }
  Vector initial_point(std::uint64_t seed) const;

  /// ||I - Phi||_p; +inf where Phi^{-1} is singular.
  double quantumness(const Vector& x, Vector* grad) const;
  /// Equality constraints c(x) = 0.
  Vector constraints(const Vector& x) const;
  /// Augmented Lagrangian f + lambda.c + (mu/2)|c|^2 and its gradient.
  double augmented(const Vector& x, const Vector& lambda, double mu, Vector& grad) const;

  ConstraintResiduals residuals(const Vector& x) const;
  /// Device (post-states included) described by x.
  ReferenceDevice device(const Vector& x) const;

  std::vector<Matrix> elements(const Vector& x) const;
  std::vector<Matrix> post_states(const Vector& x) const;

 private:
  struct Layout;
  void element_gradient(const Vector& x, const std::vector<Matrix>& g_elements,
                        const std::vector<Matrix>& g_post, Vector& grad) const;

  OptConfig config_;
  int n_ = 0;
  int d_ = 0;
  int nparams_ = 0;
  int block_ = 0;   // parameters per element set
};

// ---------------------------------------------------------------- sampling

enum class SampleMethod { AlternatingProjection, RandomPovm };

const char* to_string(SampleMethod m) noexcept;
SampleMethod parse_sample_method(const std::string& s);
/// Human-readable description of the sampling measure.
std::string sampling_measure(SampleMethod m);

struct HistogramBin {
  double left;
  double right;
  int count;
};

struct SampleBatch {
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  int excluded = 0;  // unconverged samples
  std::vector<HistogramBin> histogram;
  std::string measure;

  double min() const;
  /// Midpoint of the fullest histogram bin.
  double mode() const;
};

SampleBatch sample_quantumness(int count, std::uint64_t seed, SampleMethod method,
                               int threads = 0);

/// Freedman-Diaconis binning, capped at max_bins.
std::vector<HistogramBin> freedman_diaconis_histogram(const std::vector<double>& values,
                                                      int max_bins = 5000);

struct LevyFit {
  double a = 0.0;  // scale
  double b = 0.0;  // shift
  double log_likelihood = 0.0;
};

/// Density a^{-1} (2 pi ((x - b)/a)^3)^{-1/2} exp(-a / (2 (x - b))) for x > b.
double levy_pdf(double x, double a, double b);

/// Maximum-likelihood (a, b); the scale is profiled out in closed form.
LevyFit fit_levy(const std::vector<double>& samples);

/// x = b + a / z^2 with z standard normal.
std::vector<double> sample_levy(double a, double b, int count, std::uint64_t seed);

}  // namespace riclab
