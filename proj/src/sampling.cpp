#include "riclab/optimize.hpp"

#include "riclab/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

namespace riclab {

const char* to_string(SampleMethod m) noexcept {
  return m == SampleMethod::AlternatingProjection ? "altproj" : "random";
}

SampleMethod parse_sample_method(const std::string& s) {
  if (s == "altproj" || s == "alternating_projection") return SampleMethod::AlternatingProjection;
  if (s == "random" || s == "random_povm") return SampleMethod::RandomPovm;
  throw Error(ErrorKind::InvalidInput, "unknown sampling method '" + s + "'");
}

std::string sampling_measure(SampleMethod m) {
  if (m == SampleMethod::AlternatingProjection) {
    return "unbiased rank-1 d=4 N=10 frames reached by alternating projections from an i.i.d. "
           "standard Gaussian 10x4 start";
  }
  return "rank-1 d=4 N=10 POVMs: polar factor of an i.i.d. standard Gaussian 10x4 matrix "
         "(uniform on the Stiefel manifold)";
}

double SampleBatch::min() const {
  if (values.empty()) throw Error(ErrorKind::InvalidInput, "empty sample batch");
  return *std::min_element(values.begin(), values.end());
}

double SampleBatch::mode() const {
  if (histogram.empty()) throw Error(ErrorKind::InvalidInput, "empty histogram");
  const auto it = std::max_element(histogram.begin(), histogram.end(),
                                   [](const HistogramBin& a, const HistogramBin& b) { return a.count < b.count; });
  return 0.5 * (it->left + it->right);
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double sample_one(std::uint64_t seed, SampleMethod method) {
  if (method == SampleMethod::AlternatingProjection) {
    const AltProjResult r = alternating_projection_ric(seed);
    if (!r.converged) return std::numeric_limits<double>::quiet_NaN();
    return quantumness(frame_to_device(r.frame), NormOrder(2.0));
  }
  try {
    return quantumness(frame_to_device(random_frame(4, 10, seed)), NormOrder(2.0));
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

std::vector<HistogramBin> freedman_diaconis_histogram(const std::vector<double>& values, int max_bins) {
  if (values.empty()) return {};
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  if (!(hi > lo) || !(iqr > 0.0)) {
    return {HistogramBin{lo, hi > lo ? hi : lo + 1.0, static_cast<int>(sorted.size())}};
  }
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
  const double needed = std::ceil((hi - lo) / width);
  // Heavy tails: keep the FD width and gather everything past max_bins - 1 bins into one overflow bin.
  const bool overflow = needed > max_bins;
  const int regular = overflow ? std::max(1, max_bins - 1) : static_cast<int>(std::max(1.0, needed));
  std::vector<HistogramBin> out;
  out.reserve(static_cast<std::size_t>(regular + 1));
  for (int k = 0; k < regular; ++k) out.push_back({lo + k * width, lo + (k + 1) * width, 0});
  if (overflow) {
    out.push_back({lo + regular * width, hi, 0});
  } else {
    out.back().right = std::max(out.back().right, hi);
  }
  const int last = static_cast<int>(out.size()) - 1;
  for (double v : sorted) {
    const int k = static_cast<int>(std::min<double>(last, std::floor((v - lo) / width)));
    ++out[static_cast<std::size_t>(k)].count;
  }
  return out;
}

SampleBatch sample_quantumness(int count, std::uint64_t seed, SampleMethod method, int threads) {
  if (count < 1) throw Error(ErrorKind::InvalidInput, "sample count must be >= 1");
  std::vector<double> raw(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int k = next++; k < count; k = next++) raw[static_cast<std::size_t>(k)] = sample_one(restart_seed(seed, k), method);
  };
  int t = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  t = std::clamp(t, 1, count);
  if (t == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < t; ++i) pool.emplace_back(worker);
  }
  SampleBatch batch;
  batch.measure = sampling_measure(method);
  for (int k = 0; k < count; ++k) {
    const double v = raw[static_cast<std::size_t>(k)];
    if (std::isfinite(v)) {
      batch.values.push_back(v);
      batch.seeds.push_back(restart_seed(seed, k));
    } else {
      ++batch.excluded;
    }
  }
  batch.histogram = freedman_diaconis_histogram(batch.values);
  return batch;
}

// ------------------------------------------------------------------ Levy

double levy_pdf(double x, double a, double b) {
  if (!(a > 0.0)) throw Error(ErrorKind::Domain, "Levy scale must be positive");
  if (x <= b) return 0.0;
  const double z = x - b;
  return std::sqrt(a / (2.0 * std::numbers::pi)) * std::pow(z, -1.5) * std::exp(-a / (2.0 * z));
}

namespace {

struct Profile {
  double a;
  double loglik;
};

Profile profile_at(const std::vector<double>& x, double b) {
  const double n = static_cast<double>(x.size());
  double inv = 0.0, logs = 0.0;
  for (double v : x) {
    inv += 1.0 / (v - b);
    logs += std::log(v - b);
  }
  const double a = n / inv;
  const double ll = 0.5 * n * std::log(a / (2.0 * std::numbers::pi)) - 1.5 * logs - 0.5 * a * inv;
  return {a, ll};
}

}  // namespace

LevyFit fit_levy(const std::vector<double>& samples) {
  if (samples.size() < 4) throw Error(ErrorKind::FitError, "Levy fit needs at least 4 samples");
  for (double v : samples) {
    if (!std::isfinite(v)) throw Error(ErrorKind::FitError, "Levy fit: non-finite sample");
  }
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double x0 = sorted.front();
  if (!(sorted.back() > x0)) throw Error(ErrorKind::FitError, "Levy fit: all samples are equal");
  const double spread = std::max(quantile(sorted, 0.5) - x0, 1e-12 * std::max(1.0, std::abs(x0)));
  // b = x0 - exp(t); grid then golden-section refinement in t.
  const double t_lo = std::log(spread * 1e-9);
  const double t_hi = std::log(spread * 1e3);
  const int grid = 400;
  auto ll_at = [&](double t) { return profile_at(sorted, x0 - std::exp(t)).loglik; };
  int best = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid; ++k) {
    const double ll = ll_at(t_lo + (t_hi - t_lo) * k / grid);
    if (ll > best_ll) {
      best_ll = ll;
      best = k;
    }
  }
  const double h = (t_hi - t_lo) / grid;
  double lo = t_lo + h * std::max(0, best - 1);
  double hi = t_lo + h * std::min(grid, best + 1);
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - r * (hi - lo), d = lo + r * (hi - lo);
  double fc = ll_at(c), fd = ll_at(d);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - r * (hi - lo);
      fc = ll_at(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + r * (hi - lo);
      fd = ll_at(d);
    }
  }
  const double b = x0 - std::exp(0.5 * (lo + hi));
  const Profile pr = profile_at(sorted, b);
  if (!std::isfinite(pr.loglik) || !(pr.a > 0.0)) throw Error(ErrorKind::FitError, "Levy fit did not converge");
  return {pr.a, b, pr.loglik};
}

std::vector<double> sample_levy(double a, double b, int count, std::uint64_t seed) {
  if (!(a > 0.0)) throw Error(ErrorKind::Domain, "Levy scale must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
  for (double& v : out) {
    double z = normal(rng);
    while (z == 0.0) z = normal(rng);
    v = b + a / (z * z);
  }
  return out;
}

}  // namespace riclab
