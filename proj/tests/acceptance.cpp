#include "oracles.hpp"
#include "riclab/born.hpp"
#include "riclab/catalog.hpp"
#include "riclab/error.hpp"
#include "riclab/optimize.hpp"
#include "riclab/parametric.hpp"
#include "riclab/povm.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace riclab;
namespace par = riclab::parametric;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (cond ? "" : " [x]");
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Every p = 2 quantumness of a real d = 4 device seen during the run.
std::vector<double> floor_values;

double record2(double v) {
  floor_values.push_back(v);
  return v;
}

Check reference_table() {
  Check c;
  const NormOrder two(2.0);
  auto timed = [&](const char* name, const std::function<double()>& f, double expected, double tol) {
    const auto t0 = Clock::now();
    const double v = f();
    const double dt = seconds_since(t0);
    c.require(std::abs(v - expected) <= tol && dt < 1.0,
              std::string(name) + fmt(" %.10f (err %.1e, %.3fs)", v, std::abs(v - expected), dt));
  };
  timed("petersen", [&] { return record2(quantumness(entry_device(petersen_ric()), two)); },
        6.0 * std::sqrt(161.0 / 5.0), 1e-6);
  timed("a4", [&] { return record2(quantumness(entry_device(a_d_ric(4)), two)); }, 2.0 * std::sqrt(21.0), 1e-6);
  timed("unbiased-2ric",
        [&] { return record2(quantumness(make_born_matrix(phi_from_little_gram(unbiased_2ric().gram)), two)); },
        3.0 * std::sqrt(2991907.0) / 784.0, 1e-9);
  timed("hypothetical-sic",
        [&] { return record2(quantumness(make_born_matrix(hypothetical_sic_phi(4, Field::Real)), two)); }, 6.0,
        1e-12);
  return c;
}

Check optimization() {
  Check c;
  OptConfig unbiased;
  unbiased.restarts = 32;
  unbiased.seed = 1;
  auto t0 = Clock::now();
  const double u = record2(minimize_quantumness(unbiased).best_value);
  double dt = seconds_since(t0);
  c.require(u <= 6.61880 + 1e-4 && dt <= 600.0, fmt("unbiased %.8f (%.0fs)", u, dt));

  OptConfig biased = unbiased;
  biased.constraints.unbiased = false;
  t0 = Clock::now();
  const double b = record2(minimize_quantumness(biased).best_value);
  dt = seconds_since(t0);
  c.require(b <= 6.61545 + 1e-4 && dt <= 600.0, fmt("biased %.8f (%.0fs)", b, dt));

  t0 = Clock::now();
  const par::FamilyMinimum m = par::minimize_over_f(NormOrder(2.0));
  dt = seconds_since(t0);
  record2(m.value);
  c.require(std::abs(m.f - 0.40446637) <= 1e-5 && std::abs(m.value - 6.61544478) <= 1e-6 && dt < 10.0,
            fmt("family f*=%.8f value %.9f (%.2fs)", m.f, m.value, dt));

  OptConfig free = biased;
  free.constraints.post_states = PostStateModel::FreeIndependent;
  free.restarts = 128;
  t0 = Clock::now();
  const double n = record2(minimize_quantumness(free).best_value);
  dt = seconds_since(t0);
  c.require(n <= 6.6085 && dt <= 3600.0, fmt("non-parallel %.8f (%.0fs)", n, dt));
  return c;
}

Check family_consistency() {
  Check c;
  double proj = 0.0, phi = 0.0, born = 0.0;
  std::mt19937_64 rng(2024);
  for (double f : {0.2, 0.3, 0.4, 0.5, 0.6}) {
    const par::ParametricPoint pt = par::solve_family(f);
    const Matrix& g = pt.gram;
    proj = std::max(proj, (g * g - g).cwiseAbs().maxCoeff());
    const ReferenceDevice dev = par::family_device(f);
    record2(quantumness(dev, NormOrder(2.0)));
    const Matrix pipeline = born_matrix(dev).phi;
    phi = std::max(phi, (pipeline - par::phi_closed_form(f)).cwiseAbs().maxCoeff());
    for (int t = 0; t < 20; ++t) {
      const ProbabilityVector pr(oracle::probability(10, rng));
      const ConditionalMatrix per(oracle::stochastic(1 + t % 5, 10, rng));
      const Vector q = born_evaluate(pipeline, pr, per).q;
      born = std::max(born, (par::born_explicit(f, pr, per) - q).cwiseAbs().maxCoeff());
    }
  }
  const double unb = (par::solve_family(0.4).gram - unbiased_2ric().gram).cwiseAbs().maxCoeff();
  c.require(proj < 1e-10, fmt("projector residual %.1e", proj));
  c.require(phi <= 1e-8, fmt("pipeline vs closed form %.1e", phi));
  c.require(born <= 1e-12, fmt("explicit Born rule %.1e", born));
  c.require(unb <= 1e-10, fmt("f=2/5 Gram %.1e", unb));
  return c;
}

Check born_oracle() {
  Check c;
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (const std::string& label : catalog_labels()) {
    const ReferenceDevice dev = entry_device(catalog_entry(label));
    const Matrix phi = born_matrix(dev).phi;
    for (int t = 0; t < 100; ++t) {
      const Matrix rho = oracle::density(dev.dim(), rng);
      const std::vector<Matrix> meas = oracle::povm(dev.dim(), 2 + t % 5, rng);
      Vector pr(dev.count());
      for (int i = 0; i < dev.count(); ++i) pr(i) = oracle::trace_inner(rho, dev.elements()[i]);
      Matrix per(static_cast<Eigen::Index>(meas.size()), dev.count());
      for (std::size_t j = 0; j < meas.size(); ++j)
        for (int i = 0; i < dev.count(); ++i)
          per(static_cast<Eigen::Index>(j), i) = oracle::trace_inner(meas[j], dev.post_states()[i]);
      const Vector q = born_evaluate(phi, ProbabilityVector(pr), ConditionalMatrix(per)).q;
      for (std::size_t j = 0; j < meas.size(); ++j)
        worst = std::max(worst, std::abs(q(static_cast<Eigen::Index>(j)) - oracle::trace_inner(meas[j], rho)));
    }
  }
  c.require(worst <= 1e-12, fmt("max |Q_phi - Q_trace| %.1e over %.0f devices x 100", worst,
                                static_cast<double>(catalog_labels().size())));
  return c;
}

Check gram_theorem() {
  Check c;
  double proj = 0.0, trace = 0.0, had = 0.0;
  int converged = 0, full_rank = 0;
  for (int k = 0; k < 500; ++k) {
    const AltProjResult r = alternating_projection_ric(restart_seed(7, k));
    const Matrix g = little_gram(r.frame);
    proj = std::max(proj, (g * g - g).cwiseAbs().maxCoeff());
    trace = std::max(trace, std::abs(g.trace() - 4.0));
    const ReferenceDevice dev = frame_to_device(r.frame);
    had = std::max(had, (big_gram(dev) - g.cwiseProduct(g)).cwiseAbs().maxCoeff());
    if (!r.converged) continue;
    ++converged;
    if (numeric_rank(g.cwiseProduct(g)) == 10) {
      ++full_rank;
      record2(quantumness(dev, NormOrder(2.0)));
    }
  }
  c.require(proj < 1e-9 && trace < 1e-9, fmt("g^2-g %.1e, tr g-4 %.1e", proj, trace));
  c.require(had <= 1e-12, fmt("G vs g o g %.1e", had));
  c.require(full_rank == converged, fmt("rank 10 for %.0f of %.0f converged frames", full_rank, converged));
  return c;
}

Check structure() {
  Check c;
  const Matrix g = unbiased_2ric().gram;
  const Matrix p = g.topLeftCorner(4, 4) * (15.0 / 8.0);
  const double proj = (p * p - p).cwiseAbs().maxCoeff();
  c.require(proj < 1e-10 && numeric_rank(p) == 3, fmt("4x4 block: projector residual %.1e, rank %.0f", proj,
                                                       static_cast<double>(numeric_rank(p))));
  Vector eig = symmetric_eigen(g.bottomRightCorner(6, 6)).values;
  std::sort(eig.data(), eig.data() + eig.size());
  Vector expected(6);
  expected << 0.0, 0.0, 7.0 / 15.0, 7.0 / 15.0, 7.0 / 15.0, 1.0;
  const double err = (eig - expected).cwiseAbs().maxCoeff();
  c.require(err < 1e-10, fmt("6x6 block eigenvalues err %.1e", err));
  const int unique = count_unique_entries(g, 6);
  c.require(unique == 5, fmt("unique entries at 6 decimals %.0f", unique));
  return c;
}

Check p_scan() {
  Check c;
  const ReferenceDevice ric = entry_device(unbiased_2ric());
  const double ric_inf = quantumness(ric, NormOrder::infinity());
  const double fam_inf = par::minimize_over_f(NormOrder::infinity()).value;
  c.require(ric_inf - fam_inf > 1e-3, fmt("family inf %.6f vs 2-RIC %.6f", fam_inf, ric_inf));
  for (double pv : {2.0, 10.0, 20.0, std::numeric_limits<double>::infinity()}) {
    OptConfig cfg;
    cfg.p = NormOrder(pv);
    cfg.restarts = pv == 2.0 ? 32 : 64;
    cfg.seed = 1;
    const OptRun run = minimize_quantumness(cfg);
    record2(quantumness(run.best_device, NormOrder(2.0)));
    const double ref = quantumness(ric, cfg.p);
    const double gap = ref - run.best_value;
    const std::string tag = "p=" + cfg.p.str() + fmt(" min %.6f vs 2-RIC %.6f", run.best_value, ref);
    c.require(pv == 2.0 ? std::abs(gap) <= 1e-3 : gap > 1e-2, tag);
  }
  return c;
}

Check sampling() {
  Check c;
  const auto t0 = Clock::now();
  const SampleBatch batch = sample_quantumness(10000, 1, SampleMethod::AlternatingProjection);
  const double dt = seconds_since(t0);
  for (double v : batch.values) record2(v);
  bool above = true;
  for (double v : batch.values) above = above && v > 6.0;
  c.require(static_cast<int>(batch.values.size()) + batch.excluded == 10000 && dt <= 600.0,
            fmt("%.0f samples, %.0f excluded (%.0fs)", static_cast<double>(batch.values.size()),
                static_cast<double>(batch.excluded), dt));
  c.require(above, "all > 6");
  c.require(batch.min() < 30.0, fmt("min %.4f, mode %.2f", batch.min(), batch.mode()));
  const LevyFit own = fit_levy(batch.values);
  c.require(true, fmt("sample fit a %.2f b %.2f", own.a, own.b));
  const double a = 341.31, b = 5.12;
  const LevyFit back = fit_levy(sample_levy(a, b, 10000, 1));
  c.require(std::abs(back.a / a - 1.0) <= 0.1, fmt("synthetic a %.2f -> %.2f", a, back.a));
  c.require(std::abs(back.b - b) <= 0.5, fmt("synthetic b %.2f -> %.3f", b, back.b));
  return c;
}

Check footnotes() {
  Check c;
  const NormOrder two(2.0);
  const double a2 = quantumness(entry_device(a_d_ric(2)), two);
  const double a3 = quantumness(entry_device(a_d_ric(3)), two);
  const double s3 = quantumness(entry_device(real_sic(3)), two);
  c.require(std::abs(a2 - std::sqrt(2.0)) <= 1e-10, fmt("a2 %.12f", a2));
  c.require(std::abs(a3 - std::sqrt(21.0)) <= 1e-10, fmt("a3 %.12f", a3));
  c.require(std::abs(s3 - 1.5 * std::sqrt(5.0)) <= 1e-10, fmt("sic3 %.12f", s3));
  double worst = 0.0;
  for (int d : {2, 3}) {
    const Matrix phi = born_matrix(entry_device(real_sic(d))).phi;
    worst = std::max(worst, (phi - hypothetical_sic_phi(d, Field::Real)).cwiseAbs().maxCoeff());
  }
  c.require(worst <= 1e-10, fmt("real SIC Phi vs hypothetical %.1e", worst));
  return c;
}

Check floor_property() {
  Check c;
  for (const std::string& label : catalog_labels()) {
    const CatalogEntry e = catalog_entry(label);
    if (e.dim == 4) record2(quantumness(entry_device(e), NormOrder(2.0)));
  }
  double lo = std::numeric_limits<double>::infinity();
  for (double v : floor_values) lo = std::min(lo, v);
  c.require(lo >= 6.0, fmt("min over %.0f values %.10f", static_cast<double>(floor_values.size()), lo));
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
      {"reference table", reference_table},
      {"optimization reproduction", optimization},
      {"parametric family consistency", family_consistency},
      {"Born rule vs trace rule", born_oracle},
      {"Gram projector properties", gram_theorem},
      {"2-RIC structure", structure},
      {"p-scan", p_scan},
      {"sampling", sampling},
      {"small-dimension values", footnotes},
      {"quantumness floor", floor_property},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Check c;
    try {
      c = criteria[k].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    if (!c.ok) ++failed;
    std::printf("[%s] %zu %s: %s\n", c.ok ? "PASS" : "FAIL", k + 1, criteria[k].first, c.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
