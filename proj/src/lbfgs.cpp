#include "riclab/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace riclab {

namespace {

struct Probe {
  double alpha;
  double value;
  double slope;  // directional derivative
};

// Minimizer of the cubic interpolating two probes, safeguarded into [lo, hi].
double cubic_step(const Probe& a, const Probe& b, double lo, double hi) {
  const double d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.alpha - b.alpha);
  const double disc = d1 * d1 - a.slope * b.slope;
  double t = 0.5 * (a.alpha + b.alpha);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
    const double denom = b.slope - a.slope + 2.0 * d2;
    if (denom != 0.0) t = b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / denom;
  }
  const double width = hi - lo;
  if (!std::isfinite(t) || t < lo + 0.1 * width || t > hi - 0.1 * width) t = 0.5 * (lo + hi);
  return t;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& objective, Vector x0, const LbfgsOptions& options) {
  const Eigen::Index n = x0.size();
  LbfgsResult out;
  out.x = std::move(x0);
  Vector grad(n);
  out.value = objective(out.x, grad);
  ++out.evaluations;
  if (!std::isfinite(out.value)) return out;

  std::deque<Vector> s_hist, y_hist;
  std::deque<double> rho_hist;
  Vector dir(n), x_new(n), g_new(n);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    out.iterations = iter;
    if (grad.lpNorm<Eigen::Infinity>() <= options.gradient_tol * std::max(1.0, std::abs(out.value))) {
      out.converged = true;
      return out;
    }

    // Two-loop recursion.
    dir = -grad;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(dir);
      dir -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) dir *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(dir);
      dir += (alpha[k] - beta) * s_hist[k];
    }
    double slope0 = grad.dot(dir);
    if (!(slope0 < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      dir = -grad;
      slope0 = -grad.squaredNorm();
    }

    // Strong Wolfe line search (bracketing + zoom).
    const Probe start{0.0, out.value, slope0};
    double step = s_hist.empty() ? std::min(1.0, 1.0 / std::max(1e-12, grad.lpNorm<Eigen::Infinity>())) : 1.0;
    Probe prev = start;
    Probe accepted{-1.0, 0.0, 0.0};
    auto evaluate = [&](double a) {
      x_new = out.x + a * dir;
      const double v = objective(x_new, g_new);
      ++out.evaluations;
      return Probe{a, v, std::isfinite(v) ? g_new.dot(dir) : 0.0};
    };
    auto zoom = [&](Probe lo, Probe hi) {
      for (int k = 0; k < 40; ++k) {
        const double a = cubic_step(lo, hi, std::min(lo.alpha, hi.alpha), std::max(lo.alpha, hi.alpha));
        const Probe p = evaluate(a);
        if (!std::isfinite(p.value) || p.value > start.value + options.c1 * a * slope0 ||
            p.value >= lo.value) {
          hi = p;
          if (!std::isfinite(p.value)) hi.value = std::numeric_limits<double>::max();
        } else {
          if (std::abs(p.slope) <= -options.c2 * slope0) return p;
          if (p.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
          lo = p;
        }
        if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, lo.alpha)) break;
      }
      // Fall back to the best sufficient-decrease point seen.
      return lo.alpha > 0.0 ? evaluate(lo.alpha) : Probe{-1.0, 0.0, 0.0};
    };
    for (int k = 0; k < 60; ++k) {
      Probe p = evaluate(step);
      if (!std::isfinite(p.value)) {
        step *= 0.25;
        if (k > 0 && prev.alpha > 0.0) {
          accepted = zoom(prev, Probe{step * 4.0, std::numeric_limits<double>::max(), 0.0});
          break;
        }
        continue;
      }
      if (p.value > start.value + options.c1 * step * slope0 || (k > 0 && p.value >= prev.value)) {
        accepted = zoom(prev, p);
        break;
      }
      if (std::abs(p.slope) <= -options.c2 * slope0) {
        accepted = p;
        break;
      }
      if (p.slope >= 0.0) {
        accepted = zoom(p, prev);
        break;
      }
      prev = p;
      step *= 2.0;
    }
    if (accepted.alpha <= 0.0) return out;  // line search failed; keep the current point

    const Vector s = x_new - out.x;
    const Vector y = g_new - grad;
    const double previous = out.value;
    out.x = x_new;
    out.value = accepted.value;
    grad = g_new;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    if (previous - out.value <= options.value_tol * std::max(1.0, std::abs(out.value))) {
      out.converged = true;
      out.iterations = iter + 1;
      return out;
    }
  }
  out.iterations = options.max_iterations;
  return out;
}

}  // namespace riclab
