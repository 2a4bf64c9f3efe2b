#include "riclab/parametric.hpp"

#include "riclab/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace riclab::parametric {

namespace {

// Forward-mode dual number, enough for the rational closed forms.
struct Dual {
  double v;
  double d;
};
Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
Dual operator-(Dual a) { return {-a.v, -a.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }
Dual operator+(Dual a, double b) { return {a.v + b, a.d}; }
Dual operator-(Dual a, double b) { return {a.v - b, a.d}; }
Dual operator-(double a, Dual b) { return {a - b.v, -b.d}; }
Dual operator*(double a, Dual b) { return {a * b.v, a * b.d}; }
Dual operator/(double a, Dual b) { return Dual{a, 0.0} / b; }

template <typename T>
std::array<T, 7> entries_of(T f) {
  const T pole = 3.0 - 4.0 * f;
  const T pole2 = 3.0 * (pole * pole);
  const T one_minus = f - 1.0;
  return {
      f + 51.0 / (32.0 * f) - 1.5,                                  // q
      f + 15.0 / (32.0 * f) - 1.5,                                  // r
      f - 0.75,                                                     // s
      -(one_minus * (4.0 * f - 3.0)) / (6.0 * f),                   // t
      -(one_minus * (32.0 * (f * f) - 84.0 * f + 57.0)) / pole2,    // u
      -(one_minus * (32.0 * (f * f) - 12.0 * f + 3.0)) / pole2,     // v
      -(4.0 * one_minus * (8.0 * (f * f) - 12.0 * f + 3.0)) / pole2 // w
  };
}

// Which of q, r, s, t, u, v, w sits at (i, j), 0-based.
int phi_slot(int i, int j) {
  if (i < 4 && j < 4) return i == j ? 0 : 1;
  if (i < 4) return 2;
  if (j < 4) return 3;
  if (i == j) return 4;
  if (lambda_partner(i + 1) == j + 1) return 5;
  return 6;
}

Matrix assemble_phi(const std::array<double, 7>& x) {
  Matrix phi(10, 10);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) phi(i, j) = x[static_cast<std::size_t>(phi_slot(i, j))];
  }
  return phi;
}

void require_open_interval(double f, ErrorKind kind, const char* what) {
  if (!(f > 0.0 && f < kBiasPole)) {
    std::ostringstream os;
    os << what << ": bias parameter f = " << f << " must lie in (0, 3/4)";
    throw Error(kind, os.str());
  }
}

using Unknowns = Eigen::Vector4d;  // b, dg, a, c

GramEntries with_unknowns(double f, const Unknowns& x) {
  return {f, x(0), x(1), 2.0 * (1.0 - f) / 3.0, x(2), x(3)};
}

// Gauss-Newton on the (consistent, overdetermined) system g^2 - g = 0.
int newton(double f, Unknowns& x, double tol = 1e-15, int max_iter = 60) {
  std::array<Matrix, 4> basis;
  for (int k = 0; k < 4; ++k) {
    Unknowns unit = Unknowns::Zero();
    unit(k) = 1.0;
    GramEntries only{0.0, unit(0), unit(1), 0.0, unit(2), unit(3)};
    basis[static_cast<std::size_t>(k)] = gram_from_entries(only);
  }
  for (int it = 0; it < max_iter; ++it) {
    const Matrix g = gram_from_entries(with_unknowns(f, x));
    const Matrix res = g * g - g;
    const Eigen::Map<const Vector> r(res.data(), res.size());
    if (r.lpNorm<Eigen::Infinity>() < tol) return it;
    Matrix jac(res.size(), 4);
    for (int k = 0; k < 4; ++k) {
      const Matrix& s = basis[static_cast<std::size_t>(k)];
      const Matrix col = s * g + g * s - s;
      jac.col(k) = Eigen::Map<const Vector>(col.data(), col.size());
    }
    const Unknowns step = jac.colPivHouseholderQr().solve(-r);
    x += step;
    if (step.lpNorm<Eigen::Infinity>() < 1e-17) return it + 1;
  }
  return max_iter;
}

// Brent's derivative-free minimizer (golden section with parabolic steps).
template <typename Fn>
double brent_minimize(Fn&& fn, double lo, double hi, double tol) {
  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  double a = lo, b = hi;
  double x = a + golden * (b - a), w = x, v = x;
  double fx = fn(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double tol1 = std::sqrt(std::numeric_limits<double>::epsilon()) * std::abs(x) + tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool golden_step = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (m > x) ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x < m) ? b - x : a - x;
      d = golden * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = fn(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return x;
}

}  // namespace

Matrix gram_from_entries(const GramEntries& x) {
  const double f = x.f, b = x.b, d = x.dg, e = x.e, a = x.a, c = x.c;
  Matrix g(10, 10);
  // clang-format off
  g <<  f,  b, -b,  b,   d, -d, -d, -d,  d,  d,
        b,  f,  b, -b,   d, -d,  d,  d,  d,  d,
       -b,  b,  f,  b,   d, -d,  d,  d, -d, -d,
        b, -b,  b,  f,   d, -d, -d, -d, -d, -d,
        d,  d,  d,  d,   e, -a, -c,  c,  c, -c,
       -d, -d, -d, -d,  -a,  e, -c,  c,  c, -c,
       -d,  d,  d, -d,  -c, -c,  e,  a, -c,  c,
       -d,  d,  d, -d,   c,  c,  a,  e,  c, -c,
        d,  d, -d, -d,   c,  c, -c,  c,  e,  a,
        d,  d, -d, -d,  -c, -c,  c, -c,  a,  e;
  // clang-format on
  return g;
}

ParametricPoint solve_family(double f) {
  require_open_interval(f, ErrorKind::OutOfRange, "solve_family");
  Unknowns x(2.0 / 15.0, std::sqrt(7.0) / 15.0, 1.0 / 15.0, 1.0 / 6.0);
  const double step = 0.01;
  const int steps = static_cast<int>(std::ceil(std::abs(f - kUnbiasedBias) / step));
  int iterations = 0;
  for (int k = 1; k <= steps; ++k) {
    const double fk = kUnbiasedBias + (f - kUnbiasedBias) * k / steps;
    iterations += newton(fk, x);
  }
  ParametricPoint out;
  out.f = f;
  out.entries = with_unknowns(f, x);
  out.gram = gram_from_entries(out.entries);
  out.projector_residual = spectral_norm(out.gram * out.gram - out.gram);
  out.newton_iterations = iterations;
  return out;
}

ReferenceDevice family_device(double f) {
  ReferenceDevice dev = frame_to_device(frame_from_gram(solve_family(f).gram, 4));
  std::ostringstream os;
  os << "family f=" << f;
  dev.set_label(os.str());
  return dev;
}

PhiEntries phi_entries(double f) {
  require_open_interval(f, ErrorKind::Singularity, "phi_closed_form");
  const auto x = entries_of(f);
  return {x[0], x[1], x[2], x[3], x[4], x[5], x[6]};
}

Matrix phi_closed_form(double f) {
  require_open_interval(f, ErrorKind::Singularity, "phi_closed_form");
  return assemble_phi(entries_of(f));
}

int lambda_partner(int i) { return (i % 2 == 1) ? i + 1 : i - 1; }

Vector born_explicit(double f, const ProbabilityVector& p_r, const ConditionalMatrix& p_e_given_r) {
  require_open_interval(f, ErrorKind::Singularity, "born_explicit");
  if (p_r.size() != 10 || p_e_given_r.references() != 10) {
    throw Error(ErrorKind::DimensionMismatch, "born_explicit: needs 10 reference outcomes");
  }
  const Vector& p = p_r.entries();
  const Matrix& c = p_e_given_r.matrix();
  const double sum4 = p.head(4).sum();
  const double sum6 = p.tail(6).sum();
  const double pole = 3.0 - 4.0 * f;
  const double prefactor = (1.0 - f) / (6.0 * f * pole * pole);

  Vector q = Vector::Zero(c.rows());
  for (Eigen::Index j = 0; j < c.rows(); ++j) {
    double first = 0.0;
    for (int i = 1; i <= 4; ++i) {
      first += c(j, i - 1) * (9.0 / (8.0 * f) * p(i - 1) +
                              (f + 15.0 / (32.0 * f) - 1.5) * sum4 + (f - 0.75) * sum6);
    }
    double second = 0.0;
    for (int i = 5; i <= 10; ++i) {
      const int partner = lambda_partner(i);
      second += c(j, i - 1) * ((90.0 * f - 72.0 * f * f) * p(i - 1) +
                               (72.0 * f * f - 18.0 * f) * p(partner - 1) +
                               std::pow(4.0 * f - 3.0, 3) * sum4 +
                               (64.0 * f * f * f - 96.0 * f * f + 24.0 * f) * sum6);
    }
    q(j) = first + prefactor * second;
  }
  return q;
}

double family_quantumness(double f, NormOrder p) {
  return schatten_norm(Matrix(Matrix::Identity(10, 10) - phi_closed_form(f)), p);
}

double family_quantumness_derivative(double f, NormOrder p) {
  require_open_interval(f, ErrorKind::Singularity, "family_quantumness_derivative");
  const auto dual = entries_of(Dual{f, 1.0});
  Matrix x(10, 10), dx(10, 10);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const Dual& e = dual[static_cast<std::size_t>(phi_slot(i, j))];
      x(i, j) = (i == j ? 1.0 : 0.0) - e.v;
      dx(i, j) = -e.d;
    }
  }
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const Matrix proj = svd.matrixU().transpose() * dx * svd.matrixV();
  if (p.is_infinite()) return proj(0, 0);
  const double norm = schatten_norm(x, p);
  double acc = 0.0;
  for (int i = 0; i < 10; ++i) {
    if (s(i) <= 0.0) continue;
    acc += std::pow(s(i) / norm, p.value() - 1.0) * proj(i, i);
  }
  return acc;
}

std::vector<ScanPoint> scan(NormOrder p, double f0, double f1, int steps) {
  if (steps < 1) throw Error(ErrorKind::InvalidInput, "scan: steps must be positive");
  std::vector<ScanPoint> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    const double f = steps == 1 ? f0 : f0 + (f1 - f0) * k / (steps - 1);
    out.push_back({f, family_quantumness(f, p)});
  }
  return out;
}

FamilyMinimum minimize_over_f(NormOrder p) {
  const auto grid = scan(p, 0.005, 0.745, 149);
  FamilyMinimum out;
  std::size_t best = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k].value < grid[best].value) best = k;
    const bool left = k == 0 || grid[k].value < grid[k - 1].value;
    const bool right = k + 1 == grid.size() || grid[k].value < grid[k + 1].value;
    if (left && right) ++out.grid_local_minima;
  }
  double lo = grid[best > 0 ? best - 1 : 0].f;
  double hi = grid[std::min(best + 1, grid.size() - 1)].f;
  auto value = [p](double f) { return family_quantumness(f, p); };
  double f = brent_minimize(value, lo, hi, 1e-10);

  // Function values stop resolving f near 1e-8; finish on the derivative sign.
  double a = std::max(lo, f - 1e-6);
  double b = std::min(hi, f + 1e-6);
  if (family_quantumness_derivative(a, p) < 0.0 && family_quantumness_derivative(b, p) > 0.0) {
    while (b - a > 1e-11) {
      const double m = 0.5 * (a + b);
      if (family_quantumness_derivative(m, p) < 0.0) a = m; else b = m;
    }
    f = 0.5 * (a + b);
  }
  out.f = f;
  out.value = value(f);
  return out;
}

}  // namespace riclab::parametric
