#pragma once

// Independent reference computations used to check the library.

#include "riclab/matcore.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using riclab::Matrix;
using riclab::Vector;

inline Matrix gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = n(rng);
  return m;
}

// Singular values from the eigenvalues of M^T M.
inline std::vector<double> singular_values(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.transpose() * m);
  std::vector<double> s;
  for (int i = 0; i < es.eigenvalues().size(); ++i) s.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
  std::sort(s.rbegin(), s.rend());
  return s;
}

inline double schatten(const Matrix& m, double p) {
  const auto s = singular_values(m);
  if (std::isinf(p)) return s.front();
  double acc = 0.0;
  for (double v : s) acc += std::pow(v, p);
  return std::pow(acc, 1.0 / p);
}

// Random real density matrix.
inline Matrix density(int d, std::mt19937_64& rng) {
  const Matrix a = gaussian(d, d, rng);
  const Matrix r = a * a.transpose();
  return r / r.trace();
}

// Random real POVM with m elements: A_i^T A_i, then S^{-1/2} (.) S^{-1/2}.
inline std::vector<Matrix> povm(int d, int m, std::mt19937_64& rng) {
  std::vector<Matrix> raw;
  Matrix sum = Matrix::Zero(d, d);
  for (int i = 0; i < m; ++i) {
    const Matrix a = gaussian(d, d, rng);
    raw.push_back(a.transpose() * a);
    sum += raw.back();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(sum);
  const Matrix w = es.operatorInverseSqrt();
  for (Matrix& e : raw) e = w * e * w;
  return raw;
}

inline double trace_inner(const Matrix& a, const Matrix& b) { return (a * b).trace(); }

// Central finite-difference gradient.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h = 1e-6) {
  Vector g(x.size());
  Vector y = x;
  for (int i = 0; i < x.size(); ++i) {
    y(i) = x(i) + h;
    const double fp = f(y);
    y(i) = x(i) - h;
    const double fm = f(y);
    y(i) = x(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Random column-stochastic matrix.
inline Matrix stochastic(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = u(rng);
    m.col(j) /= m.col(j).sum();
  }
  return m;
}

inline Vector probability(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v / v.sum();
}

}  // namespace oracle
