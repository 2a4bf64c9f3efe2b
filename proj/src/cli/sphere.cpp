#include "riclab/cli.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace riclab::cli {

Matrix slice_basis(const Vector& normal) {
  if (normal.size() != 4) throw Error(ErrorKind::InvalidInput, "slice normal must have 4 components");
  if (!normal.allFinite() || normal.norm() < 1e-12) throw Error(ErrorKind::InvalidInput, "slice normal must be nonzero");
  Eigen::HouseholderQR<Matrix> qr{Matrix(normal)};
  const Matrix q = qr.householderQ() * Matrix::Identity(4, 4);
  return q.rightCols(3);
}

std::vector<GreatCircle> great_circles(const Matrix& frame_rows, double radius, const Vector& normal,
                                       int samples) {
  if (frame_rows.cols() != 4) throw Error(ErrorKind::DimensionMismatch, "sphere projection needs a d=4 frame");
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidInput, "radius must be positive");
  if (samples < 1) throw Error(ErrorKind::InvalidInput, "samples must be >= 1");
  const Matrix basis = slice_basis(normal);
  std::vector<GreatCircle> out;
  for (Eigen::Index i = 0; i < frame_rows.rows(); ++i) {
    GreatCircle c;
    c.index = static_cast<int>(i);
    const Vector phi = frame_rows.row(i).transpose();
    const Vector w = basis.transpose() * phi;
    if (w.norm() <= 1e-10 * phi.norm()) {
      c.degenerate = true;
      out.push_back(std::move(c));
      continue;
    }
    c.axis = w.normalized();
    Eigen::Index k = 0;
    c.axis.cwiseAbs().minCoeff(&k);
    const Eigen::Vector3d u = c.axis;
    const Eigen::Vector3d a = u.cross(Eigen::Vector3d::Unit(k)).normalized();
    const Eigen::Vector3d b = u.cross(a);
    c.sphere_points.resize(samples, 3);
    for (int t = 0; t < samples; ++t) {
      const double theta = 2.0 * std::numbers::pi * t / samples;
      c.sphere_points.row(t) = radius * (std::cos(theta) * a + std::sin(theta) * b).transpose();
    }
    c.points = c.sphere_points * basis.transpose();
    out.push_back(std::move(c));
  }
  return out;
}

Matrix circle_cosines(const std::vector<GreatCircle>& circles) {
  const auto n = static_cast<Eigen::Index>(circles.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const GreatCircle& a = circles[static_cast<std::size_t>(i)];
      const GreatCircle& b = circles[static_cast<std::size_t>(j)];
      m(i, j) = a.degenerate || b.degenerate ? std::numeric_limits<double>::quiet_NaN()
                                             : std::abs(a.axis.dot(b.axis));
    }
  }
  return m;
}

PsiGrid psi_grid(const Matrix& frame_rows, double radius, const Vector& normal, int n_lat, int n_lon) {
  if (frame_rows.cols() != 4) throw Error(ErrorKind::DimensionMismatch, "sphere projection needs a d=4 frame");
  if (n_lat < 2 || n_lon < 1) throw Error(ErrorKind::InvalidInput, "grid needs >= 2 latitudes and >= 1 longitude");
  const Matrix basis = slice_basis(normal);
  PsiGrid g;
  g.values.resize(n_lat, n_lon);
  for (int i = 0; i < n_lat; ++i) g.latitude.push_back(-90.0 + 180.0 * i / (n_lat - 1));
  for (int j = 0; j < n_lon; ++j) g.longitude.push_back(-180.0 + 360.0 * j / n_lon);
  const double deg = std::numbers::pi / 180.0;
  for (int i = 0; i < n_lat; ++i) {
    for (int j = 0; j < n_lon; ++j) {
      const double lat = g.latitude[static_cast<std::size_t>(i)] * deg;
      const double lon = g.longitude[static_cast<std::size_t>(j)] * deg;
      const Eigen::Vector3d y(std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat));
      const Vector z = radius * basis * y;
      g.values(i, j) = (frame_rows * z).prod();
    }
  }
  return g;
}

}  // namespace riclab::cli
