#include "riclab/catalog.hpp"

#include "riclab/error.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <utility>

namespace riclab {

namespace {

CatalogEntry from_frame(std::string label, Matrix frame_rows, std::string provenance) {
  CatalogEntry e;
  e.label = std::move(label);
  e.dim = static_cast<int>(frame_rows.cols());
  e.frame = FrameMatrix(std::move(frame_rows));
  e.gram = little_gram(*e.frame);
  e.provenance = std::move(provenance);
  return e;
}

// Orthonormal basis (columns) of the sum-zero hyperplane of R^{d+1}, from
// Gram-Schmidt on e_1 - e_2, e_2 - e_3, ..., e_d - e_{d+1}.
Matrix sum_zero_basis(int d) {
  Matrix basis(d + 1, d);
  for (int k = 0; k < d; ++k) {
    Vector v = Vector::Zero(d + 1);
    v(k) = 1.0;
    v(k + 1) = -1.0;
    for (int j = 0; j < k; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    basis.col(k) = v.normalized();
  }
  return basis;
}

}  // namespace

CatalogEntry petersen_ric() {
  std::vector<std::pair<int, int>> vertices;
  for (int a = 1; a <= 5; ++a) {
    for (int b = a + 1; b <= 5; ++b) vertices.emplace_back(a, b);
  }
  Matrix g(10, 10);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const auto [a, b] = vertices[static_cast<std::size_t>(i)];
      const auto [c, d] = vertices[static_cast<std::size_t>(j)];
      if (i == j) {
        g(i, j) = 2.0 / 5.0;
      } else if (a != c && a != d && b != c && b != d) {
        g(i, j) = -4.0 / 15.0;  // disjoint pairs are adjacent in K(5,2)
      } else {
        g(i, j) = 1.0 / 15.0;
      }
    }
  }
  CatalogEntry e;
  e.label = "petersen";
  e.dim = 4;
  e.gram = std::move(g);
  e.provenance = "Petersen graph Gram rule, Kneser K(5,2) labeling";
  e.quantumness_2 = ExactValue{"6*sqrt(161/5)", 6.0 * std::sqrt(161.0 / 5.0)};
  return e;
}

CatalogEntry a_d_ric(int d) {
  if (d < 2) throw Error(ErrorKind::Domain, "a_d_ric: need d >= 2");
  const int n = d * (d + 1) / 2;
  const Matrix basis = sum_zero_basis(d);
  Matrix rows(n, d);
  int r = 0;
  const double weight = std::sqrt(static_cast<double>(d) / n);
  for (int i = 0; i <= d; ++i) {
    for (int j = i + 1; j <= d; ++j) {
      Vector root = Vector::Zero(d + 1);
      root(i) = 1.0;
      root(j) = -1.0;
      rows.row(r++) = weight * (basis.transpose() * root).transpose() / std::sqrt(2.0);
    }
  }
  CatalogEntry e = from_frame("a" + std::to_string(d), std::move(rows),
                              "root vectors of A_" + std::to_string(d));
  if (d == 2) e.quantumness_2 = ExactValue{"sqrt(2)", std::sqrt(2.0)};
  if (d == 3) e.quantumness_2 = ExactValue{"sqrt(21)", std::sqrt(21.0)};
  if (d == 4) e.quantumness_2 = ExactValue{"2*sqrt(21)", 2.0 * std::sqrt(21.0)};
  return e;
}

CatalogEntry real_sic(int d) {
  if (d == 2) {
    Matrix rows(3, 2);
    const double w = std::sqrt(2.0 / 3.0);
    for (int k = 0; k < 3; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / 3.0;
      rows(k, 0) = w * std::cos(theta);
      rows(k, 1) = w * std::sin(theta);
    }
    CatalogEntry e = from_frame("sic2", std::move(rows), "trine: three lines at 120 degrees");
    e.quantumness_2 = ExactValue{"sqrt(2)", std::sqrt(2.0)};
    return e;
  }
  if (d == 3) {
    const double phi = std::numbers::phi;
    const double norm = std::sqrt(1.0 + phi * phi);
    const double w = std::sqrt(0.5);  // d/N = 3/6
    Matrix rows(6, 3);
    rows << 0, 1, phi,
            0, -1, phi,
            1, phi, 0,
            -1, phi, 0,
            phi, 0, 1,
            phi, 0, -1;
    rows *= w / norm;
    CatalogEntry e = from_frame("sic3", std::move(rows), "six diagonals of the icosahedron");
    e.quantumness_2 = ExactValue{"3*sqrt(5)/2", 1.5 * std::sqrt(5.0)};
    return e;
  }
  throw Error(ErrorKind::Unsupported, "real_sic: real SICs are only constructed for d = 2, 3");
}

CatalogEntry unbiased_2ric() {
  const double p = 2.0 / 5.0;
  const double b = 2.0 / 15.0;
  const double s = std::sqrt(7.0) / 15.0;
  const double a = 1.0 / 15.0;
  const double c = 1.0 / 6.0;
  Matrix g(10, 10);
  // clang-format off
  g <<  p,  b, -b,  b,   s, -s, -s, -s,  s,  s,
        b,  p,  b, -b,   s, -s,  s,  s,  s,  s,
       -b,  b,  p,  b,   s, -s,  s,  s, -s, -s,
        b, -b,  b,  p,   s, -s, -s, -s, -s, -s,
        s,  s,  s,  s,   p, -a, -c,  c,  c, -c,
       -s, -s, -s, -s,  -a,  p, -c,  c,  c, -c,
       -s,  s,  s, -s,  -c, -c,  p,  a, -c,  c,
       -s,  s,  s, -s,   c,  c,  a,  p,  c, -c,
        s,  s, -s, -s,   c,  c, -c,  c,  p,  a,
        s,  s, -s, -s,  -c, -c,  c, -c,  a,  p;
  // clang-format on
  CatalogEntry e;
  e.label = "unbiased-2ric";
  e.dim = 4;
  e.gram = std::move(g);
  e.provenance = "exact Gram of the unbiased parallel-update 2-quantumness minimizer";
  e.quantumness_2 = ExactValue{"3*sqrt(2991907)/784", 3.0 * std::sqrt(2991907.0) / 784.0};
  return e;
}

std::vector<std::string> catalog_labels() {
  return {"petersen", "a2", "a3", "a4", "a5", "sic2", "sic3", "unbiased-2ric"};
}

CatalogEntry catalog_entry(const std::string& label) {
  if (label == "petersen") return petersen_ric();
  if (label == "sic2") return real_sic(2);
  if (label == "sic3") return real_sic(3);
  if (label == "unbiased-2ric") return unbiased_2ric();
  if (label.size() >= 2 && label[0] == 'a') {
    try {
      std::size_t used = 0;
      const int d = std::stoi(label.substr(1), &used);
      if (used + 1 == label.size() && d >= 2 && d <= 32) return a_d_ric(d);
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorKind::InvalidInput, "unknown catalog label '" + label + "'");
}

ReferenceDevice entry_device(const CatalogEntry& entry) {
  const FrameMatrix frame = entry.frame ? *entry.frame : frame_from_gram(entry.gram, entry.dim);
  ReferenceDevice dev = frame_to_device(frame);
  dev.set_label(entry.label);
  return dev;
}

std::optional<int> max_equiangular_lines(int d) {
  static const std::map<int, int> table = {
      {2, 3},   {3, 6},   {4, 6},   {5, 10},  {6, 16},   {7, 28},   {8, 28},
      {9, 28},  {14, 28}, {15, 36}, {16, 40}, {23, 276}, {24, 276},
  };
  const auto it = table.find(d);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

int count_unique_entries(const Matrix& m, int decimals) {
  if (decimals < 1) throw Error(ErrorKind::Domain, "count_unique_entries: decimals must be >= 1");
  const long double scale = std::pow(10.0L, decimals);
  std::set<long double> seen;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      seen.insert(std::round(std::abs(static_cast<long double>(m(i, j))) * scale));
    }
  }
  return static_cast<int>(seen.size());
}

}  // namespace riclab
