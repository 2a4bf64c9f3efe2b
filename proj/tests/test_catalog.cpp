#include "oracles.hpp"

#include "riclab/born.hpp"
#include "riclab/catalog.hpp"
#include "riclab/error.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <set>

using namespace riclab;

namespace {

std::set<long long> off_diagonal_magnitudes(const Matrix& g, double scale = 1e10) {
  std::set<long long> out;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = i + 1; j < g.cols(); ++j) out.insert(std::llround(std::abs(g(i, j)) * scale));
  return out;
}

}  // namespace

TEST(Catalog, EveryEntryIsRank1PovmAndIc) {
  for (const std::string& label : catalog_labels()) {
    const CatalogEntry e = catalog_entry(label);
    EXPECT_TRUE(is_rank1_povm(e.gram, e.dim, 1e-12).ok) << label;
    EXPECT_TRUE(is_informationally_complete(entry_device(e))) << label;
    EXPECT_FALSE(e.provenance.empty()) << label;
  }
}

TEST(Catalog, UnknownLabel) {
  EXPECT_THROW(catalog_entry("nope"), Error);
  EXPECT_THROW(catalog_entry("a1"), Error);
  EXPECT_NO_THROW(catalog_entry("a7"));
}

TEST(Petersen, Structure) {
  const CatalogEntry e = petersen_ric();
  EXPECT_EQ(e.count(), 10);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(e.gram(i, i), 0.4, 1e-15);
  // Kneser K(5,2): three neighbours per vertex.
  for (int i = 0; i < 10; ++i) {
    int edges = 0;
    for (int j = 0; j < 10; ++j) edges += std::abs(e.gram(i, j) + 4.0 / 15.0) < 1e-12;
    EXPECT_EQ(edges, 3);
  }
  EXPECT_EQ(off_diagonal_magnitudes(e.gram).size(), 2u);
  EXPECT_NEAR(quantumness(entry_device(e), NormOrder(2.0)), 34.0470263, 1e-6);
  ASSERT_TRUE(e.quantumness_2.has_value());
  EXPECT_NEAR(e.quantumness_2->value, 6.0 * std::sqrt(161.0 / 5.0), 1e-14);
}

TEST(Petersen, PermutationInvariance) {
  const CatalogEntry e = petersen_ric();
  std::vector<int> perm(10);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(3);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> p(10);
  for (int i = 0; i < 10; ++i) p.indices()(i) = perm[i];
  const Matrix g = p * e.gram * p.transpose();
  const ReferenceDevice dev = frame_to_device(frame_from_gram(g, 4));
  for (double q : {1.0, 2.0, 3.0}) {
    EXPECT_NEAR(quantumness(dev, NormOrder(q)), quantumness(entry_device(e), NormOrder(q)), 1e-10);
  }
}

TEST(AdRic, FootnoteValues) {
  EXPECT_NEAR(quantumness(entry_device(a_d_ric(2)), NormOrder(2.0)), std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(quantumness(entry_device(a_d_ric(3)), NormOrder(2.0)), std::sqrt(21.0), 1e-10);
  EXPECT_NEAR(quantumness(entry_device(a_d_ric(4)), NormOrder(2.0)), 2.0 * std::sqrt(21.0), 1e-10);
  EXPECT_THROW(a_d_ric(1), Error);
}

TEST(AdRic, TwoOffDiagonalValues) {
  for (int d = 2; d <= 6; ++d) {
    const CatalogEntry e = a_d_ric(d);
    EXPECT_EQ(e.count(), d * (d + 1) / 2);
    if (d >= 3) {
      EXPECT_EQ(count_unique_entries(e.gram, 10), 3) << d;
    }
    for (int i = 0; i < e.count(); ++i) EXPECT_NEAR(e.gram(i, i), 2.0 / (d + 1.0), 1e-14);
  }
  EXPECT_EQ(off_diagonal_magnitudes(a_d_ric(4).gram).size(), 2u);
}

TEST(AdRic, D2IsTrine) {
  const Matrix g = a_d_ric(2).gram;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(std::abs(g(i, j)), i == j ? 2.0 / 3.0 : 1.0 / 3.0, 1e-14);
}

TEST(RealSic, Geometry) {
  const Matrix g2 = real_sic(2).gram;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) EXPECT_NEAR(std::abs(g2(i, j)), 1.0 / 3.0, 1e-14);
  const CatalogEntry e3 = real_sic(3);
  const Matrix& f = e3.frame->rows();
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      if (i == j) continue;
      const double c = f.row(i).dot(f.row(j)) / (f.row(i).norm() * f.row(j).norm());
      EXPECT_NEAR(c * c, 0.2, 1e-14);
    }
  }
  EXPECT_NEAR(quantumness(entry_device(e3), NormOrder(2.0)), 1.5 * std::sqrt(5.0), 1e-10);
  try {
    real_sic(4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unsupported);
  }
}

TEST(Unbiased2Ric, ExactEntries) {
  const Matrix g = unbiased_2ric().gram;
  const std::set<long long> mags = off_diagonal_magnitudes(g);
  const std::set<long long> expect{std::llround(2.0 / 15.0 * 1e10), std::llround(std::sqrt(7.0) / 15.0 * 1e10),
                                   std::llround(1.0 / 15.0 * 1e10), std::llround(1.0 / 6.0 * 1e10)};
  EXPECT_EQ(mags, expect);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(g(i, i), 0.4, 1e-15);
  EXPECT_LT((g - g.transpose()).norm(), 1e-15);
}

TEST(Unbiased2Ric, BlockStructure) {
  const Matrix g = unbiased_2ric().gram;
  const Matrix upper = g.topLeftCorner(4, 4) * 15.0 / 8.0;
  EXPECT_LT((upper * upper - upper).norm(), 1e-10);
  EXPECT_EQ(numeric_rank(upper), 3);
  const SymmetricEigen eig = symmetric_eigen(g.bottomRightCorner(6, 6));
  const double expect[6] = {1.0, 7.0 / 15.0, 7.0 / 15.0, 7.0 / 15.0, 0.0, 0.0};
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(eig.values(i), expect[i], 1e-10);
  EXPECT_EQ(numeric_rank(g.bottomRightCorner(6, 6)), 4);
  EXPECT_NEAR(quantumness(entry_device(unbiased_2ric()), NormOrder(2.0)), 3.0 * std::sqrt(2991907.0) / 784.0, 1e-12);
  EXPECT_EQ(numeric_rank(big_gram(entry_device(unbiased_2ric()))), 10);
}

TEST(EquiangularLines, Table) {
  EXPECT_EQ(max_equiangular_lines(4), 6);
  EXPECT_EQ(max_equiangular_lines(7), 28);
  EXPECT_EQ(max_equiangular_lines(23), 276);
  EXPECT_EQ(max_equiangular_lines(2), 3);
  EXPECT_EQ(max_equiangular_lines(16), 40);
  EXPECT_FALSE(max_equiangular_lines(10).has_value());
  // A real SIC needs d(d+1)/2 equiangular lines, which fails from d = 4 on the table.
  for (int d : {4, 5, 6, 8, 9, 14, 15, 16, 24}) EXPECT_LT(*max_equiangular_lines(d), d * (d + 1) / 2) << d;
}

TEST(CountUnique, Examples) {
  EXPECT_EQ(count_unique_entries(Matrix::Identity(7, 7), 3), 2);
  EXPECT_EQ(count_unique_entries(unbiased_2ric().gram, 6), 5);
  EXPECT_EQ(count_unique_entries(unbiased_2ric().gram, 11), 5);
  Matrix m(2, 2);
  m << 0.1234, -0.1236, -0.1236, 0.5;
  EXPECT_EQ(count_unique_entries(m, 2), 2);
  EXPECT_EQ(count_unique_entries(m, 3), 3);
  EXPECT_THROW(count_unique_entries(m, 0), Error);
}
