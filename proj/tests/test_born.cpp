#include "oracles.hpp"

#include "riclab/born.hpp"
#include "riclab/catalog.hpp"
#include "riclab/error.hpp"
#include "riclab/optimize.hpp"

#include <gtest/gtest.h>

using namespace riclab;

namespace {

// Q(E_j) = tr E_j rho computed through the device's statistics.
void check_born_consistency(const ReferenceDevice& dev, std::mt19937_64& rng, int pairs, double tol) {
  const Matrix phi = born_matrix(dev).phi;
  const int d = dev.dim();
  for (int t = 0; t < pairs; ++t) {
    const Matrix rho = oracle::density(d, rng);
    const int m = 2 + t % 6;
    const std::vector<Matrix> meas = oracle::povm(d, m, rng);
    Vector pr(dev.count());
    for (int i = 0; i < dev.count(); ++i) pr(i) = oracle::trace_inner(rho, dev.elements()[i]);
    Matrix per(m, dev.count());
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < dev.count(); ++i) per(j, i) = oracle::trace_inner(meas[j], dev.post_states()[i]);
    }
    const BornEvaluation ev = born_evaluate(phi, ProbabilityVector(pr), ConditionalMatrix(per));
    for (int j = 0; j < m; ++j) EXPECT_NEAR(ev.q(j), oracle::trace_inner(meas[j], rho), tol) << dev.label();
    EXPECT_TRUE(ev.out_of_range.empty());
  }
}

}  // namespace

TEST(BornMatrix, InverseIsTraceMatrix) {
  for (const std::string& label : catalog_labels()) {
    const ReferenceDevice dev = entry_device(catalog_entry(label));
    const BornMatrix bm = born_matrix(dev);
    Matrix a(dev.count(), dev.count());
    for (int i = 0; i < dev.count(); ++i)
      for (int j = 0; j < dev.count(); ++j) a(i, j) = oracle::trace_inner(dev.elements()[i], dev.post_states()[j]);
    EXPECT_LT((bm.phi * a - Matrix::Identity(dev.count(), dev.count())).norm(), 1e-8) << label;
    EXPECT_LT((born_matrix_inverse(dev) - a).norm(), 1e-14) << label;
    EXPECT_EQ(bm.device_label, dev.label());
  }
}

TEST(BornMatrix, UnbiasedShortcutAndHadamardForm) {
  for (const std::string& label : catalog_labels()) {
    const ReferenceDevice dev = entry_device(catalog_entry(label));
    const Matrix g = little_gram(*dev.frame());
    const Matrix big_inv = g.cwiseProduct(g).inverse();
    const Matrix phi = born_matrix(dev).phi;
    // D o G^{-1} with D_ij = g_ii.
    Matrix dg(dev.count(), dev.count());
    for (int i = 0; i < dev.count(); ++i)
      for (int j = 0; j < dev.count(); ++j) dg(i, j) = g(i, i) * big_inv(i, j);
    EXPECT_LT(spectral_norm(phi - dg), 1e-10) << label;
    EXPECT_LT(spectral_norm(phi - phi_from_little_gram(g)), 1e-10) << label;
    if (is_unbiased(dev)) {
      const double ratio = static_cast<double>(dev.dim()) / dev.count();
      EXPECT_LT(spectral_norm(phi - ratio * big_inv), 1e-10) << label;
    }
  }
}

TEST(BornMatrix, HadamardFormOnBiasedFrames) {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const FrameMatrix f = random_frame(4, 10, s);
    const Matrix g = little_gram(f);
    const Matrix phi = born_matrix(frame_to_device(f)).phi;
    EXPECT_LT(spectral_norm(phi - phi_from_little_gram(g)) / spectral_norm(phi), 1e-8);
  }
}

TEST(BornMatrix, NonInvertibleThrows) {
  const ReferenceDevice dev = frame_to_device(FrameMatrix(Matrix::Identity(4, 4)));
  EXPECT_NO_THROW(born_matrix(dev));  // 4 orthogonal projectors: A = I
  std::vector<Matrix> halves{Matrix::Identity(2, 2) * 0.5, Matrix::Identity(2, 2) * 0.5};
  try {
    born_matrix(ReferenceDevice::make(2, halves));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInvertible);
  }
}

TEST(BornEvaluate, IdentityIsLtp) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const ProbabilityVector pr(oracle::probability(10, rng));
    const ConditionalMatrix per(oracle::stochastic(5, 10, rng));
    const Vector q = born_evaluate(Matrix::Identity(10, 10), pr, per).q;
    EXPECT_LT((q - ltp_evaluate(pr, per)).norm(), 1e-15);
    EXPECT_LT((q - per.matrix() * pr.entries()).norm(), 1e-15);
  }
}

TEST(BornEvaluate, ConsistencyOracleCatalog) {
  std::mt19937_64 rng(2024);
  for (const std::string& label : catalog_labels()) {
    check_born_consistency(entry_device(catalog_entry(label)), rng, 100, 1e-12);
  }
}

TEST(BornEvaluate, ConsistencyOracleNonParallel) {
  OptConfig c;
  c.constraints.unbiased = false;
  c.constraints.post_states = PostStateModel::FreeIndependent;
  const DeviceObjective obj(c);
  std::mt19937_64 rng(7);
  check_born_consistency(obj.device(obj.initial_point(5)), rng, 30, 1e-10);
}

TEST(BornEvaluate, MixedStateOnUnbiased) {
  const ReferenceDevice dev = entry_device(unbiased_2ric());
  const Matrix rho = Matrix::Identity(4, 4) / 4.0;
  const Vector pr = reference_probabilities(dev, rho);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(pr(i), 0.1, 1e-15);
  std::mt19937_64 rng(4);
  const std::vector<Matrix> meas = oracle::povm(4, 3, rng);
  const Vector q = born_evaluate(born_matrix(dev).phi, ProbabilityVector(pr),
                                 ConditionalMatrix(conditional_probabilities(meas, dev))).q;
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(q(j), meas[j].trace() / 4.0, 1e-12);
}

TEST(BornEvaluate, DimensionMismatch) {
  try {
    born_evaluate(Matrix::Identity(10, 10), ProbabilityVector::uniform(9), ConditionalMatrix(Matrix::Constant(2, 10, 0.5)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(BornEvaluate, OutOfRangeIsFlaggedNotClamped) {
  Matrix phi = Matrix::Identity(2, 2) * 3.0;
  phi(0, 1) = phi(1, 0) = -1.0;
  Vector pr(2);
  pr << 1.0, 0.0;
  Matrix per(2, 2);
  per << 1.0, 0.0, 0.0, 1.0;
  const BornEvaluation ev = born_evaluate(phi, ProbabilityVector(pr), ConditionalMatrix(per));
  EXPECT_DOUBLE_EQ(ev.q(0), 3.0);
  EXPECT_DOUBLE_EQ(ev.q(1), -1.0);
  EXPECT_EQ(ev.out_of_range, (std::vector<int>{0, 1}));
}

TEST(ProbabilityTypes, Validation) {
  Vector bad(2);
  bad << 0.7, 0.7;
  EXPECT_THROW(ProbabilityVector{bad}, Error);
  bad << 1.1, -0.1;
  EXPECT_THROW(ProbabilityVector{bad}, Error);
  Matrix m(2, 2);
  m << 0.5, 0.2, 0.5, 0.7;
  EXPECT_THROW(ConditionalMatrix{m}, Error);
  EXPECT_NEAR(ProbabilityVector::uniform(4).entries().sum(), 1.0, 1e-15);
}

TEST(Quantumness, CatalogExactValues) {
  EXPECT_NEAR(quantumness(entry_device(petersen_ric()), NormOrder(2.0)), 6.0 * std::sqrt(161.0 / 5.0), 1e-10);
  EXPECT_NEAR(quantumness(entry_device(a_d_ric(4)), NormOrder(2.0)), 2.0 * std::sqrt(21.0), 1e-10);
  EXPECT_NEAR(quantumness(entry_device(unbiased_2ric()), NormOrder(2.0)), 3.0 * std::sqrt(2991907.0) / 784.0, 1e-12);
}

TEST(Quantumness, AlwaysPositive) {
  for (const std::string& label : catalog_labels()) {
    for (double p : {1.0, 2.0, 5.0}) EXPECT_GT(quantumness(entry_device(catalog_entry(label)), NormOrder(p)), 0.0);
  }
}

TEST(HypotheticalSic, RealD4) {
  const Matrix phi = hypothetical_sic_phi(4, Field::Real);
  ASSERT_EQ(phi.rows(), 10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) EXPECT_NEAR(phi(i, j), i == j ? 14.0 / 5.0 : -1.0 / 5.0, 1e-15);
  const SingularSpectrum s = singular_values(Matrix::Identity(10, 10) - phi);
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(s.values[i], 2.0, 1e-12);
  EXPECT_NEAR(s.values[9], 0.0, 1e-12);
  const BornMatrix bm = make_born_matrix(phi);
  for (double p : {1.0, 2.0, 3.0, 7.5}) EXPECT_NEAR(quantumness(bm, NormOrder(p)), 2.0 * std::pow(9.0, 1.0 / p), 1e-12);
  EXPECT_NEAR(quantumness(bm, NormOrder::infinity()), 2.0, 1e-12);
  EXPECT_NEAR(quantumness(bm, NormOrder(2.0)), 6.0, 1e-12);
}

TEST(HypotheticalSic, Complex) {
  const Matrix phi = hypothetical_sic_phi(3, Field::Complex);
  ASSERT_EQ(phi.rows(), 9);
  EXPECT_NEAR(phi(0, 0), 4.0 - 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(phi(0, 1), -1.0 / 3.0, 1e-15);
}

TEST(HypotheticalSic, MatchesRealSicDevices) {
  for (int d : {2, 3}) {
    const Matrix phi = born_matrix(entry_device(real_sic(d))).phi;
    EXPECT_LT((phi - hypothetical_sic_phi(d, Field::Real)).cwiseAbs().maxCoeff(), 1e-10);
    const int n = d * (d + 1) / 2;
    EXPECT_NEAR(quantumness(entry_device(real_sic(d)), NormOrder(2.0)), d / 2.0 * std::sqrt(n - 1.0), 1e-10);
  }
}
