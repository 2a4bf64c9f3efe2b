#pragma once

// Named reference devices with exactly known little Gram matrices, plus the
// table of maximal real equiangular line counts.

#include "riclab/matcore.hpp"
#include "riclab/povm.hpp"

#include <optional>
#include <string>
#include <vector>

namespace riclab {

/// Closed-form constant kept alongside its float64 value.
struct ExactValue {
  std::string expression;
  double value = 0.0;
};

struct CatalogEntry {
  std::string label;
  int dim = 0;
  Matrix gram;                       // little Gram matrix, N x N
  std::string provenance;            // how the Gram matrix is built
  std::optional<FrameMatrix> frame;  // explicit frame when the construction has one
  std::optional<ExactValue> quantumness_2;  // exact 2-quantumness (parallel update)

  int count() const noexcept { return static_cast<int>(gram.rows()); }
};

/// Petersen graph on the 2-subsets of {1..5} (Kneser K(5,2), lexicographic
/// order): 2/5 on the diagonal, -4/15 on edges, 1/15 otherwise.
CatalogEntry petersen_ric();

/// Lines through the roots e_i - e_j of A_d, expressed in a Gram-Schmidt
/// basis of the sum-zero hyperplane of R^{d+1}, weighted by d/N.
CatalogEntry a_d_ric(int d);

/// d = 2: the trine. d = 3: the six diagonals of the icosahedron.
CatalogEntry real_sic(int d);

/// The unbiased d = 4 RIC minimizing the 2-quantumness under the parallel
/// update; entries are +-2/5, 2/15, sqrt(7)/15, 1/15, 1/6.
CatalogEntry unbiased_2ric();

/// Labels accepted by catalog_entry(): petersen, a2, a3, a4, ..., sic2, sic3, unbiased-2ric.
std::vector<std::string> catalog_labels();
CatalogEntry catalog_entry(const std::string& label);

/// Parallel-update device of an entry (explicit frame when available,
/// otherwise recovered from the Gram matrix).
ReferenceDevice entry_device(const CatalogEntry& entry);

/// Maximum number of equiangular lines in R^d where tabulated.
std::optional<int> max_equiangular_lines(int d);

/// Distinct |m_ij| (upper triangle with diagonal) after rounding to
/// `decimals` places.
int count_unique_entries(const Matrix& m, int decimals);

}  // namespace riclab
