#pragma once

// One-parameter family of biased rank-1 d = 4 RICs indexed by the bias f of
// the first four elements. The little Gram matrix has the fixed sign pattern
//
//    f  b -b  b |  d -d -d -d  d  d
//    b  f  b -b |  d -d  d  d  d  d
//   -b  b  f  b |  d -d  d  d -d -d
//    b -b  b  f |  d -d -d -d -d -d
//    -----------+------------------
//    d  d  d  d |  e -a -c  c  c -c
//   -d -d -d -d | -a  e -c  c  c -c
//   -d  d  d -d | -c -c  e  a -c  c
//   -d  d  d -d |  c  c  a  e  c -c
//    d  d -d -d |  c  c -c  c  e  a
//    d  d -d -d | -c -c  c -c  a  e
//
// and is a rank-4 projector for every 0 < f < 3/4; f = 2/5 is the unbiased
// 2-RIC.

#include "riclab/born.hpp"
#include "riclab/matcore.hpp"
#include "riclab/povm.hpp"

#include <vector>

namespace riclab::parametric {

inline constexpr double kUnbiasedBias = 0.4;
inline constexpr double kBiasPole = 0.75;

/// Gram entries; `dg` is the off-block entry (named to avoid clashing with
/// the dimension).
struct GramEntries {
  double f = 0.0;
  double b = 0.0;
  double dg = 0.0;
  double e = 0.0;
  double a = 0.0;
  double c = 0.0;
};

struct ParametricPoint {
  double f = 0.0;
  GramEntries entries;
  Matrix gram;
  double projector_residual = 0.0;  // ||g^2 - g||_2
  int newton_iterations = 0;
};

/// Assembles the 10 x 10 Gram matrix with the family's sign pattern.
Matrix gram_from_entries(const GramEntries& entries);

/// Solves g^2 = g with e = 2(1 - f)/3, continuing from the f = 2/5 solution.
/// Throws OutOfRange unless 0 < f < 3/4.
ParametricPoint solve_family(double f);

/// Parallel-update device built from solve_family(f).
ReferenceDevice family_device(double f);

/// Born matrix block entries as functions of f.
struct PhiEntries {
  double q, r, s, t, u, v, w;
};

PhiEntries phi_entries(double f);

/// Closed-form Born matrix: q/r on the 4 x 4 block, s above, t below, and
/// u (diagonal) / v (partner) / w on the 6 x 6 block.
/// Throws Singularity unless 0 < f < 3/4.
Matrix phi_closed_form(double f);

/// Partner index of element i (1-based, 5..10): i + 1 for odd i, i - 1 for even.
int lambda_partner(int i);

/// Explicit Born rule of the family, written out term by term.
Vector born_explicit(double f, const ProbabilityVector& p_r, const ConditionalMatrix& p_e_given_r);

/// ||I - phi_closed_form(f)||_p.
double family_quantumness(double f, NormOrder p);

/// d/df ||I - phi_closed_form(f)||_p (one-sided where singular values cross).
double family_quantumness_derivative(double f, NormOrder p);

struct FamilyMinimum {
  double f = 0.0;
  double value = 0.0;
  int grid_local_minima = 0;  // > 1 means the grid scan saw several basins
};

/// Minimizes the p-quantumness over 0 < f < 3/4 to |df| < 1e-10.
FamilyMinimum minimize_over_f(NormOrder p);

struct ScanPoint {
  double f;
  double value;
};

/// Evaluates the p-quantumness on `steps` equally spaced points of [f0, f1].
std::vector<ScanPoint> scan(NormOrder p, double f0, double f1, int steps);

}  // namespace riclab::parametric
