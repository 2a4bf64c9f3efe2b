#pragma once

// Command-line front end and the helpers behind its commands.

#include "riclab/error.hpp"
#include "riclab/matcore.hpp"
#include "riclab/povm.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace riclab::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailure = 1, kInputError = 2, kNumericalFailure = 3 };

ExitCode exit_code_for(ErrorKind kind) noexcept;

/// Parses argv and runs one command; output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------- verify

struct VerifyRow {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool upper_bound = false;  // pass when value <= expected + tolerance
  std::string exact_form;
  bool pass = false;
};

/// Recomputes the six quantumness reference rows. `restarts` applies to the
/// non-parallel search.
std::vector<VerifyRow> verify_rows(int restarts, std::uint64_t seed);

// ---------------------------------------------------------------- sphere

/// Orthonormal 4x3 basis of the hyperplane orthogonal to `normal`.
Matrix slice_basis(const Vector& normal);

struct GreatCircle {
  int index = 0;
  bool degenerate = false;  // frame vector parallel to the slice normal
  Vector axis;              // unit normal of the circle plane, slice coordinates
  Matrix sphere_points;     // samples x 3, on the radius-R 2-sphere
  Matrix points;            // samples x 4, the same points in R^4
};

std::vector<GreatCircle> great_circles(const Matrix& frame_rows, double radius, const Vector& normal,
                                       int samples);

/// |cos| of the angle between circle planes (NaN for degenerate circles).
Matrix circle_cosines(const std::vector<GreatCircle>& circles);

struct PsiGrid {
  std::vector<double> latitude;   // degrees
  std::vector<double> longitude;  // degrees
  Matrix values;                  // latitude x longitude
};

/// psi(z) = prod_i <z|phi_i> on a latitude/longitude grid of the slice sphere.
PsiGrid psi_grid(const Matrix& frame_rows, double radius, const Vector& normal, int n_lat, int n_lon);

// ---------------------------------------------------------------- misc

/// FNV-1a, hex encoded.
std::string digest(const std::string& text);

/// Numeric CSV; errors name the offending line.
Matrix read_csv_matrix(const std::string& text, const std::string& what);

}  // namespace riclab::cli
