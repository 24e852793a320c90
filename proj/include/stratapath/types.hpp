#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace stratapath {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class Field { Real, Complex };
enum class Structure { General, Symmetric, Skew };
enum class Mode { Stratum, Closure };

std::string to_string(Field f);
std::string to_string(Structure s);
std::string to_string(Mode m);

/// Thrown when inputs violate an operation's preconditions or schema.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical procedure fails (factorization breakdown,
/// retry exhaustion, certification failure after retries).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tolerances used across the library. All campaigns echo the values used.
struct Tolerances {
  double rank_tol = 1e-9;       // relative to sigma_max
  double frame_tol = 1e-10;     // absolute, unitarity residuals
  double cert_tol = 1e-8;       // closure-mode off-stratum residual
  double floor_tol = 1e-9;      // stratum-mode sigma_r / sigma_max floor
  double len_tol = 1e-6;        // relative slack on closure bounds
  double stratum_slack = 0.05;  // relative slack on the stratum bound
};

/// A point of a matrix space: entries plus field and structure tags.
/// Real points keep exactly zero imaginary parts; symmetric and skew
/// points satisfy their symmetry entrywise.
class MatrixPoint {
 public:
  MatrixPoint() = default;
  MatrixPoint(Matrix entries, Field field, Structure structure);

  static MatrixPoint real(const RealMatrix& entries,
                          Structure structure = Structure::General);
  static MatrixPoint zero(int m, int n, Field field,
                          Structure structure = Structure::General);

  const Matrix& entries() const { return entries_; }
  Field field() const { return field_; }
  Structure structure() const { return structure_; }
  int rows() const { return static_cast<int>(entries_.rows()); }
  int cols() const { return static_cast<int>(entries_.cols()); }

  RealMatrix real_entries() const;
  double norm() const { return entries_.norm(); }
  bool same_space(const MatrixPoint& other) const;

  /// Replaces the entries, re-validating the invariants.
  MatrixPoint with_entries(Matrix entries) const;

 private:
  Matrix entries_;
  Field field_ = Field::Real;
  Structure structure_ = Structure::General;
};

/// Symmetry defect of raw entries with respect to a structure tag.
double structure_residual(const Matrix& entries, Structure structure);

/// Rounds near-symmetric entries to exact (skew-)symmetry.
Matrix enforce_structure(const Matrix& entries, Structure structure);

/// Which variety: rank stratum X_r or its closure, in one of the
/// matrix spaces.
struct StratumSpec {
  Structure space = Structure::General;
  Field field = Field::Real;
  int m = 0;
  int n = 0;
  int r = 0;
  Mode mode = Mode::Closure;

  void validate() const;
  bool admits(const MatrixPoint& p) const;  // shape/field/structure match
};

/// Unitary (or orthogonal-congruence) change of frame bringing a source
/// matrix to A_inv + 0 block form. apply() is an isometry.
struct BlockFrame {
  Matrix left;   // m x m
  Matrix right;  // n x n
  int r0 = 0;
  bool congruence = false;  // right == left transpose (structured spaces)

  static BlockFrame identity(int m, int n, bool congruence = false);
  double unitarity_residual() const;
  bool is_identity(double tol = 1e-14) const;

  Matrix apply_raw(const Matrix& x) const { return left * x * right; }
  Matrix inverse_raw(const Matrix& x) const {
    return left.adjoint() * x * right.adjoint();
  }

  /// Composition: (f2 * f1).apply(x) == f2.apply(f1.apply(x)).
  BlockFrame then(const BlockFrame& outer) const;
};

struct ScaleBounds {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

}  // namespace stratapath
