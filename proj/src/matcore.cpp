#include "stratapath/matcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace stratapath {

std::string to_string(Field f) {
  return f == Field::Real ? "R" : "C";
}

std::string to_string(Structure s) {
  switch (s) {
    case Structure::General: return "general";
    case Structure::Symmetric: return "sym";
    case Structure::Skew: return "skew";
  }
  return "general";
}

std::string to_string(Mode m) {
  return m == Mode::Stratum ? "stratum" : "closure";
}

double structure_residual(const Matrix& entries, Structure structure) {
  if (structure == Structure::General) return 0.0;
  if (entries.rows() != entries.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  if (structure == Structure::Symmetric) {
    return (entries - entries.transpose()).norm();
  }
  return (entries + entries.transpose()).norm();
}

Matrix enforce_structure(const Matrix& entries, Structure structure) {
  if (structure == Structure::General) return entries;
  if (structure == Structure::Symmetric) {
    return 0.5 * (entries + entries.transpose()).eval();
  }
  Matrix skew = 0.5 * (entries - entries.transpose());
  skew.diagonal().setZero();
  return skew;
}

MatrixPoint::MatrixPoint(Matrix entries, Field field, Structure structure)
    : entries_(std::move(entries)), field_(field), structure_(structure) {
  if (!entries_.allFinite()) {
    throw InputError("matrix entries must be finite");
  }
  if (field_ == Field::Real && entries_.imag().norm() != 0.0) {
    throw InputError("real matrix has nonzero imaginary parts");
  }
  if (structure_ != Structure::General) {
    if (entries_.rows() != entries_.cols()) {
      throw InputError("structured matrix must be square");
    }
    if (field_ == Field::Complex) {
      throw InputError("structured matrices are real-only");
    }
    if (structure_residual(entries_, structure_) != 0.0) {
      throw InputError("entries violate the declared structure");
    }
  }
}

MatrixPoint MatrixPoint::real(const RealMatrix& entries, Structure structure) {
  return MatrixPoint(entries.cast<Complex>(), Field::Real, structure);
}

MatrixPoint MatrixPoint::zero(int m, int n, Field field, Structure structure) {
  return MatrixPoint(Matrix::Zero(m, n), field, structure);
}

RealMatrix MatrixPoint::real_entries() const {
  return entries_.real();
}

bool MatrixPoint::same_space(const MatrixPoint& other) const {
  return field_ == other.field_ && structure_ == other.structure_ &&
         rows() == other.rows() && cols() == other.cols();
}

MatrixPoint MatrixPoint::with_entries(Matrix entries) const {
  return MatrixPoint(std::move(entries), field_, structure_);
}

void StratumSpec::validate() const {
  if (m < 1 || n < 1) throw InputError("stratum shape must be positive");
  if (r < 0 || r > std::min(m, n)) {
    throw InputError("rank r out of range for the stratum shape");
  }
  if (space != Structure::General) {
    if (m != n) throw InputError("structured strata require m == n");
    if (field == Field::Complex) {
      throw InputError("structured strata are real-only");
    }
  }
  if (space == Structure::Skew && r % 2 != 0) {
    throw InputError("skew-symmetric rank must be even");
  }
}

bool StratumSpec::admits(const MatrixPoint& p) const {
  return p.field() == field && p.structure() == space && p.rows() == m &&
         p.cols() == n;
}

BlockFrame BlockFrame::identity(int m, int n, bool congruence) {
  return BlockFrame{Matrix::Identity(m, m), Matrix::Identity(n, n), 0,
                    congruence};
}

double BlockFrame::unitarity_residual() const {
  const double rl =
      (left * left.adjoint() - Matrix::Identity(left.rows(), left.rows()))
          .norm();
  const double rr =
      (right * right.adjoint() - Matrix::Identity(right.rows(), right.rows()))
          .norm();
  return std::max(rl, rr);
}

bool BlockFrame::is_identity(double tol) const {
  return (left - Matrix::Identity(left.rows(), left.rows())).norm() <= tol &&
         (right - Matrix::Identity(right.rows(), right.rows())).norm() <= tol;
}

BlockFrame BlockFrame::then(const BlockFrame& outer) const {
  return BlockFrame{outer.left * left, right * outer.right,
                    std::max(r0, outer.r0), congruence && outer.congruence};
}

double frobenius_dist(const MatrixPoint& a, const MatrixPoint& b) {
  if (!a.same_space(b)) {
    throw InputError("frobenius_dist: operands live in different spaces");
  }
  return (a.entries() - b.entries()).norm();
}

RealVector singular_values(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

int numerical_rank(const Matrix& a, double rank_tol) {
  if (rank_tol <= 0.0 || rank_tol >= 1.0) {
    throw InputError("rank_tol must lie in (0,1)");
  }
  const RealVector sv = singular_values(a);
  if (sv.size() == 0) return 0;
  const double smax = sv(0);
  if (smax == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > rank_tol * smax) ++rank;
  }
  return rank;
}

int numerical_rank(const MatrixPoint& a, double rank_tol) {
  return numerical_rank(a.entries(), rank_tol);
}

namespace {

// Orders eigen-decomposition columns by descending |lambda|.
void sort_by_abs(RealVector& values, RealMatrix& vectors) {
  const int n = static_cast<int>(values.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    return std::abs(values(i)) > std::abs(values(j));
  });
  RealVector v2(n);
  RealMatrix q2(vectors.rows(), n);
  for (int k = 0; k < n; ++k) {
    v2(k) = values(idx[k]);
    q2.col(k) = vectors.col(idx[k]);
  }
  values = v2;
  vectors = q2;
}

// Real orthogonal Q with Q^T A Q block diagonal: an invertible skew
// block first, kernel vectors last. The range of a skew matrix is the
// orthogonal complement of its kernel, so a range basis suffices.
RealMatrix skew_range_kernel_basis(const RealMatrix& a, double rank_tol) {
  const int n = static_cast<int>(a.rows());
  // iA is Hermitian with eigenvalues +-lambda_j.
  Matrix ham = Complex(0, 1) * a.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Matrix> es(ham);
  if (es.info() != Eigen::Success) {
    throw NumericalError("skew pairing: eigensolver failed");
  }
  const RealVector ev = es.eigenvalues();
  const double smax = ev.cwiseAbs().maxCoeff();
  const double thresh = rank_tol * (smax > 0 ? smax : 1.0);

  std::vector<std::pair<double, int>> pos;
  for (int i = 0; i < n; ++i) {
    if (ev(i) > thresh) pos.emplace_back(ev(i), i);
  }
  std::sort(pos.rbegin(), pos.rend());
  if (pos.empty()) return RealMatrix::Identity(n, n);

  RealMatrix cols(n, 2 * static_cast<int>(pos.size()));
  int k = 0;
  for (auto& [lam, i] : pos) {
    (void)lam;
    Vector w = es.eigenvectors().col(i);
    cols.col(2 * k) = std::sqrt(2.0) * w.real();
    cols.col(2 * k + 1) = std::sqrt(2.0) * w.imag();
    ++k;
  }
  Eigen::HouseholderQR<RealMatrix> qr(cols);
  return qr.householderQ();
}

}  // namespace

BlockFrame block_reduce(const MatrixPoint& a, int r, double rank_tol) {
  const int rank = numerical_rank(a, rank_tol);
  if (rank > r) {
    throw InputError("block_reduce: numerical rank exceeds requested r");
  }
  const int m = a.rows();
  const int n = a.cols();

  if (a.structure() == Structure::General) {
    Eigen::JacobiSVD<Matrix> svd(a.entries(),
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
    BlockFrame f{svd.matrixU().adjoint(), svd.matrixV(), rank, false};
    if (a.field() == Field::Real) {
      // JacobiSVD of a real-valued complex matrix can return complex
      // factors; recompute in real arithmetic.
      Eigen::JacobiSVD<RealMatrix> rsvd(
          a.real_entries(), Eigen::ComputeFullU | Eigen::ComputeFullV);
      f.left = rsvd.matrixU().transpose().cast<Complex>();
      f.right = rsvd.matrixV().cast<Complex>();
    }
    return f;
  }

  if (a.structure() == Structure::Symmetric) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(a.real_entries());
    if (es.info() != Eigen::Success) {
      throw NumericalError("block_reduce: eigensolver failed");
    }
    RealVector vals = es.eigenvalues();
    RealMatrix vecs = es.eigenvectors();
    sort_by_abs(vals, vecs);
    return BlockFrame{vecs.transpose().cast<Complex>(), vecs.cast<Complex>(),
                      rank, true};
  }

  // Skew: orthonormal range basis first, kernel last.
  (void)m;
  (void)n;
  RealMatrix q = skew_range_kernel_basis(a.real_entries(), rank_tol);
  return BlockFrame{q.transpose().cast<Complex>(), q.cast<Complex>(), rank,
                    true};
}

MatrixPoint apply_frame(const BlockFrame& f, const MatrixPoint& x) {
  if (f.left.cols() != x.rows() || f.right.rows() != x.cols()) {
    throw InputError("apply_frame: shape mismatch");
  }
  Matrix y = f.apply_raw(x.entries());
  if (x.structure() != Structure::General) {
    if (!f.congruence) {
      throw InputError("apply_frame: structured input needs congruence frame");
    }
    y = enforce_structure(y, x.structure());
  } else if (x.field() == Field::Real) {
    y = y.real().cast<Complex>();
  }
  return x.with_entries(std::move(y));
}

MatrixPoint inverse_frame(const BlockFrame& f, const MatrixPoint& x) {
  if (f.left.rows() != x.rows() || f.right.cols() != x.cols()) {
    throw InputError("inverse_frame: shape mismatch");
  }
  Matrix y = f.inverse_raw(x.entries());
  if (x.structure() != Structure::General) {
    y = enforce_structure(y, x.structure());
  } else if (x.field() == Field::Real) {
    y = y.real().cast<Complex>();
  }
  return x.with_entries(std::move(y));
}

ScaleBounds scale_bounds(const Matrix& c_left, const Matrix& c_right) {
  if (c_left.rows() != c_left.cols() || c_right.rows() != c_right.cols()) {
    throw InputError("scale_bounds: factors must be square");
  }
  const RealVector sl = singular_values(c_left);
  const RealVector sr = singular_values(c_right);
  const double lmin = sl(sl.size() - 1) * sr(sr.size() - 1);
  if (lmin <= 0.0) {
    throw InputError("scale_bounds: factor is singular");
  }
  return ScaleBounds{lmin, sl(0) * sr(0)};
}

MatrixPoint truncate_to_rank(const MatrixPoint& a, int r) {
  const int minmn = std::min(a.rows(), a.cols());
  if (r < 0 || r > minmn) {
    throw InputError("truncate_to_rank: r out of range");
  }
  if (r == minmn) return a;
  if (r == 0) {
    return MatrixPoint::zero(a.rows(), a.cols(), a.field(), a.structure());
  }

  if (a.structure() == Structure::General) {
    Eigen::JacobiSVD<Matrix> svd(a.entries(),
                                 Eigen::ComputeThinU | Eigen::ComputeThinV);
    RealVector sv = svd.singularValues();
    Matrix out = svd.matrixU().leftCols(r) *
                 sv.head(r).asDiagonal().toDenseMatrix().cast<Complex>() *
                 svd.matrixV().leftCols(r).adjoint();
    if (a.field() == Field::Real) out = out.real().cast<Complex>();
    return a.with_entries(std::move(out));
  }

  if (a.structure() == Structure::Symmetric) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(a.real_entries());
    RealVector vals = es.eigenvalues();
    RealMatrix vecs = es.eigenvectors();
    sort_by_abs(vals, vecs);
    RealMatrix out = vecs.leftCols(r) * vals.head(r).asDiagonal() *
                     vecs.leftCols(r).transpose();
    return a.with_entries(
        enforce_structure(out.cast<Complex>(), Structure::Symmetric));
  }

  // Skew: keep the top r/2 spectral pairs.
  if (r % 2 != 0) {
    throw InputError("truncate_to_rank: skew rank must be even");
  }
  Matrix ham = Complex(0, 1) * a.entries();
  Eigen::SelfAdjointEigenSolver<Matrix> es(ham);
  RealVector ev = es.eigenvalues();
  const int n = a.rows();
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    return std::abs(ev(i)) > std::abs(ev(j));
  });
  Matrix acc = Matrix::Zero(n, n);
  for (int k = 0; k < r; ++k) {
    const int i = idx[k];
    acc += ev(i) * es.eigenvectors().col(i) *
           es.eigenvectors().col(i).adjoint();
  }
  Matrix out = (Complex(0, -1) * acc).real().cast<Complex>();
  return a.with_entries(enforce_structure(out, Structure::Skew));
}

}  // namespace stratapath
