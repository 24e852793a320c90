#include "stratapath/strata.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "stratapath/detail/linalg.hpp"
#include "stratapath/matcore.hpp"

namespace stratapath {

std::string ComponentLabel::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Connected:
      os << "connected";
      break;
    case Kind::DetSign:
      os << "det" << (det_sign > 0 ? "+" : "-");
      break;
    case Kind::Signature:
      os << "sig(" << r_plus << "," << r_minus << ")";
      break;
    case Kind::PfaffianSign:
      os << "pf" << (det_sign > 0 ? "+" : "-");
      break;
  }
  return os.str();
}

double pfaffian(const RealMatrix& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || n % 2 != 0) {
    throw InputError("pfaffian: matrix must be square with even size");
  }
  if ((a + a.transpose()).norm() > 1e-10 * (1.0 + a.norm())) {
    throw InputError("pfaffian: matrix is not skew-symmetric");
  }
  if (n == 0) return 1.0;

  RealMatrix t = 0.5 * (a - a.transpose());
  double sign = 1.0;
  // Householder congruences zeroing below the subdiagonal.
  for (int k = 0; k + 2 < n; ++k) {
    RealVector col = t.col(k).segment(k + 1, n - k - 1);
    const double alpha = col.norm();
    if (alpha == 0.0) continue;
    RealVector v = col;
    v(0) += (col(0) >= 0 ? alpha : -alpha);
    const double vn = v.norm();
    if (vn < 1e-300) continue;
    v /= vn;
    // P = I - 2 v v^T on the trailing block; congruence P T P^T.
    auto block = t.block(k + 1, 0, n - k - 1, n);
    block -= 2.0 * v * (v.transpose() * block).eval();
    auto cols = t.block(0, k + 1, n, n - k - 1);
    cols -= 2.0 * (cols * v).eval() * v.transpose();
    sign = -sign;  // det(Householder reflector) = -1
    t = 0.5 * (t - t.transpose()).eval();
  }
  double pf = sign;
  for (int i = 0; i + 1 < n; i += 2) pf *= t(i, i + 1);
  return pf;
}

double pfaffian(const MatrixPoint& a) {
  if (a.structure() != Structure::Skew || a.field() != Field::Real) {
    throw InputError("pfaffian: expects a real skew-symmetric point");
  }
  return pfaffian(a.real_entries());
}

namespace {

std::pair<int, int> symmetric_signature(const RealMatrix& a, int r,
                                        double rank_tol) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(a);
  const RealVector ev = es.eigenvalues();
  const double smax = ev.cwiseAbs().maxCoeff();
  const double thresh = rank_tol * (smax > 0 ? smax : 1.0);
  int pos = 0, neg = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > thresh) ++pos;
    else if (ev(i) < -thresh) ++neg;
  }
  if (pos + neg != r) {
    throw InputError(
        "classify_component: eigenvalues inside the rank tolerance band");
  }
  return {pos, neg};
}

}  // namespace

ComponentLabel classify_component(const MatrixPoint& a, const StratumSpec& s,
                                  double rank_tol) {
  s.validate();
  if (!s.admits(a)) {
    throw InputError("classify_component: point does not match the stratum");
  }
  if (numerical_rank(a, rank_tol) != s.r) {
    throw InputError("classify_component: rank mismatch with the stratum");
  }
  if (s.field == Field::Complex) return ComponentLabel::connected();

  switch (s.space) {
    case Structure::General: {
      if (s.r == s.m && s.m == s.n) {
        const double d = a.real_entries().determinant();
        return ComponentLabel::det(d > 0 ? +1 : -1);
      }
      return ComponentLabel::connected();
    }
    case Structure::Symmetric: {
      auto [pos, neg] = symmetric_signature(a.real_entries(), s.r, rank_tol);
      return ComponentLabel::signature(pos, neg);
    }
    case Structure::Skew: {
      if (s.r == s.n) {
        const double pf = pfaffian(a);
        return ComponentLabel::pfaffian_sign(pf > 0 ? +1 : -1);
      }
      return ComponentLabel::connected();
    }
  }
  return ComponentLabel::connected();
}

bool same_component(const MatrixPoint& a, const MatrixPoint& b,
                    const StratumSpec& s, double rank_tol) {
  return classify_component(a, s, rank_tol) ==
         classify_component(b, s, rank_tol);
}

int tangent_dimension(Structure space, int m, int n, int s) {
  switch (space) {
    case Structure::General:
      return m * n - (m - s) * (n - s);
    case Structure::Symmetric:
      return m * s - s * (s - 1) / 2;
    case Structure::Skew:
      return m * s - s * (s + 1) / 2;
  }
  return 0;
}

TangentSpace tangent_space(const MatrixPoint& a, int s_rank, double rank_tol) {
  if (numerical_rank(a, rank_tol) != s_rank) {
    throw InputError("tangent_space: rank(a) != s_rank");
  }
  const int m = a.rows();
  const int n = a.cols();
  const BlockFrame f = block_reduce(a, s_rank, rank_tol);
  TangentSpace ts;
  ts.base = a;

  if (a.structure() == Structure::General) {
    const Matrix u = f.left.adjoint();   // columns: left basis
    const Matrix v = f.right;            // columns: right basis
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i >= s_rank && j >= s_rank) continue;
        Matrix e = u.col(i) * v.col(j).adjoint();
        if (a.field() == Field::Real) e = e.real().cast<Complex>();
        ts.basis.push_back(a.with_entries(std::move(e)));
      }
    }
    return ts;
  }

  const RealMatrix q = f.right.real();  // congruence basis
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  if (a.structure() == Structure::Symmetric) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        if (i >= s_rank && j >= s_rank) continue;
        RealMatrix e;
        if (i == j) {
          e = q.col(i) * q.col(i).transpose();
        } else {
          e = inv_sqrt2 * (q.col(i) * q.col(j).transpose() +
                           q.col(j) * q.col(i).transpose());
        }
        ts.basis.push_back(a.with_entries(
            enforce_structure(e.cast<Complex>(), Structure::Symmetric)));
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (i >= s_rank && j >= s_rank) continue;
        RealMatrix e = inv_sqrt2 * (q.col(i) * q.col(j).transpose() -
                                    q.col(j) * q.col(i).transpose());
        ts.basis.push_back(a.with_entries(
            enforce_structure(e.cast<Complex>(), Structure::Skew)));
      }
    }
  }
  return ts;
}

bool transversal_at(const MatrixPoint& a,
                    const std::vector<MatrixPoint>& v_basis,
                    double rank_tol) {
  if (a.norm() == 0.0) {
    throw InputError("transversal_at: transversality is undefined at 0");
  }
  const int m = a.rows();
  const int n = a.cols();
  const int s = numerical_rank(a, rank_tol);
  const int codim = (m - s) * (n - s);
  if (codim == 0) return true;
  if (v_basis.empty()) return false;

  const BlockFrame f = block_reduce(a, s, rank_tol);
  const Matrix kl = f.left.adjoint().rightCols(m - s);  // left kernel basis
  const Matrix kr = f.right.rightCols(n - s);           // right kernel basis

  Matrix projected(codim, static_cast<int>(v_basis.size()));
  double scale = 0.0;
  for (size_t j = 0; j < v_basis.size(); ++j) {
    if (v_basis[j].rows() != m || v_basis[j].cols() != n) {
      throw InputError("transversal_at: basis vector shape mismatch");
    }
    scale = std::max(scale, v_basis[j].norm());
    const Matrix p = kl.adjoint() * v_basis[j].entries() * kr;
    projected.col(static_cast<int>(j)) =
        Eigen::Map<const Vector>(p.data(), p.size());
  }
  if (scale == 0.0) return false;
  // Rank cut against the size of the unprojected section vectors, not the
  // projected matrix: tangent directions project to numerical noise and
  // must count as rank zero.
  const RealVector sv = singular_values(projected);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > rank_tol * scale) ++rank;
  }
  return rank == codim;
}

PiecewisePath gauss_path_to_pivot(const MatrixPoint& p, const StratumSpec& s,
                                  double delta, double rank_tol) {
  s.validate();
  if (!s.admits(p)) {
    throw InputError("gauss_path_to_pivot: point does not match the stratum");
  }
  if (delta <= 0) throw InputError("gauss_path_to_pivot: delta must be > 0");
  if (p.norm() > delta * (1.0 + 1e-9)) {
    throw InputError("gauss_path_to_pivot: |p| exceeds delta");
  }
  const int r = s.r;
  if (numerical_rank(p, rank_tol) != r) {
    throw InputError("gauss_path_to_pivot: rank(p) != r");
  }
  PiecewisePath path;
  const int m = s.m;
  const int n = s.n;
  if (r == 0) {
    path.segments.push_back(std::make_shared<LinearSegment>(
        p, MatrixPoint::zero(m, n, s.field, s.space)));
    return path;
  }

  if (s.space == Structure::General && s.field == Field::Complex) {
    Eigen::JacobiSVD<Matrix> svd(p.entries(),
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix mid =
        delta * svd.matrixU().leftCols(r) * svd.matrixV().leftCols(r).adjoint();
    const MatrixPoint mid_pt = p.with_entries(mid);
    if (frobenius_dist(p, mid_pt) > 1e-14 * delta) {
      path.segments.push_back(std::make_shared<LinearSegment>(p, mid_pt));
    }
    const Matrix gl = -detail::unitary_log(svd.matrixU());
    const Matrix gr = detail::unitary_log(svd.matrixV());
    RotationSegment rot(BlockFrame::identity(m, n), mid, gl, gr, p);
    if (rot.length() > 1e-14 * delta) {
      path.segments.push_back(std::make_shared<RotationSegment>(rot));
    }
    return path;
  }

  if (s.space == Structure::General) {
    Eigen::JacobiSVD<RealMatrix> svd(p.real_entries(),
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
    RealMatrix wl = svd.matrixU();
    RealMatrix wr = svd.matrixV();
    // Fix determinants to +1. Spare (kernel) column flips are free; when
    // a factor is full its last range column flips instead. A flip inside
    // the range is mirrored on the other side whenever that side has a
    // spare column to re-fix, so the pivot stays delta * I_r except in
    // the square full-rank case, where the -1 records the det sign.
    if (wl.determinant() < 0) {
      if (r < m) {
        wl.col(m - 1) *= -1.0;
      } else if (r < n) {
        wl.col(r - 1) *= -1.0;
        wr.col(r - 1) *= -1.0;
      } else {
        wl.col(r - 1) *= -1.0;
      }
    }
    if (wr.determinant() < 0) {
      if (r < n) {
        wr.col(n - 1) *= -1.0;
      } else if (r < m) {
        wr.col(r - 1) *= -1.0;
        wl.col(r - 1) *= -1.0;
        if (wl.determinant() < 0) wl.col(m - 1) *= -1.0;
      } else {
        wr.col(r - 1) *= -1.0;
      }
    }
    const RealMatrix mid_r = delta * svd.matrixU().leftCols(r) *
                             svd.matrixV().leftCols(r).transpose();
    const MatrixPoint mid_pt = MatrixPoint::real(mid_r);
    if (frobenius_dist(p, mid_pt) > 1e-14 * delta) {
      path.segments.push_back(std::make_shared<LinearSegment>(p, mid_pt));
    }
    const Matrix gl = (-detail::so_log(wl)).cast<Complex>();
    const Matrix gr = detail::so_log(wr).cast<Complex>();
    RotationSegment rot(BlockFrame::identity(m, n), mid_r.cast<Complex>(), gl,
                        gr, p);
    if (rot.length() > 1e-14 * delta) {
      path.segments.push_back(std::make_shared<RotationSegment>(rot));
    }
    return path;
  }

  if (s.space == Structure::Symmetric) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(p.real_entries());
    RealVector ev = es.eigenvalues();
    RealMatrix vecs = es.eigenvectors();
    // Order: positive eigenvalues, then negative, kernel last.
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    const double thresh = rank_tol * ev.cwiseAbs().maxCoeff();
    auto bucket = [&](int i) {
      if (ev(i) > thresh) return 0;
      if (ev(i) < -thresh) return 1;
      return 2;
    };
    std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
      if (bucket(i) != bucket(j)) return bucket(i) < bucket(j);
      return std::abs(ev(i)) > std::abs(ev(j));
    });
    RealMatrix q(n, n);
    RealVector signs = RealVector::Zero(n);
    for (int k = 0; k < n; ++k) {
      q.col(k) = vecs.col(idx[k]);
      signs(k) = (k < r) ? (ev(idx[k]) > 0 ? 1.0 : -1.0) : 0.0;
    }
    if (q.determinant() < 0) q.col(0) *= -1.0;  // harmless for Q E Q^T
    const RealMatrix mid_r =
        q * (delta * signs).asDiagonal() * q.transpose();
    const MatrixPoint mid_pt = p.with_entries(
        enforce_structure(mid_r.cast<Complex>(), Structure::Symmetric));
    if (frobenius_dist(p, mid_pt) > 1e-13 * delta) {
      path.segments.push_back(std::make_shared<LinearSegment>(p, mid_pt));
    }
    const RealMatrix g = -detail::so_log(q);
    RotationSegment rot(BlockFrame::identity(n, n), mid_pt.entries(),
                        g.cast<Complex>(), g.transpose().cast<Complex>(), p);
    if (rot.length() > 1e-13 * delta) {
      path.segments.push_back(std::make_shared<RotationSegment>(rot));
    }
    return path;
  }

  // Skew: canonical lambda-block pairing.
  {
    const RealMatrix ar = p.real_entries();
    Matrix ham = Complex(0, 1) * ar.cast<Complex>();
    Eigen::SelfAdjointEigenSolver<Matrix> es(ham);
    const RealVector ev = es.eigenvalues();
    std::vector<std::pair<double, int>> pos;
    for (int i = 0; i < n; ++i) {
      if (ev(i) > rank_tol * ev.cwiseAbs().maxCoeff()) {
        pos.emplace_back(ev(i), i);
      }
    }
    std::sort(pos.rbegin(), pos.rend());
    if (static_cast<int>(pos.size()) * 2 != r) {
      throw NumericalError("gauss_path_to_pivot: skew pairing degenerate");
    }
    RealMatrix q(n, n);
    RealVector lambdas(r / 2);
    int col = 0;
    for (auto& [lam, i] : pos) {
      const Vector w = es.eigenvectors().col(i);
      RealVector x = std::sqrt(2.0) * w.real();
      RealVector y = std::sqrt(2.0) * w.imag();
      x.normalize();
      y.normalize();
      // Orient the pair so the framed block is [[0, +lam], [-lam, 0]].
      if (x.dot(ar * y) < 0) y *= -1.0;
      q.col(col) = x;
      q.col(col + 1) = y;
      lambdas(col / 2) = lam;
      col += 2;
    }
    // Kernel completion.
    Eigen::HouseholderQR<RealMatrix> qr(q.leftCols(col));
    RealMatrix qfull = qr.householderQ();
    for (int k = col; k < n; ++k) q.col(k) = qfull.col(k);
    // Re-orthonormalize defensively and keep pair orientation.
    if ((q.transpose() * q - RealMatrix::Identity(n, n)).norm() > 1e-8) {
      throw NumericalError("gauss_path_to_pivot: skew basis not orthogonal");
    }

    RealVector block_signs = RealVector::Ones(r / 2);
    if (q.determinant() < 0) {
      if (r < n) {
        q.col(n - 1) *= -1.0;
      } else {
        q.col(1) *= -1.0;  // absorbs into a flipped first block
        block_signs(0) = -1.0;
      }
    }
    auto j_form = [&](const RealVector& lams) {
      RealMatrix j = RealMatrix::Zero(n, n);
      for (int k = 0; k < r / 2; ++k) {
        j(2 * k, 2 * k + 1) = lams(k) * block_signs(k);
        j(2 * k + 1, 2 * k) = -lams(k) * block_signs(k);
      }
      return j;
    };
    const RealMatrix mid_r = q * j_form(RealVector::Constant(r / 2, delta)) *
                             q.transpose();
    const MatrixPoint mid_pt = p.with_entries(
        enforce_structure(mid_r.cast<Complex>(), Structure::Skew));
    if (frobenius_dist(p, mid_pt) > 1e-13 * delta) {
      path.segments.push_back(std::make_shared<LinearSegment>(p, mid_pt));
    }
    const RealMatrix g = -detail::so_log(q);
    RotationSegment rot(BlockFrame::identity(n, n), mid_pt.entries(),
                        g.cast<Complex>(), g.transpose().cast<Complex>(), p);
    if (rot.length() > 1e-13 * delta) {
      path.segments.push_back(std::make_shared<RotationSegment>(rot));
    }
    return path;
  }
}

}  // namespace stratapath
