#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "stratapath/arrangements.hpp"
#include "stratapath/pathforge.hpp"

namespace stratapath {

namespace {

// Orthonormal basis of the column span, rank-cut at tol relative to the
// largest singular value. Returns an N x rank matrix (possibly 0 columns).
RealMatrix orthonormal_span(const RealMatrix& cols, double tol = 1e-10) {
  if (cols.cols() == 0) return RealMatrix(cols.rows(), 0);
  Eigen::JacobiSVD<RealMatrix> svd(cols, Eigen::ComputeThinU);
  const RealVector sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * std::max(smax, 1.0)) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

// Component of each column orthogonal to span(quot), orthonormalized.
RealMatrix quotient_frame(const RealMatrix& dirs, const RealMatrix& quot) {
  if (quot.cols() == 0) return dirs;
  RealMatrix reduced = dirs - quot * (quot.transpose() * dirs);
  return orthonormal_span(reduced);
}

MatrixPoint as_point(const RealVector& v) {
  RealMatrix col(v.size(), 1);
  col.col(0) = v;
  return MatrixPoint::real(col);
}

}  // namespace

void AffineSubspace::validate(double frame_tol) const {
  if (dim() < 1) {
    throw InputError("affine subspace: dimension must be positive");
  }
  if (directions.rows() != base.size()) {
    throw InputError("affine subspace: frame/base dimension mismatch");
  }
  const RealMatrix gram =
      directions.transpose() * directions -
      RealMatrix::Identity(dim(), dim());
  if (gram.norm() > frame_tol) {
    throw InputError("affine subspace: direction frame is not orthonormal");
  }
}

RealVector AffineSubspace::project(const RealVector& p) const {
  return base + directions * (directions.transpose() * (p - base));
}

double AffineSubspace::distance(const RealVector& p) const {
  return (p - project(p)).norm();
}

bool AffineSubspace::contains_point(const RealVector& p, double tol) const {
  return distance(p) <= tol * (1.0 + p.norm() + base.norm());
}

bool AffineSubspace::contains_subspace(const AffineSubspace& other,
                                       double tol) const {
  if (!contains_point(other.base, tol)) return false;
  const RealMatrix residue =
      other.directions -
      directions * (directions.transpose() * other.directions);
  return residue.norm() <= tol * (1.0 + static_cast<double>(other.dim()));
}

Intersection intersect(const AffineSubspace& l1, const AffineSubspace& l2,
                       double tol) {
  l1.validate();
  l2.validate();
  if (l1.ambient_dim() != l2.ambient_dim()) {
    throw InputError("intersect: ambient dimensions differ");
  }
  const int d1 = l1.dim(), d2 = l2.dim();
  RealMatrix a(l1.ambient_dim(), d1 + d2);
  a.leftCols(d1) = l1.directions;
  a.rightCols(d2) = -l2.directions;
  const RealVector rhs = l2.base - l1.base;

  Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const RealVector sol = svd.solve(rhs);
  const double residual = (a * sol - rhs).norm();
  Intersection out;
  if (residual > tol * (1.0 + l1.base.norm() + l2.base.norm())) {
    return out;  // Empty
  }
  out.point = l1.base + l1.directions * sol.head(d1);

  // Common directions: kernel vectors (u; v) of [D1, -D2] give D1 u = D2 v.
  const RealVector sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  std::vector<int> kernel_cols;
  for (int i = 0; i < svd.matrixV().cols(); ++i) {
    const double s = i < sv.size() ? sv(i) : 0.0;
    if (s <= 1e-10 * std::max(smax, 1.0)) kernel_cols.push_back(i);
  }
  RealMatrix raw(l1.ambient_dim(), static_cast<int>(kernel_cols.size()));
  int c = 0;
  for (int i : kernel_cols) {
    raw.col(c++) = l1.directions * svd.matrixV().col(i).head(d1);
  }
  RealMatrix dirs = orthonormal_span(raw);
  if (dirs.cols() == 0) {
    out.kind = Intersection::Kind::Point;
  } else {
    out.kind = Intersection::Kind::Flat;
    out.directions = dirs;
  }
  return out;
}

AngleResult subspace_angle(const AffineSubspace& l1,
                           const AffineSubspace& l2) {
  AngleResult res;
  res.intersection = intersect(l1, l2);
  if (res.intersection.kind == Intersection::Kind::Empty) {
    throw InputError("subspace_angle: subspaces do not intersect");
  }
  if (l1.contains_subspace(l2) || l2.contains_subspace(l1)) {
    res.containment = true;
    res.alpha = 0.0;
    return res;
  }
  const RealMatrix quot = res.intersection.kind == Intersection::Kind::Flat
                              ? res.intersection.directions
                              : RealMatrix(l1.ambient_dim(), 0);
  const RealMatrix q1 = quotient_frame(l1.directions, quot);
  const RealMatrix q2 = quotient_frame(l2.directions, quot);
  if (q1.cols() == 0 || q2.cols() == 0) {
    res.containment = true;
    res.alpha = 0.0;
    return res;
  }
  Eigen::JacobiSVD<RealMatrix> svd(q1.transpose() * q2);
  const double c = std::clamp(svd.singularValues()(0), 0.0, 1.0);
  res.alpha = std::acos(c);
  return res;
}

double angle_sup_oracle(const AffineSubspace& l1, const AffineSubspace& l2,
                        int samples, std::uint64_t seed) {
  const Intersection inter = intersect(l1, l2);
  if (inter.kind == Intersection::Kind::Empty) {
    throw InputError("angle_sup_oracle: subspaces do not intersect");
  }
  const RealMatrix quot = inter.kind == Intersection::Kind::Flat
                              ? inter.directions
                              : RealMatrix(l1.ambient_dim(), 0);
  const RealMatrix q1 = quotient_frame(l1.directions, quot);
  const RealMatrix q2 = quotient_frame(l2.directions, quot);
  if (q1.cols() == 0 || q2.cols() == 0) return 0.0;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto rand_unit = [&](int d) {
    RealVector v(d);
    do {
      for (int i = 0; i < d; ++i) v(i) = g(rng);
    } while (v.norm() < 1e-12);
    return RealVector(v / v.norm());
  };
  auto ascend = [&](RealVector u, RealVector v) {
    // Alternating maximization of <Q1 u, Q2 v> over unit u, v.
    double best = 0.0;
    for (int it = 0; it < 80; ++it) {
      RealVector pu = q1.transpose() * (q2 * v);
      if (pu.norm() < 1e-15) break;
      u = pu / pu.norm();
      RealVector pv = q2.transpose() * (q1 * u);
      if (pv.norm() < 1e-15) break;
      v = pv / pv.norm();
      const double c = (q1 * u).dot(q2 * v);
      if (std::abs(c - best) < 1e-14) {
        best = c;
        break;
      }
      best = c;
    }
    return best;
  };

  double best_cos = 0.0;
  // Keep the strongest random starts and polish each.
  std::vector<std::pair<double, std::pair<RealVector, RealVector>>> starts;
  for (int i = 0; i < samples; ++i) {
    RealVector u = rand_unit(static_cast<int>(q1.cols()));
    RealVector v = rand_unit(static_cast<int>(q2.cols()));
    double c = std::abs((q1 * u).dot(q2 * v));
    starts.push_back({c, {u, v}});
  }
  std::partial_sort(starts.begin(),
                    starts.begin() + std::min<size_t>(8, starts.size()),
                    starts.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  for (size_t i = 0; i < std::min<size_t>(8, starts.size()); ++i) {
    best_cos = std::max(best_cos,
                        ascend(starts[i].second.first, starts[i].second.second));
  }
  return std::acos(std::clamp(best_cos, 0.0, 1.0));
}

void Arrangement::validate(double tol) const {
  if (subspaces.empty()) {
    throw InputError("arrangement: needs at least one subspace");
  }
  for (const auto& l : subspaces) l.validate();
  for (size_t i = 0; i < subspaces.size(); ++i) {
    for (size_t j = 0; j < subspaces.size(); ++j) {
      if (i == j) continue;
      if (subspaces[j].contains_subspace(subspaces[i], tol)) {
        throw InputError("arrangement: subspace " + std::to_string(i) +
                         " is contained in subspace " + std::to_string(j));
      }
    }
  }
}

double arrangement_constant(const Arrangement& arr) {
  arr.validate();
  double constant = 1.0;
  for (size_t i = 0; i < arr.subspaces.size(); ++i) {
    for (size_t j = i + 1; j < arr.subspaces.size(); ++j) {
      AngleResult res;
      try {
        res = subspace_angle(arr.subspaces[i], arr.subspaces[j]);
      } catch (const InputError&) {
        throw InputError("arrangement_constant: subspaces " +
                         std::to_string(i) + " and " + std::to_string(j) +
                         " do not intersect");
      }
      if (res.containment) {
        throw InputError("arrangement_constant: containment between " +
                         std::to_string(i) + " and " + std::to_string(j));
      }
      constant = std::max(constant, 1.0 / std::sin(res.alpha / 2.0));
    }
  }
  return constant;
}

PiecewisePath arrangement_path(const RealVector& x, const RealVector& y,
                               const Arrangement& arr, double tol) {
  arr.validate();
  std::vector<size_t> on_x, on_y;
  for (size_t i = 0; i < arr.subspaces.size(); ++i) {
    if (arr.subspaces[i].contains_point(x, tol)) on_x.push_back(i);
    if (arr.subspaces[i].contains_point(y, tol)) on_y.push_back(i);
  }
  if (on_x.empty() || on_y.empty()) {
    throw InputError("arrangement_path: endpoint not on any subspace");
  }
  PiecewisePath path;
  for (size_t i : on_x) {
    for (size_t j : on_y) {
      if (i == j) {  // same subspace: straight segment, ratio 1
        path.segments = {std::make_shared<LinearSegment>(as_point(x),
                                                         as_point(y))};
        return path;
      }
    }
  }

  double best_len = std::numeric_limits<double>::infinity();
  RealVector best_z;
  for (size_t i : on_x) {
    for (size_t j : on_y) {
      const Intersection inter = intersect(arr.subspaces[i], arr.subspaces[j],
                                           tol);
      if (inter.kind == Intersection::Kind::Empty) continue;
      RealVector px = inter.point, py = inter.point;
      if (inter.kind == Intersection::Kind::Flat) {
        const RealMatrix& nd = inter.directions;
        px = inter.point + nd * (nd.transpose() * (x - inter.point));
        py = inter.point + nd * (nd.transpose() * (y - inter.point));
      }
      const double a = (x - px).norm();
      const double b = (y - py).norm();
      const double ell = (py - px).norm();
      RealVector z;
      if (a + b > 1e-15 * (1.0 + x.norm() + y.norm())) {
        // Reflection principle: the optimal junction splits px -> py in
        // the ratio of the perpendicular offsets.
        z = px + (a / (a + b)) * (py - px);
      } else if (ell > 0) {
        // Whole segment is optimal; least-norm tie-break.
        const double t =
            std::clamp((-px).dot(py - px) / (ell * ell), 0.0, 1.0);
        z = px + t * (py - px);
      } else {
        z = px;
      }
      const double len = (x - z).norm() + (z - y).norm();
      if (len < best_len) {
        best_len = len;
        best_z = z;
      }
    }
  }
  if (!std::isfinite(best_len)) {
    throw InputError("arrangement_path: no intersecting subspace pair");
  }
  path.segments = {std::make_shared<LinearSegment>(as_point(x),
                                                   as_point(best_z)),
                   std::make_shared<LinearSegment>(as_point(best_z),
                                                   as_point(y))};
  return path;
}

Arrangement triangular_det0(int m) {
  if (m < 2) throw InputError("triangular_det0: m must be at least 2");
  const int n = m * (m + 1) / 2;  // upper-triangular coordinates, row-major
  Arrangement arr;
  int diag_index = 0;
  for (int i = 0; i < m; ++i) {
    AffineSubspace h;
    h.base = RealVector::Zero(n);
    h.directions = RealMatrix::Zero(n, n - 1);
    int c = 0;
    for (int k = 0; k < n; ++k) {
      if (k == diag_index) continue;
      h.directions(k, c++) = 1.0;
    }
    arr.subspaces.push_back(std::move(h));
    diag_index += m - i;  // next diagonal entry in row-major upper storage
  }
  return arr;
}

}  // namespace stratapath
