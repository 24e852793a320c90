#pragma once

#include <cstdint>
#include <vector>

#include "stratapath/pathforge_types.hpp"
#include "stratapath/types.hpp"

namespace stratapath {

/// Affine subspace base + span(directions) of R^N, with an orthonormal
/// direction frame.
struct AffineSubspace {
  RealVector base;
  RealMatrix directions;  // N x dim, orthonormal columns, dim >= 1

  int ambient_dim() const { return static_cast<int>(base.size()); }
  int dim() const { return static_cast<int>(directions.cols()); }
  void validate(double frame_tol = 1e-10) const;

  /// Orthogonal projection of p onto the subspace.
  RealVector project(const RealVector& p) const;
  double distance(const RealVector& p) const;
  bool contains_point(const RealVector& p, double tol = 1e-9) const;
  bool contains_subspace(const AffineSubspace& other, double tol = 1e-9) const;
};

/// Affine intersection; empty is a value, a point is a dim-0 result.
struct Intersection {
  enum class Kind { Empty, Point, Flat };
  Kind kind = Kind::Empty;
  RealVector point;         // a point of the intersection (Point and Flat)
  RealMatrix directions;    // orthonormal, Flat only (N x dim)

  int dim() const {
    return kind == Kind::Flat ? static_cast<int>(directions.cols()) : 0;
  }
};

Intersection intersect(const AffineSubspace& l1, const AffineSubspace& l2,
                       double tol = 1e-9);

/// Angle between intersecting affine subspaces: quotient by the
/// intersection directions, then the smallest principal angle between the
/// reduced direction spaces. Containment is the distinguished alpha = 0
/// case.
struct AngleResult {
  double alpha = 0.0;  // radians in [0, pi/2]
  Intersection intersection;
  bool containment = false;
};

AngleResult subspace_angle(const AffineSubspace& l1, const AffineSubspace& l2);

/// Independent check of the angle: the sup-of-cosines definition,
/// estimated by random unit pairs refined with alternating-projection
/// ascent. Used as the acceptance oracle for subspace_angle.
double angle_sup_oracle(const AffineSubspace& l1, const AffineSubspace& l2,
                        int samples = 20000, std::uint64_t seed = 0);

/// A finite union of affine subspaces, pairwise intersecting, none
/// contained in another.
struct Arrangement {
  std::vector<AffineSubspace> subspaces;
  void validate(double tol = 1e-9) const;
};

/// sup over pairs of 1 / sin(alpha/2); 1 for a single subspace.
double arrangement_constant(const Arrangement& arr);

/// Two straight legs x -> z -> y through the optimal junction z on an
/// intersection of subspaces containing x resp. y. Points are embedded as
/// N x 1 real matrices.
PiecewisePath arrangement_path(const RealVector& x, const RealVector& y,
                               const Arrangement& arr, double tol = 1e-9);

/// The m diagonal hyperplanes {a_ii = 0} of the upper-triangular m x m
/// matrix space, coordinatized by rows (a_11, a_12, ..., a_mm); pairwise
/// orthogonal, constant sqrt(2).
Arrangement triangular_det0(int m);

}  // namespace stratapath
