#pragma once

#include "stratapath/types.hpp"

namespace stratapath {

/// Outer metric d_out: Frobenius norm of a - b.
double frobenius_dist(const MatrixPoint& a, const MatrixPoint& b);

/// Count of singular values above rank_tol * sigma_max. Zero matrix -> 0.
int numerical_rank(const MatrixPoint& a, double rank_tol = 1e-9);
int numerical_rank(const Matrix& a, double rank_tol = 1e-9);

/// Singular values, descending.
RealVector singular_values(const Matrix& a);

/// Unitary/orthogonal frame such that apply_frame(frame, a) is supported
/// in the top-left r0 x r0 block, r0 = numerical_rank(a). Structured real
/// inputs get a congruence frame preserving the structure.
/// Requires numerical_rank(a) <= r.
BlockFrame block_reduce(const MatrixPoint& a, int r, double rank_tol = 1e-9);

MatrixPoint apply_frame(const BlockFrame& f, const MatrixPoint& x);
MatrixPoint inverse_frame(const BlockFrame& f, const MatrixPoint& x);

/// Singular-value bounds of A -> c_left * A * c_right on Mat_{m x n}.
ScaleBounds scale_bounds(const Matrix& c_left, const Matrix& c_right);

/// Frobenius-nearest matrix of rank <= r. Eigenvalue truncation for
/// symmetric, paired-block truncation for skew. Idempotent.
MatrixPoint truncate_to_rank(const MatrixPoint& a, int r);

}  // namespace stratapath
