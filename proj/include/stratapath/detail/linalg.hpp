#pragma once

#include <vector>

#include "stratapath/types.hpp"

namespace stratapath::detail {

/// Skew-symmetric G with exp(G) == W for W in SO(n). Eigenvalue -1
/// pairs become rotation-by-pi planes.
RealMatrix so_log(const RealMatrix& w);

/// Anti-Hermitian G with exp(G) == U for unitary U.
Matrix unitary_log(const Matrix& u);

/// Adjugate via SVD; stable near singular matrices.
Matrix adjugate(const Matrix& a);

/// Dense polynomial with complex coefficients, c[0] + c[1] t + ...
struct Poly {
  Eigen::VectorXcd coeff;

  Complex eval(double t) const;
  Complex eval(Complex t) const;
  Poly derivative() const;
  int degree() const;
  /// Roots via the companion matrix of the trimmed polynomial.
  std::vector<Complex> roots() const;
  /// Real roots strictly inside (lo, hi), deduplicated and sorted.
  std::vector<double> real_roots_in(double lo, double hi,
                                    double imag_tol = 1e-7) const;
};

/// det((1-t) B + t A) as a polynomial in t, by interpolation.
Poly pencil_det_poly(const Matrix& a, const Matrix& b);

/// Smooth bump: 0 outside [center-w, center+w], 1 at the center.
double bump(double t, double center, double half_width);

}  // namespace stratapath::detail
