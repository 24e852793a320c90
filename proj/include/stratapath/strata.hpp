#pragma once

#include <vector>

#include "stratapath/pathforge_types.hpp"
#include "stratapath/types.hpp"

namespace stratapath {

/// Connected-component label of a point inside a real or complex rank
/// stratum.
struct ComponentLabel {
  enum class Kind { Connected, DetSign, Signature, PfaffianSign };
  Kind kind = Kind::Connected;
  int det_sign = 0;       // +1 / -1, DetSign and PfaffianSign
  int r_plus = 0;         // Signature
  int r_minus = 0;        // Signature

  static ComponentLabel connected() { return {}; }
  static ComponentLabel det(int sign) {
    return {Kind::DetSign, sign, 0, 0};
  }
  static ComponentLabel signature(int rp, int rm) {
    return {Kind::Signature, 0, rp, rm};
  }
  static ComponentLabel pfaffian_sign(int sign) {
    return {Kind::PfaffianSign, sign, 0, 0};
  }

  bool operator==(const ComponentLabel&) const = default;
  std::string to_string() const;
};

/// Pfaffian of a real skew-symmetric matrix of even size. Householder
/// tridiagonalization with exact sign tracking through the congruences.
double pfaffian(const RealMatrix& a);
double pfaffian(const MatrixPoint& a);

/// Component census of section 3.2: det sign for full-rank real square
/// matrices, signature for real symmetric, Pfaffian sign for full-rank
/// real skew, connected otherwise (and always over C).
ComponentLabel classify_component(const MatrixPoint& a, const StratumSpec& s,
                                  double rank_tol = 1e-9);

bool same_component(const MatrixPoint& a, const MatrixPoint& b,
                    const StratumSpec& s, double rank_tol = 1e-9);

/// Orthonormal basis of the tangent space to the rank stratum at a,
/// restricted to the structured ambient when a is symmetric or skew.
struct TangentSpace {
  MatrixPoint base;
  std::vector<MatrixPoint> basis;
  int dimension() const { return static_cast<int>(basis.size()); }
};

TangentSpace tangent_space(const MatrixPoint& a, int s_rank,
                           double rank_tol = 1e-9);

/// Expected tangent dimension over the field, by structure.
int tangent_dimension(Structure space, int m, int n, int s);

/// True iff span(v_basis) + T_a X_rank(a) equals the ambient space.
/// Tested as the rank of the kernel-projected map on v_basis.
bool transversal_at(const MatrixPoint& a,
                    const std::vector<MatrixPoint>& v_basis,
                    double rank_tol = 1e-9);

/// Path inside X_r from p to the special pivot point
/// delta * I_r + 0 (signature-matched for symmetric, Pfaffian-matched
/// for full-rank skew, det-matched for full-rank real square).
/// Requires rank(p) == s.r and |p| <= delta.
PiecewisePath gauss_path_to_pivot(const MatrixPoint& p, const StratumSpec& s,
                                  double delta, double rank_tol = 1e-9);

}  // namespace stratapath
