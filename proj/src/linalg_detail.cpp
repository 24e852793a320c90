#include "stratapath/detail/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace stratapath::detail {

RealMatrix so_log(const RealMatrix& w) {
  const int n = static_cast<int>(w.rows());
  Eigen::RealSchur<RealMatrix> schur(w);
  if (schur.info() != Eigen::Success) {
    throw NumericalError("so_log: Schur decomposition failed");
  }
  const RealMatrix q = schur.matrixU();
  const RealMatrix t = schur.matrixT();

  RealMatrix gen = RealMatrix::Zero(n, n);
  std::vector<int> minus_ones;
  int i = 0;
  while (i < n) {
    const bool has_block = (i + 1 < n) && std::abs(t(i + 1, i)) > 1e-10;
    if (has_block) {
      const double theta = std::atan2(t(i + 1, i), t(i, i));
      gen(i, i + 1) = -theta;
      gen(i + 1, i) = theta;
      i += 2;
    } else {
      if (t(i, i) < 0) minus_ones.push_back(i);
      ++i;
    }
  }
  if (minus_ones.size() % 2 != 0) {
    throw NumericalError("so_log: determinant is not +1");
  }
  for (size_t k = 0; k + 1 < minus_ones.size(); k += 2) {
    const int p = minus_ones[k];
    const int r = minus_ones[k + 1];
    gen(p, r) = -std::numbers::pi;
    gen(r, p) = std::numbers::pi;
  }
  return q * gen * q.transpose();
}

Matrix unitary_log(const Matrix& u) {
  Eigen::ComplexSchur<Matrix> schur(u);
  if (schur.info() != Eigen::Success) {
    throw NumericalError("unitary_log: Schur decomposition failed");
  }
  const Matrix q = schur.matrixU();
  const Matrix t = schur.matrixT();
  const int n = static_cast<int>(u.rows());
  Matrix gen = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    gen(i, i) = Complex(0.0, std::arg(t(i, i)));
  }
  return q * gen * q.adjoint();
}

Matrix adjugate(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 1) return Matrix::Ones(1, 1);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  // adj(A) = det(U V*) * V adj(Sigma) U*.
  const Complex phase = (svd.matrixU() * svd.matrixV().adjoint())
                            .determinant();
  RealVector prods(n);
  for (int i = 0; i < n; ++i) {
    double p = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) p *= sv(j);
    }
    prods(i) = p;
  }
  return phase * svd.matrixV() * prods.asDiagonal() * svd.matrixU().adjoint();
}

Complex Poly::eval(double t) const { return eval(Complex(t, 0.0)); }

Complex Poly::eval(Complex t) const {
  Complex acc(0.0, 0.0);
  for (int i = static_cast<int>(coeff.size()) - 1; i >= 0; --i) {
    acc = acc * t + coeff(i);
  }
  return acc;
}

Poly Poly::derivative() const {
  const int n = static_cast<int>(coeff.size());
  if (n <= 1) return Poly{Eigen::VectorXcd::Zero(1)};
  Eigen::VectorXcd d(n - 1);
  for (int i = 1; i < n; ++i) d(i - 1) = static_cast<double>(i) * coeff(i);
  return Poly{d};
}

int Poly::degree() const {
  const double scale = coeff.size() ? coeff.cwiseAbs().maxCoeff() : 0.0;
  for (int i = static_cast<int>(coeff.size()) - 1; i >= 0; --i) {
    if (std::abs(coeff(i)) > 1e-12 * (scale > 0 ? scale : 1.0)) return i;
  }
  return 0;
}

std::vector<Complex> Poly::roots() const {
  const int d = degree();
  if (d == 0) return {};
  Matrix companion = Matrix::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -coeff(i) / coeff(d);
  Eigen::ComplexEigenSolver<Matrix> es(companion.transpose().eval());
  std::vector<Complex> out;
  for (int i = 0; i < d; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

std::vector<double> Poly::real_roots_in(double lo, double hi,
                                        double imag_tol) const {
  std::vector<double> out;
  for (const Complex& z : roots()) {
    if (std::abs(z.imag()) <= imag_tol && z.real() > lo && z.real() < hi) {
      out.push_back(z.real());
    }
  }
  std::sort(out.begin(), out.end());
  // Merge near-coincident roots.
  std::vector<double> merged;
  for (double r : out) {
    if (merged.empty() || r - merged.back() > 1e-9) merged.push_back(r);
  }
  return merged;
}

Poly pencil_det_poly(const Matrix& a, const Matrix& b) {
  const int n = static_cast<int>(a.rows());
  const int npts = n + 1;
  // Chebyshev nodes on [0,1]; Vandermonde solve.
  Eigen::VectorXcd vals(npts);
  Eigen::VectorXd nodes(npts);
  for (int i = 0; i < npts; ++i) {
    nodes(i) = 0.5 + 0.5 * std::cos(std::numbers::pi * (i + 0.5) / npts);
    const Matrix m = nodes(i) * a + (1.0 - nodes(i)) * b;
    vals(i) = m.determinant();
  }
  Matrix vand(npts, npts);
  for (int i = 0; i < npts; ++i) {
    double p = 1.0;
    for (int j = 0; j < npts; ++j) {
      vand(i, j) = p;
      p *= nodes(i);
    }
  }
  Eigen::VectorXcd c = vand.colPivHouseholderQr().solve(vals);
  return Poly{c};
}

double bump(double t, double center, double half_width) {
  const double u = (t - center) / half_width;
  if (u <= -1.0 || u >= 1.0) return 0.0;
  // C^1 smoothstep plateau-free bump.
  const double s = 1.0 - u * u;
  return s * s;
}

}  // namespace stratapath::detail
