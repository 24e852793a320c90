#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "stratapath/detail/linalg.hpp"
#include "stratapath/matcore.hpp"
#include "stratapath/pathforge.hpp"
#include "stratapath/strata.hpp"

// In-stratum paths (the hard half of the path constructors). The overall
// shape follows the closure construction: reduce to square full-rank
// blocks, degenerate b's off-blocks with a BlockScaling leg, then connect
// the square blocks along the straight pencil. The pencil may hit (or
// approach) the rank-drop locus; there the literal "epsilon block" of the
// textbook construction vanishes together with the driving determinant,
// which would leave the stratum at isolated points. We instead deform the
// pencil spectrally: the offending smallest spectral values are clamped to
// magnitude >= delta with the sign (det sign / signature slot / Pfaffian
// orientation) prescribed by the connected component. The clamp is the
// identity wherever the pencil is healthy, so the corrected segment joins
// the straight legs exactly, and it is a pure function of t (no state),
// which keeps construction deterministic and certifiable.

namespace stratapath {

namespace {

using detail::Poly;

// ---- clamp kernels -------------------------------------------------------

// Real general block, target det sign s. margin = s * sign(det) * sigma_min.
struct GlClamp {
  int sign;
  double delta;

  double margin(const RealMatrix& p) const {
    Eigen::JacobiSVD<RealMatrix> svd(p);
    const double smin = svd.singularValues().minCoeff();
    const double d = p.determinant();
    const int ds = d >= 0 ? 1 : -1;
    return sign * ds * smin;
  }

  RealMatrix apply(const RealMatrix& p) const {
    const int k = static_cast<int>(p.rows());
    Eigen::JacobiSVD<RealMatrix> svd(p,
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
    RealVector sv = svd.singularValues();
    const double eps =
        svd.matrixU().determinant() * svd.matrixV().determinant();
    const double nu = eps * sv(k - 1);  // signed smallest
    if (sign * nu >= delta) return p;
    for (int i = 0; i + 1 < k; ++i) sv(i) = std::max(sv(i), delta);
    sv(k - 1) = eps * sign * delta;  // signed value becomes sign * delta
    return svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
  }
};

// Complex general block: only the singular-value floor matters.
struct GlcClamp {
  double delta;

  double margin(const Matrix& p) const {
    return singular_values(p).minCoeff();
  }

  Matrix apply(const Matrix& p) const {
    Eigen::JacobiSVD<Matrix> svd(p, Eigen::ComputeFullU | Eigen::ComputeFullV);
    RealVector sv = svd.singularValues();
    if (sv.minCoeff() >= delta) return p;
    for (int i = 0; i < sv.size(); ++i) sv(i) = std::max(sv(i), delta);
    return svd.matrixU() * sv.asDiagonal().toDenseMatrix().cast<Complex>() *
           svd.matrixV().adjoint();
  }
};

// Symmetric block with target signature (cplus, cminus): the lowest cminus
// eigenvalues are held <= -delta, the top cplus held >= +delta.
struct SymClamp {
  int cplus;
  int cminus;
  double delta;

  double margin(const RealMatrix& p) const {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(p);
    const RealVector ev = es.eigenvalues();  // ascending
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cminus; ++i) m = std::min(m, -ev(i));
    for (int i = cminus; i < ev.size(); ++i) m = std::min(m, ev(i));
    return m;
  }

  RealMatrix apply(const RealMatrix& p) const {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(p);
    RealVector ev = es.eigenvalues();
    bool touched = false;
    for (int i = 0; i < cminus; ++i) {
      if (ev(i) > -delta) { ev(i) = -delta; touched = true; }
    }
    for (int i = cminus; i < ev.size(); ++i) {
      if (ev(i) < delta) { ev(i) = delta; touched = true; }
    }
    if (!touched) return p;
    RealMatrix out =
        es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    return 0.5 * (out + out.transpose());
  }
};

// Skew block, target Pfaffian sign s (ignored when sign == 0). Spectral
// pairs are lifted to >= delta; the smallest pair carries the sign via its
// oriented plane form omega = x y^T - y x^T, along which Pf is linear.
struct SkewClamp {
  int sign;  // 0: only the floor is enforced
  double delta;

  struct Pairs {
    std::vector<double> lambda;          // ascending, >= 0
    std::vector<RealMatrix> omega;       // unit-pair plane forms
  };

  static Pairs decompose(const RealMatrix& p) {
    const int n = static_cast<int>(p.rows());
    Matrix ham = Complex(0, 1) * p.cast<Complex>();
    Eigen::SelfAdjointEigenSolver<Matrix> es(ham);
    Pairs out;
    for (int i = 0; i < n; ++i) {
      const double lam = es.eigenvalues()(i);
      if (lam <= 0) continue;  // take one of each +-pair; zero never occurs
      const Vector w = es.eigenvectors().col(i);
      RealVector x = std::sqrt(2.0) * w.real();
      RealVector y = std::sqrt(2.0) * w.imag();
      const double nx = x.norm(), ny = y.norm();
      if (nx < 1e-12 || ny < 1e-12) {
        throw NumericalError("skew clamp: degenerate spectral pair");
      }
      x /= nx;
      y /= ny;
      out.lambda.push_back(lam);
      out.omega.push_back(x * y.transpose() - y * x.transpose());
    }
    // SelfAdjointEigenSolver sorts ascending, so positive lambdas ascend
    // but include only lam > 0; n even and full pairing assumed upstream,
    // rank-deficient pairs handled by treating missing pairs as lambda=0.
    return out;
  }

  double margin(const RealMatrix& p) const {
    const int npairs = static_cast<int>(p.rows()) / 2;
    Pairs pr = decompose(p);
    double m = std::numeric_limits<double>::infinity();
    if (static_cast<int>(pr.lambda.size()) < npairs) {
      m = 0.0;  // a pair sits numerically at zero
    }
    for (double lam : pr.lambda) m = std::min(m, lam);
    if (sign != 0 && sign * pfaffian(p) <= 0) {
      return -std::abs(m);  // prescribed orientation violated
    }
    return m;
  }

  RealMatrix apply(const RealMatrix& p) const {
    const int npairs = static_cast<int>(p.rows()) / 2;
    Pairs pr = decompose(p);
    if (static_cast<int>(pr.lambda.size()) != npairs) {
      throw NumericalError("skew clamp: pair at exact zero, retry route");
    }
    RealMatrix out = p;
    bool need_sign_fix = false;
    if (sign != 0) {
      const double pf = pfaffian(p);
      need_sign_fix = (sign * pf < 0);
    }
    for (int i = 0; i < npairs; ++i) {
      const double lam = pr.lambda[i];
      const bool smallest = (i == 0);
      if (smallest && need_sign_fix) {
        // Pf(p + c*omega) is affine in c; flip the smallest pair through
        // the orientation that restores the prescribed sign.
        const double pf0 = pfaffian(out);
        const double tau = std::max(1.0, out.norm());
        const double beta =
            (pfaffian(RealMatrix(out + tau * pr.omega[i])) - pf0) / tau;
        if (std::abs(beta) < 1e-14 * (1.0 + std::abs(pf0))) {
          throw NumericalError("skew clamp: Pfaffian direction degenerate");
        }
        const double lraw = 0.5 * (out.cwiseProduct(pr.omega[i])).sum();
        const double target = (sign * beta > 0 ? 1.0 : -1.0) * delta;
        out += (target - lraw) * pr.omega[i];
      } else if (lam < delta) {
        const double lraw = 0.5 * (out.cwiseProduct(pr.omega[i])).sum();
        const double target = (lraw >= 0 ? 1.0 : -1.0) * delta;
        out += (target - lraw) * pr.omega[i];
      }
    }
    out = 0.5 * (out - out.transpose());
    out.diagonal().setZero();
    return out;
  }
};

// ---- square-block connector ----------------------------------------------

struct BlockSpace {
  Structure space;
  Field field;
  ComponentLabel label;  // component of the square blocks
};

// Margin/clamp dispatch over the block value (stored complex; real blocks
// keep zero imaginary part).
struct ClampDispatch {
  BlockSpace bs;
  double delta;

  double margin(const Matrix& p) const {
    switch (bs.space) {
      case Structure::General:
        if (bs.field == Field::Complex) return GlcClamp{delta}.margin(p);
        return GlClamp{gl_sign(p), delta}.margin(p.real());
      case Structure::Symmetric:
        return SymClamp{bs.label.r_plus, bs.label.r_minus, delta}.margin(
            p.real());
      case Structure::Skew: {
        const int s = bs.label.kind == ComponentLabel::Kind::PfaffianSign
                          ? bs.label.det_sign
                          : 0;
        return SkewClamp{s, delta}.margin(p.real());
      }
    }
    return 0.0;
  }

  // For real general blocks without a det-sign label (a connected
  // stratum), the current sign of the pencil is kept: only the floor is
  // enforced.
  int gl_sign(const Matrix& p) const {
    if (bs.label.kind == ComponentLabel::Kind::DetSign) {
      return bs.label.det_sign;
    }
    return p.real().determinant() >= 0 ? 1 : -1;
  }

  Matrix apply(const Matrix& p) const {
    switch (bs.space) {
      case Structure::General:
        if (bs.field == Field::Complex) return GlcClamp{delta}.apply(p);
        return GlClamp{gl_sign(p), delta}.apply(p.real()).cast<Complex>();
      case Structure::Symmetric:
        return SymClamp{bs.label.r_plus, bs.label.r_minus, delta}
            .apply(p.real())
            .cast<Complex>();
      case Structure::Skew: {
        const int s = bs.label.kind == ComponentLabel::Kind::PfaffianSign
                          ? bs.label.det_sign
                          : 0;
        return SkewClamp{s, delta}.apply(p.real()).cast<Complex>();
      }
    }
    return p;
  }
};

Matrix embed_block(const Matrix& blk, int m, int n) {
  Matrix full = Matrix::Zero(m, n);
  full.topLeftCorner(blk.rows(), blk.cols()) = blk;
  return full;
}

MatrixPoint unframe_block(const BlockFrame& f, const Matrix& blk,
                          const MatrixPoint& proto) {
  Matrix y = f.inverse_raw(
      embed_block(blk, static_cast<int>(f.left.rows()),
                  static_cast<int>(f.right.rows())));
  if (proto.structure() != Structure::General) {
    y = enforce_structure(y, proto.structure()).real().cast<Complex>();
  } else if (proto.field() == Field::Real) {
    y = y.real().cast<Complex>();
  }
  return proto.with_entries(std::move(y));
}

// Pencil roots of the determinant driving the epsilon corrections; Pf
// roots for skew blocks (det has them with even multiplicity).
std::vector<double> pencil_roots(const Matrix& ablk, const Matrix& bblk,
                                 Structure space) {
  if (space == Structure::Skew) {
    const int k = static_cast<int>(ablk.rows());
    const int deg = k / 2;
    Eigen::VectorXcd vals(deg + 1);
    Eigen::VectorXd nodes(deg + 1);
    for (int i = 0; i <= deg; ++i) {
      nodes(i) =
          0.5 + 0.5 * std::cos(std::numbers::pi * (i + 0.5) / (deg + 1));
      const RealMatrix p =
          (nodes(i) * ablk + (1.0 - nodes(i)) * bblk).real();
      vals(i) = pfaffian(RealMatrix(0.5 * (p - p.transpose())));
    }
    Matrix vand(deg + 1, deg + 1);
    for (int i = 0; i <= deg; ++i) {
      double pw = 1.0;
      for (int j = 0; j <= deg; ++j) {
        vand(i, j) = pw;
        pw *= nodes(i);
      }
    }
    Poly pf_poly{vand.colPivHouseholderQr().solve(vals)};
    return pf_poly.real_roots_in(0.0, 1.0);
  }
  return detail::pencil_det_poly(ablk, bblk).real_roots_in(0.0, 1.0);
}

// Connects square full-rank blocks bblk -> ablk along the straight pencil,
// with a clamped middle segment where the pencil loses its margin.
void connect_square(std::vector<SegmentPtr>& out, const Matrix& ablk,
                    const Matrix& bblk, const BlockFrame& f,
                    const MatrixPoint& proto, const BlockSpace& bs,
                    double eps0) {
  auto pencil = [ablk, bblk](double t) -> Matrix {
    return (1.0 - t) * bblk + t * ablk;
  };
  ClampDispatch probe{bs, 0.0};
  const double m0 = probe.margin(bblk);
  const double m1 = probe.margin(ablk);
  if (m0 <= 0 || m1 <= 0) {
    throw NumericalError("stratum connector: endpoint margin not positive");
  }
  const double delta = std::min(eps0, 0.45 * std::min(m0, m1));
  ClampDispatch clamp{bs, delta};

  // Locate the unhealthy parameter window: determinant/Pfaffian roots plus
  // a margin scan (near-touch dips have no real root but still sink the
  // rank floor).
  std::vector<double> bad = pencil_roots(ablk, bblk, bs.space);
  const int grid = 384;
  for (int i = 1; i < grid; ++i) {
    const double t = static_cast<double>(i) / grid;
    if (clamp.margin(pencil(t)) < 1.2 * delta) bad.push_back(t);
  }
  if ((bblk - ablk).norm() == 0.0) {
    out.push_back(std::make_shared<LinearSegment>(
        unframe_block(f, bblk, proto), unframe_block(f, ablk, proto)));
    return;
  }
  if (bad.empty()) {
    out.push_back(std::make_shared<LinearSegment>(
        unframe_block(f, bblk, proto), unframe_block(f, ablk, proto)));
    return;
  }
  double t_lo = *std::min_element(bad.begin(), bad.end()) - 1.5 / grid;
  double t_hi = *std::max_element(bad.begin(), bad.end()) + 1.5 / grid;
  t_lo = std::max(t_lo, 0.0);
  t_hi = std::min(t_hi, 1.0);
  // Back off until the window edges are genuinely healthy (so the clamp is
  // the identity there and junctions are exact).
  while (t_lo > 0.0 && clamp.margin(pencil(t_lo)) < 1.2 * delta) {
    t_lo = std::max(0.0, t_lo - 1.5 / grid);
  }
  while (t_hi < 1.0 && clamp.margin(pencil(t_hi)) < 1.2 * delta) {
    t_hi = std::min(1.0, t_hi + 1.5 / grid);
  }

  const MatrixPoint b_pt = unframe_block(f, bblk, proto);
  const MatrixPoint a_pt = unframe_block(f, ablk, proto);
  const MatrixPoint lo_pt = unframe_block(f, clamp.apply(pencil(t_lo)), proto);
  const MatrixPoint hi_pt = unframe_block(f, clamp.apply(pencil(t_hi)), proto);

  if (t_lo > 0.0) {
    out.push_back(std::make_shared<LinearSegment>(b_pt, lo_pt));
  }
  EpsilonSpec spec;
  spec.eps0 = delta;
  spec.sign_rule = bs.space == Structure::Skew
                       ? SignRule::MatchPfaffianParity
                       : (bs.space == Structure::Symmetric
                              ? SignRule::MatchSignature
                              : SignRule::MatchDetSign);
  const int m = static_cast<int>(f.left.rows());
  const int n = static_cast<int>(f.right.rows());
  auto eval = [pencil, clamp, t_lo, t_hi, m, n](double u) -> Matrix {
    const double t = t_lo + u * (t_hi - t_lo);
    return embed_block(clamp.apply(pencil(t)), m, n);
  };
  out.push_back(std::make_shared<EpsilonCorrectedSegment>(
      f, ablk, bblk, spec, proto, eval));
  if (t_hi < 1.0) {
    out.push_back(std::make_shared<LinearSegment>(hi_pt, a_pt));
  }
}

// ---- generic perturbation + sign connectors -------------------------------

Matrix random_antihermitian(int n, Field field, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix w(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      w(i, j) = field == Field::Complex ? Complex(g(rng), g(rng))
                                        : Complex(g(rng), 0.0);
    }
  }
  Matrix anti = 0.5 * (w - w.adjoint());
  const double nn = anti.norm();
  if (nn > 0) anti /= nn;
  return anti;
}

int det_sign_of(const Matrix& blk, Field field) {
  if (field == Field::Complex) return 0;
  return blk.real().determinant() >= 0 ? 1 : -1;
}

int pf_sign_of(const Matrix& blk) {
  return pfaffian(RealMatrix(blk.real())) >= 0 ? 1 : -1;
}

PiecewisePath build_stratum(const MatrixPoint& a, const MatrixPoint& b,
                            const StratumSpec& s, const PathOptions& opt,
                            const ComponentLabel& label,
                            std::mt19937_64& rng) {
  const int r = s.r;
  PiecewisePath path;
  const double scale = std::max(a.norm(), b.norm());
  const double eps0 = 1e-3 * scale;

  const bool full_square = (r == s.m && r == s.n);

  if (full_square) {
    BlockSpace bs{s.space, s.field, label};
    connect_square(path.segments, a.entries(), b.entries(),
                   BlockFrame::identity(s.m, s.n, s.space != Structure::General),
                   b, bs, eps0);
    return path;
  }

  // Step 1: frame from a, then degenerate b's off-blocks. If the induced
  // leading block of b is (nearly) singular, nudge b by a small generic
  // rotation first (a rank-preserving group move).
  BlockFrame f = block_reduce(a, r, opt.tol.rank_tol);
  f.r0 = r;
  MatrixPoint b_cur = b;
  Matrix framed_b = f.apply_raw(b_cur.entries());
  const double b1_floor = 1e-6 * scale;
  double mag = 1e-6 * scale / std::max(b.norm(), 1e-300);
  for (int attempt = 0; attempt < opt.max_retries; ++attempt) {
    const RealVector sv = singular_values(framed_b.topLeftCorner(r, r));
    if (sv.minCoeff() >= b1_floor * std::pow(0.5, attempt)) break;
    if (attempt + 1 == opt.max_retries) {
      throw NumericalError("stratum_path: leading block stayed singular");
    }
    const Matrix gl = mag * random_antihermitian(s.m, s.field, rng);
    const Matrix gr = s.space == Structure::General
                          ? mag * random_antihermitian(s.n, s.field, rng)
                          : gl.transpose().eval();
    auto rot = std::make_shared<RotationSegment>(
        BlockFrame::identity(s.m, s.n, s.space != Structure::General),
        b_cur.entries(), gl, gr, b_cur);
    b_cur = rot->end();
    path.segments.push_back(std::move(rot));
    framed_b = f.apply_raw(b_cur.entries());
    mag *= 0.5;
  }

  auto scaling = std::make_shared<BlockScalingSegment>(f, framed_b, b_cur,
                                                       /*forward=*/false);
  path.segments.push_back(scaling);

  Matrix b1 = framed_b.topLeftCorner(r, r);
  Matrix a1 = f.apply_raw(a.entries()).topLeftCorner(r, r);
  if (s.space != Structure::General) {
    b1 = enforce_structure(b1, s.space).real().cast<Complex>();
    a1 = enforce_structure(a1, s.space).real().cast<Complex>();
  } else if (s.field == Field::Real) {
    b1 = b1.real().cast<Complex>();
    a1 = a1.real().cast<Complex>();
  }

  // Opposite GL_r / Pfaffian components of the reduced blocks: spin the
  // cheapest spectral direction of b1 through the kernel (a pi-rotation
  // with V(1) = -I on that plane), flipping the block's sign class.
  if (s.field == Field::Real) {
    bool flip = false;
    if (s.space == Structure::General &&
        det_sign_of(a1, s.field) != det_sign_of(b1, s.field)) {
      flip = true;
    }
    if (s.space == Structure::Skew && r < s.n &&
        pf_sign_of(a1) != pf_sign_of(b1)) {
      flip = true;
    }
    if (flip && s.space == Structure::General) {
      Eigen::JacobiSVD<RealMatrix> svd(
          b1.real(), Eigen::ComputeFullU | Eigen::ComputeFullV);
      const bool spare_col = r < s.n;
      Matrix gen_l = Matrix::Zero(s.m, s.m);
      Matrix gen_r = Matrix::Zero(s.n, s.n);
      if (spare_col) {
        RealVector v = RealVector::Zero(s.n);
        v.head(r) = svd.matrixV().col(r - 1);
        RealVector ek = RealVector::Unit(s.n, r);
        const RealMatrix g =
            std::numbers::pi * (v * ek.transpose() - ek * v.transpose());
        gen_r = g.cast<Complex>();
      } else {
        RealVector u = RealVector::Zero(s.m);
        u.head(r) = svd.matrixU().col(r - 1);
        RealVector ek = RealVector::Unit(s.m, r);
        const RealMatrix g =
            std::numbers::pi * (ek * u.transpose() - u * ek.transpose());
        gen_l = g.cast<Complex>();
      }
      // The rotation acts in framed coordinates; conjugate it back.
      auto rot = std::make_shared<RotationSegment>(
          f, embed_block(b1, s.m, s.n), gen_l, gen_r, b_cur);
      path.segments.push_back(rot);
      const Matrix flipped =
          gen_l.exp() * embed_block(b1, s.m, s.n) * gen_r.exp();
      b1 = flipped.topLeftCorner(r, r).real().cast<Complex>();
    } else if (flip) {
      // skew congruence flip: spin the cheapest spectral leg through the
      // kernel column.
      RealVector x = RealVector::Zero(s.n);
      Matrix ham = Complex(0, 1) * b1;
      Eigen::SelfAdjointEigenSolver<Matrix> es(ham);
      int best = -1;
      double bl = 0;
      for (int i = 0; i < r; ++i) {
        const double lam = es.eigenvalues()(i);
        if (lam > 0 && (best < 0 || lam < bl)) {
          best = i;
          bl = lam;
        }
      }
      if (best < 0) throw NumericalError("stratum_path: skew flip degenerate");
      RealVector xr = std::sqrt(2.0) * es.eigenvectors().col(best).real();
      xr.normalize();
      x.head(r) = xr;
      RealVector ek = RealVector::Unit(s.n, r);
      const RealMatrix g =
          std::numbers::pi * (x * ek.transpose() - ek * x.transpose());
      auto rot = std::make_shared<RotationSegment>(
          f, embed_block(b1, s.n, s.n), g.cast<Complex>(),
          g.transpose().cast<Complex>(), b_cur);
      path.segments.push_back(rot);
      const Matrix e = g.cast<Complex>().exp();
      Matrix flipped = e * embed_block(b1, s.n, s.n) * e.transpose();
      b1 = enforce_structure(flipped.topLeftCorner(r, r), Structure::Skew)
               .real()
               .cast<Complex>();
    }
  }

  BlockSpace bs{s.space, s.field, ComponentLabel::connected()};
  if (s.field == Field::Real) {
    switch (s.space) {
      case Structure::General:
        bs.label = ComponentLabel::det(det_sign_of(a1, s.field));
        break;
      case Structure::Symmetric:
        bs.label = label;  // signature carries over to the blocks
        break;
      case Structure::Skew:
        bs.label = ComponentLabel::pfaffian_sign(pf_sign_of(a1));
        break;
    }
  }
  connect_square(path.segments, a1, b1, f, b_cur, bs, eps0);

  // Close the (rank-tolerance-sized) gap between the framed pivot of a and
  // a itself.
  const MatrixPoint tail_from = path.segments.back()->end();
  if (frobenius_dist(tail_from, a) > 0.0) {
    path.segments.push_back(std::make_shared<LinearSegment>(tail_from, a));
  }
  return path;
}

// Build, certify, and on a failed certificate reroute once or twice
// through a generic in-component midpoint (degenerate pencils are
// codimension >= 1, so a nudged midpoint almost surely avoids them).
PiecewisePath connect_certified(const MatrixPoint& a, const MatrixPoint& b,
                                const StratumSpec& s, const PathOptions& opt,
                                const ComponentLabel& label,
                                std::mt19937_64& rng, int depth) {
  PiecewisePath path;
  try {
    path = build_stratum(a, b, s, opt, label, rng);
    path.certificate = certify(path, s, opt.cert_samples, opt.tol);
    if (path.certificate->valid) return path;
  } catch (const NumericalError&) {
    if (depth >= 2) throw;
  }
  if (depth >= 2) return path;  // certificate records the failure

  const double d = frobenius_dist(a, b);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int attempt = 0; attempt < opt.max_retries; ++attempt) {
    Matrix noise(s.m, s.n);
    for (int i = 0; i < s.m; ++i) {
      for (int j = 0; j < s.n; ++j) {
        noise(i, j) = s.field == Field::Complex ? Complex(g(rng), g(rng))
                                                : Complex(g(rng), 0.0);
      }
    }
    if (s.space != Structure::General) {
      noise = enforce_structure(noise, s.space).real().cast<Complex>();
    }
    const double nn = noise.norm();
    if (nn == 0) continue;
    Matrix mid = 0.5 * (a.entries() + b.entries()) + (0.05 * d / nn) * noise;
    MatrixPoint c = truncate_to_rank(a.with_entries(std::move(mid)), s.r);
    if (numerical_rank(c, opt.tol.rank_tol) != s.r) continue;
    try {
      if (classify_component(c, s, opt.tol.rank_tol) != label) continue;
    } catch (const InputError&) {
      continue;
    }
    try {
      PiecewisePath first = connect_certified(c, b, s, opt, label, rng,
                                              depth + 1);
      PiecewisePath second = connect_certified(a, c, s, opt, label, rng,
                                               depth + 1);
      if (!first.certificate || !first.certificate->valid ||
          !second.certificate || !second.certificate->valid) {
        continue;
      }
      PiecewisePath joined;
      joined.segments = first.segments;
      joined.segments.insert(joined.segments.end(), second.segments.begin(),
                             second.segments.end());
      joined.certificate = certify(joined, s, opt.cert_samples, opt.tol);
      if (joined.certificate->valid) return joined;
    } catch (const NumericalError&) {
      continue;
    }
  }
  if (path.segments.empty()) {
    throw NumericalError(
        "stratum_path: rerouting retries exhausted without a certified path");
  }
  return path;  // best effort; certificate records the failure
}

}  // namespace

PiecewisePath stratum_path(const MatrixPoint& a, const MatrixPoint& b,
                           const StratumSpec& s, const PathOptions& opt) {
  s.validate();
  if (!s.admits(a) || !s.admits(b)) {
    throw InputError("stratum_path: endpoint does not match the stratum");
  }
  const int r = s.r;
  if (numerical_rank(a, opt.tol.rank_tol) != r ||
      numerical_rank(b, opt.tol.rank_tol) != r) {
    throw InputError("stratum_path: endpoint rank differs from r");
  }
  if (r == 0 || frobenius_dist(a, b) == 0.0) {
    PiecewisePath path;
    path.segments.push_back(std::make_shared<LinearSegment>(b, a));
    path.certificate = certify(path, s, opt.cert_samples, opt.tol);
    return path;
  }
  const ComponentLabel label = classify_component(a, s, opt.tol.rank_tol);
  if (classify_component(b, s, opt.tol.rank_tol) != label) {
    throw InputError("stratum_path: endpoints lie in different components");
  }
  std::mt19937_64 rng(opt.seed);
  return connect_certified(a, b, s, opt, label, rng, 0);
}

}  // namespace stratapath
