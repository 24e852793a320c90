#include "stratapath/pathforge.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unsupported/Eigen/MatrixFunctions>

#include "stratapath/matcore.hpp"

namespace stratapath {

namespace detail {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 28);
}

double arc_length(const std::function<Matrix(double)>& curve,
                  const std::function<Matrix(double)>& derivative, double tol) {
  std::function<double(double)> speed;
  if (derivative) {
    speed = [&](double t) { return derivative(t).norm(); };
  } else {
    speed = [&](double t) {
      const double h = 1e-6;
      const double lo = std::max(0.0, t - h);
      const double hi = std::min(1.0, t + h);
      return (curve(hi) - curve(lo)).norm() / (hi - lo);
    };
  }
  return adaptive_simpson(speed, 0.0, 1.0, tol);
}

}  // namespace detail

// --------------------------------------------------------------- segments

LinearSegment::LinearSegment(MatrixPoint p, MatrixPoint q)
    : p_(std::move(p)), q_(std::move(q)) {
  if (!p_.same_space(q_)) {
    throw InputError("LinearSegment: endpoints live in different spaces");
  }
  length_ = (q_.entries() - p_.entries()).norm();
}

MatrixPoint LinearSegment::at(double t) const {
  return p_.with_entries((1.0 - t) * p_.entries() + t * q_.entries());
}

namespace {

// Back out of a frame and restore the exact point invariants.
MatrixPoint unframe(const BlockFrame& frame, Matrix framed,
                    const MatrixPoint& proto) {
  Matrix y = frame.inverse_raw(framed);
  if (proto.structure() != Structure::General) {
    y = enforce_structure(y, proto.structure());
    y = y.real().cast<Complex>();
  } else if (proto.field() == Field::Real) {
    y = y.real().cast<Complex>();
  }
  return proto.with_entries(std::move(y));
}

// Closed form of int_0^1 sqrt(c + 4 q t^2) dt.
double block_scaling_length(double c, double q) {
  if (q <= 0.0) return std::sqrt(c);
  if (c <= 0.0) return std::sqrt(q);
  const double sq = std::sqrt(q);
  return 0.5 * std::sqrt(c + 4.0 * q) +
         c / (4.0 * sq) * std::asinh(2.0 * sq / std::sqrt(c));
}

}  // namespace

BlockScalingSegment::BlockScalingSegment(BlockFrame frame, Matrix framed_b,
                                         MatrixPoint proto, bool forward,
                                         Matrix extra)
    : frame_(std::move(frame)), proto_(std::move(proto)), forward_(forward) {
  const int m = static_cast<int>(framed_b.rows());
  const int n = static_cast<int>(framed_b.cols());
  const int r = frame_.r0;
  if (r < 0 || r > std::min(m, n)) {
    throw InputError("BlockScalingSegment: frame split out of range");
  }
  b1_ = framed_b.topLeftCorner(r, r);
  b2_ = framed_b.topRightCorner(r, n - r);
  b3_ = framed_b.bottomLeftCorner(m - r, r);
  b4_ = framed_b.bottomRightCorner(m - r, n - r);
  extra_ = extra.size() ? std::move(extra) : Matrix::Zero(m, n);
  if (extra_.rows() != m || extra_.cols() != n) {
    throw InputError("BlockScalingSegment: extra offset shape mismatch");
  }
  length_ = block_scaling_length(b2_.squaredNorm() + b3_.squaredNorm(),
                                 b4_.squaredNorm());
}

Matrix BlockScalingSegment::assemble(double s) const {
  const int m = static_cast<int>(b1_.rows() + b3_.rows());
  const int n = static_cast<int>(b1_.cols() + b2_.cols());
  const int r = frame_.r0;
  Matrix out(m, n);
  out.topLeftCorner(r, r) = b1_;
  out.topRightCorner(r, n - r) = s * b2_;
  out.bottomLeftCorner(m - r, r) = s * b3_;
  out.bottomRightCorner(m - r, n - r) = (s * s) * b4_;
  return out + extra_;
}

MatrixPoint BlockScalingSegment::at(double t) const {
  return unframe(frame_, assemble(forward_ ? t : 1.0 - t), proto_);
}

EpsilonCorrectedSegment::EpsilonCorrectedSegment(
    BlockFrame frame, Matrix a1, Matrix b1, EpsilonSpec spec, MatrixPoint proto,
    std::function<Matrix(double)> framed_eval)
    : frame_(std::move(frame)),
      a1_(std::move(a1)),
      b1_(std::move(b1)),
      spec_(spec),
      proto_(std::move(proto)),
      framed_eval_(std::move(framed_eval)) {
  length_ = detail::arc_length(
      [this](double t) { return framed_eval_(t); }, nullptr, 1e-10);
}

MatrixPoint EpsilonCorrectedSegment::at(double t) const {
  return unframe(frame_, framed_eval_(t), proto_);
}

RotationSegment::RotationSegment(BlockFrame frame, Matrix m0, Matrix gen_left,
                                 Matrix gen_right, MatrixPoint proto)
    : frame_(std::move(frame)),
      m0_(std::move(m0)),
      gl_(std::move(gen_left)),
      gr_(std::move(gen_right)),
      proto_(std::move(proto)) {
  const double anti_l = (gl_ + gl_.adjoint()).norm();
  const double anti_r = (gr_ + gr_.adjoint()).norm();
  if (anti_l > 1e-8 * (1.0 + gl_.norm()) ||
      anti_r > 1e-8 * (1.0 + gr_.norm())) {
    throw InputError("RotationSegment: generators must be anti-Hermitian");
  }
  length_ = detail::arc_length(
      [this](double t) { return framed_at(t); },
      [this](double t) {
        const Matrix x = framed_at(t);
        return (gl_ * x + x * gr_).eval();
      },
      1e-10);
}

Matrix RotationSegment::framed_at(double t) const {
  const Matrix el = (t * gl_).exp();
  const Matrix er = (t * gr_).exp();
  return el * m0_ * er;
}

MatrixPoint RotationSegment::at(double t) const {
  return unframe(frame_, framed_at(t), proto_);
}

ParametricSegment::ParametricSegment(std::function<MatrixPoint(double)> sampler,
                                     std::string label)
    : sampler_(std::move(sampler)), label_(std::move(label)) {
  length_ = detail::arc_length(
      [this](double t) { return sampler_(t).entries(); }, nullptr, 1e-9);
}

double PiecewisePath::total_length() const {
  double acc = 0.0;
  for (const auto& s : segments) acc += s->length();
  return acc;
}

MatrixPoint PiecewisePath::start() const {
  if (segments.empty()) throw InputError("empty path has no start");
  return segments.front()->start();
}

MatrixPoint PiecewisePath::end() const {
  if (segments.empty()) throw InputError("empty path has no end");
  return segments.back()->end();
}

double PiecewisePath::join_residual() const {
  double worst = 0.0;
  for (size_t i = 0; i + 1 < segments.size(); ++i) {
    worst = std::max(worst, frobenius_dist(segments[i]->end(),
                                           segments[i + 1]->start()));
  }
  return worst;
}

// ------------------------------------------------------------- closure paths

namespace {

void check_closure_inputs(const MatrixPoint& a, const MatrixPoint& b,
                          const StratumSpec& s, const Tolerances& tol) {
  s.validate();
  if (!s.admits(a) || !s.admits(b)) {
    throw InputError("closure path: endpoint does not match the stratum");
  }
  if (numerical_rank(a, tol.rank_tol) > s.r ||
      numerical_rank(b, tol.rank_tol) > s.r) {
    throw InputError("closure path: endpoint rank exceeds r");
  }
}

// When rank(a) < r the split at r absorbs kernel directions of a, and which
// ones is a factorization accident. Rotate the kernel basis so it is ordered
// by b's energy there: the block norms then depend only on the geometry of
// (a, b) and path lengths become frame equivariant.
BlockFrame adapt_kernel_split(BlockFrame f, const MatrixPoint& b) {
  const int m = static_cast<int>(f.left.rows());
  const int n = static_cast<int>(f.right.cols());
  const int k = f.r0;
  const int mk = m - k;
  const int nk = n - k;
  if (mk == 0 && nk == 0) return f;
  const Matrix framed = f.apply_raw(b.entries());

  if (!f.congruence) {
    if (mk > 0 && nk > 0) {
      const Matrix kb = framed.bottomRightCorner(mk, nk);
      if (b.field() == Field::Real) {
        Eigen::JacobiSVD<RealMatrix> svd(
            kb.real(), Eigen::ComputeFullU | Eigen::ComputeFullV);
        f.left.bottomRows(mk) =
            svd.matrixU().transpose().cast<Complex>() * f.left.bottomRows(mk);
        f.right.rightCols(nk) =
            f.right.rightCols(nk) * svd.matrixV().cast<Complex>();
      } else {
        Eigen::JacobiSVD<Matrix> svd(kb,
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
        f.left.bottomRows(mk) = svd.matrixU().adjoint() * f.left.bottomRows(mk);
        f.right.rightCols(nk) = f.right.rightCols(nk) * svd.matrixV();
      }
    }
    return f;
  }

  const RealMatrix kb = framed.bottomRightCorner(nk, nk).real();
  RealMatrix q(nk, nk);
  if (b.structure() == Structure::Symmetric) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (kb + kb.transpose()).eval());
    RealVector vals = es.eigenvalues();
    q = es.eigenvectors();
    std::vector<int> idx(nk);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
      return std::abs(vals(i)) > std::abs(vals(j));
    });
    RealMatrix sorted(nk, nk);
    for (int c = 0; c < nk; ++c) sorted.col(c) = q.col(idx[c]);
    q = sorted;
  } else {
    // Skew: spectral pairs of the kernel block, strongest first.
    const RealMatrix ks = (0.5 * (kb - kb.transpose()).eval()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(Complex(0, 1) *
                                             ks.cast<Complex>());
    const RealVector ev = es.eigenvalues();
    std::vector<std::pair<double, int>> pos;
    for (int i = 0; i < nk; ++i) {
      if (ev(i) > 0) pos.emplace_back(ev(i), i);
    }
    std::sort(pos.rbegin(), pos.rend());
    RealMatrix cols(nk, 2 * static_cast<int>(pos.size()));
    int c = 0;
    for (auto& [lam, i] : pos) {
      (void)lam;
      const Vector w = es.eigenvectors().col(i);
      cols.col(c++) = std::sqrt(2.0) * w.real();
      cols.col(c++) = std::sqrt(2.0) * w.imag();
    }
    Eigen::HouseholderQR<RealMatrix> qr(cols);
    q = qr.householderQ();
  }
  f.left.bottomRows(nk) = q.transpose().cast<Complex>() * f.left.bottomRows(nk);
  f.right.rightCols(nk) = f.right.rightCols(nk) * q.cast<Complex>();
  return f;
}

}  // namespace

PiecewisePath closure_path(const MatrixPoint& a, const MatrixPoint& b,
                           const StratumSpec& s, const PathOptions& opt) {
  check_closure_inputs(a, b, s, opt.tol);
  BlockFrame f = adapt_kernel_split(block_reduce(a, s.r, opt.tol.rank_tol), b);
  f.r0 = s.r;  // split at the stratum rank, not at rank(a)

  PiecewisePath path;
  const Matrix framed_b = f.apply_raw(b.entries());
  auto scaling =
      std::make_shared<BlockScalingSegment>(f, framed_b, b, /*forward=*/false);
  const MatrixPoint corner = scaling->end();
  path.segments.push_back(std::move(scaling));
  path.segments.push_back(std::make_shared<LinearSegment>(corner, a));
  return path;
}

PiecewisePath closure_path_sqrt2(const MatrixPoint& a, const MatrixPoint& b,
                                 const StratumSpec& s, const PathOptions& opt) {
  check_closure_inputs(a, b, s, opt.tol);
  if (s.space != Structure::General) {
    throw InputError("closure_path_sqrt2: general matrices only");
  }
  BlockFrame f = adapt_kernel_split(block_reduce(a, s.r, opt.tol.rank_tol), b);
  const int r = s.r;
  Matrix framed_b = f.apply_raw(b.entries());
  // Kill the right blocks first (column scaling keeps rank <= rank(b)),
  // then slide the leading block to A1 while the B3 tail fades.
  Matrix corner = framed_b;
  corner.rightCols(s.n - r).setZero();
  const MatrixPoint corner_pt = unframe(f, corner, b);
  PiecewisePath path;
  path.segments.push_back(std::make_shared<LinearSegment>(b, corner_pt));
  path.segments.push_back(std::make_shared<LinearSegment>(corner_pt, a));
  return path;
}

namespace {

// A segment carried through an isometric embedding: pointwise images of a
// source segment, length taken from the source.
class EmbeddedSegment final : public PathSegment {
 public:
  EmbeddedSegment(std::function<MatrixPoint(double)> sampler, double length,
                  std::string label)
      : sampler_(std::move(sampler)),
        label_(std::move(label)),
        length_(length) {}
  MatrixPoint at(double t) const override { return sampler_(t); }
  double length() const override { return length_; }
  std::string kind() const override { return label_; }

 private:
  std::function<MatrixPoint(double)> sampler_;
  std::string label_;
  double length_;
};

}  // namespace

PiecewisePath product_path(const PiecewisePath& path_x,
                           const PiecewisePath& path_y) {
  if (path_x.empty() || path_y.empty()) {
    throw InputError("product_path: factor paths must be nonempty");
  }
  const MatrixPoint x1 = path_x.start();
  const MatrixPoint y2 = path_y.end();
  if (x1.rows() != y2.rows()) {
    throw InputError("product_path: factor row counts differ");
  }
  if (x1.field() != y2.field()) {
    throw InputError("product_path: factor fields differ");
  }
  const Field field = x1.field();
  auto paste = [field](const MatrixPoint& x, const MatrixPoint& y) {
    Matrix glued(x.rows(), x.cols() + y.cols());
    glued.leftCols(x.cols()) = x.entries();
    glued.rightCols(y.cols()) = y.entries();
    return MatrixPoint(std::move(glued), field, Structure::General);
  };

  // Padding with a constant block embeds each factor isometrically, so the
  // embedded segments inherit the factor lengths exactly.
  PiecewisePath out;
  for (const auto& seg : path_y.segments) {
    out.segments.push_back(std::make_shared<EmbeddedSegment>(
        [seg, x1, paste](double t) { return paste(x1, seg->at(t)); },
        seg->length(), "product_y"));
  }
  for (const auto& seg : path_x.segments) {
    out.segments.push_back(std::make_shared<EmbeddedSegment>(
        [seg, y2, paste](double t) { return paste(seg->at(t), y2); },
        seg->length(), "product_x"));
  }
  return out;
}

PiecewisePath cone_path(const MatrixPoint& x, const MatrixPoint& y,
                        const LinkPathProvider& link_provider) {
  if (!x.same_space(y)) {
    throw InputError("cone_path: endpoints live in different spaces");
  }
  PiecewisePath path;
  if (y.norm() == 0.0 || x.norm() == 0.0) {
    path.segments.push_back(std::make_shared<LinearSegment>(y, x));
    return path;
  }
  const MatrixPoint scaled = y.with_entries((x.norm() / y.norm()) * y.entries());
  if (frobenius_dist(y, scaled) > 0.0) {
    path.segments.push_back(std::make_shared<LinearSegment>(y, scaled));
  }
  PiecewisePath link = link_provider(scaled, x);
  for (auto& seg : link.segments) path.segments.push_back(std::move(seg));
  return path;
}

double path_length(const PiecewisePath& p) { return p.total_length(); }

std::vector<MatrixPoint> sample_path(const PiecewisePath& p, int k) {
  if (k < 2) throw InputError("sample_path: need at least two samples");
  std::vector<MatrixPoint> out;
  for (size_t i = 0; i < p.segments.size(); ++i) {
    const int j0 = (i == 0) ? 0 : 1;  // avoid duplicating join points
    for (int j = j0; j < k; ++j) {
      out.push_back(p.segments[i]->at(static_cast<double>(j) / (k - 1)));
    }
  }
  return out;
}

Certificate certify(const PiecewisePath& p, const StratumSpec& s, int samples,
                    const Tolerances& tol) {
  Certificate cert;
  cert.stratum = s;
  cert.samples_per_segment = samples;
  cert.min_rank_floor = std::numeric_limits<double>::infinity();
  if (samples < 2) {
    cert.failure = "need at least two samples per segment";
    return cert;
  }
  if (p.empty()) {
    cert.failure = "empty path";
    return cert;
  }
  const int minmn = std::min(s.m, s.n);

  double scale = std::max(p.start().norm(), p.end().norm());
  if (scale == 0.0) scale = 1.0;
  if (p.join_residual() > 1e-8 * scale) {
    cert.failure = "segment endpoints do not match";
    return cert;
  }

  bool ok = true;
  for (const auto& seg : p.segments) {
    for (int j = 0; j < samples; ++j) {
      const double t = static_cast<double>(j) / (samples - 1);
      const MatrixPoint pt = seg->at(t);
      if (!s.admits(pt)) {
        cert.failure = "sample left the ambient space";
        return cert;
      }
      cert.max_structure_residual =
          std::max(cert.max_structure_residual,
                   structure_residual(pt.entries(), s.space));

      const RealVector sv = singular_values(pt.entries());
      const double smax = sv(0);
      const double off =
          (s.r < minmn && smax > 0.0) ? sv(s.r) / smax : 0.0;
      cert.max_offstratum_residual =
          std::max(cert.max_offstratum_residual, off);
      if (off > tol.cert_tol) {
        ok = false;
        if (cert.failure.empty()) cert.failure = "off-stratum residual";
      }

      if (s.mode == Mode::Stratum) {
        const double floor =
            (s.r >= 1 && smax > 0.0) ? sv(s.r - 1) / smax : 0.0;
        cert.min_rank_floor = std::min(cert.min_rank_floor, floor);
        if (s.r >= 1 && (floor < tol.floor_tol || smax == 0.0)) {
          ok = false;
          if (cert.failure.empty()) cert.failure = "rank floor violated";
        }
      }
    }
  }
  if (s.mode != Mode::Stratum || s.r == 0) cert.min_rank_floor = 0.0;
  cert.valid = ok;
  return cert;
}

}  // namespace stratapath
