#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stratapath/types.hpp"

namespace stratapath {

/// One certified piece of a path, parametrized over t in [0,1].
class PathSegment {
 public:
  virtual ~PathSegment() = default;
  virtual MatrixPoint at(double t) const = 0;
  virtual double length() const = 0;
  virtual std::string kind() const = 0;
  MatrixPoint start() const { return at(0.0); }
  MatrixPoint end() const { return at(1.0); }
};

using SegmentPtr = std::shared_ptr<const PathSegment>;

/// Straight segment from p to q.
class LinearSegment final : public PathSegment {
 public:
  LinearSegment(MatrixPoint p, MatrixPoint q);
  MatrixPoint at(double t) const override;
  double length() const override { return length_; }
  std::string kind() const override { return "linear"; }
  const MatrixPoint& from() const { return p_; }
  const MatrixPoint& to() const { return q_; }

 private:
  MatrixPoint p_, q_;
  double length_;
};

/// t -> frame^{-1} [B1, tB2; tB3, t^2 B4] (+ a constant framed offset).
/// Closed-form length: integral of sqrt(c + 4 q t^2).
class BlockScalingSegment final : public PathSegment {
 public:
  /// proto supplies field/structure tags; framed_b is the full framed
  /// matrix whose blocks are split at r0 = frame.r0. When forward is
  /// false the parameter runs 1 -> 0 (so at(0) is the full matrix).
  BlockScalingSegment(BlockFrame frame, Matrix framed_b, MatrixPoint proto,
                      bool forward, Matrix extra = Matrix());
  MatrixPoint at(double t) const override;
  double length() const override { return length_; }
  std::string kind() const override { return "block_scaling"; }

 private:
  Matrix assemble(double t) const;
  BlockFrame frame_;
  Matrix b1_, b2_, b3_, b4_;
  Matrix extra_;
  MatrixPoint proto_;
  bool forward_;
  double length_;
};

/// How the epsilon corrections of the in-stratum construction choose
/// their sign.
enum class SignRule { MatchDetSign, MatchPfaffianParity, MatchSignature };

/// Reporting record for an epsilon-corrected segment.
struct EpsilonSpec {
  double eps0 = 0.0;
  SignRule sign_rule = SignRule::MatchDetSign;
};

/// Pencil segment t -> frame^{-1}([t A1 + (1-t) B1] + eps block(t)),
/// with the concrete framed evaluation captured in a closure (epsilon
/// slots, detour couplings, bump detours).
class EpsilonCorrectedSegment final : public PathSegment {
 public:
  EpsilonCorrectedSegment(BlockFrame frame, Matrix a1, Matrix b1,
                          EpsilonSpec spec, MatrixPoint proto,
                          std::function<Matrix(double)> framed_eval);
  MatrixPoint at(double t) const override;
  double length() const override { return length_; }
  std::string kind() const override { return "epsilon_corrected"; }
  const EpsilonSpec& spec() const { return spec_; }

 private:
  BlockFrame frame_;
  Matrix a1_, b1_;
  EpsilonSpec spec_;
  MatrixPoint proto_;
  std::function<Matrix(double)> framed_eval_;
  double length_;
};

/// Rotation family t -> frame^{-1}(exp(t Gl) M0 exp(t Gr)); Gl, Gr are
/// skew/anti-Hermitian generators, Gr = Gl^T for congruence frames.
class RotationSegment final : public PathSegment {
 public:
  RotationSegment(BlockFrame frame, Matrix m0, Matrix gen_left,
                  Matrix gen_right, MatrixPoint proto);
  MatrixPoint at(double t) const override;
  double length() const override { return length_; }
  std::string kind() const override { return "rotation"; }

 private:
  Matrix framed_at(double t) const;
  BlockFrame frame_;
  Matrix m0_, gl_, gr_;
  MatrixPoint proto_;
  double length_;
};

/// Fallback segment defined by a dense sampler.
class ParametricSegment final : public PathSegment {
 public:
  ParametricSegment(std::function<MatrixPoint(double)> sampler,
                    std::string label = "parametric");
  MatrixPoint at(double t) const override { return sampler_(t); }
  double length() const override { return length_; }
  std::string kind() const override { return label_; }

 private:
  std::function<MatrixPoint(double)> sampler_;
  std::string label_;
  double length_;
};

/// Numerical witness that all sampled path points lie on the claimed
/// variety within the stated tolerances.
struct Certificate {
  StratumSpec stratum;
  int samples_per_segment = 0;
  double max_offstratum_residual = 0.0;  // sigma_{r+1} / sigma_max
  double min_rank_floor = 0.0;           // sigma_r / sigma_max (stratum mode)
  double max_structure_residual = 0.0;
  bool valid = false;
  std::string failure;
};

/// A certified piecewise path: ordered segments whose endpoints agree.
struct PiecewisePath {
  std::vector<SegmentPtr> segments;
  std::optional<Certificate> certificate;

  bool empty() const { return segments.empty(); }
  double total_length() const;
  MatrixPoint start() const;
  MatrixPoint end() const;
  /// Largest endpoint mismatch between consecutive segments.
  double join_residual() const;
};

namespace detail {
/// Adaptive Simpson quadrature to absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10);
/// Arc length of a matrix curve; derivative by central differences
/// unless an analytic derivative is supplied.
double arc_length(const std::function<Matrix(double)>& curve,
                  const std::function<Matrix(double)>& derivative = nullptr,
                  double tol = 1e-10);
}  // namespace detail

}  // namespace stratapath
