#pragma once

#include <cstdint>

#include "stratapath/pathforge_types.hpp"
#include "stratapath/types.hpp"

namespace stratapath {

/// Options shared by the path constructors.
struct PathOptions {
  Tolerances tol;
  std::uint64_t seed = 0;          // generic perturbations only
  int cert_samples = 200;          // samples per segment when certifying
  int max_retries = 8;
};

/// Two-segment path from b to a inside the closure of X_r, with
/// length <= 2 sqrt(2) d_out(a,b).
PiecewisePath closure_path(const MatrixPoint& a, const MatrixPoint& b,
                           const StratumSpec& s, const PathOptions& opt = {});

/// Two straight segments (general matrices only) with
/// length <= sqrt(2) d_out(a,b).
PiecewisePath closure_path_sqrt2(const MatrixPoint& a, const MatrixPoint& b,
                                 const StratumSpec& s,
                                 const PathOptions& opt = {});

/// Path from b to a staying inside the stratum X_r, for points in the
/// same connected component, with length <= 2 sqrt(2) (1+slack) d_out.
PiecewisePath stratum_path(const MatrixPoint& a, const MatrixPoint& b,
                           const StratumSpec& s, const PathOptions& opt = {});

/// Two-leg path in a product space: (x1,y1) -> (x1,y2) -> (x2,y2).
/// Legs are embedded with the other factor frozen; the factor spaces are
/// stacked side by side ([X | Y] horizontally) in the product ambient.
PiecewisePath product_path(const PiecewisePath& path_x,
                           const PiecewisePath& path_y);

/// Cone combinator: radial segment y -> y' = y |x|/|y|, then the link
/// path between the equal-norm points, supplied by the caller.
using LinkPathProvider = std::function<PiecewisePath(
    const MatrixPoint& from, const MatrixPoint& to)>;
PiecewisePath cone_path(const MatrixPoint& x, const MatrixPoint& y,
                        const LinkPathProvider& link_provider);

double path_length(const PiecewisePath& p);
std::vector<MatrixPoint> sample_path(const PiecewisePath& p, int k);

/// Fills a certificate by sampling every segment. Never throws on a
/// failed certificate; campaigns count violations.
Certificate certify(const PiecewisePath& p, const StratumSpec& s, int samples,
                    const Tolerances& tol = {});

}  // namespace stratapath
