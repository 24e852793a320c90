#pragma once

#include <random>

#include "stratapath/report.hpp"

namespace stratapath {

/// Closure-path campaign: random pairs of rank <= r, closure_path (and the
/// sqrt(2) two-segment variant for general matrices), certified against
/// the 2 sqrt(2) bound.
ExperimentReport run_verify_closure(const CampaignConfig& cfg);

/// In-stratum campaign: same-component pairs of rank exactly r,
/// stratum_path certified against 2 sqrt(2) (1 + stratum_slack), with the
/// component label checked along every path.
ExperimentReport run_verify_stratum(const CampaignConfig& cfg);

/// Cross-validation of constructed path lengths against k-NN graph
/// shortest-path estimates on a sampled cloud.
ExperimentReport run_oracle_compare(const CampaignConfig& cfg);

/// Triangular-det-0 arrangement: constant, random two-leg paths, and the
/// far-out sharpness sweep.
ExperimentReport run_arrangement(const CampaignConfig& cfg);

/// Principal-angle computation vs the sampled sup-of-cosines oracle on
/// random subspace pairs in R^6.
ExperimentReport run_angle(const CampaignConfig& cfg);

/// Component census over random stratum points.
ExperimentReport run_classify(const CampaignConfig& cfg);

/// Transversality of a built-in section ("cusp-family" or
/// "corank-surface") over a sample grid; the first non-transversal point
/// is reported.
ExperimentReport run_transversal(const CampaignConfig& cfg);

/// Cusp counterexample: closed-form inner/outer ratios against quadrature,
/// with the blow-up monotonicity check.
ExperimentReport run_cusp(const CampaignConfig& cfg);

/// Random point of the given rank (gaussian + rank truncation), used by
/// the campaigns and the test suites.
MatrixPoint random_stratum_point(const StratumSpec& s, int rank,
                                 std::mt19937_64& rng);

}  // namespace stratapath
