#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "stratapath/types.hpp"

namespace stratapath {

/// Configuration of a verification campaign, echoed verbatim in reports.
struct CampaignConfig {
  std::string command;
  StratumSpec stratum;
  int trials = 1;
  std::uint64_t seed = 0;
  Tolerances tol;
  double bound = 0.0;         // 0 -> command default
  std::string out_path;       // report JSON; empty -> stdout only
  std::string emit_samples;   // path samples CSV; empty -> none

  // campaign-specific knobs
  int cloud_points = 2000;    // oracle
  int knn = 12;               // oracle
  double radius = 1.0;        // sampling ball
  double sweep_radius = 1e3;  // arrangement sharpness sweep
  std::string section;        // transversal: "cusp-family" | "corank-surface"

  void validate() const;
};

/// One trial of a campaign. Unused numeric fields stay at 0.
struct TrialRecord {
  int trial = 0;
  std::string status;  // ok | violation | cert_failure | numerical | skipped
  double d_out = 0.0;
  double length = 0.0;
  double ratio = 0.0;
  double ratio_sqrt2 = 0.0;   // closure campaigns, general matrices
  double cert_residual = 0.0;
  double rank_floor = 0.0;
  bool cert_valid = false;
  std::string label;          // component label(s) or detail
  std::string note;
};

/// Versioned campaign result. pass <=> violations == 0 and the numerical
/// failure budget holds.
struct ExperimentReport {
  static constexpr int kVersion = 1;

  CampaignConfig config;
  std::vector<TrialRecord> records;

  double max_ratio = 0.0;
  double bound = 0.0;
  int violations = 0;
  int numerical_failures = 0;
  int skipped = 0;
  bool pass = false;
  double wall_time_seconds = 0.0;

  /// Recomputes the summary from the records (records sorted by trial).
  void finalize(double bound_used);

  nlohmann::ordered_json to_json() const;
  void write(const std::string& path) const;

  /// 0 pass, 1 bound violation, 3 numerical failure budget exceeded
  /// (input errors exit 2 before a report exists).
  int exit_code() const;
};

/// Per-trial RNG stream: decorrelated from neighboring trials, stable
/// across execution order (splitmix64 of seed and trial index).
std::uint64_t trial_seed(std::uint64_t seed, int trial);

}  // namespace stratapath
