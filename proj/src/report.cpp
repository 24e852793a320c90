#include <algorithm>
#include <fstream>

#include "stratapath/report.hpp"

namespace stratapath {

void CampaignConfig::validate() const {
  if (trials < 1) throw InputError("campaign: trials must be >= 1");
  if (tol.rank_tol <= 0 || tol.cert_tol <= 0 || tol.len_tol <= 0 ||
      tol.floor_tol <= 0 || tol.stratum_slack <= 0) {
    throw InputError("campaign: tolerances must be positive");
  }
  if (bound < 0) throw InputError("campaign: bound must be non-negative");
}

void ExperimentReport::finalize(double bound_used) {
  bound = bound_used;
  std::sort(records.begin(), records.end(),
            [](const TrialRecord& a, const TrialRecord& b) {
              return a.trial < b.trial;
            });
  max_ratio = 0.0;
  violations = 0;
  numerical_failures = 0;
  skipped = 0;
  for (const auto& r : records) {
    if (r.status == "skipped") {
      ++skipped;
      continue;
    }
    if (r.status == "numerical") {
      ++numerical_failures;
      continue;
    }
    max_ratio = std::max(max_ratio, std::max(r.ratio, r.ratio_sqrt2));
    if (r.status == "violation" || r.status == "cert_failure") ++violations;
  }
  pass = violations == 0;
}

int ExperimentReport::exit_code() const {
  if (violations > 0) return 1;
  const int budget = std::max(1, static_cast<int>(records.size()) / 100);
  if (numerical_failures > budget) return 3;
  return 0;
}

nlohmann::ordered_json ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  nlohmann::ordered_json cfg;
  cfg["command"] = config.command;
  cfg["space"] = to_string(config.stratum.space);
  cfg["field"] = to_string(config.stratum.field);
  cfg["m"] = config.stratum.m;
  cfg["n"] = config.stratum.n;
  cfg["r"] = config.stratum.r;
  cfg["mode"] = to_string(config.stratum.mode);
  cfg["trials"] = config.trials;
  cfg["seed"] = config.seed;
  nlohmann::ordered_json tol;
  tol["rank_tol"] = config.tol.rank_tol;
  tol["frame_tol"] = config.tol.frame_tol;
  tol["cert_tol"] = config.tol.cert_tol;
  tol["floor_tol"] = config.tol.floor_tol;
  tol["len_tol"] = config.tol.len_tol;
  tol["stratum_slack"] = config.tol.stratum_slack;
  cfg["tolerances"] = std::move(tol);
  if (config.cloud_points) cfg["cloud_points"] = config.cloud_points;
  if (config.knn) cfg["knn"] = config.knn;
  cfg["radius"] = config.radius;
  if (!config.section.empty()) cfg["section"] = config.section;
  j["config"] = std::move(cfg);

  nlohmann::ordered_json recs = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json rec;
    rec["trial"] = r.trial;
    rec["status"] = r.status;
    rec["d_out"] = r.d_out;
    rec["length"] = r.length;
    rec["ratio"] = r.ratio;
    if (r.ratio_sqrt2 > 0) rec["ratio_sqrt2"] = r.ratio_sqrt2;
    rec["cert_residual"] = r.cert_residual;
    rec["rank_floor"] = r.rank_floor;
    rec["cert_valid"] = r.cert_valid;
    if (!r.label.empty()) rec["label"] = r.label;
    if (!r.note.empty()) rec["note"] = r.note;
    recs.push_back(std::move(rec));
  }
  j["records"] = std::move(recs);

  nlohmann::ordered_json sum;
  sum["max_ratio"] = max_ratio;
  sum["bound"] = bound;
  sum["violations"] = violations;
  sum["numerical_failures"] = numerical_failures;
  sum["skipped"] = skipped;
  sum["pass"] = pass;
  sum["wall_time_seconds"] = wall_time_seconds;
  j["summary"] = std::move(sum);
  return j;
}

void ExperimentReport::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write report file '" + path + "'");
  out << to_json().dump(2) << "\n";
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  // splitmix64 over the combined stream id
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (std::uint64_t(trial) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace stratapath
