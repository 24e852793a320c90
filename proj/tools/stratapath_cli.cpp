#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stratapath/campaigns.hpp"
#include "stratapath/io.hpp"
#include "stratapath/matcore.hpp"
#include "stratapath/pathforge.hpp"
#include "stratapath/strata.hpp"

namespace {

using namespace stratapath;

struct CliArgs {
  std::string space = "general";
  std::string field = "R";
  int m = 3;
  int n = 3;
  int r = 2;
  std::string mode = "closure";
  int trials = 100;
  std::uint64_t seed = 0;
  double tol_rank = 1e-9;
  double tol_cert = 1e-8;
  double slack = 0.05;
  double bound = 0.0;
  double radius = 1.0;
  int cloud_points = 2000;
  int knn = 12;
  std::string section;
  std::string out;
  std::string emit_samples;
  // path subcommand
  std::string matrix_a;
  std::string matrix_b;
  int samples_per_segment = 33;
};

void add_common_flags(CLI::App* cmd, CliArgs& a) {
  cmd->add_option("--space", a.space, "matrix space: general|sym|skew");
  cmd->add_option("--field", a.field, "scalar field: R|C");
  cmd->add_option("--m", a.m, "row count");
  cmd->add_option("--n", a.n, "column count");
  cmd->add_option("--r", a.r, "rank of the stratum");
  cmd->add_option("--trials", a.trials, "number of Monte Carlo trials");
  cmd->add_option("--seed", a.seed, "campaign seed");
  cmd->add_option("--tol-rank", a.tol_rank, "relative rank tolerance");
  cmd->add_option("--tol-cert", a.tol_cert, "certification tolerance");
  cmd->add_option("--slack", a.slack, "relative slack on the stratum bound");
  cmd->add_option("--bound", a.bound, "override the pass/fail bound");
  cmd->add_option("--radius", a.radius, "sampling ball radius");
  cmd->add_option("--out", a.out, "report JSON output file");
  cmd->add_option("--emit-samples", a.emit_samples,
                  "CSV output for path samples / point cloud");
}

CampaignConfig make_config(const std::string& command, const CliArgs& a) {
  CampaignConfig cfg;
  cfg.command = command;
  cfg.stratum.space = parse_structure(a.space);
  cfg.stratum.field = parse_field(a.field);
  cfg.stratum.m = a.m;
  cfg.stratum.n = a.n;
  cfg.stratum.r = a.r;
  cfg.stratum.mode = a.mode == "stratum" ? Mode::Stratum : Mode::Closure;
  if (a.mode != "stratum" && a.mode != "closure") {
    throw InputError("unknown mode '" + a.mode +
                     "' (expected stratum or closure)");
  }
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.tol.rank_tol = a.tol_rank;
  cfg.tol.cert_tol = a.tol_cert;
  cfg.tol.stratum_slack = a.slack;
  cfg.bound = a.bound;
  cfg.radius = a.radius;
  cfg.cloud_points = a.cloud_points;
  cfg.knn = a.knn;
  cfg.section = a.section;
  cfg.out_path = a.out;
  cfg.emit_samples = a.emit_samples;
  return cfg;
}

int emit(const ExperimentReport& report) {
  std::cout << report.to_json().dump(2) << std::endl;
  if (!report.config.out_path.empty()) report.write(report.config.out_path);
  return report.exit_code();
}

/// Single-pair path export: builds the requested path between two matrix
/// files (or a seeded random pair), certifies it, and writes the samples.
int run_path(const CliArgs& a) {
  CampaignConfig cfg = make_config("path", a);
  cfg.trials = 1;
  cfg.validate();
  StratumSpec s = cfg.stratum;
  s.validate();

  MatrixPoint pa, pb;
  if (!a.matrix_a.empty() != !a.matrix_b.empty()) {
    throw InputError("path: provide both --a and --b, or neither");
  }
  if (!a.matrix_a.empty()) {
    pa = load_matrix(a.matrix_a);
    pb = load_matrix(a.matrix_b);
  } else {
    std::mt19937_64 rng(trial_seed(cfg.seed, 0));
    const int rank = s.mode == Mode::Stratum ? s.r : s.r;
    pa = random_stratum_point(s, rank, rng);
    if (s.mode == Mode::Stratum) {
      pb = pa;
      for (int tries = 0; tries < 64; ++tries) {
        pb = random_stratum_point(s, rank, rng);
        if (same_component(pa, pb, s, cfg.tol.rank_tol)) break;
      }
    } else {
      pb = random_stratum_point(s, rank, rng);
    }
  }

  PathOptions opt;
  opt.tol = cfg.tol;
  opt.seed = cfg.seed;
  PiecewisePath path = s.mode == Mode::Stratum ? stratum_path(pa, pb, s, opt)
                                               : closure_path(pa, pb, s, opt);
  Certificate cert = path.certificate
                         ? *path.certificate
                         : certify(path, s, opt.cert_samples, cfg.tol);

  ExperimentReport report;
  report.config = cfg;
  TrialRecord rec;
  rec.trial = 0;
  rec.d_out = frobenius_dist(pa, pb);
  rec.length = path.total_length();
  rec.ratio = rec.d_out > 0 ? rec.length / rec.d_out : 1.0;
  rec.cert_residual = cert.max_offstratum_residual;
  rec.rank_floor = cert.min_rank_floor;
  rec.cert_valid = cert.valid;
  rec.status = cert.valid ? "ok" : "cert_failure";
  if (!cert.valid) rec.note = cert.failure;
  report.records.push_back(std::move(rec));
  report.finalize(cfg.bound);

  if (!cfg.emit_samples.empty()) {
    write_samples_csv(path, a.samples_per_segment, cfg.emit_samples);
    path.certificate = cert;
    write_path_sidecar(path, cfg.emit_samples + ".json");
  }
  return emit(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Constructs certified inner paths on rank strata of matrix spaces "
      "and verifies their length bounds"};
  app.require_subcommand(1);

  CliArgs args;

  auto* closure = app.add_subcommand(
      "verify-closure", "closure-path length bound campaign");
  add_common_flags(closure, args);

  auto* stratum = app.add_subcommand(
      "verify-stratum", "in-stratum path campaign (same-component pairs)");
  add_common_flags(stratum, args);

  auto* oracle = app.add_subcommand(
      "oracle", "cross-check constructed lengths against a k-NN graph");
  add_common_flags(oracle, args);
  oracle->add_option("--cloud-points", args.cloud_points,
                     "sampled cloud size");
  oracle->add_option("--knn", args.knn, "neighbors per cloud point");
  oracle->add_option("--mode", args.mode, "stratum|closure");

  auto* arrangement = app.add_subcommand(
      "arrangement", "triangular det-0 arrangement constant and paths");
  add_common_flags(arrangement, args);

  auto* angle = app.add_subcommand(
      "angle", "principal angles vs the sampled sup oracle");
  add_common_flags(angle, args);

  auto* classify = app.add_subcommand(
      "classify", "component census of random stratum points");
  add_common_flags(classify, args);

  auto* transversal = app.add_subcommand(
      "transversal", "transversality of a built-in section");
  add_common_flags(transversal, args);
  transversal->add_option("--section", args.section,
                          "cusp-family|corank-surface");

  auto* cusp = app.add_subcommand(
      "cusp", "cusp counterexample arc lengths and blow-up");
  add_common_flags(cusp, args);

  auto* path = app.add_subcommand(
      "path", "single-pair path construction and sample export");
  add_common_flags(path, args);
  path->add_option("--mode", args.mode, "stratum|closure");
  path->add_option("--a", args.matrix_a, "matrix JSON file (from)");
  path->add_option("--b", args.matrix_b, "matrix JSON file (to)");
  path->add_option("--samples-per-segment", args.samples_per_segment,
                   "CSV sampling density");

  CLI11_PARSE(app, argc, argv);

  try {
    if (closure->parsed()) {
      return emit(run_verify_closure(make_config("verify-closure", args)));
    }
    if (stratum->parsed()) {
      CliArgs a = args;
      a.mode = "stratum";
      return emit(run_verify_stratum(make_config("verify-stratum", a)));
    }
    if (oracle->parsed()) {
      return emit(run_oracle_compare(make_config("oracle", args)));
    }
    if (arrangement->parsed()) {
      return emit(run_arrangement(make_config("arrangement", args)));
    }
    if (angle->parsed()) {
      return emit(run_angle(make_config("angle", args)));
    }
    if (classify->parsed()) {
      CliArgs a = args;
      a.mode = "stratum";
      return emit(run_classify(make_config("classify", a)));
    }
    if (transversal->parsed()) {
      return emit(run_transversal(make_config("transversal", args)));
    }
    if (cusp->parsed()) {
      return emit(run_cusp(make_config("cusp", args)));
    }
    if (path->parsed()) {
      return run_path(args);
    }
  } catch (const stratapath::InputError& e) {
    std::cerr << "input error: " << e.what() << std::endl;
    return 2;
  } catch (const stratapath::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << std::endl;
    return 3;
  }
  return 2;
}
