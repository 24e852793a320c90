#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "stratapath/arrangements.hpp"
#include "stratapath/campaigns.hpp"
#include "stratapath/io.hpp"
#include "stratapath/matcore.hpp"
#include "stratapath/oracle.hpp"
#include "stratapath/pathforge.hpp"
#include "stratapath/strata.hpp"

namespace stratapath {

namespace {

constexpr double kTwoSqrt2 = 2.0 * std::numbers::sqrt2;

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

int random_rank(const StratumSpec& s, std::mt19937_64& rng) {
  if (s.space == Structure::Skew) {
    std::uniform_int_distribution<int> pairs(0, s.r / 2);
    return 2 * pairs(rng);
  }
  std::uniform_int_distribution<int> ranks(0, s.r);
  return ranks(rng);
}

void fill_path_fields(TrialRecord& rec, const PiecewisePath& path,
                      const Certificate& cert, double d) {
  rec.d_out = d;
  rec.length = path.total_length();
  rec.ratio = d > 0 ? rec.length / d : 1.0;
  rec.cert_residual = cert.max_offstratum_residual;
  rec.rank_floor = cert.min_rank_floor;
  rec.cert_valid = cert.valid;
}

void append_note(TrialRecord& rec, const std::string& note) {
  if (!rec.note.empty()) rec.note += "; ";
  rec.note += note;
}

/// Marks the record as the worst applicable status for a failed check.
void mark_check(TrialRecord& rec, bool ok, bool cert_side,
                const std::string& why) {
  if (ok) return;
  rec.status = cert_side ? "cert_failure" : "violation";
  append_note(rec, why);
}

}  // namespace

MatrixPoint random_stratum_point(const StratumSpec& s, int rank,
                                 std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < 32; ++attempt) {
    Matrix raw(s.m, s.n);
    for (int i = 0; i < s.m; ++i) {
      for (int k = 0; k < s.n; ++k) {
        const double re = gauss(rng);
        const double im = s.field == Field::Complex ? gauss(rng) : 0.0;
        raw(i, k) = Complex(re, im);
      }
    }
    if (s.space == Structure::Symmetric) {
      raw = 0.5 * (raw + raw.transpose()).eval();
    } else if (s.space == Structure::Skew) {
      raw = 0.5 * (raw - raw.transpose()).eval();
    }
    MatrixPoint p = truncate_to_rank(MatrixPoint(raw, s.field, s.space), rank);
    if (numerical_rank(p) == rank) return p;
  }
  throw NumericalError("random_stratum_point: rank target unreachable");
}

ExperimentReport run_verify_closure(const CampaignConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;
  report.config.stratum.mode = Mode::Closure;
  const StratumSpec s = report.config.stratum;
  s.validate();
  Timer timer;

  const bool general = s.space == Structure::General;
  const double bound = cfg.bound > 0 ? cfg.bound : kTwoSqrt2;
  const double bound_eff = bound * (1.0 + cfg.tol.len_tol);
  const double bound_sqrt2 =
      (cfg.bound > 0 ? cfg.bound : std::numbers::sqrt2) *
      (1.0 + cfg.tol.len_tol);

  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 rng(trial_seed(cfg.seed, trial));
    TrialRecord rec;
    rec.trial = trial;
    rec.status = "ok";
    try {
      MatrixPoint a = random_stratum_point(s, random_rank(s, rng), rng);
      MatrixPoint b = random_stratum_point(s, random_rank(s, rng), rng);
      if (cfg.radius != 1.0) {
        a = a.with_entries(a.entries() * cfg.radius);
        b = b.with_entries(b.entries() * cfg.radius);
      }
      PathOptions opt;
      opt.tol = cfg.tol;
      opt.seed = trial_seed(cfg.seed, trial);
      const double d = frobenius_dist(a, b);

      PiecewisePath path = closure_path(a, b, s, opt);
      Certificate cert = certify(path, s, opt.cert_samples, cfg.tol);
      fill_path_fields(rec, path, cert, d);
      mark_check(rec, cert.valid, true, "certificate: " + cert.failure);
      mark_check(rec, rec.ratio <= bound_eff, false,
                 "closure ratio above bound");

      if (general) {
        PiecewisePath p2 = closure_path_sqrt2(a, b, s, opt);
        Certificate c2 = certify(p2, s, opt.cert_samples, cfg.tol);
        rec.ratio_sqrt2 = d > 0 ? p2.total_length() / d : 1.0;
        mark_check(rec, c2.valid, true, "sqrt2 certificate: " + c2.failure);
        mark_check(rec, rec.ratio_sqrt2 <= bound_sqrt2, false,
                   "sqrt2 ratio above bound");
      }
      if (trial == 0 && !cfg.emit_samples.empty()) {
        write_samples_csv(path, 33, cfg.emit_samples);
      }
    } catch (const NumericalError& e) {
      rec.status = "numerical";
      rec.note = e.what();
    } catch (const InputError& e) {
      rec.status = "numerical";
      rec.note = std::string("input: ") + e.what();
    }
    report.records.push_back(std::move(rec));
  }
  report.finalize(bound_eff);
  report.wall_time_seconds = timer.seconds();
  return report;
}

ExperimentReport run_verify_stratum(const CampaignConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;
  report.config.stratum.mode = Mode::Stratum;
  const StratumSpec s = report.config.stratum;
  s.validate();
  Timer timer;

  const double bound =
      cfg.bound > 0 ? cfg.bound : kTwoSqrt2 * (1.0 + cfg.tol.stratum_slack);

  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 rng(trial_seed(cfg.seed, trial));
    TrialRecord rec;
    rec.trial = trial;
    rec.status = "ok";
    try {
      MatrixPoint a = random_stratum_point(s, s.r, rng);
      const ComponentLabel label = classify_component(a, s, cfg.tol.rank_tol);
      rec.label = label.to_string();

      MatrixPoint b = a;
      bool found = false;
      for (int tries = 0; tries < 64 && !found; ++tries) {
        b = random_stratum_point(s, s.r, rng);
        found = classify_component(b, s, cfg.tol.rank_tol) == label;
      }
      if (!found) {
        rec.status = "skipped";
        rec.note = "no same-component partner sampled";
        report.records.push_back(std::move(rec));
        continue;
      }
      if (cfg.radius != 1.0) {
        a = a.with_entries(a.entries() * cfg.radius);
        b = b.with_entries(b.entries() * cfg.radius);
      }

      PathOptions opt;
      opt.tol = cfg.tol;
      opt.seed = trial_seed(cfg.seed, trial);
      PiecewisePath path = stratum_path(a, b, s, opt);
      Certificate cert = path.certificate
                             ? *path.certificate
                             : certify(path, s, opt.cert_samples, cfg.tol);
      fill_path_fields(rec, path, cert, frobenius_dist(a, b));
      mark_check(rec, cert.valid, true, "certificate: " + cert.failure);
      mark_check(rec, rec.ratio <= bound, false, "stratum ratio above bound");

      bool label_constant = true;
      for (const auto& q : sample_path(path, 9)) {
        try {
          if (!(classify_component(q, s, cfg.tol.rank_tol) == label)) {
            label_constant = false;
            break;
          }
        } catch (const InputError&) {
          label_constant = false;
          break;
        }
      }
      mark_check(rec, label_constant, true, "component label drift");

      if (trial == 0 && !cfg.emit_samples.empty()) {
        write_samples_csv(path, 33, cfg.emit_samples);
      }
    } catch (const NumericalError& e) {
      rec.status = "numerical";
      rec.note = e.what();
    } catch (const InputError& e) {
      rec.status = "numerical";
      rec.note = std::string("input: ") + e.what();
    }
    report.records.push_back(std::move(rec));
  }
  report.finalize(bound);
  report.wall_time_seconds = timer.seconds();
  return report;
}

ExperimentReport run_oracle_compare(const CampaignConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;
  const StratumSpec s = report.config.stratum;
  s.validate();
  Timer timer;

  const double bound =
      cfg.bound > 0 ? cfg.bound : kTwoSqrt2 * (1.0 + cfg.tol.stratum_slack);
  const PointCloud cloud =
      sample_stratum(s, cfg.cloud_points, cfg.radius, cfg.seed);
  const GeodesicGraph graph = build_geodesic_graph(cloud, cfg.knn);
  if (!cfg.emit_samples.empty()) write_cloud_csv(cloud, cfg.emit_samples);

  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 rng(trial_seed(cfg.seed, trial));
    TrialRecord rec;
    rec.trial = trial;
    rec.status = "ok";
    try {
      const bool closure = s.mode == Mode::Closure;
      const int ra = closure ? random_rank(s, rng) : s.r;
      MatrixPoint a = random_stratum_point(s, ra, rng);
      MatrixPoint b;
      if (closure) {
        b = random_stratum_point(s, random_rank(s, rng), rng);
      } else {
        const ComponentLabel label =
            classify_component(a, s, cfg.tol.rank_tol);
        rec.label = label.to_string();
        bool found = false;
        for (int tries = 0; tries < 64 && !found; ++tries) {
          b = random_stratum_point(s, s.r, rng);
          found = classify_component(b, s, cfg.tol.rank_tol) == label;
        }
        if (!found) {
          rec.status = "skipped";
          rec.note = "no same-component partner sampled";
          report.records.push_back(std::move(rec));
          continue;
        }
      }
      std::uniform_real_distribution<double> mag(0.05, 1.0);
      if (a.norm() > 0) {
        a = a.with_entries(a.entries() * (mag(rng) * cfg.radius / a.norm()));
      }
      if (b.norm() > 0) {
        b = b.with_entries(b.entries() * (mag(rng) * cfg.radius / b.norm()));
      }

      const double d = frobenius_dist(a, b);
      const double graph_d = graph_inner_distance(graph, a, b);
      if (!std::isfinite(graph_d)) {
        rec.status = "skipped";
        rec.note = "query disconnected from cloud graph";
        report.records.push_back(std::move(rec));
        continue;
      }

      PathOptions opt;
      opt.tol = cfg.tol;
      opt.seed = trial_seed(cfg.seed, trial);
      PiecewisePath path = closure ? closure_path(a, b, s, opt)
                                   : stratum_path(a, b, s, opt);
      Certificate cert = path.certificate
                             ? *path.certificate
                             : certify(path, s, opt.cert_samples, cfg.tol);
      fill_path_fields(rec, path, cert, d);
      const double estimate = std::min(graph_d, rec.length);
      rec.ratio = d > 0 ? estimate / d : 1.0;
      append_note(rec, "graph_estimate=" + std::to_string(graph_d));
      mark_check(rec, cert.valid, true, "certificate: " + cert.failure);
      mark_check(rec, rec.ratio <= bound, false,
                 "inner/outer estimate above bound");
      mark_check(rec, graph_d >= d - 1e-9 * (1.0 + d), false,
                 "graph estimate below the outer metric");
    } catch (const NumericalError& e) {
      rec.status = "numerical";
      rec.note = e.what();
    } catch (const InputError& e) {
      rec.status = "numerical";
      rec.note = std::string("input: ") + e.what();
    }
    report.records.push_back(std::move(rec));
  }
  report.finalize(bound);
  report.wall_time_seconds = timer.seconds();
  return report;
}

ExperimentReport run_arrangement(const CampaignConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;
  Timer timer;

  const int m = report.config.stratum.m >= 2 ? report.config.stratum.m : 3;
  report.config.stratum.m = m;
  const Arrangement arr = triangular_det0(m);
  const double constant = arrangement_constant(arr);
  const double bound =
      cfg.bound > 0 ? cfg.bound : constant * (1.0 + 1e-9);

  // diagonal coordinates in the row-major upper-triangular layout
  std::vector<int> diag(m);
  for (int i = 0, idx = 0; i < m; ++i) {
    diag[i] = idx;
    idx += m - i;
  }
  const int ambient = m * (m + 1) / 2;

  int next_trial = 0;
  for (; next_trial < cfg.trials; ++next_trial) {
    std::mt19937_64 rng(trial_seed(cfg.seed, next_trial));
    TrialRecord rec;
    rec.trial = next_trial;
    rec.status = "ok";
    try {
      std::uniform_int_distribution<int> pick(0, m - 1);
      int i = pick(rng);
      int j = pick(rng);
      while (j == i) j = pick(rng);
      std::normal_distribution<double> gauss;
      auto sample_on = [&](const AffineSubspace& l) {
        RealVector c(l.dim());
        for (int t = 0; t < c.size(); ++t) c(t) = gauss(rng);
        RealVector p = l.base + l.directions * c;
        const double norm = p.norm();
        if (norm > 0) {
          std::uniform_real_distribution<double> mag(0.1, 1.0);
          p *= mag(rng) * cfg.radius / norm;
        }
        return p;
      };
      const RealVector x = sample_on(arr.subspaces[i]);
      const RealVector y = sample_on(arr.subspaces[j]);
      PiecewisePath path = arrangement_path(x, y, arr);
      rec.d_out = (x - y).norm();
      rec.length = path.total_length();
      rec.ratio = rec.d_out > 0 ? rec.length / rec.d_out : 1.0;
      rec.cert_valid = path.join_residual() < 1e-9;
      rec.label = "legs=" + std::to_string(i) + "," + std::to_string(j);
      mark_check(rec, rec.cert_valid, true, "segment join mismatch");
      mark_check(rec, rec.ratio <= bound, false,
                 "two-leg ratio above arrangement constant");
    } catch (const NumericalError& e) {
      rec.status = "numerical";
      rec.note = e.what();
    } catch (const InputError& e) {
      rec.status = "numerical";
      rec.note = std::string("input: ") + e.what();
    }
    report.records.push_back(std::move(rec));
  }

  // far-out sweep: opposite diagonal axes realize the constant exactly
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      TrialRecord rec;
      rec.trial = next_trial++;
      rec.status = "ok";
      rec.label = "sweep=" + std::to_string(i) + "," + std::to_string(j);
      rec.note = "sharpness sweep at radius " +
                 std::to_string(cfg.sweep_radius);
      try {
        RealVector x = RealVector::Zero(ambient);
        RealVector y = RealVector::Zero(ambient);
        x(diag[j]) = cfg.sweep_radius;  // on L_i (its diagonal entry is 0)
        y(diag[i]) = cfg.sweep_radius;  // on L_j
        // Keep every other diagonal entry away from zero: otherwise both
        // points share a third hyperplane and the straight chord (ratio 1)
        // is a legal path.
        for (int k = 0; k < m; ++k) {
          if (k != i && k != j) {
            x(diag[k]) = 1.0;
            y(diag[k]) = 1.0;
          }
        }
        PiecewisePath path = arrangement_path(x, y, arr);
        rec.d_out = (x - y).norm();
        rec.length = path.total_length();
        rec.ratio = rec.length / rec.d_out;
        rec.cert_valid = path.join_residual() < 1e-6 * cfg.sweep_radius;
        mark_check(rec, rec.cert_valid, true, "segment join mismatch");
        mark_check(rec, rec.ratio <= bound, false,
                   "sweep ratio above arrangement constant");
        mark_check(rec, rec.ratio >= constant * (1.0 - 1e-9), false,
                   "sweep fails to saturate the arrangement constant");
      } catch (const NumericalError& e) {
        rec.status = "numerical";
        rec.note = e.what();
      }
      report.records.push_back(std::move(rec));
    }
  }

  // the constant itself, against the closed form sqrt(2)
  {
    TrialRecord rec;
    rec.trial = next_trial++;
    rec.status = "ok";
    rec.label = "constant";
    rec.d_out = constant;
    rec.ratio = constant / std::numbers::sqrt2;
    rec.note = "arrangement constant / sqrt(2)";
    mark_check(rec, std::abs(rec.ratio - 1.0) <= 1e-9, false,
               "arrangement constant differs from sqrt(2)");
    report.records.push_back(std::move(rec));
  }

  report.finalize(bound);
  report.wall_time_seconds = timer.seconds();
  return report;
}

ExperimentReport run_angle(const CampaignConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;
  Timer timer;

  const int ambient = report.config.stratum.m >= 3 ? report.config.stratum.m
                                                   : 6;
  report.config.stratum.m = ambient;
  const double bound = cfg.bound > 0 ? cfg.bound : 1e-3;

  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 rng(trial_seed(cfg.seed, trial));
    TrialRecord rec;
    rec.trial = trial;
    rec.status = "ok";
    try {
      std::normal_distribution<double> gauss;
      std::uniform_int_distribution<int> dims(1, ambient - 2);
      RealVector p(ambient);
      for (int i = 0; i < ambient; ++i) p(i) = gauss(rng);
      auto random_subspace = [&](int dim) {
        RealMatrix raw(ambient, dim);
        for (int i = 0; i < ambient; ++i) {
          for (int k = 0; k < dim; ++k) raw(i, k) = gauss(rng);
        }
        AffineSubspace l;
        l.base = p;
        l.directions =
            Eigen::HouseholderQR<RealMatrix>(raw).householderQ() *
            RealMatrix::Identity(ambient, dim);
        l.validate(cfg.tol.frame_tol);
        return l;
      };
      const AffineSubspace l1 = random_subspace(dims(rng));
      const AffineSubspace l2 = random_subspace(dims(rng));
      const AngleResult res = subspace_angle(l1, l2);
      if (res.containment) {
        rec.status = "skipped";
        rec.note = "one subspace contains the other";
        report.records.push_back(std::move(rec));
        continue;
      }
      const double oracle =
          angle_sup_oracle(l1, l2, 20000, trial_seed(cfg.seed, trial));
      rec.d_out = res.alpha;
      rec.length = oracle;
      rec.ratio = std::abs(res.alpha - oracle);
      rec.cert_valid = true;
      rec.label = "dims=" + std::to_string(l1.dim()) + "," +
                  std::to_string(l2.dim());
      mark_check(rec, rec.ratio <= bound, false,
                 "principal angle disagrees with the sampled oracle");
    } catch (const NumericalError& e) {
      rec.status = "numerical";
      rec.note = e.what();
    } catch (const InputError& e) {
      rec.status = "numerical";
      rec.note = std::string("input: ") + e.what();
    }
    report.records.push_back(std::move(rec));
  }
  report.finalize(bound);
  report.wall_time_seconds = timer.seconds();
  return report;
}

ExperimentReport run_classify(const CampaignConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;
  report.config.stratum.mode = Mode::Stratum;
  const StratumSpec s = report.config.stratum;
  s.validate();
  Timer timer;

  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 rng(trial_seed(cfg.seed, trial));
    TrialRecord rec;
    rec.trial = trial;
    rec.status = "ok";
    try {
      const MatrixPoint a = random_stratum_point(s, s.r, rng);
      rec.label = classify_component(a, s, cfg.tol.rank_tol).to_string();
      rec.cert_valid = true;
      mark_check(rec, same_component(a, a, s, cfg.tol.rank_tol), false,
                 "point not in its own component");
    } catch (const NumericalError& e) {
      rec.status = "numerical";
      rec.note = e.what();
    } catch (const InputError& e) {
      rec.status = "numerical";
      rec.note = std::string("input: ") + e.what();
    }
    report.records.push_back(std::move(rec));
  }
  report.finalize(0.0);
  report.wall_time_seconds = timer.seconds();
  return report;
}

ExperimentReport run_transversal(const CampaignConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;
  if (report.config.section.empty()) report.config.section = "cusp-family";
  const std::string section = report.config.section;
  Timer timer;

  struct GridPoint {
    MatrixPoint base;
    std::vector<MatrixPoint> v_basis;
    std::string where;
  };
  std::vector<GridPoint> grid;

  if (section == "cusp-family") {
    // three-parameter family through rank-one points (0, 0, z)
    Matrix dx = Matrix::Identity(3, 3);
    Matrix dy = Matrix::Zero(3, 3);
    dy(1, 0) = dy(2, 1) = 1.0;
    Matrix dz = Matrix::Zero(3, 3);
    dz(0, 2) = 1.0;
    const StratumSpec fs{Structure::General, Field::Complex, 3, 3, 1,
                         Mode::Stratum};
    std::vector<MatrixPoint> v_basis = {
        MatrixPoint(dx, fs.field, fs.space),
        MatrixPoint(dy, fs.field, fs.space),
        MatrixPoint(dz, fs.field, fs.space)};
    for (const Complex z : {Complex(1, 0), Complex(-1, 0), Complex(0.5, 0),
                            Complex(0, 1), Complex(1, 1), Complex(2, -0.5)}) {
      GridPoint g;
      g.base = cusp_family_section(0.0, 0.0, z);
      g.v_basis = v_basis;
      g.where = "z=(" + std::to_string(z.real()) + "," +
                std::to_string(z.imag()) + ")";
      grid.push_back(std::move(g));
    }
  } else if (section == "corank-surface") {
    const int k = 3;
    for (const double t : {0.2, 0.35, 0.5, 0.7, 0.85, 1.0}) {
      const double x = t * t;
      const double y = t * t * t;
      GridPoint g;
      g.base = corank_surface_section(x, y, k);
      RealMatrix dx = RealMatrix::Zero(2, 2);
      dx(0, 1) = (k - 1) * std::pow(x, k - 2);
      dx(1, 0) = 1.0;
      g.v_basis = {MatrixPoint::real(dx),
                   MatrixPoint::real(RealMatrix::Identity(2, 2))};
      g.where = "t=" + std::to_string(t);
      grid.push_back(std::move(g));
    }
  } else {
    throw InputError("transversal: unknown section '" + section +
                     "' (expected cusp-family or corank-surface)");
  }

  // the cusp family has too few parameters to ever be transversal to the
  // rank-one stratum; the corank surface is transversal away from 0
  const bool expected = section == "corank-surface";

  int trial = 0;
  std::string first_failure;
  for (const auto& g : grid) {
    TrialRecord rec;
    rec.trial = trial++;
    rec.status = "ok";
    rec.note = g.where;
    try {
      const bool transversal =
          transversal_at(g.base, g.v_basis, cfg.tol.rank_tol);
      rec.label = transversal ? "transversal" : "non-transversal";
      rec.cert_valid = true;
      rec.ratio = transversal == expected ? 0.0 : 1.0;
      if (!transversal && first_failure.empty()) first_failure = g.where;
      mark_check(rec, transversal == expected, false,
                 expected ? "expected transversal section point"
                          : "expected non-transversal section point");
    } catch (const NumericalError& e) {
      rec.status = "numerical";
      rec.note = e.what();
    }
    report.records.push_back(std::move(rec));
  }
  if (!first_failure.empty() && !report.records.empty()) {
    append_note(report.records.front(),
                "first non-transversal point at " + first_failure);
  }
  report.finalize(cfg.bound);
  report.wall_time_seconds = timer.seconds();
  return report;
}

ExperimentReport run_cusp(const CampaignConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;
  Timer timer;

  const double bound = cfg.bound > 0 ? cfg.bound : 1e-8;
  const int points = std::max(cfg.trials, 2);
  const double t_hi = 0.5;
  const double t_lo = 0.005;

  double prev_blowup = 0.0;
  for (int trial = 0; trial < points; ++trial) {
    const double u = static_cast<double>(trial) / (points - 1);
    const double t = t_hi * std::pow(t_lo / t_hi, u);
    TrialRecord rec;
    rec.trial = trial;
    rec.status = "ok";
    try {
      const double closed = cusp_arc_length(t);
      const double quad = detail::adaptive_simpson(
          [](double s) { return s * std::sqrt(4.0 + 9.0 * s * s); }, 0.0, t,
          1e-14);
      const double blowup = cusp_ratio(t);
      rec.d_out = t;
      rec.length = closed;
      rec.ratio = std::abs(closed - quad) / std::max(closed, 1e-300);
      rec.cert_valid = true;
      rec.label = "blowup=" + std::to_string(blowup);
      mark_check(rec, rec.ratio <= bound, false,
                 "closed-form arc length disagrees with quadrature");
      if (trial > 0) {
        // the inner/outer ratio must blow up as t -> 0
        mark_check(rec, blowup > prev_blowup, false,
                   "inner/outer ratio failed to increase toward the cusp");
      }
      prev_blowup = blowup;
    } catch (const NumericalError& e) {
      rec.status = "numerical";
      rec.note = e.what();
    }
    report.records.push_back(std::move(rec));
  }
  report.finalize(bound);
  report.wall_time_seconds = timer.seconds();
  return report;
}

}  // namespace stratapath
