#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "stratapath/matcore.hpp"
#include "stratapath/pathforge.hpp"
#include "stratapath/strata.hpp"

using namespace stratapath;

namespace {

RealMatrix random_real(int m, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  RealMatrix a(m, n);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) a(i, k) = gauss(rng);
  }
  return a;
}

RealMatrix skew_from_upper(int n, const std::vector<double>& upper) {
  RealMatrix a = RealMatrix::Zero(n, n);
  size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = upper[idx];
      a(j, i) = -upper[idx];
      ++idx;
    }
  }
  return a;
}

}  // namespace

TEST_CASE("pfaffian frozen values") {
  // pf = a01 a23 - a02 a13 + a03 a12 = 6 - 10 + 12 = 8
  const RealMatrix a4 = skew_from_upper(4, {1, 2, 3, 4, 5, 6});
  CHECK(pfaffian(a4) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(std::abs(a4.determinant() - 64.0) < 1e-9);

  // 6x6 instance frozen against a cofactor-expansion computation
  const RealMatrix a6 = skew_from_upper(
      6, {-2, -2, 7, -1, 1, 0, -2, 0, 3, 0, -7, 3, -1, -6, -3});
  CHECK(pfaffian(a6) == doctest::Approx(-59.0).epsilon(1e-12));
  CHECK(std::abs(a6.determinant() - 3481.0) < 1e-8);
}

TEST_CASE("pfaffian properties") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 25; ++i) {
    const int n = 2 * (1 + static_cast<int>(rng() % 3));
    RealMatrix raw = random_real(n, n, rng);
    const RealMatrix a = 0.5 * (raw - raw.transpose());
    const double pf = pfaffian(a);
    // pf^2 == det
    CHECK(pf * pf == doctest::Approx(a.determinant()).epsilon(1e-8));
    // congruence covariance: pf(G A G^T) == det(G) pf(A)
    const RealMatrix g = random_real(n, n, rng);
    CHECK(pfaffian((g * a * g.transpose()).eval()) ==
          doctest::Approx(g.determinant() * pf).epsilon(1e-8));
  }
  // odd-sized input is rejected
  CHECK_THROWS_AS(pfaffian(RealMatrix::Zero(3, 3)), InputError);
}

TEST_CASE("classify_component census") {
  const StratumSpec gl2{Structure::General, Field::Real, 2, 2, 2,
                        Mode::Stratum};
  RealMatrix m(2, 2);
  m << 2, 0, 0, 3;
  CHECK(classify_component(MatrixPoint::real(m), gl2) ==
        ComponentLabel::det(+1));
  m(0, 0) = -2;
  CHECK(classify_component(MatrixPoint::real(m), gl2) ==
        ComponentLabel::det(-1));

  const StratumSpec sym{Structure::Symmetric, Field::Real, 3, 3, 3,
                        Mode::Stratum};
  RealMatrix d = RealMatrix::Zero(3, 3);
  d(0, 0) = 1;
  d(1, 1) = 2;
  d(2, 2) = -3;
  CHECK(classify_component(MatrixPoint::real(d, Structure::Symmetric), sym) ==
        ComponentLabel::signature(2, 1));

  const StratumSpec skew{Structure::Skew, Field::Real, 4, 4, 4, Mode::Stratum};
  const RealMatrix j4 = skew_from_upper(4, {1, 0, 0, 0, 0, 1});
  CHECK(classify_component(MatrixPoint::real(j4, Structure::Skew), skew) ==
        ComponentLabel::pfaffian_sign(+1));
  CHECK(classify_component(MatrixPoint::real((-j4).eval(), Structure::Skew),
                           skew) == ComponentLabel::pfaffian_sign(+1));
  // swapping two rows+columns flips the Pfaffian
  RealMatrix flip = j4;
  flip.row(0).swap(flip.row(1));
  flip.col(0).swap(flip.col(1));
  CHECK(classify_component(MatrixPoint::real(flip, Structure::Skew), skew) ==
        ComponentLabel::pfaffian_sign(-1));

  // complex strata and rank-deficient real strata are connected
  const StratumSpec glc{Structure::General, Field::Complex, 2, 2, 2,
                        Mode::Stratum};
  Matrix c = Matrix::Identity(2, 2);
  CHECK(classify_component(MatrixPoint(c, Field::Complex, Structure::General),
                           glc) == ComponentLabel::connected());
  const StratumSpec low{Structure::General, Field::Real, 3, 3, 1,
                        Mode::Stratum};
  RealMatrix rank1 = RealMatrix::Zero(3, 3);
  rank1(0, 0) = 1;
  CHECK(classify_component(MatrixPoint::real(rank1), low) ==
        ComponentLabel::connected());
}

TEST_CASE("same_component agrees with labels") {
  std::mt19937_64 rng(13);
  const StratumSpec gl3{Structure::General, Field::Real, 3, 3, 3,
                        Mode::Stratum};
  for (int i = 0; i < 20; ++i) {
    const MatrixPoint a = MatrixPoint::real(random_real(3, 3, rng));
    const MatrixPoint b = MatrixPoint::real(random_real(3, 3, rng));
    const bool same = classify_component(a, gl3) == classify_component(b, gl3);
    CHECK(same_component(a, b, gl3) == same);
  }
}

TEST_CASE("component label rendering") {
  CHECK(ComponentLabel::connected().to_string() == "connected");
  CHECK(ComponentLabel::det(+1).to_string().find("+") != std::string::npos);
  CHECK(ComponentLabel::signature(2, 1).to_string().find("2") !=
        std::string::npos);
}

TEST_CASE("tangent_space dimension and orthonormality") {
  std::mt19937_64 rng(29);
  struct Config {
    Structure space;
    int m, n, r;
  };
  for (const Config c : {Config{Structure::General, 3, 4, 2},
                         Config{Structure::Symmetric, 4, 4, 2},
                         Config{Structure::Skew, 4, 4, 2}}) {
    RealMatrix raw = random_real(c.m, c.n, rng);
    if (c.space == Structure::Symmetric) {
      raw = 0.5 * (raw + raw.transpose()).eval();
    }
    if (c.space == Structure::Skew) raw = 0.5 * (raw - raw.transpose()).eval();
    const MatrixPoint a =
        truncate_to_rank(MatrixPoint::real(raw, c.space), c.r);
    const TangentSpace ts = tangent_space(a, c.r);
    CHECK(ts.dimension() == tangent_dimension(c.space, c.m, c.n, c.r));
    for (int i = 0; i < ts.dimension(); ++i) {
      CHECK(ts.basis[i].structure() == c.space);
      CHECK(std::abs(ts.basis[i].norm() - 1.0) < 1e-9);
      for (int j = i + 1; j < ts.dimension(); ++j) {
        const Complex inner =
            (ts.basis[i].entries().adjoint() * ts.basis[j].entries()).trace();
        CHECK(std::abs(inner) < 1e-9);
      }
    }
  }
}

TEST_CASE("classify_component is invariant under connected-group frames") {
  std::mt19937_64 rng(61);
  auto random_so = [&](int n) {
    Eigen::HouseholderQR<RealMatrix> qr(random_real(n, n, rng));
    RealMatrix q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
  };
  // real general full rank: det sign survives SO(m) x SO(n)
  const StratumSpec gl3{Structure::General, Field::Real, 3, 3, 3,
                        Mode::Stratum};
  for (int i = 0; i < 10; ++i) {
    const MatrixPoint a = MatrixPoint::real(random_real(3, 3, rng));
    const RealMatrix moved = random_so(3) * a.real_entries() *
                             random_so(3).transpose();
    CHECK(classify_component(a, gl3) ==
          classify_component(MatrixPoint::real(moved), gl3));
  }
  // symmetric signature and skew Pfaffian sign survive SO(n) congruence
  const StratumSpec sym{Structure::Symmetric, Field::Real, 3, 3, 3,
                        Mode::Stratum};
  const StratumSpec skew{Structure::Skew, Field::Real, 4, 4, 4, Mode::Stratum};
  for (int i = 0; i < 10; ++i) {
    const RealMatrix raw = random_real(3, 3, rng);
    const RealMatrix s3 = 0.5 * (raw + raw.transpose()).eval();
    const RealMatrix q3 = random_so(3);
    CHECK(classify_component(MatrixPoint::real(s3, Structure::Symmetric),
                             sym) ==
          classify_component(
              MatrixPoint::real(
                  enforce_structure((q3 * s3 * q3.transpose()).cast<Complex>(),
                                    Structure::Symmetric)
                      .real(),
                  Structure::Symmetric),
              sym));

    const RealMatrix raw4 = random_real(4, 4, rng);
    const RealMatrix k4 = 0.5 * (raw4 - raw4.transpose()).eval();
    const RealMatrix q4 = random_so(4);
    CHECK(classify_component(MatrixPoint::real(k4, Structure::Skew), skew) ==
          classify_component(
              MatrixPoint::real(
                  enforce_structure((q4 * k4 * q4.transpose()).cast<Complex>(),
                                    Structure::Skew)
                      .real(),
                  Structure::Skew),
              skew));
  }
}

TEST_CASE("tangent dimension formulas across the shape grid") {
  std::mt19937_64 rng(71);
  for (int m = 1; m <= 5; ++m) {
    for (int n = 1; n <= 5; ++n) {
      for (int r = 1; r <= std::min(m, n); ++r) {
        const MatrixPoint a =
            truncate_to_rank(MatrixPoint::real(random_real(m, n, rng)), r);
        CHECK(tangent_space(a, r).dimension() ==
              tangent_dimension(Structure::General, m, n, r));
      }
    }
  }
  for (int n = 2; n <= 5; ++n) {
    for (int r = 1; r <= n; ++r) {
      RealMatrix raw = random_real(n, n, rng);
      raw = 0.5 * (raw + raw.transpose()).eval();
      const MatrixPoint a = truncate_to_rank(
          MatrixPoint::real(raw, Structure::Symmetric), r);
      CHECK(tangent_space(a, r).dimension() ==
            tangent_dimension(Structure::Symmetric, n, n, r));
    }
    for (int r = 2; r <= n; r += 2) {
      RealMatrix raw = random_real(n, n, rng);
      raw = 0.5 * (raw - raw.transpose()).eval();
      const MatrixPoint a =
          truncate_to_rank(MatrixPoint::real(raw, Structure::Skew), r);
      CHECK(tangent_space(a, r).dimension() ==
            tangent_dimension(Structure::Skew, n, n, r));
    }
  }
}

TEST_CASE("tangent vectors are first-order directions of the stratum") {
  std::mt19937_64 rng(37);
  const MatrixPoint a =
      truncate_to_rank(MatrixPoint::real(random_real(3, 3, rng)), 2);
  const TangentSpace ts = tangent_space(a, 2);
  for (const auto& v : ts.basis) {
    // moving along a tangent direction leaves the stratum only to second
    // order: sigma_3 of a + h v is O(h^2)
    const double h = 1e-5;
    const Matrix moved = a.entries() + h * v.entries();
    const RealVector sv = singular_values(moved);
    CHECK(sv(2) < 50.0 * h * h);
  }
}

TEST_CASE("transversal_at detects the ambient span") {
  std::mt19937_64 rng(41);
  const MatrixPoint a =
      truncate_to_rank(MatrixPoint::real(random_real(2, 2, rng)), 1);
  // the full ambient basis is always transversal
  std::vector<MatrixPoint> full;
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      RealMatrix e = RealMatrix::Zero(2, 2);
      e(i, k) = 1.0;
      full.push_back(MatrixPoint::real(e));
    }
  }
  CHECK(transversal_at(a, full));
  // an empty section can never complement a proper tangent space
  CHECK_FALSE(transversal_at(a, {}));
  // tangent vectors themselves add nothing
  const TangentSpace ts = tangent_space(a, 1);
  CHECK_FALSE(transversal_at(a, ts.basis));
}

TEST_CASE("gauss_path_to_pivot reaches the pivot inside the stratum") {
  std::mt19937_64 rng(53);
  struct Config {
    Structure space;
    int m, n, r;
  };
  for (const Config c : {Config{Structure::General, 3, 3, 2},
                         Config{Structure::General, 2, 2, 2},
                         Config{Structure::Symmetric, 3, 3, 2},
                         Config{Structure::Skew, 4, 4, 2}}) {
    const StratumSpec s{c.space, Field::Real, c.m, c.n, c.r, Mode::Stratum};
    for (int trial = 0; trial < 10; ++trial) {
      RealMatrix raw = random_real(c.m, c.n, rng);
      if (c.space == Structure::Symmetric) {
        raw = 0.5 * (raw + raw.transpose()).eval();
      }
      if (c.space == Structure::Skew) {
        raw = 0.5 * (raw - raw.transpose()).eval();
      }
      MatrixPoint p = truncate_to_rank(MatrixPoint::real(raw, c.space), c.r);
      const double delta = 2.0 * p.norm();
      const PiecewisePath path = gauss_path_to_pivot(p, s, delta);
      REQUIRE_FALSE(path.empty());
      CHECK(frobenius_dist(path.start(), p) < 1e-9 * (1.0 + p.norm()));
      CHECK(path.join_residual() < 1e-9 * (1.0 + p.norm()));
      // endpoint: delta I_r (up to sign conventions) supported in the
      // leading block, with the right rank
      const MatrixPoint q = path.end();
      CHECK(numerical_rank(q) == c.r);
      const Certificate cert = certify(path, s, 64);
      CHECK(cert.valid);
    }
  }
}
