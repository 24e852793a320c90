#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "stratapath/matcore.hpp"
#include "stratapath/oracle.hpp"
#include "stratapath/pathforge_types.hpp"

using namespace stratapath;

TEST_CASE("sample_stratum respects the spec") {
  struct Config {
    Structure space;
    Field field;
    int m, n, r;
    Mode mode;
  };
  const Config configs[] = {
      {Structure::General, Field::Real, 2, 2, 1, Mode::Closure},
      {Structure::General, Field::Complex, 3, 2, 2, Mode::Stratum},
      {Structure::Symmetric, Field::Real, 3, 3, 2, Mode::Closure},
      {Structure::Skew, Field::Real, 4, 4, 2, Mode::Closure},
  };
  for (const Config& c : configs) {
    const StratumSpec s{c.space, c.field, c.m, c.n, c.r, c.mode};
    const PointCloud cloud = sample_stratum(s, 300, 2.0, 9);
    REQUIRE(static_cast<int>(cloud.points.size()) == 300);
    std::set<int> seen_ranks;
    for (const auto& p : cloud.points) {
      CHECK(s.admits(p));
      CHECK(p.norm() <= 2.0 + 1e-9);
      const int rank = numerical_rank(p);
      seen_ranks.insert(rank);
      if (c.mode == Mode::Stratum) {
        CHECK(rank == c.r);
      } else {
        CHECK(rank <= c.r);
      }
      if (c.space == Structure::Skew) CHECK(rank % 2 == 0);
    }
    if (c.mode == Mode::Closure) {
      // mixed ranks are actually exercised
      CHECK(seen_ranks.size() >= 2);
    }
  }
}

TEST_CASE("sample_stratum is deterministic in the seed") {
  const StratumSpec s{Structure::General, Field::Real, 2, 2, 1, Mode::Closure};
  const PointCloud c1 = sample_stratum(s, 50, 1.0, 42);
  const PointCloud c2 = sample_stratum(s, 50, 1.0, 42);
  const PointCloud c3 = sample_stratum(s, 50, 1.0, 43);
  double diff12 = 0.0, diff13 = 0.0;
  for (int i = 0; i < 50; ++i) {
    diff12 += frobenius_dist(c1.points[i], c2.points[i]);
    diff13 += frobenius_dist(c1.points[i], c3.points[i]);
  }
  CHECK(diff12 == 0.0);
  CHECK(diff13 > 0.0);
}

TEST_CASE("geodesic graph edges are Euclidean chords") {
  const StratumSpec s{Structure::General, Field::Real, 2, 2, 1, Mode::Closure};
  const GeodesicGraph g = build_geodesic_graph(sample_stratum(s, 120, 1.0, 7), 6);
  CHECK_FALSE(g.edges.empty());
  std::set<std::pair<int, int>> seen;
  for (const auto& e : g.edges) {
    CHECK(e.u < e.v);
    CHECK(seen.insert({e.u, e.v}).second);  // deduplicated
    CHECK(e.w == doctest::Approx(frobenius_dist(g.cloud.points[e.u],
                                                g.cloud.points[e.v]))
                     .epsilon(1e-12));
  }
}

TEST_CASE("graph distance dominates the outer metric") {
  const StratumSpec s{Structure::General, Field::Real, 2, 2, 1, Mode::Closure};
  const GeodesicGraph g =
      build_geodesic_graph(sample_stratum(s, 400, 1.0, 11), 10);
  const PointCloud queries = sample_stratum(s, 20, 0.9, 99);
  for (int i = 0; i + 1 < 20; i += 2) {
    const MatrixPoint& a = queries.points[i];
    const MatrixPoint& b = queries.points[i + 1];
    const double est = graph_inner_distance(g, a, b);
    if (!std::isfinite(est)) continue;
    CHECK(est >= frobenius_dist(a, b) - 1e-9);
  }
}

TEST_CASE("graph distance approximates a known geodesic") {
  // rank-1 2x2 ray through t * e11: the stratum restricted to the ray is
  // a straight line, so graph estimates approach the chord
  StratumSpec s{Structure::General, Field::Real, 2, 2, 1, Mode::Stratum};
  PointCloud cloud;
  cloud.stratum = s;
  for (int i = 1; i <= 200; ++i) {
    RealMatrix m = RealMatrix::Zero(2, 2);
    m(0, 0) = i * 0.01;
    cloud.points.push_back(MatrixPoint::real(m));
  }
  const GeodesicGraph g = build_geodesic_graph(cloud, 3);
  RealMatrix pa = RealMatrix::Zero(2, 2), pb = RealMatrix::Zero(2, 2);
  pa(0, 0) = 0.3;
  pb(0, 0) = 1.7;
  const double est =
      graph_inner_distance(g, MatrixPoint::real(pa), MatrixPoint::real(pb));
  CHECK(est == doctest::Approx(1.4).epsilon(0.02));
}

TEST_CASE("disconnected clusters give an infinite estimate") {
  StratumSpec s{Structure::General, Field::Real, 2, 2, 1, Mode::Stratum};
  PointCloud cloud;
  cloud.stratum = s;
  for (int cluster = 0; cluster < 2; ++cluster) {
    for (int i = 0; i < 10; ++i) {
      RealMatrix m = RealMatrix::Zero(2, 2);
      m(0, 0) = cluster * 100.0 + 1.0 + i * 0.001;
      cloud.points.push_back(MatrixPoint::real(m));
    }
  }
  const GeodesicGraph g = build_geodesic_graph(cloud, 2);
  RealMatrix pa = RealMatrix::Zero(2, 2), pb = RealMatrix::Zero(2, 2);
  pa(0, 0) = 1.0;
  pb(0, 0) = 101.0;
  const double est =
      graph_inner_distance(g, MatrixPoint::real(pa), MatrixPoint::real(pb));
  CHECK(std::isinf(est));
}

TEST_CASE("cusp closed forms against quadrature") {
  for (double t : {0.5, 0.25, 0.1, 0.05, 0.01}) {
    const double quad = detail::adaptive_simpson(
        [](double u) { return u * std::sqrt(4.0 + 9.0 * u * u); }, 0.0, t,
        1e-14);
    CHECK(cusp_arc_length(t) == doctest::Approx(quad).epsilon(1e-10));
    CHECK(cusp_ratio(t) ==
          doctest::Approx(cusp_arc_length(t) / (t * t * t)).epsilon(1e-12));
  }
  // frozen values
  CHECK(cusp_arc_length(0.05) ==
        doctest::Approx(0.0025035123360343586).epsilon(1e-12));
  CHECK(cusp_ratio(0.05) == doctest::Approx(20.028098688).epsilon(1e-8));
}

TEST_CASE("cusp ratio blows up monotonically") {
  double prev = cusp_ratio(0.5);
  for (double t : {0.25, 0.1, 0.05, 0.01, 0.001}) {
    const double r = cusp_ratio(t);
    CHECK(r > prev);
    prev = r;
  }
  CHECK(cusp_ratio(0.01) > 90.0);
  // near t = 0 the ratio behaves like 1/t: arc ~ t^2
  CHECK(cusp_ratio(1e-6) == doctest::Approx(1e6).epsilon(1e-3));
}

TEST_CASE("cusp_family_section determinant identity") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < 30; ++i) {
    const Complex x(gauss(rng), gauss(rng));
    const Complex y(gauss(rng), gauss(rng));
    const Complex z(gauss(rng), gauss(rng));
    const MatrixPoint f = cusp_family_section(x, y, z);
    REQUIRE(f.rows() == 3);
    const Complex det = f.entries().determinant();
    const Complex expected = x * x * x + y * y * z;
    CHECK(std::abs(det - expected) < 1e-9 * (1.0 + std::abs(expected)));
  }
  // rank-1 points of the family sit at x = y = 0
  CHECK(numerical_rank(cusp_family_section(0.0, 0.0, 2.0)) == 1);
}

TEST_CASE("corank_surface_section determinant identity") {
  std::mt19937_64 rng(79);
  std::normal_distribution<double> gauss;
  for (int k : {2, 3, 4}) {
    for (int i = 0; i < 20; ++i) {
      const double x = gauss(rng);
      const double y = gauss(rng);
      const MatrixPoint j = corank_surface_section(x, y, k);
      const double det = j.entries().determinant().real();
      CHECK(det == doctest::Approx(y * y - std::pow(x, k)).epsilon(1e-9));
    }
  }
  // on the curve y^2 = x^k the section drops to rank 1
  CHECK(numerical_rank(corank_surface_section(0.25, std::pow(0.5, 3), 3)) ==
        1);
}
