#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "stratapath/matcore.hpp"
#include "stratapath/oracle.hpp"

namespace stratapath {

namespace {

RealMatrix random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  RealMatrix w(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w(i, j) = g(rng);
  }
  Eigen::HouseholderQR<RealMatrix> qr(w);
  RealMatrix q = qr.householderQ();
  const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  }
  return q;
}

Matrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix w(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w(i, j) = Complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(w);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

}  // namespace

PointCloud sample_stratum(const StratumSpec& s, int count, double radius,
                          std::uint64_t seed) {
  s.validate();
  if (count < 1) throw InputError("sample_stratum: count must be positive");
  if (count > 10000) {
    throw InputError("sample_stratum: clouds are capped at 10^4 points");
  }
  PointCloud cloud;
  cloud.stratum = s;
  cloud.radius = radius;
  cloud.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.2, 1.0);
  std::uniform_real_distribution<double> rad(0.05, 1.0);
  std::uniform_int_distribution<int> rank_pick(0, s.r);
  std::bernoulli_distribution coin(0.5);

  for (int idx = 0; idx < count; ++idx) {
    int rank = s.mode == Mode::Stratum ? s.r : rank_pick(rng);
    if (s.space == Structure::Skew) rank &= ~1;
    Matrix a = Matrix::Zero(s.m, s.n);
    if (rank > 0) {
      switch (s.space) {
        case Structure::General: {
          Matrix u = s.field == Field::Complex
                         ? random_unitary(s.m, rng)
                         : random_orthogonal(s.m, rng).cast<Complex>().eval();
          Matrix v = s.field == Field::Complex
                         ? random_unitary(s.n, rng)
                         : random_orthogonal(s.n, rng).cast<Complex>().eval();
          Matrix sigma = Matrix::Zero(s.m, s.n);
          for (int i = 0; i < rank; ++i) sigma(i, i) = mag(rng);
          a = u * sigma * v.adjoint();
          break;
        }
        case Structure::Symmetric: {
          const RealMatrix q = random_orthogonal(s.n, rng);
          RealVector lam = RealVector::Zero(s.n);
          for (int i = 0; i < rank; ++i) {
            lam(i) = (coin(rng) ? 1.0 : -1.0) * mag(rng);
          }
          a = (q * lam.asDiagonal() * q.transpose()).cast<Complex>();
          break;
        }
        case Structure::Skew: {
          const RealMatrix q = random_orthogonal(s.n, rng);
          RealMatrix blocks = RealMatrix::Zero(s.n, s.n);
          for (int i = 0; i + 1 < rank; i += 2) {
            const double lam = mag(rng);
            blocks(i, i + 1) = lam;
            blocks(i + 1, i) = -lam;
          }
          a = (q * blocks * q.transpose()).cast<Complex>();
          break;
        }
      }
      if (s.space != Structure::General) {
        a = enforce_structure(a, s.space).real().cast<Complex>();
      }
      const double target = radius * rad(rng);
      a *= target / a.norm();
    }
    cloud.points.emplace_back(std::move(a), s.field, s.space);
  }
  return cloud;
}

GeodesicGraph build_geodesic_graph(PointCloud cloud, int k) {
  if (cloud.points.empty()) {
    throw InputError("build_geodesic_graph: empty cloud");
  }
  const int n = static_cast<int>(cloud.points.size());
  k = std::min(k, n - 1);
  GeodesicGraph g;
  g.k = k;
  std::vector<std::pair<double, int>> nearest;
  std::vector<std::tuple<int, int, double>> raw;
  for (int i = 0; i < n; ++i) {
    nearest.clear();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      nearest.push_back({frobenius_dist(cloud.points[i], cloud.points[j]), j});
    }
    std::partial_sort(nearest.begin(), nearest.begin() + k, nearest.end());
    for (int t = 0; t < k; ++t) {
      const int j = nearest[t].second;
      raw.emplace_back(std::min(i, j), std::max(i, j), nearest[t].first);
    }
  }
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  for (const auto& [u, v, w] : raw) g.edges.push_back({u, v, w});
  g.cloud = std::move(cloud);
  return g;
}

double graph_inner_distance(const GeodesicGraph& g, const MatrixPoint& a,
                            const MatrixPoint& b) {
  if (g.cloud.points.empty()) {
    throw InputError("graph_inner_distance: empty cloud");
  }
  if (frobenius_dist(a, b) == 0.0) return 0.0;
  const int n = static_cast<int>(g.cloud.points.size());
  const int src = n, dst = n + 1;
  std::vector<std::vector<std::pair<int, double>>> adj(n + 2);
  auto add_edge = [&](int u, int v, double w) {
    adj[u].push_back({v, w});
    adj[v].push_back({u, w});
  };
  for (const auto& e : g.edges) add_edge(e.u, e.v, e.w);

  // Attach the query points to their k nearest cloud points.
  const int k = std::min(g.k, n);
  for (int which = 0; which < 2; ++which) {
    const MatrixPoint& q = which == 0 ? a : b;
    std::vector<std::pair<double, int>> nearest;
    for (int j = 0; j < n; ++j) {
      nearest.push_back({frobenius_dist(q, g.cloud.points[j]), j});
    }
    std::partial_sort(nearest.begin(), nearest.begin() + k, nearest.end());
    for (int t = 0; t < k; ++t) {
      add_edge(which == 0 ? src : dst, nearest[t].second, nearest[t].first);
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n + 2, inf);
  dist[src] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u == dst) break;
    for (const auto& [v, w] : adj[u]) {
      if (d + w < dist[v]) {
        dist[v] = d + w;
        pq.push({dist[v], v});
      }
    }
  }
  return dist[dst];
}

double cusp_arc_length(double t) {
  // speed of s -> (s^2, s^3) is s sqrt(4 + 9 s^2); antiderivative
  // (4 + 9 s^2)^{3/2} / 27.
  return (std::pow(4.0 + 9.0 * t * t, 1.5) - 8.0) / 27.0;
}

double cusp_ratio(double t) {
  if (!(t > 0.0 && t <= 1.0)) {
    throw InputError("cusp_ratio: t must lie in (0, 1]");
  }
  // d_in = 2 * arc(t) through the cusp point, d_out = 2 t^3.
  return cusp_arc_length(t) / (t * t * t);
}

MatrixPoint cusp_family_section(Complex x, Complex y, Complex z) {
  Matrix f(3, 3);
  f << x, Complex(0), z,  //
      y, x, Complex(0),   //
      Complex(0), y, x;
  return MatrixPoint(std::move(f), Field::Complex, Structure::General);
}

MatrixPoint corank_surface_section(double x, double y, int k) {
  if (k < 2) throw InputError("corank_surface_section: k must be >= 2");
  RealMatrix j(2, 2);
  j << y, std::pow(x, k - 1), x, y;
  return MatrixPoint::real(j);
}

}  // namespace stratapath
