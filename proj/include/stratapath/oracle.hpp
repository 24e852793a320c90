#pragma once

#include <cstdint>
#include <vector>

#include "stratapath/types.hpp"

namespace stratapath {

/// Sampled discretization of a stratum or closure inside a norm ball.
struct PointCloud {
  StratumSpec stratum;
  std::vector<MatrixPoint> points;
  double radius = 1.0;
  std::uint64_t seed = 0;
};

/// Deterministic sampler: U Sigma V* with rank exactly r (stratum mode) or
/// mixed ranks 0..r (closure mode); structured spaces via congruence of
/// canonical blocks.
PointCloud sample_stratum(const StratumSpec& s, int count, double radius,
                          std::uint64_t seed);

/// Symmetric k-nearest-neighbor graph with Euclidean chord weights.
struct GeodesicGraph {
  PointCloud cloud;
  int k = 0;
  struct Edge {
    int u, v;
    double w;
  };
  std::vector<Edge> edges;
};

GeodesicGraph build_geodesic_graph(PointCloud cloud, int k);

/// Discrete upper estimate of the inner distance: shortest path through
/// the graph, query points attached to their k nearest cloud points.
/// Returns +infinity when disconnected (a value, not an error).
double graph_inner_distance(const GeodesicGraph& g, const MatrixPoint& a,
                            const MatrixPoint& b);

/// Exact inner/outer ratio for the cusp points (t^2, +-t^3) on y^2 = x^3:
/// ((4 + 9 t^2)^{3/2} - 8) / (27 t^3). Unbounded as t -> 0.
double cusp_ratio(double t);

/// Arc length of s -> (s^2, s^3) from 0 to t by the closed form; the
/// quadrature cross-check lives in the tests.
double cusp_arc_length(double t);

/// The linear section F(x,y,z) = [[x,0,z],[y,x,0],[0,y,x]] of
/// Mat_{3x3} whose det is x^3 + y^2 z: a family of cusps degenerating to
/// a line, not Lipschitz normally embedded.
MatrixPoint cusp_family_section(Complex x, Complex y, Complex z);

/// The surface (x,y) -> [[y, x^{k-1}], [x, y]] in Mat_{2x2}(R); for k >= 3
/// it meets the rank strata transversally away from 0 although the
/// intersection with the rank-<=1 locus is a (non-LNE) cusp.
MatrixPoint corank_surface_section(double x, double y, int k);

}  // namespace stratapath
