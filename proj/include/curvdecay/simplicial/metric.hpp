#pragma once

// Approximate geodesic distances on a simplicial complex: shortest paths on
// a graph whose nodes are barycentric lattice meshes of the proper faces
// (paths cross simplex interiors on straight l1 segments, so interior nodes
// are never needed), plus the query points. Two-sided error is O(eps) per
// simplex crossed.

#include <limits>
#include <queue>

#include "curvdecay/simplicial/complex.hpp"

namespace curvdecay::simplicial {

inline constexpr double kInfDist = std::numeric_limits<double>::infinity();

class SimplicialMetric {
 public:
  SimplicialMetric(SimplicialComplex X, double eps) : X_(std::move(X)), eps_(eps) {
    if (eps <= 0) throw std::invalid_argument("distance mesh eps must be positive");
    build_nodes();
    build_edges();
  }

  const SimplicialComplex& complex() const { return X_; }

  double distance(const SimplicialPoint& x, const SimplicialPoint& y) const {
    auto m = pairwise({x, y});
    return m[0][1];
  }

  // all-pairs distances between query points through the mesh graph
  std::vector<std::vector<double>> pairwise(const std::vector<SimplicialPoint>& pts) const {
    int base = static_cast<int>(nodes_.size());
    int total = base + static_cast<int>(pts.size());
    // adjacency extension for the query points
    std::vector<std::vector<std::pair<int, double>>> extra(pts.size());
    std::vector<std::vector<int>> query_in_simplex(X_.maximal_simplices().size());
    for (std::size_t qi = 0; qi < pts.size(); ++qi)
      for (int si : X_.maximal_containing(pts[qi].support()))
        query_in_simplex[si].push_back(static_cast<int>(qi));

    auto connect = [&](int qi, int node, double w) {
      extra[qi].push_back({node, w});
    };
    for (std::size_t si = 0; si < X_.maximal_simplices().size(); ++si) {
      for (int qi : query_in_simplex[si]) {
        for (int nd : nodes_of_simplex_[si])
          connect(qi, nd, l1_within(pts[qi], nodes_[nd]));
        for (int qj : query_in_simplex[si])
          if (qj != qi) connect(qi, base + qj, l1_within(pts[qi], pts[qj]));
      }
    }

    std::vector<std::vector<double>> out(pts.size(), std::vector<double>(pts.size(), kInfDist));
    for (std::size_t src = 0; src < pts.size(); ++src) {
      std::vector<double> dist(total, kInfDist);
      std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                          std::greater<>>
          pq;
      dist[base + src] = 0.0;
      pq.push({0.0, base + static_cast<int>(src)});
      while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        auto relax = [&](int v, double w) {
          if (d + w < dist[v] - 1e-15) {
            dist[v] = d + w;
            pq.push({dist[v], v});
          }
        };
        if (u >= base) {
          for (auto [v, w] : extra[u - base]) relax(v, w);
        } else {
          for (auto [v, w] : adj_[u]) relax(v, w);
          // node -> query edges (mirror of extra)
          for (std::size_t qj = 0; qj < pts.size(); ++qj)
            for (auto [v, w] : extra[qj])
              if (v == u) relax(base + static_cast<int>(qj), w);
        }
      }
      for (std::size_t dst = 0; dst < pts.size(); ++dst) out[src][dst] = dist[base + dst];
      out[src][src] = 0.0;
    }
    return out;
  }

 private:
  double l1_within(const SimplicialPoint& x, const SimplicialPoint& y) const {
    double d = 0.0;
    Face u = x.support(), v = y.support(), both;
    std::set_union(u.begin(), u.end(), v.begin(), v.end(), std::back_inserter(both));
    for (int vv : both) d += std::abs(x.weight(vv) - y.weight(vv));
    return d;
  }

  void build_nodes() {
    int M = std::max(1, static_cast<int>(std::ceil(2.0 / eps_)));
    std::set<std::vector<std::pair<int, int>>> seen;  // (vertex, numerator) lists
    for (const auto& f : X_.faces()) {
      if (static_cast<int>(f.size()) - 1 >= X_.dimension() && X_.dimension() > 0)
        continue;  // proper faces only; interiors are crossed by straight segments
      int k = static_cast<int>(f.size());
      // lattice points: compositions of M into k nonnegative parts
      std::vector<int> comp(k, 0);
      comp[0] = M;
      while (true) {
        std::vector<std::pair<int, int>> key;
        std::map<int, double> w;
        for (int i = 0; i < k; ++i)
          if (comp[i] > 0) {
            key.push_back({f[i], comp[i]});
            w[f[i]] = static_cast<double>(comp[i]) / M;
          }
        if (seen.insert(key).second) nodes_.push_back(SimplicialPoint(std::move(w)));
        // next composition in colex order
        int i = k - 1;
        while (i > 0 && comp[i] == 0) --i;
        if (i == 0) break;
        int val = comp[i];
        comp[i] = 0;
        comp[i - 1] += 1;
        comp[k - 1] = val - 1;
        if (k == 1) break;
      }
    }
    nodes_of_simplex_.assign(X_.maximal_simplices().size(), {});
    for (std::size_t ni = 0; ni < nodes_.size(); ++ni)
      for (int si : X_.maximal_containing(nodes_[ni].support()))
        nodes_of_simplex_[si].push_back(static_cast<int>(ni));
  }

  void build_edges() {
    adj_.assign(nodes_.size(), {});
    for (const auto& members : nodes_of_simplex_)
      for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          double w = l1_within(nodes_[members[i]], nodes_[members[j]]);
          adj_[members[i]].push_back({members[j], w});
          adj_[members[j]].push_back({members[i], w});
        }
  }

  SimplicialComplex X_;
  double eps_;
  std::vector<SimplicialPoint> nodes_;
  std::vector<std::vector<int>> nodes_of_simplex_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
};

inline double distance(const SimplicialComplex& X, const SimplicialPoint& x,
                       const SimplicialPoint& y, double eps) {
  return SimplicialMetric(X, eps).distance(x, y);
}

}  // namespace curvdecay::simplicial
