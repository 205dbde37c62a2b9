#pragma once

// Finite abstract simplicial complexes with the standard simplicial metric:
// l1 inside a simplex, shortest path length across simplices, infinity
// between components.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace curvdecay::simplicial {

using Face = std::vector<int>;  // sorted vertex indices

class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  SimplicialComplex(int vertices, std::vector<Face> maximal) : n_(vertices) {
    for (auto& f : maximal) {
      std::sort(f.begin(), f.end());
      f.erase(std::unique(f.begin(), f.end()), f.end());
      if (f.empty()) throw std::invalid_argument("empty simplex");
      for (int v : f)
        if (v < 0 || v >= n_) throw std::invalid_argument("vertex index out of range");
    }
    // drop duplicates and faces of other maximal simplices
    std::sort(maximal.begin(), maximal.end());
    maximal.erase(std::unique(maximal.begin(), maximal.end()), maximal.end());
    for (const auto& f : maximal) {
      bool contained = false;
      for (const auto& g : maximal)
        if (&f != &g && f.size() < g.size() &&
            std::includes(g.begin(), g.end(), f.begin(), f.end()))
          contained = true;
      if (!contained) maximal_.push_back(f);
    }
  }

  int vertex_count() const { return n_; }
  const std::vector<Face>& maximal_simplices() const { return maximal_; }

  int dimension() const {
    int d = -1;
    for (const auto& f : maximal_) d = std::max<int>(d, static_cast<int>(f.size()) - 1);
    return d;
  }

  // all nonempty faces, downward closure of the maximal simplices
  std::vector<Face> faces() const {
    std::set<Face> out;
    for (const auto& f : maximal_) {
      int k = static_cast<int>(f.size());
      for (int mask = 1; mask < (1 << k); ++mask) {
        Face sub;
        for (int i = 0; i < k; ++i)
          if (mask & (1 << i)) sub.push_back(f[i]);
        out.insert(sub);
      }
    }
    return {out.begin(), out.end()};
  }

  bool face_in_some_maximal(const Face& f) const {
    for (const auto& g : maximal_)
      if (std::includes(g.begin(), g.end(), f.begin(), f.end())) return true;
    return false;
  }

  std::vector<int> maximal_containing(const Face& f) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < maximal_.size(); ++i)
      if (std::includes(maximal_[i].begin(), maximal_[i].end(), f.begin(), f.end()))
        out.push_back(static_cast<int>(i));
    return out;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["vertices"] = n_;
    j["maximal"] = maximal_;
    return j;
  }
  static SimplicialComplex from_json(const nlohmann::json& j) {
    return SimplicialComplex(j.at("vertices").get<int>(),
                             j.at("maximal").get<std::vector<Face>>());
  }

 private:
  int n_ = 0;
  std::vector<Face> maximal_;
};

class SimplicialPoint {
 public:
  SimplicialPoint() = default;
  explicit SimplicialPoint(std::map<int, double> weights) : w_(std::move(weights)) {
    double sum = 0.0;
    for (auto it = w_.begin(); it != w_.end();) {
      if (it->second < 0 && it->second > -1e-12) it->second = 0.0;
      if (it->second < 0) throw std::invalid_argument("negative barycentric weight");
      if (it->second == 0.0) {
        it = w_.erase(it);
      } else {
        sum += it->second;
        ++it;
      }
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      if (sum <= 0) throw std::invalid_argument("weights sum to zero");
      for (auto& [v, t] : w_) t /= sum;  // renormalize on construction
    }
  }

  static SimplicialPoint vertex(int v) { return SimplicialPoint({{v, 1.0}}); }

  const std::map<int, double>& weights() const { return w_; }
  double weight(int v) const {
    auto it = w_.find(v);
    return it == w_.end() ? 0.0 : it->second;
  }

  Face support() const {
    Face f;
    for (const auto& [v, t] : w_) f.push_back(v);
    return f;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [v, t] : w_) j[std::to_string(v)] = t;
    return j;
  }
  static SimplicialPoint from_json(const nlohmann::json& j) {
    std::map<int, double> w;
    for (auto it = j.begin(); it != j.end(); ++it) w[std::stoi(it.key())] = it->value().get<double>();
    return SimplicialPoint(std::move(w));
  }
};

inline double l1_distance_same_simplex(const SimplicialComplex& X, const SimplicialPoint& x,
                                       const SimplicialPoint& y) {
  Face u = x.support(), v = y.support(), both;
  std::set_union(u.begin(), u.end(), v.begin(), v.end(), std::back_inserter(both));
  if (!X.face_in_some_maximal(both))
    throw std::domain_error("l1 distance: points do not share a simplex");
  double d = 0.0;
  for (int vv : both) d += std::abs(x.weight(vv) - y.weight(vv));
  return d;
}

// First barycentric subdivision: one vertex per nonempty face, maximal
// simplices are the maximal chains of faces inside each maximal simplex.
struct BarycentricSubdivision {
  SimplicialComplex complex;
  std::vector<Face> vertex_face;  // subdivision vertex -> face of the original

  static BarycentricSubdivision of(const SimplicialComplex& X) {
    BarycentricSubdivision out;
    out.vertex_face = X.faces();
    std::map<Face, int> index;
    for (std::size_t i = 0; i < out.vertex_face.size(); ++i)
      index[out.vertex_face[i]] = static_cast<int>(i);

    std::vector<Face> maximal;
    for (const auto& top : X.maximal_simplices()) {
      // chains built from permutations: v_{p0} < {v_{p0},v_{p1}} < ...
      std::vector<int> perm(top.begin(), top.end());
      std::sort(perm.begin(), perm.end());
      do {
        Face chain;
        Face growing;
        for (int v : perm) {
          growing.push_back(v);
          Face key = growing;
          std::sort(key.begin(), key.end());
          chain.push_back(index.at(key));
        }
        std::sort(chain.begin(), chain.end());
        maximal.push_back(chain);
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    out.complex = SimplicialComplex(static_cast<int>(out.vertex_face.size()), maximal);
    return out;
  }

  // a subdivision point as a point of the original complex
  SimplicialPoint to_original(const SimplicialPoint& p) const {
    std::map<int, double> w;
    for (const auto& [sv, t] : p.weights()) {
      const Face& f = vertex_face[sv];
      double share = t / static_cast<double>(f.size());
      for (int v : f) w[v] += share;
    }
    return SimplicialPoint(std::move(w));
  }
};

inline SimplicialComplex barycentric_subdivision(const SimplicialComplex& X) {
  return BarycentricSubdivision::of(X).complex;
}

}  // namespace curvdecay::simplicial
