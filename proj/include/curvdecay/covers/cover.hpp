#pragma once

// Covers of sampled metric spaces, multiplicity diagnostics, nerve
// complexes, and the Lipschitz partition-of-unity map into the nerve.

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "curvdecay/ktheory/spaces.hpp"
#include "curvdecay/simplicial/complex.hpp"
#include "curvdecay/simplicial/metric.hpp"

namespace curvdecay::covers {

using SampledSpace = ktheory::FiniteMetricSpace;
using SpacePtr = ktheory::SpacePtr;

class LebesgueError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Cover {
  SpacePtr space;
  std::vector<std::vector<int>> members;
  double enlarged_by = 0.0;   // 0 for raw covers
  double raw_diameter = -1.0; // sup member diameter before enlargement, if known

  void validate() const {
    if (!space) throw std::invalid_argument("cover: missing space");
    std::vector<bool> hit(space->size(), false);
    for (const auto& m : members) {
      if (m.empty()) throw std::invalid_argument("cover: empty member");
      for (int p : m) {
        if (p < 0 || p >= space->size()) throw std::invalid_argument("cover: index range");
        hit[p] = true;
      }
    }
    for (int i = 0; i < space->size(); ++i)
      if (!hit[i]) throw std::invalid_argument("cover: union misses point " + std::to_string(i));
  }

  double member_diameter(int mi) const {
    double d = 0.0;
    const auto& m = members[mi];
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = a + 1; b < m.size(); ++b) d = std::max(d, space->d(m[a], m[b]));
    return d;
  }

  double max_member_diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i) d = std::max(d, member_diameter(static_cast<int>(i)));
    return d;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["members"] = members;
    j["enlarged_by"] = enlarged_by;
    return j;
  }
  static Cover from_json(SpacePtr space, const nlohmann::json& j) {
    Cover c;
    c.space = std::move(space);
    c.members = j.at("members").get<std::vector<std::vector<int>>>();
    c.enlarged_by = j.value("enlarged_by", 0.0);
    c.validate();
    return c;
  }
};

inline Cover enlarge(const Cover& c, double r) {
  if (r <= 0) throw std::invalid_argument("enlarge: r must be positive");
  c.validate();
  Cover out;
  out.space = c.space;
  out.enlarged_by = c.enlarged_by + r;
  out.raw_diameter = c.max_member_diameter();
  for (const auto& m : c.members) {
    std::vector<int> grown;
    for (int p = 0; p < c.space->size(); ++p) {
      double dmin = std::numeric_limits<double>::infinity();
      for (int q : m) dmin = std::min(dmin, c.space->d(p, q));
      if (dmin <= r) grown.push_back(p);
    }
    out.members.push_back(std::move(grown));
  }
  return out;
}

// max over sample points of the number of members meeting the r-ball
inline int r_multiplicity(const Cover& c, double r) {
  if (r < 0) throw std::invalid_argument("r_multiplicity: r must be >= 0");
  c.validate();
  int best = 0;
  for (int p = 0; p < c.space->size(); ++p) {
    int count = 0;
    for (const auto& m : c.members) {
      for (int q : m)
        if (c.space->d(p, q) <= r) {
          ++count;
          break;
        }
    }
    best = std::max(best, count);
  }
  return best;
}

// members containing a sample point, the vertex set of its nerve simplex
inline std::vector<int> members_containing(const Cover& c, int p) {
  std::vector<int> out;
  for (std::size_t i = 0; i < c.members.size(); ++i)
    if (std::binary_search(c.members[i].begin(), c.members[i].end(), p) ||
        std::find(c.members[i].begin(), c.members[i].end(), p) != c.members[i].end())
      out.push_back(static_cast<int>(i));
  return out;
}

inline simplicial::SimplicialComplex nerve(const Cover& c) {
  c.validate();
  std::set<simplicial::Face> maximal;
  for (int p = 0; p < c.space->size(); ++p) maximal.insert(members_containing(c, p));
  return simplicial::SimplicialComplex(static_cast<int>(c.members.size()),
                                       {maximal.begin(), maximal.end()});
}

// f_r(x): nerve point with weights d(x, X - U_i'), normalized. Members that
// cover the whole sample use the enlargement radius as the stand-in distance
// (a finite sample cannot see the ambient complement).
inline simplicial::SimplicialPoint f_r(const Cover& c, int x, double r) {
  std::map<int, double> w;
  double denom = 0.0;
  for (std::size_t i = 0; i < c.members.size(); ++i) {
    const auto& m = c.members[i];
    if (std::find(m.begin(), m.end(), x) == m.end()) continue;
    double dist;
    if (static_cast<int>(m.size()) == c.space->size()) {
      dist = c.enlarged_by > 0 ? c.enlarged_by : r;
    } else {
      dist = std::numeric_limits<double>::infinity();
      for (int p = 0; p < c.space->size(); ++p) {
        if (std::find(m.begin(), m.end(), p) != m.end()) continue;
        dist = std::min(dist, c.space->d(x, p));
      }
    }
    if (dist > 0) {
      w[static_cast<int>(i)] = dist;
      denom += dist;
    }
  }
  if (denom <= 0)
    throw LebesgueError("f_r: zero denominator at sample " + std::to_string(x) +
                        "; cover Lebesgue number below r");
  for (auto& [i, t] : w) t /= denom;
  return simplicial::SimplicialPoint(std::move(w));
}

struct LipschitzReport {
  double measured = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = false;
};

// measured Lipschitz ratio of f_r over sampled pairs, a lower bound of the
// true constant; compared against (m+1)^2 / r plus mesh slack
inline LipschitzReport measure_fr_lipschitz(const Cover& c, double r, double mesh_eps,
                                            std::size_t max_pairs = 10000,
                                            std::uint64_t seed = 1) {
  auto N = nerve(c);
  simplicial::SimplicialMetric metric(N, mesh_eps);
  int n = c.space->size();
  std::vector<simplicial::SimplicialPoint> images;
  images.reserve(n);
  for (int x = 0; x < n; ++x) images.push_back(f_r(c, x, r));
  auto dN = metric.pairwise(images);

  Rng rng(seed);
  double measured = 0.0;
  std::size_t total = static_cast<std::size_t>(n) * (n - 1) / 2;
  auto consider = [&](int i, int j) {
    double dx = c.space->d(i, j);
    if (dx <= 0) return;
    if (dN[i][j] == simplicial::kInfDist) return;
    measured = std::max(measured, dN[i][j] / dx);
  };
  if (total <= max_pairs) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) consider(i, j);
  } else {
    for (std::size_t k = 0; k < max_pairs; ++k) {
      int i = static_cast<int>(rng.uniform_index(n));
      int j = static_cast<int>(rng.uniform_index(n));
      if (i != j) consider(i, j);
    }
  }
  LipschitzReport rep;
  int m = N.dimension();
  rep.measured = measured;
  rep.bound = static_cast<double>((m + 1) * (m + 1)) / r;
  rep.slack = 5.0 * mesh_eps;
  rep.pass = measured <= rep.bound + rep.slack;
  return rep;
}

}  // namespace curvdecay::covers
