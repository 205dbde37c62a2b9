#pragma once

// Synthetic inductive systems of finitely generated abelian groups, presented
// as Z^n / im(relation matrix), with integer matrices as maps. Kernels and
// images go through Smith normal form so every verdict is exact.

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvdecay/control/decay.hpp"
#include "curvdecay/control/expr.hpp"
#include "curvdecay/control/snf.hpp"

namespace curvdecay::control {

struct SyntheticInductiveSystem {
  std::vector<double> levels;      // strictly increasing
  std::vector<int> ranks;          // n_j: group j presented on Z^{n_j}
  std::vector<IntMat> relations;   // relation matrix per level (n_j rows)
  std::vector<IntMat> maps;        // consecutive maps, size levels-1, n_{j+1} x n_j

  int size() const { return static_cast<int>(levels.size()); }

  void validate() const {
    if (levels.empty()) throw std::invalid_argument("inductive system has no levels");
    if (ranks.size() != levels.size() || relations.size() != levels.size() ||
        maps.size() + 1 != levels.size())
      throw std::invalid_argument("inductive system: inconsistent sizes");
    for (std::size_t j = 1; j < levels.size(); ++j)
      if (!(levels[j] > levels[j - 1]))
        throw std::invalid_argument("inductive system: levels must increase");
    for (int j = 0; j < size(); ++j)
      if (relations[j].rows != ranks[j])
        throw std::invalid_argument("relation matrix shape mismatch");
    // well-definedness: A_j . im(R_j) must land in im(R_{j+1})
    for (int j = 0; j + 1 < size(); ++j) {
      const IntMat& A = maps[j];
      if (A.rows != ranks[j + 1] || A.cols != ranks[j])
        throw std::invalid_argument("map matrix shape mismatch");
      Snf next = smith_normal_form(relations[j + 1]);
      for (int c = 0; c < relations[j].cols; ++c) {
        std::vector<std::int64_t> col(ranks[j]);
        for (int i = 0; i < ranks[j]; ++i) col[i] = relations[j](i, c);
        if (!in_image(next, A * col))
          throw std::invalid_argument("map does not respect relations at level " +
                                      std::to_string(j));
      }
    }
  }

  // Composite map from level index j to level index k >= j.
  IntMat composite(int j, int k) const {
    IntMat C = IntMat::eye(ranks[j]);
    for (int t = j; t < k; ++t) C = maps[t] * C;
    return C;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["levels"] = levels;
    j["ranks"] = ranks;
    auto mat = [](const IntMat& m) {
      auto rows = nlohmann::ordered_json::array();
      for (int i = 0; i < m.rows; ++i) {
        auto row = nlohmann::ordered_json::array();
        for (int c = 0; c < m.cols; ++c) row.push_back(m(i, c));
        rows.push_back(row);
      }
      return rows;
    };
    auto rel = nlohmann::ordered_json::array();
    for (const auto& r : relations) rel.push_back(mat(r));
    j["relations"] = rel;
    auto mp = nlohmann::ordered_json::array();
    for (const auto& m : maps) mp.push_back(mat(m));
    j["maps"] = mp;
    return j;
  }

  static SyntheticInductiveSystem from_json(const nlohmann::json& j) {
    SyntheticInductiveSystem s;
    s.levels = j.at("levels").get<std::vector<double>>();
    s.ranks = j.at("ranks").get<std::vector<int>>();
    auto mat = [](const nlohmann::json& rows, int expect_rows) {
      int r = static_cast<int>(rows.size());
      int c = r > 0 ? static_cast<int>(rows[0].size()) : 0;
      IntMat m(expect_rows >= 0 && r == 0 ? expect_rows : r, c);
      for (int i = 0; i < r; ++i)
        for (int k = 0; k < c; ++k) m(i, k) = rows[i][k].get<std::int64_t>();
      return m;
    };
    int idx = 0;
    for (const auto& r : j.at("relations")) s.relations.push_back(mat(r, s.ranks[idx++]));
    for (const auto& m : j.at("maps")) s.maps.push_back(mat(m, -1));
    s.validate();
    return s;
  }
};

struct ControlVerdict {
  bool pass = true;
  std::string witness;
};

// Checks the uniform-control conditions over the finite grid. The colimit of
// a finite system is its last group; composite maps realize i_{L,lim}.
inline ControlVerdict verify_uniform_control(const SyntheticInductiveSystem& sys,
                                             const UniformControlPair& pair) {
  sys.validate();
  const int k = sys.size() - 1;
  Snf top_rel = smith_normal_form(sys.relations[k]);

  ControlVerdict verdict;

  // surjectivity onto the colimit for every grid level >= L0
  for (int j = 0; j <= k; ++j) {
    if (sys.levels[j] < pair.L0) continue;
    IntMat gen = sys.composite(j, k).hcat(sys.relations[k]);
    if (!generates_lattice(gen)) {
      // name a standard generator that is not hit
      Snf s = smith_normal_form(gen);
      for (int i = 0; i < sys.ranks[k]; ++i) {
        std::vector<std::int64_t> e(sys.ranks[k], 0);
        e[i] = 1;
        if (!in_image(s, e)) {
          std::ostringstream os;
          os << "level " << sys.levels[j] << ": generator e_" << i
             << " of the top group is not hit";
          return {false, os.str()};
        }
      }
      return {false, "level " + std::to_string(sys.levels[j]) + ": not surjective"};
    }
  }

  // kernel condition: anything dying in the colimit dies by level F(L)
  for (int j = 0; j <= k; ++j) {
    double target = pair.F(sys.levels[j]);
    int jt = j;
    while (jt + 1 <= k && sys.levels[jt + 1] <= target) ++jt;
    // elements of Z^{n_j} that die in the colimit: x with C x in im(R_k)
    IntMat C = sys.composite(j, k);
    IntMat negRel(sys.ranks[k], sys.relations[k].cols);
    for (int i = 0; i < negRel.rows; ++i)
      for (int c = 0; c < negRel.cols; ++c) negRel(i, c) = -sys.relations[k](i, c);
    Snf ker = smith_normal_form(C.hcat(negRel));
    Snf target_rel = smith_normal_form(sys.relations[jt]);
    IntMat Cjt = sys.composite(j, jt);
    for (const auto& kv : kernel_basis(ker)) {
      std::vector<std::int64_t> x(kv.begin(), kv.begin() + sys.ranks[j]);
      bool trivial = true;
      for (auto v : x) trivial = trivial && v == 0;
      if (trivial) continue;
      if (!in_image(target_rel, Cjt * x)) {
        std::ostringstream os;
        os << "level " << sys.levels[j] << ": kernel element (";
        for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
        os << ") survives to level " << sys.levels[jt] << " although F(L)=" << target;
        return {false, os.str()};
      }
    }
  }
  return verdict;
}

}  // namespace curvdecay::control
