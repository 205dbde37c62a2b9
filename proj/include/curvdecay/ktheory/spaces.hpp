#pragma once

// Finite metric spaces and matrix-valued functions on them. The Lipschitz
// level of a FilteredMatrixMap is the desk-scale stand-in for membership in
// M_n(C_0(X))_L.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <vector>

#include "curvdecay/ktheory/linalg.hpp"
#include "curvdecay/util/rng.hpp"

namespace curvdecay::ktheory {

using la::Mat;

class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;
  explicit FiniteMetricSpace(Eigen::MatrixXd dist) : dist_(std::move(dist)) { validate(); }

  static FiniteMetricSpace from_points(const std::vector<Eigen::VectorXd>& pts) {
    int n = static_cast<int>(pts.size());
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = (pts[i] - pts[j]).norm();
    FiniteMetricSpace s;
    s.dist_ = std::move(d);
    s.points_ = pts;
    s.validate();
    return s;
  }

  static FiniteMetricSpace line(int n, double spacing) {
    std::vector<Eigen::VectorXd> pts(n);
    for (int i = 0; i < n; ++i) {
      pts[i].resize(1);
      pts[i](0) = i * spacing;
    }
    return from_points(pts);
  }

  static FiniteMetricSpace grid2d(int N, double h) {
    std::vector<Eigen::VectorXd> pts;
    for (int y = -N; y <= N; ++y)
      for (int x = -N; x <= N; ++x) {
        Eigen::VectorXd p(2);
        p << x * h, y * h;
        pts.push_back(p);
      }
    return from_points(pts);
  }

  int size() const { return static_cast<int>(dist_.rows()); }
  double d(int i, int j) const { return dist_(i, j); }
  const Eigen::MatrixXd& dist() const { return dist_; }
  bool has_points() const { return !points_.empty(); }
  const Eigen::VectorXd& point(int i) const { return points_[i]; }

 private:
  void validate() {
    int n = size();
    for (int i = 0; i < n; ++i)
      if (dist_(i, i) != 0.0) throw std::invalid_argument("metric: d(i,i) != 0");
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (std::abs(dist_(i, j) - dist_(j, i)) > 1e-12)
          throw std::invalid_argument("metric: asymmetric");
        if (dist_(i, j) < 0) throw std::invalid_argument("metric: negative");
      }
    // triangle inequality spot check on random triples (warn, not error)
    Rng rng(12345);
    int bad = 0;
    for (int t = 0; t < std::min(200, n * n); ++t) {
      int i = static_cast<int>(rng.uniform_index(n));
      int j = static_cast<int>(rng.uniform_index(n));
      int k = static_cast<int>(rng.uniform_index(n));
      if (dist_(i, j) > dist_(i, k) + dist_(k, j) + 1e-9) ++bad;
    }
    if (bad > 0)
      std::cerr << "[curvdecay] warning: triangle inequality failed on " << bad
                << " sampled triples\n";
  }

  Eigen::MatrixXd dist_;
  std::vector<Eigen::VectorXd> points_;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

// Matrix-valued function on a finite metric space plus a constant value at
// infinity (the unitization scalar part).
class FilteredMatrixMap {
 public:
  FilteredMatrixMap() = default;
  FilteredMatrixMap(SpacePtr space, std::vector<Mat> values, Mat plus_part)
      : space_(std::move(space)), values_(std::move(values)), plus_(std::move(plus_part)) {
    if (static_cast<int>(values_.size()) != space_->size())
      throw std::invalid_argument("FilteredMatrixMap: one value per point required");
    for (const auto& v : values_)
      if (v.rows() != plus_.rows() || v.cols() != plus_.cols())
        throw std::invalid_argument("FilteredMatrixMap: inconsistent matrix sizes");
  }

  static FilteredMatrixMap from_function(SpacePtr space,
                                         const std::function<Mat(const Eigen::VectorXd&)>& f,
                                         Mat plus_part) {
    std::vector<Mat> vals;
    vals.reserve(space->size());
    for (int i = 0; i < space->size(); ++i) vals.push_back(f(space->point(i)));
    return FilteredMatrixMap(space, std::move(vals), std::move(plus_part));
  }

  static FilteredMatrixMap constant(SpacePtr space, const Mat& value) {
    std::vector<Mat> vals(space->size(), value);
    return FilteredMatrixMap(space, std::move(vals), value);
  }

  const SpacePtr& space() const { return space_; }
  int points() const { return static_cast<int>(values_.size()); }
  int block_dim() const { return static_cast<int>(plus_.rows()); }
  const Mat& at(int i) const { return values_[i]; }
  Mat& at(int i) { return values_[i]; }
  const Mat& plus_part() const { return plus_; }
  Mat& plus_part() { return plus_; }

  // sup over points (the plus part is the value at infinity, included)
  double norm() const {
    double n = la::op_norm(plus_);
    for (const auto& v : values_) n = std::max(n, la::op_norm(v));
    return n;
  }

  // max over pairs of ||f(x)-f(y)||_op / d(x,y)
  double lipschitz_level() const {
    double L = 0.0;
    int n = points();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double dij = space_->d(i, j);
        if (dij <= 0) continue;
        L = std::max(L, la::op_norm(values_[i] - values_[j]) / dij);
      }
    return L;
  }

  double max_class_defect(const std::function<double(const Mat&)>& defect) const {
    double m = defect(plus_);
    for (const auto& v : values_) m = std::max(m, defect(v));
    return m;
  }

  FilteredMatrixMap map(const std::function<Mat(const Mat&)>& op) const {
    std::vector<Mat> vals;
    vals.reserve(values_.size());
    for (const auto& v : values_) vals.push_back(op(v));
    return FilteredMatrixMap(space_, std::move(vals), op(plus_));
  }

  static FilteredMatrixMap zip(const FilteredMatrixMap& a, const FilteredMatrixMap& b,
                               const std::function<Mat(const Mat&, const Mat&)>& op) {
    if (a.space_ != b.space_ || a.points() != b.points())
      throw std::invalid_argument("FilteredMatrixMap::zip: different spaces");
    std::vector<Mat> vals;
    vals.reserve(a.values_.size());
    for (int i = 0; i < a.points(); ++i) vals.push_back(op(a.values_[i], b.values_[i]));
    return FilteredMatrixMap(a.space_, std::move(vals), op(a.plus_, b.plus_));
  }

  FilteredMatrixMap operator-(const FilteredMatrixMap& o) const {
    return zip(*this, o, [](const Mat& x, const Mat& y) { return x - y; });
  }
  FilteredMatrixMap operator+(const FilteredMatrixMap& o) const {
    return zip(*this, o, [](const Mat& x, const Mat& y) { return x + y; });
  }
  FilteredMatrixMap operator*(const FilteredMatrixMap& o) const {
    return zip(*this, o, [](const Mat& x, const Mat& y) { return x * y; });
  }

  double distance_to(const FilteredMatrixMap& o) const { return (*this - o).norm(); }

 private:
  SpacePtr space_;
  std::vector<Mat> values_;
  Mat plus_;
};

}  // namespace curvdecay::ktheory
