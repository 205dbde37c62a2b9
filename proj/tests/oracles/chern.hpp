#pragma once

// Plaquette discrete-Chern-number oracle for rank-one projection families on
// a 2D grid: sums the Berry phase arg of the overlap loop around each
// plaquette. For families constant near the grid boundary the total is the
// degree of the classifying map, an integer. Independent of any Dirac data.

#include <cmath>
#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace testgen {

inline Eigen::Vector2cd range_vector(const Eigen::Matrix2cd& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(p);
  return es.eigenvectors().col(1);  // eigenvalue ~1
}

inline int chern_plaquette(const std::function<Eigen::Matrix2cd(double, double)>& p, int N,
                           double h) {
  double total = 0.0;
  for (int y = -N; y < N; ++y)
    for (int x = -N; x < N; ++x) {
      Eigen::Vector2cd v00 = range_vector(p(x * h, y * h));
      Eigen::Vector2cd v10 = range_vector(p((x + 1) * h, y * h));
      Eigen::Vector2cd v11 = range_vector(p((x + 1) * h, (y + 1) * h));
      Eigen::Vector2cd v01 = range_vector(p(x * h, (y + 1) * h));
      std::complex<double> loop = (v00.adjoint() * v10).value() * (v10.adjoint() * v11).value() *
                                  (v11.adjoint() * v01).value() * (v01.adjoint() * v00).value();
      total += std::arg(loop);
    }
  return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

}  // namespace testgen
