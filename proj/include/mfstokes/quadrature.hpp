#pragma once

#include <vector>

namespace mfstokes {

/// Gauss-Legendre rule on [0, 1].
struct QuadratureRule1d {
  std::vector<double> points;
  std::vector<double> weights;
};

QuadratureRule1d gauss_legendre(int n_points);

}  // namespace mfstokes
