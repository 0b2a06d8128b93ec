#ifndef VSHOCK_FIELD_HPP_
#define VSHOCK_FIELD_HPP_

#include <vector>

#include "vshock/gas.hpp"

namespace vshock {

// Uniform node grid on [yL, yR], dy = (yR - yL)/(N - 1).
struct Grid {
  double yL;
  double yR;
  int N;
  double dy;
};

inline Grid make_grid(double yL, double yR, int N) {
  if (!(yL < 0.0 && 0.0 < yR)) throw ValidationError("grid: requires yL < 0 < yR");
  if (N < 16) throw ValidationError("grid.N: must be >= 16");
  return Grid{yL, yR, N, (yR - yL) / static_cast<double>(N - 1)};
}

inline double grid_y(const Grid& g, int i) {
  return g.yL + g.dy * static_cast<double>(i);
}

// The evolving solution: (v, u, theta) node arrays plus the current scaled
// time tau and the shift X.
struct Field {
  Grid grid;
  std::vector<double> v;
  std::vector<double> u;
  std::vector<double> theta;
  double tau = 0.0;
  double X = 0.0;
};

inline bool same_grid(const Grid& a, const Grid& b) {
  return a.N == b.N && a.yL == b.yL && a.yR == b.yR;
}

}  // namespace vshock

#endif  // VSHOCK_FIELD_HPP_
