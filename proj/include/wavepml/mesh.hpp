#pragma once

#include <vector>

#include "wavepml/errors.hpp"

namespace wavepml {

/// Uniform tensor-product mesh on [0, R] x [0, Ly], lexicographic node
/// numbering node(i, j) = i*(ny+1) + j. The face x = R carries the
/// homogeneous Dirichlet condition; all other boundaries are natural.
struct Mesh {
  double R = 0.0;
  double Ly = 1.0;
  int nx = 0;
  int ny = 0;

  double hx() const { return R / nx; }
  double hy() const { return Ly / ny; }
  int n_nodes() const { return (nx + 1) * (ny + 1); }
  int n_elements() const { return nx * ny; }
  int node(int i, int j) const { return i * (ny + 1) + j; }
  double x(int i) const { return R * i / nx; }
  double y(int j) const { return Ly * j / ny; }

  std::vector<int> dirichlet_nodes() const;
  bool is_dirichlet(int node_id) const { return node_id >= nx * (ny + 1); }
};

/// nx = round(R * nx_per_unit). Throws ResourceError above the node budget
/// and InvalidArgument for out-of-range parameters or element aspect
/// ratios outside [0.1, 10].
Mesh build_mesh(double R, int nx_per_unit, int ny, double Ly,
                long node_budget = 2'000'000);

}  // namespace wavepml
