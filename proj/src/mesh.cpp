#include "wavepml/mesh.hpp"

#include <cmath>

namespace wavepml {

std::vector<int> Mesh::dirichlet_nodes() const {
  std::vector<int> out;
  out.reserve(ny + 1);
  for (int j = 0; j <= ny; ++j) out.push_back(node(nx, j));
  return out;
}

Mesh build_mesh(double R, int nx_per_unit, int ny, double Ly,
                long node_budget) {
  if (!(R > 0.0)) throw InvalidArgument("mesh: R must be positive");
  if (nx_per_unit < 4) throw InvalidArgument("mesh: nx_per_unit must be >= 4");
  if (ny < 4) throw InvalidArgument("mesh: ny must be >= 4");
  if (!(Ly > 0.0)) throw InvalidArgument("mesh: Ly must be positive");
  Mesh m;
  m.R = R;
  m.Ly = Ly;
  m.nx = static_cast<int>(std::lround(R * nx_per_unit));
  m.ny = ny;
  if (m.nx < 1) throw InvalidArgument("mesh: domain shorter than one element");
  long nodes = static_cast<long>(m.nx + 1) * (m.ny + 1);
  if (nodes > node_budget)
    throw ResourceError("mesh: node count " + std::to_string(nodes) +
                        " exceeds budget " + std::to_string(node_budget));
  double ratio = m.hx() / m.hy();
  if (ratio < 0.1 || ratio > 10.0)
    throw InvalidArgument("mesh: element aspect ratio outside [0.1, 10]");
  return m;
}

}  // namespace wavepml
