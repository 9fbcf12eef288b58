#pragma once

#include <array>
#include <vector>

#include "wavepml/cross_section.hpp"
#include "wavepml/mesh.hpp"
#include "wavepml/pml.hpp"
#include "wavepml/sparse.hpp"

namespace wavepml {

/// Modal Gaussian volume source f(x, y) = amplitude exp(-gamma (x-x0)^2) phi_j(y).
struct SourceSpec {
  int mode_index = 0;
  double x0 = 3.0;
  double gamma = 4.0;
  cplx amplitude = 1.0;

  /// Half-width beyond which the Gaussian is treated as zero.
  double support_halfwidth() const;
  /// True when the source stays inside the untouched region x < r.
  bool inside_physical_region(double r) const;
};

struct AssemblyOptions {
  bool eliminate_dirichlet = true;
  bool parallel = true;   // OpenMP element kernel; serial path kept for tests
  int quad_points = 2;    // Gauss points per direction (2 or 3)
};

/// Assembled bilinear system A = K - mu0 M for the deformed operator,
/// Dirichlet row/columns at x = R eliminated symmetrically. The matrix is
/// unconjugated-symmetric for every admissible lambda.
struct AssembledSystem {
  ComplexSparse A;
  Mesh mesh;
  double mu0 = 0.0;
  int free_count = 0;
  std::vector<int> free_of_node;  // node id -> free index, -1 for Dirichlet
  std::vector<int> node_of_free;
  // sqrt(det) per element and quadrature point, reused by the load vector
  std::vector<cplx> mass_weight;
  int quad_points = 2;

  std::vector<cplx> expand(const std::vector<cplx>& free_vec) const;
  std::vector<cplx> restrict_to_free(const std::vector<cplx>& full_vec) const;
};

/// Bilinear Q1 assembly of
///   sum_e int sqrt|g| (g^{lm} d_l u d_m v) - mu0 sqrt|g| u v
/// with tensor Gauss quadrature, deformed metric at the quadrature points.
/// The lateral and left boundaries carry the natural (deformed Neumann)
/// condition, which needs no boundary term in this weak form.
AssembledSystem assemble_system(const Mesh& mesh, const MetricField& field,
                                const PmlSpec& spec, double mu0,
                                const AssemblyOptions& opts = {});

/// Serial reference assembly, bit-identical entry accumulation order.
AssembledSystem assemble_system_serial(const Mesh& mesh,
                                       const MetricField& field,
                                       const PmlSpec& spec, double mu0,
                                       AssemblyOptions opts = {});

/// Load vector int sqrt|g| f v over free shape functions, same quadrature
/// as the system. Warns (returns flag) when the source leaks into the
/// deformed region, where the plain load no longer matches the operator.
struct RhsResult {
  std::vector<cplx> b;
  bool source_in_layer_warning = false;
};

RhsResult assemble_rhs(const AssembledSystem& system, const SourceSpec& source,
                       const ModalBasis& basis, double pml_r);

/// Flat-measure L2 norm and H1 seminorm of the Q1 interpolant restricted
/// to elements whose x-extent lies inside [window.first, window.second].
struct DiscreteNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
};

DiscreteNorms discrete_norms(const Mesh& mesh, const std::vector<cplx>& nodal,
                             std::pair<double, double> x_window);

}  // namespace wavepml
