#pragma once

#include <functional>
#include <vector>

#include "wavepml/assembly.hpp"
#include "wavepml/cross_section.hpp"

namespace wavepml {

/// Semi-analytic solution of -u'' - k^2 u = f on the half line with a
/// Neumann wall at x = 0 and outgoing radiation at infinity:
///   u(x) = int_0^inf G(x, x') f(x') dx',
///   G(x, x') = (i / 2k) (e^{ik|x-x'|} + e^{ik(x+x')}).
/// The image term enforces u'(0) = 0. The source profile is integrated
/// over [support_lo, support_hi] by adaptive Simpson quadrature to a
/// relative tolerance of 1e-9. Requires Im k >= 0 and |k| away from zero.
std::vector<cplx> modal_green_solution(
    cplx k, const std::function<cplx(double)>& source_profile,
    double support_lo, double support_hi, const std::vector<double>& x_eval);

/// Per-mode amplitude field u(x, y) = sum_j u_j(x) phi_j(y) for sources
/// supported in the physical region of a product-metric cylinder.
struct ModalField {
  std::vector<double> x_grid;
  std::vector<cplx> wavenumbers;          // k_j per basis mode
  std::vector<std::vector<cplx>> modes;   // u_j on the grid
  const ModalBasis* basis = nullptr;

  cplx eval(double x, double y) const;    // linear interpolation in x
  /// Nodal interpolant on a tensor mesh, lexicographic numbering.
  std::vector<cplx> interpolate(const Mesh& mesh) const;
};

ModalField reference_field(const std::vector<SourceSpec>& sources,
                           const ModalBasis& basis, double mu0,
                           const std::vector<double>& x_grid);

/// Two-station decomposition u_j(x) = c+ e^{ikx} + c- e^{-ikx}.
/// Throws StationError when e^{ik(x2-x1)} is too close to +-1.
struct ModeAmplitudes {
  cplx outgoing;
  cplx incoming;
};

ModeAmplitudes mode_amplitudes(cplx u1, cplx u2, double x1, double x2, cplx k);

/// Transverse modal coefficient of a nodal field at the mesh line nearest
/// to x_station. Flat sections use the discrete mass-weighted projection,
/// which is exact for the discrete propagating modes; weighted sections
/// fall back to Simpson quadrature of the interpolant.
cplx project_onto_mode(const Mesh& mesh, const std::vector<cplx>& nodal,
                       const ModalBasis& basis, int j, double x_station);

/// Q1 discrete dispersion: transverse eigenvalue of mode j on an ny-element
/// grid, and the discrete axial wavenumber matching exp(i k_h x) on the
/// interior stencil. Used to take discretization bias out of amplitude
/// extraction. Flat cross-sections only.
double discrete_transverse_eigenvalue(int j, int ny, double Ly);
cplx discrete_axial_wavenumber(double mu_eff, double hx);

}  // namespace wavepml
