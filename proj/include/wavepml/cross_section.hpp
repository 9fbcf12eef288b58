#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "wavepml/errors.hpp"

namespace wavepml {

using cplx = std::complex<double>;

/// 1-D cross-section [0, L] with transverse weight profile h(y) > 0.
/// The weight enters the transverse L2 inner product as \int u v h dy;
/// constant h = 1 is the flat case.
struct CrossSection {
  double length = 1.0;
  std::function<double(double)> weight;  // empty -> flat
  bool flat = true;

  static CrossSection make_flat(double L);
  static CrossSection make_weighted(double L, std::function<double(double)> h);

  double weight_at(double y) const { return flat ? 1.0 : weight(y); }
};

/// Neumann eigenpairs of the cross-section, ascending, orthonormal with
/// respect to \int phi_i phi_j h dy. Flat sections use the closed-form
/// cosine modes; weighted sections carry grid samples.
class ModalBasis {
 public:
  const std::vector<double>& eigenvalues() const { return nu_; }
  int n_modes() const { return static_cast<int>(nu_.size()); }
  double length() const { return length_; }
  bool flat() const { return flat_; }

  /// Evaluate the j-th eigenfunction at y (linear interpolation on the
  /// solver grid for weighted sections).
  double eval(int j, double y) const;

  /// Transverse weight at y (1 for flat sections).
  double weight_at(double y) const {
    return flat_ ? 1.0 : weight_(y);
  }

  /// Inner product \int f(y) phi_j(y) h(y) dy by composite Simpson
  /// on a fine grid.
  double project(int j, const std::function<double(double)>& f) const;

 private:
  friend ModalBasis neumann_eigenpairs(const CrossSection&, int, int);
  std::vector<double> nu_;
  double length_ = 1.0;
  bool flat_ = true;
  // weighted case: eigenvectors sampled on a uniform grid
  std::vector<double> grid_;
  std::vector<std::vector<double>> samples_;
  std::function<double(double)> weight_;
};

/// First n Neumann eigenpairs on (0, L) with weight profile h.
/// Weighted sections are solved by a conservative second-order finite
/// difference scheme (Neumann ghost fluxes) on `grid_nodes` points:
///   -(h^{-1} phi')' = nu h phi,
/// the Laplace-Beltrami eigenproblem of the 1-D metric with volume
/// density h. Throws InvalidArgument if h is not strictly positive.
ModalBasis neumann_eigenpairs(const CrossSection& cs, int n,
                              int grid_nodes = 2001);

/// Principal axial wavenumber k = sqrt(mu0 - nu) with Im k >= 0:
/// real positive for propagating modes, positive imaginary for
/// evanescent ones. Throws ThresholdError when |mu0 - nu| < 1e-8.
cplx axial_wavenumber(double mu0, double nu);

/// min_j |Im{(1 + lambda) k_j}| over the cross-section thresholds.
/// Enumeration stops once a threshold above mu0 contributes more than the
/// running minimum (the evanescent contribution grows with nu). Throws
/// InsufficientModesError when the basis ends before that point.
double decay_rate_bound(double mu0, cplx lambda, const ModalBasis& basis);

}  // namespace wavepml
