#pragma once

#include <vector>

#include "wavepml/cross_section.hpp"

namespace wavepml {

/// Essential-spectrum curves of the exponentially conjugated deformed
/// operator: per threshold nu_j the set
///   mu(xi) = nu_j + (1 + lambda)^{-2} (xi + i beta)^2,  xi real.
/// Rays for beta = 0, parabolas for beta > 0.
struct SpectrumCurves {
  cplx lambda;
  double beta = 0.0;
  double xi_max = 0.0;
  int samples = 0;
  std::vector<double> thresholds;
  std::vector<double> xi;                  // shared grid, symmetric in 0
  std::vector<std::vector<cplx>> mu;       // one curve per threshold
};

SpectrumCurves essential_curves(cplx lambda, double beta,
                                const ModalBasis& basis, double xi_max,
                                int samples = 4001);

/// Minimum distance in the complex plane from mu0 to the sampled curves.
/// Re-samples at twice the density to verify convergence; throws
/// RefinementError when the refined value moves by more than 1%.
double spectral_distance(cplx mu0, const SpectrumCurves& curves);

/// Largest height Im over points of the curves crossing the vertical line
/// Re mu = mu0 (negative when every curve passes below). Used to bracket
/// the beta at which a parabola sweeps through mu0.
double arch_height(double mu0, const SpectrumCurves& curves);

/// Bisection in beta for the endpoint of the admissible decay interval:
/// the smallest beta whose curve family touches mu0. Matches
/// decay_rate_bound(mu0, lambda, basis) up to tol.
double beta_endpoint_bisect(double mu0, cplx lambda, const ModalBasis& basis,
                            double tol = 1e-4);

}  // namespace wavepml
