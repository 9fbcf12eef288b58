#pragma once

#include <complex>
#include <string>
#include <vector>

#include "wavepml/cross_section.hpp"
#include "wavepml/errors.hpp"

namespace wavepml {

enum class Preset { straight, bent, stretched };

Preset preset_from_string(const std::string& name);
std::string to_string(Preset p);

/// Axial metric coefficients (g00, g01, g11) on the strip, analytic in the
/// axial coordinate inside the sector |Im z| < tan(alpha) Re z and decaying
/// toward the product metric at infinity.
///
/// Presets (p, q denote Jacobian entries of the generating map):
///   straight   (1, 0, h(y))
///   bent       p = b a (z+3)^{b-1} + g (z+3)^{g-1} y, q = 1 + (z+3)^g
///              -> (1 + p^2, p q, q^2)
///   stretched  u = 1 + 1/log(z+4), v = 1 + 1/log(z+5),
///              p = -y / ((z+5) log^2(z+5))
///              -> (u^2 + p^2, p v, v^2)
struct MetricField {
  Preset preset = Preset::straight;
  double a = 1.0;        // bent: transverse offset amplitude
  double b_exp = 0.5;    // bent: offset exponent, must be < 1
  double g_exp = -1.0;   // bent: widening exponent, must be < 0
  CrossSection cross_section;
  double alpha = 0.45;   // sector half-angle; sin(alpha) < 1/sqrt(2)

  static MetricField straight(CrossSection cs, double alpha = 0.45);
  static MetricField bent(CrossSection cs, double a, double b_exp,
                          double g_exp, double alpha = 0.45);
  static MetricField stretched(CrossSection cs, double alpha = 0.45);
};

/// One metric evaluation: entries, determinant, inverse, principal sqrt.
struct MetricSample {
  cplx g00, g01, g11;
  cplx det;
  cplx inv00, inv01, inv11;
  cplx sqrt_det;
};

/// Assemble determinant/inverse/sqrt from raw entries; throws
/// DegeneracyError when |det| < 1e-10.
MetricSample make_sample(cplx g00, cplx g01, cplx g11);

/// Evaluate the metric at complex axial coordinate z and transverse y.
/// Throws DomainError outside the sector (straight presets are constant
/// in z and skip the check).
MetricSample metric_eval(const MetricField& field, cplx z, double y);

/// Sup-deviation of the coefficients from the product metric, sampled over
/// rays inside the sector and a transverse grid, one row per radius.
struct DecayReport {
  std::vector<double> radii;
  std::vector<double> dev_g00;   // sup |g00 - 1|
  std::vector<double> dev_g01;   // sup |g01|
  std::vector<double> dev_g11;   // sup |g11 - h(y)|
  // filled only when with_derivatives is set: sup of transverse
  // first-derivative deviations (condition on the C^1 norm)
  std::vector<double> dev_dy;
};

DecayReport decay_report(const MetricField& field,
                         const std::vector<double>& radii,
                         const std::vector<double>& ray_angles,
                         int y_samples = 33, bool with_derivatives = false);

}  // namespace wavepml
