#pragma once

#include <complex>
#include <string>

#include "wavepml/geometry.hpp"

namespace wavepml {

enum class ProfileShape { cubic, quintic };

/// Absorber description: the scaling profile s(x) vanishes for x <= r+1,
/// its slope ramps 0 -> 1 over [r+1, r+1+w] and stays 1 beyond.
struct PmlSpec {
  double r = 6.0;          // layer start; coefficients untouched for x <= r
  double w = 2.0;          // transition width
  cplx lambda{0.0, 0.4};   // complex scaling parameter, |lambda| < sin(alpha)
  double alpha = 0.45;     // sector half-angle, sin(alpha) < 1/sqrt(2)
  ProfileShape shape = ProfileShape::cubic;

  PmlSpec() = default;
  PmlSpec(double r_, double w_, cplx lambda_, double alpha_ = 0.45,
          ProfileShape shape_ = ProfileShape::cubic);
};

struct ProfileValue {
  double s;        // profile value (exact integral of the slope)
  double s_prime;  // slope in [0, 1]
};

/// Evaluate the scaling profile. The cubic shape uses the smoothstep slope
/// 3t^2 - 2t^3 with exact integral w (t^3 - t^4/2); the quintic variant
/// uses 10t^3 - 15t^4 + 6t^5.
ProfileValue profile_eval(const PmlSpec& spec, double x);

struct LambdaCheck {
  bool ok;
  int im_sign;          // +1 absorbs outgoing waves, -1 incoming, 0 disabled
  std::string message;  // names the violated inequality when !ok
};

/// Admissibility of the scaling parameter: |lambda| < sin(alpha) < 1/sqrt(2).
LambdaCheck validate_lambda(cplx lambda, double alpha);

/// Metric sample plus the profile data at the evaluation point.
struct DeformedSample : MetricSample {
  double s = 0.0;
  double s_prime = 0.0;
};

/// Coefficients of the complex-deformed metric at (x, y):
///   g_k(x) -> (1 + lambda s'(x))^{2-k} g_k(x + lambda s(x)),
/// i.e. g00 scaled by (1+lambda s')^2, g01 by (1+lambda s'), g11 untouched,
/// all evaluated at the shifted axial coordinate. Determinant, inverse and
/// principal sqrt are recomputed from the deformed entries.
DeformedSample deformed_metric(const MetricField& field, const PmlSpec& spec,
                               double x, double y);

}  // namespace wavepml
