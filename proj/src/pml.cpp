#include "wavepml/pml.hpp"

#include <cmath>
#include <sstream>

namespace wavepml {

PmlSpec::PmlSpec(double r_, double w_, cplx lambda_, double alpha_,
                 ProfileShape shape_)
    : r(r_), w(w_), lambda(lambda_), alpha(alpha_), shape(shape_) {
  if (!(r >= 1.0)) throw InvalidArgument("pml: r must be >= 1");
  if (!(w > 0.0)) throw InvalidArgument("pml: transition width must be positive");
  LambdaCheck chk = validate_lambda(lambda, alpha);
  if (!chk.ok) throw InvalidArgument("pml: " + chk.message);
}

ProfileValue profile_eval(const PmlSpec& spec, double x) {
  double t = (x - (spec.r + 1.0)) / spec.w;
  if (t <= 0.0) return {0.0, 0.0};
  if (spec.shape == ProfileShape::cubic) {
    if (t >= 1.0) return {(x - (spec.r + 1.0)) - spec.w / 2.0, 1.0};
    double sp = 3.0 * t * t - 2.0 * t * t * t;
    double s = spec.w * (t * t * t - 0.5 * t * t * t * t);
    return {s, sp};
  }
  // quintic: s' = 10t^3 - 15t^4 + 6t^5, integral 2.5t^4 - 3t^5 + t^6
  if (t >= 1.0) return {(x - (spec.r + 1.0)) - spec.w / 2.0, 1.0};
  double t3 = t * t * t, t4 = t3 * t, t5 = t4 * t, t6 = t5 * t;
  return {spec.w * (2.5 * t4 - 3.0 * t5 + t6), 10.0 * t3 - 15.0 * t4 + 6.0 * t5};
}

LambdaCheck validate_lambda(cplx lambda, double alpha) {
  double sa = std::sin(alpha);
  std::ostringstream msg;
  if (!(sa < 1.0 / std::sqrt(2.0)) || !(alpha > 0.0)) {
    msg << "sin(alpha) = " << sa << " violates 0 < sin(alpha) < 1/sqrt(2)";
    return {false, 0, msg.str()};
  }
  if (!(std::abs(lambda) < sa)) {
    msg << "|lambda| = " << std::abs(lambda) << " violates |lambda| < sin(alpha) = " << sa;
    return {false, 0, msg.str()};
  }
  int sign = lambda.imag() > 0.0 ? 1 : (lambda.imag() < 0.0 ? -1 : 0);
  std::string note = sign > 0   ? "absorbing for outgoing waves"
                     : sign < 0 ? "absorbing for incoming waves"
                                : "real lambda: layer reproduces the physical operator";
  return {true, sign, note};
}

DeformedSample deformed_metric(const MetricField& field, const PmlSpec& spec,
                               double x, double y) {
  if (!(x >= 0.0)) throw InvalidArgument("deformed metric: x must be >= 0");
  ProfileValue p = profile_eval(spec, x);
  cplx scale = 1.0 + spec.lambda * p.s_prime;
  // guaranteed by |lambda| < sin(alpha) < 1/sqrt(2), checked anyway
  if (!(std::abs(scale) > 1.0 - 1.0 / std::sqrt(2.0)))
    throw DegeneracyError("deformed metric: |1 + lambda s'| too small");
  cplx z = cplx(x, 0.0) + spec.lambda * p.s;
  MetricSample base = metric_eval(field, z, y);
  DeformedSample d;
  static_cast<MetricSample&>(d) =
      make_sample(scale * scale * base.g00, scale * base.g01, base.g11);
  d.s = p.s;
  d.s_prime = p.s_prime;
  return d;
}

}  // namespace wavepml
