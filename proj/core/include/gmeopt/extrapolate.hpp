#pragma once

#include "gmeopt/losses.hpp"

namespace gmeopt {

// Convex tail r grafted onto the quadratic extension: twice continuously
// differentiable with r(0) = r'(0) = r''(0) = 0 and bounded curvature.
class ExtrapolationTail {
 public:
  enum class Kind { zero, cubic_quadratic };

  static ExtrapolationTail zero();
  // r(t) = 0 for t <= 0, t^3/6 on (0,1), t^2/2 - t/2 + 1/6 beyond. Grows
  // superlinearly, so it preserves coercivity of the base loss.
  static ExtrapolationTail cubic_quadratic();

  double value(double t) const;
  double deriv(double t) const;
  double second(double t) const;
  double sup_second() const;  // 0 for zero, 1 for cubic_quadratic
  bool supercoercive() const;
  Kind kind() const;

 private:
  explicit ExtrapolationTail(Kind k) : kind_(k) {}
  Kind kind_;
};

// Quadratic extrapolation of a separable loss outside the interval product
// Pi: inside (l_i, h_i) the loss is untouched; beyond a finite endpoint it
// continues as the second-order Taylor polynomial anchored there plus the
// tail of the distance. The result is finite, C^2, and Lipschitz-smooth over
// the whole space. Degenerate intervals (l_i = h_i) are rejected.
SmoothLoss build_extrapolated(const SmoothLoss& loss, const SimpleSet& pi,
                              const ExtrapolationTail& tail);

// max_i sup_{t in Pi_i} f_i''(t) + sup r'': the gradient-Lipschitz constant
// of the extrapolated loss. Throws on unbounded curvature over Pi.
double extrapolated_lipschitz(const SmoothLoss& loss, const SimpleSet& pi,
                              const ExtrapolationTail& tail);

struct ConvexityWeights {
  Vec lambda;         // diag entries inf_{t in Pi_i} f_i''(t)
  bool any_positive;  // false means the enhancement degenerates to the convex model
};

// Diagonal weights of the quadratic reference the loss is 1-strongly convex
// against over the whole space after extrapolation.
ConvexityWeights relative_strong_convexity_weights(const SmoothLoss& loss,
                                                   const SimpleSet& pi);

}  // namespace gmeopt
