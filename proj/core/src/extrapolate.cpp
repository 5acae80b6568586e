#include "gmeopt/extrapolate.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gmeopt/errors.hpp"

namespace gmeopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ExtrapolationTail ExtrapolationTail::zero() { return ExtrapolationTail(Kind::zero); }
ExtrapolationTail ExtrapolationTail::cubic_quadratic() {
  return ExtrapolationTail(Kind::cubic_quadratic);
}

double ExtrapolationTail::value(double t) const {
  if (kind_ == Kind::zero || t <= 0.0) return 0.0;
  if (t < 1.0) return t * t * t / 6.0;
  return 0.5 * t * t - 0.5 * t + 1.0 / 6.0;
}

double ExtrapolationTail::deriv(double t) const {
  if (kind_ == Kind::zero || t <= 0.0) return 0.0;
  if (t < 1.0) return 0.5 * t * t;
  return t - 0.5;
}

double ExtrapolationTail::second(double t) const {
  if (kind_ == Kind::zero || t <= 0.0) return 0.0;
  return t < 1.0 ? t : 1.0;
}

double ExtrapolationTail::sup_second() const { return kind_ == Kind::zero ? 0.0 : 1.0; }
bool ExtrapolationTail::supercoercive() const { return kind_ == Kind::cubic_quadratic; }
ExtrapolationTail::Kind ExtrapolationTail::kind() const { return kind_; }

namespace {

struct ExtrapolatedImpl final : SmoothLoss::Impl {
  SmoothLoss base = SmoothLoss(nullptr);
  ExtrapolationTail tail = ExtrapolationTail::zero();
  Vec lo, hi;
  // Taylor anchors at finite endpoints (unused slots stay zero).
  Vec val_lo, der_lo, sec_lo;
  Vec val_hi, der_hi, sec_hi;

  double value(Eigen::Index i, double t) const override {
    if (!std::isinf(lo[i]) && t <= lo[i]) {
      const double d = t - lo[i];
      return 0.5 * sec_lo[i] * d * d + der_lo[i] * d + val_lo[i] + tail.value(-d);
    }
    if (!std::isinf(hi[i]) && t >= hi[i]) {
      const double d = t - hi[i];
      return 0.5 * sec_hi[i] * d * d + der_hi[i] * d + val_hi[i] + tail.value(d);
    }
    return base.value_at(i, t);
  }
  double deriv(Eigen::Index i, double t) const override {
    if (!std::isinf(lo[i]) && t <= lo[i]) {
      const double d = t - lo[i];
      return sec_lo[i] * d + der_lo[i] - tail.deriv(-d);
    }
    if (!std::isinf(hi[i]) && t >= hi[i]) {
      const double d = t - hi[i];
      return sec_hi[i] * d + der_hi[i] + tail.deriv(d);
    }
    return base.deriv_at(i, t);
  }
  double second(Eigen::Index i, double t) const override {
    if (!std::isinf(lo[i]) && t <= lo[i]) return sec_lo[i] + tail.second(lo[i] - t);
    if (!std::isinf(hi[i]) && t >= hi[i]) return sec_hi[i] + tail.second(t - hi[i]);
    return base.second_at(i, t);
  }
};

}  // namespace

SmoothLoss build_extrapolated(const SmoothLoss& loss, const SimpleSet& pi,
                              const ExtrapolationTail& tail) {
  if (pi.dim() != loss.dim()) throw InputError("build_extrapolated: dimension mismatch");
  if (loss.kind() == SmoothLoss::Kind::extrapolated)
    throw ParameterError("build_extrapolated: loss is already extrapolated");

  const Vec& lo = pi.lower();
  const Vec& hi = pi.upper();
  const Eigen::Index n = loss.dim();

  auto impl = std::make_shared<ExtrapolatedImpl>();
  impl->base = loss;
  impl->tail = tail;
  impl->lo = lo;
  impl->hi = hi;
  impl->val_lo = impl->der_lo = impl->sec_lo = Vec::Zero(n);
  impl->val_hi = impl->der_hi = impl->sec_hi = Vec::Zero(n);

  for (Eigen::Index i = 0; i < n; ++i) {
    if (lo[i] == hi[i])
      throw InputError("build_extrapolated: degenerate interval at coordinate " +
                       std::to_string(i));
    try {
      if (!std::isinf(lo[i])) {
        impl->val_lo[i] = loss.value_at(i, lo[i]);
        impl->der_lo[i] = loss.deriv_at(i, lo[i]);
        impl->sec_lo[i] = loss.second_at(i, lo[i]);
        if (!std::isfinite(impl->val_lo[i]))
          throw DomainError("endpoint value is not finite");
      }
      if (!std::isinf(hi[i])) {
        impl->val_hi[i] = loss.value_at(i, hi[i]);
        impl->der_hi[i] = loss.deriv_at(i, hi[i]);
        impl->sec_hi[i] = loss.second_at(i, hi[i]);
        if (!std::isfinite(impl->val_hi[i]))
          throw DomainError("endpoint value is not finite");
      }
    } catch (const DomainError& e) {
      throw InputError("build_extrapolated: endpoint evaluation failed at coordinate " +
                       std::to_string(i) + ": " + e.what());
    }
  }

  // The pre-condition demands bounded curvature over Pi; this also yields
  // the gradient-Lipschitz constant of the extension.
  const CurvatureBounds cb = curvature_bounds(loss, pi);
  if (!cb.sup_hess.allFinite())
    throw InputError("build_extrapolated: unbounded curvature over Pi");

  impl->kind = SmoothLoss::Kind::extrapolated;
  impl->y = loss.observation();
  impl->coercive = loss.coercive();
  impl->bounded_below = loss.bounded_below();
  impl->lips = cb.sup_hess.maxCoeff() + tail.sup_second();
  return SmoothLoss(impl);
}

double extrapolated_lipschitz(const SmoothLoss& loss, const SimpleSet& pi,
                              const ExtrapolationTail& tail) {
  const CurvatureBounds cb = curvature_bounds(loss, pi);
  if (!cb.sup_hess.allFinite())
    throw ParameterError("extrapolated_lipschitz: unbounded curvature over Pi");
  return cb.sup_hess.maxCoeff() + tail.sup_second();
}

ConvexityWeights relative_strong_convexity_weights(const SmoothLoss& loss,
                                                   const SimpleSet& pi) {
  const CurvatureBounds cb = curvature_bounds(loss, pi);
  ConvexityWeights w;
  w.lambda = cb.inf_hess;
  w.any_positive = cb.inf_hess.size() > 0 && cb.inf_hess.maxCoeff() > 0.0;
  return w;
}

}  // namespace gmeopt
