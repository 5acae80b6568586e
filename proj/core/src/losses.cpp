#include "gmeopt/losses.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gmeopt/errors.hpp"

namespace gmeopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrtPi = std::sqrt(std::acos(-1.0));
const double kSqrt2 = std::sqrt(2.0);
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::acos(-1.0));

// exp(x^2) erfc(x) for x >= 0. Direct product below x = 25 (both factors
// representable there), asymptotic series beyond.
double erfcx_pos(double x) {
  if (x < 25.0) return std::exp(x * x) * std::erfc(x);
  const double q = 1.0 / (2.0 * x * x);
  double term = 1.0, s = 1.0;
  term *= -q;        s += term;   //   -1!! q
  term *= -3.0 * q;  s += term;   //   +3!! q^2
  term *= -5.0 * q;  s += term;   //  -15   q^3
  term *= -7.0 * q;  s += term;   // +105   q^4
  term *= -9.0 * q;  s += term;   // -945   q^5
  return s / (x * kSqrtPi);
}

// phi(u)/Phi(u) for the standard normal.
double std_hazard(double u) {
  if (u >= 0.0) {
    const double pdf = kInvSqrt2Pi * std::exp(-0.5 * u * u);
    const double cdf = 0.5 * std::erfc(-u / kSqrt2);
    const double h = pdf / cdf;
    return h > 0.0 ? h : std::numeric_limits<double>::min();
  }
  // Phi(u) = 0.5 exp(-u^2/2) erfcx(-u/sqrt(2)); the exp factors cancel.
  return std::sqrt(2.0 / std::acos(-1.0)) / erfcx_pos(-u / kSqrt2);
}

double std_log_cdf(double u) {
  if (u >= -1.0) {
    if (u > 6.0) return std::log1p(-0.5 * std::erfc(u / kSqrt2));
    return std::log(0.5 * std::erfc(-u / kSqrt2));
  }
  return std::log(0.5 * erfcx_pos(-u / kSqrt2)) - 0.5 * u * u;
}

}  // namespace

double gaussian_hazard(double t, double s) {
  if (s <= 0) throw ParameterError("gaussian_hazard: s must be positive");
  if (!std::isfinite(t)) throw InputError("gaussian_hazard: t must be finite");
  return std_hazard(t / s) / s;
}

double gaussian_log_cdf(double t, double s) {
  if (s <= 0) throw ParameterError("gaussian_log_cdf: s must be positive");
  if (!std::isfinite(t)) throw InputError("gaussian_log_cdf: t must be finite");
  return std_log_cdf(t / s);
}

SmoothLoss::SmoothLoss(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

double SmoothLoss::value_at(Eigen::Index i, double t) const { return impl_->value(i, t); }
double SmoothLoss::deriv_at(Eigen::Index i, double t) const { return impl_->deriv(i, t); }
double SmoothLoss::second_at(Eigen::Index i, double t) const { return impl_->second(i, t); }

double SmoothLoss::value(const Vec& u) const {
  if (u.size() != dim()) throw InputError("SmoothLoss::value: length mismatch");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double v = impl_->value(i, u[i]);
    if (v == kInf) return kInf;
    acc += v;
  }
  return acc;
}

Vec SmoothLoss::gradient(const Vec& u) const {
  if (u.size() != dim()) throw InputError("SmoothLoss::gradient: length mismatch");
  Vec g(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) g[i] = impl_->deriv(i, u[i]);
  return g;
}

Eigen::Index SmoothLoss::dim() const { return impl_->y.size(); }
SmoothLoss::Kind SmoothLoss::kind() const { return impl_->kind; }
bool SmoothLoss::coercive() const { return impl_->coercive; }
bool SmoothLoss::bounded_below() const { return impl_->bounded_below; }
std::optional<double> SmoothLoss::lipschitz_gradient() const { return impl_->lips; }
const Vec& SmoothLoss::observation() const { return impl_->y; }

double SmoothLoss::noise_sigma() const {
  if (impl_->kind != Kind::clipped_gaussian)
    throw ParameterError("noise_sigma: not a clipped loss");
  return impl_->sigma;
}

double SmoothLoss::clip_level() const {
  if (impl_->kind != Kind::clipped_gaussian)
    throw ParameterError("clip_level: not a clipped loss");
  return impl_->clip;
}

SmoothLoss::ClipClass SmoothLoss::clip_class(Eigen::Index i) const {
  if (impl_->kind != Kind::clipped_gaussian)
    throw ParameterError("clip_class: not a clipped loss");
  return impl_->classes[static_cast<std::size_t>(i)];
}

namespace {

struct QuadraticImpl final : SmoothLoss::Impl {
  double value(Eigen::Index i, double t) const override {
    const double d = t - y[i];
    return 0.5 * d * d;
  }
  double deriv(Eigen::Index i, double t) const override { return t - y[i]; }
  double second(Eigen::Index, double) const override { return 1.0; }
};

struct PoissonImpl final : SmoothLoss::Impl {
  double value(Eigen::Index i, double t) const override {
    if (y[i] > 0.0) return t > 0.0 ? t - y[i] * std::log(t) : kInf;
    return t >= 0.0 ? t : kInf;
  }
  double deriv(Eigen::Index i, double t) const override {
    if (y[i] > 0.0) {
      if (t <= 0.0) throw DomainError("poisson loss derivative requested at t <= 0");
      return 1.0 - y[i] / t;
    }
    if (t < 0.0) throw DomainError("poisson loss derivative requested at t < 0");
    return 1.0;
  }
  double second(Eigen::Index i, double t) const override {
    if (y[i] > 0.0) {
      if (t <= 0.0) throw DomainError("poisson loss curvature requested at t <= 0");
      return y[i] / (t * t);
    }
    if (t < 0.0) throw DomainError("poisson loss curvature requested at t < 0");
    return 0.0;
  }
};

struct ClippedImpl final : SmoothLoss::Impl {
  double inv_s2 = 0.0;

  double value(Eigen::Index i, double t) const override {
    switch (classes[static_cast<std::size_t>(i)]) {
      case SmoothLoss::ClipClass::unclipped: {
        const double d = (t - y[i]) / sigma;
        return 0.5 * d * d;
      }
      case SmoothLoss::ClipClass::clipped_above:
        return -gaussian_log_cdf(t - clip, sigma);
      case SmoothLoss::ClipClass::clipped_below:
        return -gaussian_log_cdf(-clip - t, sigma);
    }
    return kInf;
  }
  double deriv(Eigen::Index i, double t) const override {
    switch (classes[static_cast<std::size_t>(i)]) {
      case SmoothLoss::ClipClass::unclipped:
        return (t - y[i]) * inv_s2;
      case SmoothLoss::ClipClass::clipped_above:
        return -gaussian_hazard(t - clip, sigma);
      case SmoothLoss::ClipClass::clipped_below:
        return gaussian_hazard(-clip - t, sigma);
    }
    return 0.0;
  }
  double second(Eigen::Index i, double t) const override {
    switch (classes[static_cast<std::size_t>(i)]) {
      case SmoothLoss::ClipClass::unclipped:
        return inv_s2;
      case SmoothLoss::ClipClass::clipped_above:
        return neg_hazard_deriv(t - clip);
      case SmoothLoss::ClipClass::clipped_below:
        return neg_hazard_deriv(-clip - t);
    }
    return 0.0;
  }

  // (-p/Pr)'(x) = h(x) (h(x) + x / s^2) with h the hazard.
  double neg_hazard_deriv(double x) const {
    const double h = gaussian_hazard(x, sigma);
    return h * (h + x * inv_s2);
  }
};

}  // namespace

SmoothLoss quadratic_loss(Vec y) {
  if (!y.allFinite()) throw InputError("quadratic_loss: non-finite observation");
  auto impl = std::make_shared<QuadraticImpl>();
  impl->kind = SmoothLoss::Kind::quadratic;
  impl->y = std::move(y);
  impl->coercive = true;
  impl->bounded_below = true;
  impl->lips = 1.0;
  return SmoothLoss(impl);
}

SmoothLoss poisson_loss(Vec y) {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!(y[i] >= 0.0) || y[i] != std::floor(y[i]))
      throw InputError("poisson_loss: y[" + std::to_string(i) +
                       "] must be a nonnegative integer");
  }
  auto impl = std::make_shared<PoissonImpl>();
  impl->kind = SmoothLoss::Kind::poisson;
  impl->y = std::move(y);
  impl->coercive = true;
  impl->bounded_below = true;
  impl->lips = std::nullopt;  // not smooth over the whole space
  return SmoothLoss(impl);
}

SmoothLoss clipped_loss(Vec y, double clip_level, double noise_sigma) {
  if (clip_level <= 0) throw ParameterError("clipped_loss: clip level must be positive");
  if (noise_sigma <= 0) throw ParameterError("clipped_loss: sigma must be positive");
  auto impl = std::make_shared<ClippedImpl>();
  impl->classes.resize(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (std::abs(y[i]) > clip_level)
      throw InputError("clipped_loss: y[" + std::to_string(i) +
                       "] lies outside [-clip_level, clip_level]");
    if (y[i] == clip_level)
      impl->classes[static_cast<std::size_t>(i)] = SmoothLoss::ClipClass::clipped_above;
    else if (y[i] == -clip_level)
      impl->classes[static_cast<std::size_t>(i)] = SmoothLoss::ClipClass::clipped_below;
    else
      impl->classes[static_cast<std::size_t>(i)] = SmoothLoss::ClipClass::unclipped;
  }
  impl->kind = SmoothLoss::Kind::clipped_gaussian;
  impl->y = std::move(y);
  impl->sigma = noise_sigma;
  impl->clip = clip_level;
  impl->inv_s2 = 1.0 / (noise_sigma * noise_sigma);
  impl->coercive = false;  // clipped coordinates decay to a finite limit
  impl->bounded_below = true;
  impl->lips = impl->inv_s2;  // curvature of every branch stays below 1/s^2
  return SmoothLoss(impl);
}

CurvatureBounds curvature_bounds(const SmoothLoss& loss, const SimpleSet& pi) {
  if (pi.dim() != loss.dim()) throw InputError("curvature_bounds: dimension mismatch");
  const Vec& lo = pi.lower();
  const Vec& hi = pi.upper();
  CurvatureBounds cb;
  cb.lo = lo;
  cb.hi = hi;
  cb.inf_hess = Vec::Zero(loss.dim());
  cb.sup_hess = Vec::Zero(loss.dim());

  switch (loss.kind()) {
    case SmoothLoss::Kind::quadratic:
      cb.inf_hess.setOnes();
      cb.sup_hess.setOnes();
      return cb;

    case SmoothLoss::Kind::poisson: {
      const Vec& y = loss.observation();
      for (Eigen::Index i = 0; i < loss.dim(); ++i) {
        if (y[i] > 0.0) {
          if (lo[i] <= 0.0)
            throw DomainError("curvature_bounds: Pi must lie in (0, inf) at coordinate " +
                              std::to_string(i));
          cb.inf_hess[i] = std::isinf(hi[i]) ? 0.0 : y[i] / (hi[i] * hi[i]);
          cb.sup_hess[i] = y[i] / (lo[i] * lo[i]);
        } else {
          if (lo[i] < 0.0)
            throw DomainError("curvature_bounds: Pi must lie in [0, inf) at coordinate " +
                              std::to_string(i));
          cb.inf_hess[i] = 0.0;
          cb.sup_hess[i] = 0.0;
        }
      }
      return cb;
    }

    case SmoothLoss::Kind::clipped_gaussian: {
      const double s = loss.noise_sigma();
      const double inv_s2 = 1.0 / (s * s);
      for (Eigen::Index i = 0; i < loss.dim(); ++i) {
        switch (loss.clip_class(i)) {
          case SmoothLoss::ClipClass::unclipped:
            cb.inf_hess[i] = inv_s2;
            cb.sup_hess[i] = inv_s2;
            break;
          case SmoothLoss::ClipClass::clipped_above:
            // f_i'' is strictly decreasing, so the endpoints are extremal.
            cb.sup_hess[i] = std::isinf(lo[i]) ? inv_s2 : loss.second_at(i, lo[i]);
            cb.inf_hess[i] = std::isinf(hi[i]) ? 0.0 : loss.second_at(i, hi[i]);
            break;
          case SmoothLoss::ClipClass::clipped_below:
            // Mirrored: f_i'' is strictly increasing here.
            cb.sup_hess[i] = std::isinf(hi[i]) ? inv_s2 : loss.second_at(i, hi[i]);
            cb.inf_hess[i] = std::isinf(lo[i]) ? 0.0 : loss.second_at(i, lo[i]);
            break;
        }
      }
      return cb;
    }

    case SmoothLoss::Kind::extrapolated:
      throw ParameterError("curvature_bounds: extrapolated losses are not supported");
  }
  throw ParameterError("curvature_bounds: unknown loss kind");
}

}  // namespace gmeopt
