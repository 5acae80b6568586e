#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <vector>

#include "gmeopt/proxfns.hpp"

namespace gmeopt {

// Separable smooth convex observation loss f(u) = sum_i f_i(u_i). Immutable
// and shareable. Per-coordinate derivatives outside the domain raise
// DomainError; values return +inf instead.
//
// The coercive/bounded-below flags describe the loss that existence
// certification keys on. For an extrapolated loss they are inherited from
// the base loss, since the extension preserves minimizers over sets where
// both losses agree.
class SmoothLoss {
 public:
  enum class Kind { quadratic, poisson, clipped_gaussian, extrapolated };
  enum class ClipClass { unclipped, clipped_above, clipped_below };

  struct Impl;
  explicit SmoothLoss(std::shared_ptr<const Impl> impl);

  double value_at(Eigen::Index i, double t) const;
  double deriv_at(Eigen::Index i, double t) const;
  double second_at(Eigen::Index i, double t) const;

  double value(const Vec& u) const;
  Vec gradient(const Vec& u) const;

  Eigen::Index dim() const;
  Kind kind() const;
  bool coercive() const;
  bool bounded_below() const;
  // Lipschitz constant of the full-space gradient, when the loss is smooth
  // over the whole space.
  std::optional<double> lipschitz_gradient() const;

  const Vec& observation() const;
  double noise_sigma() const;  // clipped_gaussian only
  double clip_level() const;   // clipped_gaussian only
  ClipClass clip_class(Eigen::Index i) const;  // clipped_gaussian only

  const Impl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
};

// Extension point shared by the concrete losses and the extrapolation
// module.
struct SmoothLoss::Impl {
  virtual ~Impl() = default;
  virtual double value(Eigen::Index i, double t) const = 0;
  virtual double deriv(Eigen::Index i, double t) const = 0;
  virtual double second(Eigen::Index i, double t) const = 0;

  Kind kind = Kind::quadratic;
  Vec y;
  bool coercive = false;
  bool bounded_below = false;
  std::optional<double> lips;
  double sigma = 0.0;
  double clip = 0.0;
  std::vector<SmoothLoss::ClipClass> classes;  // clipped only
};

// f_i(t) = 0.5 (t - y_i)^2.
SmoothLoss quadratic_loss(Vec y);

// Poisson negative log-likelihood: for y_i > 0, f_i(t) = t - y_i log t on
// t > 0; for y_i = 0, f_i(t) = t on t >= 0. Entries of y must be
// nonnegative integers.
SmoothLoss poisson_loss(Vec y);

// Wide-sense likelihood loss for observations clipped at +-clip_level under
// N(0, sigma^2) noise. Unclipped coordinates are quadratic; clipped ones are
// -log Pr(+-(t -+ clip_level)) up to the additive constant log(sigma
// sqrt(2 pi)), which is dropped (reported objective values are comparable
// within a run only). Requires |y_i| <= clip_level for every i.
SmoothLoss clipped_loss(Vec y, double clip_level, double noise_sigma);

// Hazard p(t)/Pr(t) of N(0, s^2): density over CDF. Evaluated through the
// scaled complementary error function so it stays finite and positive for
// all finite t; tiny positive results in the far right tail are clamped to
// the smallest normal double.
double gaussian_hazard(double t, double s);

// log Pr(t) for N(0, s^2), stable far into the left tail.
double gaussian_log_cdf(double t, double s);

// Per-coordinate curvature of a loss over an interval product.
struct CurvatureBounds {
  Vec lo, hi;        // the intervals
  Vec inf_hess;      // >= 0
  Vec sup_hess;      // may contain +inf
};

// Analytic infima/suprema of f_i'' over Pi_i. Pi must lie inside the domain
// of the loss. Supported for quadratic, poisson and clipped_gaussian kinds.
CurvatureBounds curvature_bounds(const SmoothLoss& loss, const SimpleSet& pi);

}  // namespace gmeopt
