#pragma once

#include <Eigen/Core>
#include <memory>

#include "gmeopt/linops.hpp"

namespace gmeopt {

// Product of per-coordinate closed intervals [lo_i, hi_i]; bounds may be
// infinite (lo_i in [-inf, inf), hi_i in (-inf, inf]). Projection is the
// coordinatewise clamp.
class SimpleSet {
 public:
  SimpleSet(Vec lo, Vec hi);
  static SimpleSet box(Eigen::Index n, double lo, double hi);
  static SimpleSet whole_space(Eigen::Index n);

  Vec project(const Vec& u) const;
  bool contains(const Vec& u, double tol = 0.0) const;
  bool bounded() const;
  Eigen::Index dim() const;
  const Vec& lower() const { return lo_; }
  const Vec& upper() const { return hi_; }

 private:
  Vec lo_, hi_;
};

// Convex function with an exact proximity operator at every positive scale.
class ProxFriendly {
 public:
  enum class Kind { l1, box, product_intervals };

  static ProxFriendly l1(Eigen::Index n);
  // Indicator of a product of intervals; kind is `box` when all bounds are
  // finite, `product_intervals` otherwise.
  static ProxFriendly indicator(SimpleSet s);

  // Extended-real value (+inf outside an indicator's set).
  double value(const Vec& x) const;
  // argmin_v [ value(v) + ||v - x||^2 / (2 gamma) ]; gamma must be positive.
  Vec prox(const Vec& x, double gamma) const;

  Eigen::Index dim() const;
  Kind kind() const;
  bool coercive() const;

 private:
  ProxFriendly(Kind k, Eigen::Index n, std::shared_ptr<const SimpleSet> s);
  Kind kind_;
  Eigen::Index dim_;
  std::shared_ptr<const SimpleSet> set_;  // indicator kinds only
};

// Soft threshold: per coordinate sign(x_i) max(|x_i| - gamma, 0).
Vec prox_l1(const Vec& x, double gamma);

// Prox of the Legendre-Fenchel conjugate at unit scale: x - F.prox(x, 1).
Vec prox_conjugate(const ProxFriendly& f, const Vec& x);

// Coordinatewise clamp of u onto the interval product.
Vec project_intervals(const SimpleSet& s, const Vec& u);

struct GmeValueOptions {
  double inner_tol = 1e-10;
  int max_iter = 100000;
};

// Value of the generalized-Moreau-enhanced penalty psi_B at z:
//   psi(z) - min_v [ psi(v) + 0.5 ||B(z - v)||^2 ],
// with the inner minimum found by proximal gradient (step 1 / ||B||_op^2).
// Diagnostic-only: the solver never calls this. Result is clamped to >= 0.
// Throws ConvergenceError carrying the best value on a stalled inner loop.
double gme_value(const ProxFriendly& psi, const LinearMap& b, const Vec& z,
                 const GmeValueOptions& opts = {});

}  // namespace gmeopt
