#include "gmeopt/proxfns.hpp"

#include <cmath>
#include <limits>

#include "gmeopt/errors.hpp"

namespace gmeopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SimpleSet::SimpleSet(Vec lo, Vec hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size()) throw InputError("SimpleSet: bound length mismatch");
  for (Eigen::Index i = 0; i < lo_.size(); ++i) {
    if (std::isnan(lo_[i]) || std::isnan(hi_[i]))
      throw InputError("SimpleSet: NaN bound");
    if (lo_[i] == kInf || hi_[i] == -kInf || lo_[i] > hi_[i])
      throw InputError("SimpleSet: empty interval at coordinate " + std::to_string(i));
  }
}

SimpleSet SimpleSet::box(Eigen::Index n, double lo, double hi) {
  return SimpleSet(Vec::Constant(n, lo), Vec::Constant(n, hi));
}

SimpleSet SimpleSet::whole_space(Eigen::Index n) {
  return SimpleSet(Vec::Constant(n, -kInf), Vec::Constant(n, kInf));
}

Vec SimpleSet::project(const Vec& u) const {
  if (u.size() != lo_.size()) throw InputError("SimpleSet::project: length mismatch");
  return u.cwiseMax(lo_).cwiseMin(hi_);
}

bool SimpleSet::contains(const Vec& u, double tol) const {
  if (u.size() != lo_.size()) throw InputError("SimpleSet::contains: length mismatch");
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (u[i] < lo_[i] - tol || u[i] > hi_[i] + tol) return false;
  return true;
}

bool SimpleSet::bounded() const {
  for (Eigen::Index i = 0; i < lo_.size(); ++i)
    if (lo_[i] == -kInf || hi_[i] == kInf) return false;
  return true;
}

Eigen::Index SimpleSet::dim() const { return lo_.size(); }

ProxFriendly::ProxFriendly(Kind k, Eigen::Index n, std::shared_ptr<const SimpleSet> s)
    : kind_(k), dim_(n), set_(std::move(s)) {}

ProxFriendly ProxFriendly::l1(Eigen::Index n) {
  if (n < 1) throw InputError("ProxFriendly::l1: need n >= 1");
  return ProxFriendly(Kind::l1, n, nullptr);
}

ProxFriendly ProxFriendly::indicator(SimpleSet s) {
  const Kind k = s.bounded() ? Kind::box : Kind::product_intervals;
  const Eigen::Index n = s.dim();
  return ProxFriendly(k, n, std::make_shared<const SimpleSet>(std::move(s)));
}

double ProxFriendly::value(const Vec& x) const {
  if (x.size() != dim_) throw InputError("ProxFriendly::value: length mismatch");
  if (kind_ == Kind::l1) return x.lpNorm<1>();
  return set_->contains(x) ? 0.0 : kInf;
}

Vec ProxFriendly::prox(const Vec& x, double gamma) const {
  if (gamma <= 0) throw ParameterError("ProxFriendly::prox: gamma must be positive");
  if (x.size() != dim_) throw InputError("ProxFriendly::prox: length mismatch");
  if (kind_ == Kind::l1) return prox_l1(x, gamma);
  return set_->project(x);  // indicator prox is the metric projection at any scale
}

Eigen::Index ProxFriendly::dim() const { return dim_; }
ProxFriendly::Kind ProxFriendly::kind() const { return kind_; }

bool ProxFriendly::coercive() const {
  if (kind_ == Kind::l1) return true;
  return set_->bounded();
}

Vec prox_l1(const Vec& x, double gamma) {
  if (gamma <= 0) throw ParameterError("prox_l1: gamma must be positive");
  Vec p(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]) - gamma;
    p[i] = a > 0 ? (x[i] > 0 ? a : -a) : 0.0;
  }
  return p;
}

Vec prox_conjugate(const ProxFriendly& f, const Vec& x) { return x - f.prox(x, 1.0); }

Vec project_intervals(const SimpleSet& s, const Vec& u) { return s.project(u); }

double gme_value(const ProxFriendly& psi, const LinearMap& b, const Vec& z,
                 const GmeValueOptions& opts) {
  if (!psi.coercive())
    throw ParameterError("gme_value: psi must be coercive for the inner minimum to exist");
  if (opts.inner_tol <= 0) throw ParameterError("gme_value: inner_tol must be positive");
  if (z.size() != psi.dim() || z.size() != b.in_dim())
    throw InputError("gme_value: dimension mismatch");

  const double psi_z = psi.value(z);

  auto envelope_term = [&](const Vec& v) {
    if (b.is_zero()) return psi.value(v);
    Vec r = b.apply(z - v);
    return psi.value(v) + 0.5 * r.squaredNorm();
  };

  Vec v = z;
  double best = std::max(psi_z - envelope_term(v), 0.0);

  if (b.is_zero()) {
    // Proximal point iteration drives v to a minimizer of psi.
    for (int it = 0; it < opts.max_iter; ++it) {
      Vec vn = psi.prox(v, 1.0);
      const double step_sz = (vn - v).norm();
      v = std::move(vn);
      if (step_sz < opts.inner_tol)
        return std::max(psi_z - envelope_term(v), 0.0);
    }
    best = std::max(psi_z - envelope_term(v), 0.0);
    throw ConvergenceError("gme_value: inner minimization stalled", best);
  }

  const double bnorm = operator_norm(b);
  if (bnorm == 0.0) return 0.0;  // numerically zero map
  const double step = 1.0 / (bnorm * bnorm);

  for (int it = 0; it < opts.max_iter; ++it) {
    Vec grad = b.apply_adjoint(b.apply(v - z));
    Vec vn = psi.prox(v - step * grad, step);
    const double resid = (vn - v).norm() / step;
    v = std::move(vn);
    if (resid < opts.inner_tol)
      return std::max(psi_z - envelope_term(v), 0.0);
  }
  best = std::max(psi_z - envelope_term(v), 0.0);
  throw ConvergenceError("gme_value: inner minimization stalled", best);
}

}  // namespace gmeopt
