#include "gmeopt/solver.hpp"

#include <cmath>
#include <limits>

#include "gmeopt/errors.hpp"

namespace gmeopt {

SolverState initial_state(const GmeProblem& p) {
  SolverState h;
  if (p.A.kind() == LinearMap::Kind::identity && p.C.kind() == LinearMap::Kind::identity) {
    h.x = p.delta.project(p.loss.observation());
  } else {
    h.x = Vec::Zero(p.dim_x());
  }
  h.v = Vec::Zero(p.dim_z());
  h.w = Vec::Zero(p.dim_z());
  h.z = Vec::Zero(p.dim_w());
  return h;
}

SolverParams default_params(const GmeProblem& p, double tol, long max_iter) {
  if (!p.convexity.holds)
    throw ParameterError("default_params: problem is not convexity-certified");
  if (tol <= 0) throw ParameterError("default_params: tol must be positive");

  SolverParams prm;
  prm.tol = tol;
  prm.max_iter = max_iter;

  const double norm_a = operator_norm(p.A);
  prm.lipschitz_grad_d = p.lip_grad_f * norm_a * norm_a;
  const double norm_b = operator_norm(p.B);
  const double denom = std::max(prm.lipschitz_grad_d, p.mu * norm_b * norm_b);
  if (!(denom > 0)) throw ParameterError("default_params: degenerate smooth part");
  prm.rho = 1.0 / denom;
  prm.tau = 3.0 / (2.0 * prm.rho);

  const LinearMap ltl_ctc = LinearMap::sum(LinearMap::compose(p.L.adjoint(), p.L),
                                           LinearMap::compose(p.C.adjoint(), p.C));
  const double norm_llcc = operator_norm(ltl_ctc);
  const double norm_bbl =
      p.B.is_zero() ? 0.0
                    : operator_norm(LinearMap::compose(p.B.adjoint(),
                                                       LinearMap::compose(p.B, p.L)));

  // 2 rho tau - 1 = 2 with tau = 3/(2 rho).
  const double bound = p.mu * norm_llcc +
                       (2.0 * prm.rho * p.mu * p.mu * norm_bbl * norm_bbl + prm.tau) /
                           (2.0 * prm.rho * prm.tau - 1.0);
  prm.sigma = 1.001 * bound;
  if (!(prm.sigma > bound))
    throw ParameterError("default_params: sigma bound is degenerate");

  const double theta_den = prm.rho * (prm.sigma * prm.tau - prm.tau * p.mu * norm_llcc -
                                      p.mu * p.mu * norm_bbl * norm_bbl);
  if (!(theta_den > 0))
    throw ParameterError("default_params: metric is not positive definite");
  prm.theta = (prm.sigma + prm.tau - p.mu * norm_llcc) / theta_den;
  if (!(prm.theta < 2.0))
    throw ParameterError("default_params: averagedness bound failed (theta >= 2); "
                         "operator-norm estimation is suspect");
  return prm;
}

namespace {

struct GradParts {
  Vec lx;      // L x
  Vec btblx;   // B* B L x
  Vec grad;    // grad d(x)
};

GradParts grad_parts(const GmeProblem& p, const Vec& x) {
  GradParts g;
  g.lx = p.L.apply(x);
  Vec ax = p.A.apply(x);
  Vec gf = p.loss.gradient(ax);
  if (p.B.is_zero()) {
    g.btblx = Vec::Zero(p.dim_z());
    g.grad = p.A.apply_adjoint(gf);
  } else {
    g.btblx = p.B.apply_adjoint(p.B.apply(g.lx));
    g.grad = p.A.apply_adjoint(gf) - p.mu * p.L.apply_adjoint(g.btblx);
  }
  return g;
}

}  // namespace

Vec grad_d(const GmeProblem& p, const Vec& x) {
  if (x.size() != p.dim_x()) throw InputError("grad_d: length mismatch");
  return grad_parts(p, x).grad;
}

SolverState apply_T(const GmeProblem& p, const SolverParams& prm, const SolverState& h) {
  const double mu = p.mu;
  const double ms = mu / prm.sigma;
  const double mt = mu / prm.tau;

  const GradParts g = grad_parts(p, h.x);
  const bool b_zero = p.B.is_zero();

  Vec btbv = b_zero ? Vec::Zero(p.dim_z()) : p.B.apply_adjoint(p.B.apply(h.v));

  SolverState out;
  out.x = h.x - g.grad / prm.sigma - ms * p.L.apply_adjoint(btbv + h.w) -
          ms * p.C.apply_adjoint(h.z);

  Vec lxi = p.L.apply(out.x);
  if (b_zero) {
    out.v = p.psi.prox(h.v, mt);
  } else {
    Vec btblxi = p.B.apply_adjoint(p.B.apply(lxi));
    out.v = p.psi.prox(2.0 * mt * btblxi - mt * g.btblx + h.v - mt * btbv, mt);
  }

  out.w = prox_conjugate(p.psi, 2.0 * lxi - g.lx + h.w);

  Vec carg = 2.0 * p.C.apply(out.x) - p.C.apply(h.x) + h.z;
  out.z = carg - p.delta.project(carg);
  return out;
}

double pnorm(const GmeProblem& p, const SolverParams& prm, const SolverState& h) {
  const double mu = p.mu;
  double q = prm.sigma * h.x.squaredNorm() + prm.tau * h.v.squaredNorm() +
             mu * h.w.squaredNorm() + mu * h.z.squaredNorm();
  const Vec lx = p.L.apply(h.x);
  if (!p.B.is_zero()) q -= 2.0 * mu * p.B.apply(lx).dot(p.B.apply(h.v));
  q -= 2.0 * mu * lx.dot(h.w);
  q -= 2.0 * mu * p.C.apply(h.x).dot(h.z);

  const double scale = prm.sigma * h.x.squaredNorm() + prm.tau * h.v.squaredNorm() +
                       mu * h.w.squaredNorm() + mu * h.z.squaredNorm() + 1.0;
  if (q < -1e-12 * scale)
    throw MetricError("pnorm: quadratic form is negative; parameters are inconsistent");
  return std::sqrt(std::max(q, 0.0));
}

SolveResult solve(const GmeProblem& p, const SolverParams& prm, SolverState h0,
                  const SolveOptions& opts) {
  if (!p.convexity.holds)
    throw ParameterError("solve: problem is not convexity-certified");
  if (!p.existence.certified() && !opts.allow_uncertified_existence)
    throw ParameterError("solve: minimizer existence is not certified");
  if (h0.x.size() != p.dim_x() || h0.v.size() != p.dim_z() || h0.w.size() != p.dim_z() ||
      h0.z.size() != p.dim_w())
    throw InputError("solve: initial state has wrong block sizes");

  SolveResult res;
  res.residual_h.reserve(static_cast<std::size_t>(std::min(prm.max_iter, 200000L)));
  SolverState h = std::move(h0);

  for (long k = 1; k <= prm.max_iter; ++k) {
    SolverState hn = apply_T(p, prm, h);
    const double rh = std::sqrt((hn.x - h.x).squaredNorm() + (hn.v - h.v).squaredNorm() +
                                (hn.w - h.w).squaredNorm() + (hn.z - h.z).squaredNorm());
    res.residual_h.push_back(rh);
    double rp = std::numeric_limits<double>::quiet_NaN();
    if (opts.record_pnorm) {
      SolverState d{hn.x - h.x, hn.v - h.v, hn.w - h.w, hn.z - h.z};
      rp = pnorm(p, prm, d);
      res.residual_p.push_back(rp);
    }
    h = std::move(hn);
    res.iterations = k;
    if (opts.monitor && opts.monitor_every > 0 && k % opts.monitor_every == 0)
      opts.monitor(k, h, rh, rp);
    if (rh < prm.tol) {
      res.converged = true;
      break;
    }
  }
  res.x = h.x;
  res.state = std::move(h);
  return res;
}

}  // namespace gmeopt
