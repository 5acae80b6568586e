#pragma once

#include <functional>
#include <vector>

#include "gmeopt/gme_model.hpp"

namespace gmeopt {

// Step parameters of the fixed-point operator. default_params derives them
// from the problem's constants:
//   rho   = 1 / max{ L_grad_d, mu ||B||^2 }   with L_grad_d = lip_grad_f ||A||^2
//   tau   = 3 / (2 rho)
//   sigma = 1.001 ( mu ||L*L + C*C|| + (2 rho mu^2 ||B*B L||^2 + tau) / (2 rho tau - 1) )
// theta is the derived averagedness diagnostic and must come out < 2; that
// strict sigma inequality is also what certifies positive definiteness of
// the solver metric.
struct SolverParams {
  double rho = 0.0;
  double sigma = 0.0;
  double tau = 0.0;
  double theta = 0.0;
  double lipschitz_grad_d = 0.0;
  double tol = 1e-6;
  long max_iter = 1000000;
};

// Product-space iterate h = (x, v, w, z).
struct SolverState {
  Vec x, v, w, z;
};

// Heuristic start: x0 is the projection of the observation when both A and C
// are the identity, otherwise zero; the dual blocks start at zero.
SolverState initial_state(const GmeProblem& p);

SolverParams default_params(const GmeProblem& p, double tol = 1e-6, long max_iter = 1000000);

// grad d(x) = A* grad f(A x) - mu L* B* B L x, the gradient of the smooth
// convex part d = f(A .) - (mu/2) ||B L .||^2.
Vec grad_d(const GmeProblem& p, const Vec& x);

// One application of the fixed-point operator T.
SolverState apply_T(const GmeProblem& p, const SolverParams& prm, const SolverState& h);

// Norm induced by the solver metric, evaluated by block application (never
// materialized). Throws MetricError if the quadratic form comes out negative
// beyond rounding, which signals inconsistent parameters.
double pnorm(const GmeProblem& p, const SolverParams& prm, const SolverState& h);

struct SolveOptions {
  // Also track ||h_{k+1} - h_k|| in the solver metric (costs a few extra
  // operator applications per iteration).
  bool record_pnorm = false;
  // Skip the existence-certificate precondition (small test instances).
  bool allow_uncertified_existence = false;
  // Invoked every monitor_every iterations when set.
  long monitor_every = 0;
  std::function<void(long iter, const SolverState& h, double res_h, double res_p)> monitor;
};

struct SolveResult {
  Vec x;
  SolverState state;
  bool converged = false;
  long iterations = 0;
  std::vector<double> residual_h;  // ||h_k - h_{k-1}|| per iteration
  std::vector<double> residual_p;  // same in the solver metric (when recorded)
};

// Plain fixed-point iteration h_{k+1} = T(h_k), stopping once the
// product-space residual ||h_k - h_{k-1}|| drops below prm.tol. Running out
// of iterations returns converged = false with the best state rather than
// throwing.
SolveResult solve(const GmeProblem& p, const SolverParams& prm, SolverState h0,
                  const SolveOptions& opts = {});

}  // namespace gmeopt
