#pragma once

#include <limits>
#include <optional>

#include "gmeopt/extrapolate.hpp"
#include "gmeopt/linops.hpp"
#include "gmeopt/losses.hpp"
#include "gmeopt/proxfns.hpp"

namespace gmeopt {

struct ConvexityCertificate {
  double min_eig = std::numeric_limits<double>::quiet_NaN();
  double op_norm = 0.0;
  bool holds = false;
};

enum class ExistenceCondition { none, i, ii, iii, iv };

struct ExistenceCertificate {
  ExistenceCondition condition = ExistenceCondition::none;
  bool certified() const { return condition != ExistenceCondition::none; }
};

// The assembled estimation model
//   minimize_{C x in delta}  f(A x) + mu * psi_B(L x)
// where psi_B is the generalized Moreau enhancement of psi with matrix B.
// Spaces: A: X->Y, L: X->Z, B: Z->Z~, C: X->W with delta in W.
// Certification is a one-time construction step; afterwards instances are
// immutable and safe to share across concurrent solves.
struct GmeProblem {
  SmoothLoss loss;       // full-space smooth f (extrapolated when needed)
  LinearMap A;
  double mu = 1.0;
  ProxFriendly psi;
  LinearMap L;
  LinearMap B;
  LinearMap C;
  SimpleSet delta;
  Vec lambda;            // diagonal weights of f's relative strong convexity
  double lip_grad_f = 0; // Lipschitz constant of grad f
  ConvexityCertificate convexity;
  ExistenceCertificate existence;

  Eigen::Index dim_x() const { return A.in_dim(); }
  Eigen::Index dim_y() const { return A.out_dim(); }
  Eigen::Index dim_z() const { return L.out_dim(); }
  Eigen::Index dim_w() const { return C.out_dim(); }
};

// Validates all dimensional couplings; lip_grad_f defaults to the loss's own
// constant when it has one.
GmeProblem make_problem(SmoothLoss loss, LinearMap A, double mu, ProxFriendly psi,
                        LinearMap L, LinearMap B, LinearMap C, SimpleSet delta,
                        Vec lambda, std::optional<double> lip_grad_f = std::nullopt);

// Overall-convexity check: materializes M = A* Lambda A - mu L* B* B L,
// returns its smallest eigenvalue and whether
//   min_eig >= -tol_psd (1 + ||M||_op).
// When it holds the full cost function is convex.
ConvexityCertificate check_overall_convexity(const GmeProblem& p, double tol_psd = 1e-10);

// GME matrix for invertible L (identity, dct, or square invertible dense):
//   B = sqrt(theta/mu) Lambda^{1/2} L^{-1},
// which makes mu L* B* B L = theta * Lambda exactly. Intended for A = identity;
// run check_overall_convexity on the assembled problem either way.
// theta = 0 yields the zero map (plain convex model).
LinearMap design_B_inverse(double theta, double mu, const Vec& lambda, const LinearMap& L);

struct ScalarBDesign {
  LinearMap B;
  double c_star = 0.0;
  bool degenerate = false;  // c_star vanished; B is the zero map
};

// Scalar fallback for non-invertible L: finds
//   c* = sup { c >= 0 : A* Lambda A - c L* L is PSD }
// by bisection on the smallest eigenvalue (60 steps) and returns
// B = sqrt(theta c* / mu) Id on Z.
ScalarBDesign design_B_scalar(double theta, double mu, const Vec& lambda,
                              const LinearMap& A, const LinearMap& L);

struct DeclaredLossProperties {
  bool coercive = false;
  bool bounded_below = false;
};

// Minimizer-existence certificate, testing in order:
//   (iv) delta bounded and C injective;
//   (iii) f bounded below and L injective;
//   (ii) f coercive and null A intersect null L = {0};
//   (i) f coercive (the interval-product constraint is polyhedral).
// Flags describe the original (pre-extrapolation) loss.
ExistenceCertificate check_existence(const GmeProblem& p, DeclaredLossProperties declared);

struct ObjectiveBreakdown {
  double fidelity = 0.0;
  double regularizer = 0.0;  // psi_B(L x), always >= 0
  double total = 0.0;
  bool feasible = false;     // C x in delta within 1e-9 per coordinate
};

ObjectiveBreakdown evaluate_objective(const GmeProblem& p, const Vec& x,
                                      const GmeValueOptions& inner = {});

}  // namespace gmeopt
