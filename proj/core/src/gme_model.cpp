#include "gmeopt/gme_model.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "gmeopt/errors.hpp"

namespace gmeopt {

GmeProblem make_problem(SmoothLoss loss, LinearMap A, double mu, ProxFriendly psi,
                        LinearMap L, LinearMap B, LinearMap C, SimpleSet delta,
                        Vec lambda, std::optional<double> lip_grad_f) {
  if (mu <= 0) throw ParameterError("make_problem: mu must be positive");
  if (A.out_dim() != loss.dim()) throw InputError("make_problem: A/loss dimension mismatch");
  if (L.in_dim() != A.in_dim()) throw InputError("make_problem: L domain mismatch");
  if (C.in_dim() != A.in_dim()) throw InputError("make_problem: C domain mismatch");
  if (B.in_dim() != L.out_dim()) throw InputError("make_problem: B domain mismatch");
  if (psi.dim() != L.out_dim()) throw InputError("make_problem: psi dimension mismatch");
  if (delta.dim() != C.out_dim()) throw InputError("make_problem: delta dimension mismatch");
  if (lambda.size() != loss.dim()) throw InputError("make_problem: lambda dimension mismatch");
  if (lambda.size() > 0 && lambda.minCoeff() < 0)
    throw InputError("make_problem: lambda must be nonnegative");

  double lip = 0.0;
  if (lip_grad_f) {
    lip = *lip_grad_f;
  } else if (auto own = loss.lipschitz_gradient()) {
    lip = *own;
  } else {
    throw ParameterError(
        "make_problem: loss has no full-space Lipschitz gradient; extrapolate it "
        "or pass lip_grad_f explicitly");
  }
  if (!(lip > 0) || !std::isfinite(lip))
    throw ParameterError("make_problem: lip_grad_f must be positive and finite");

  GmeProblem p{std::move(loss), std::move(A),     mu,
               std::move(psi),  std::move(L),     std::move(B),
               std::move(C),    std::move(delta), std::move(lambda),
               lip,             {},               {}};
  return p;
}

ConvexityCertificate check_overall_convexity(const GmeProblem& p, double tol_psd) {
  if (tol_psd < 0) throw ParameterError("check_overall_convexity: tol_psd must be >= 0");
  const Mat a = materialize(p.A);
  const Mat bl = p.B.is_zero() ? Mat() : materialize(LinearMap::compose(p.B, p.L));
  Mat m = a.transpose() * p.lambda.asDiagonal() * a;
  if (bl.size() > 0) m -= p.mu * bl.transpose() * bl;
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw InputError("check_overall_convexity: eigensolver failed");
  ConvexityCertificate cert;
  cert.min_eig = es.eigenvalues().minCoeff();
  cert.op_norm = es.eigenvalues().cwiseAbs().maxCoeff();
  cert.holds = cert.min_eig >= -tol_psd * (1.0 + cert.op_norm);
  return cert;
}

LinearMap design_B_inverse(double theta, double mu, const Vec& lambda, const LinearMap& L) {
  if (theta < 0 || theta >= 1)
    throw ParameterError("design_B_inverse: theta must lie in [0, 1)");
  if (mu <= 0) throw ParameterError("design_B_inverse: mu must be positive");
  if (lambda.size() > 0 && lambda.minCoeff() < 0)
    throw InputError("design_B_inverse: lambda must be nonnegative");
  if (L.in_dim() != L.out_dim())
    throw ParameterError("design_B_inverse: L must be square and invertible");
  if (lambda.size() != L.out_dim())
    throw InputError("design_B_inverse: lambda/L dimension mismatch");
  if (theta == 0.0) return LinearMap::zero(lambda.size(), L.out_dim());

  LinearMap inv = LinearMap::identity(0);
  switch (L.kind()) {
    case LinearMap::Kind::identity:
      inv = LinearMap::identity(L.in_dim());
      break;
    case LinearMap::Kind::dct:
      inv = L.adjoint();  // orthonormal
      break;
    case LinearMap::Kind::dense: {
      const Mat lm = materialize(L);
      Eigen::FullPivLU<Mat> lu(lm);
      if (!lu.isInvertible())
        throw ParameterError("design_B_inverse: L is not invertible");
      inv = LinearMap::dense(lu.inverse());
      break;
    }
    default:
      throw ParameterError(
          "design_B_inverse: L must be of identity, dct, or invertible dense kind");
  }
  const LinearMap sqrt_lambda = LinearMap::diagonal(lambda.cwiseSqrt());
  return LinearMap::scaled(std::sqrt(theta / mu), LinearMap::compose(sqrt_lambda, inv));
}

ScalarBDesign design_B_scalar(double theta, double mu, const Vec& lambda,
                              const LinearMap& A, const LinearMap& L) {
  if (theta < 0 || theta >= 1)
    throw ParameterError("design_B_scalar: theta must lie in [0, 1)");
  if (mu <= 0) throw ParameterError("design_B_scalar: mu must be positive");
  if (lambda.size() > 0 && lambda.minCoeff() < 0)
    throw InputError("design_B_scalar: lambda must be nonnegative");
  if (lambda.size() != A.out_dim())
    throw InputError("design_B_scalar: lambda/A dimension mismatch");
  if (A.in_dim() != L.in_dim()) throw InputError("design_B_scalar: A/L domain mismatch");

  const Eigen::Index zdim = L.out_dim();
  ScalarBDesign out{LinearMap::zero(zdim, zdim), 0.0, true};
  if (theta == 0.0) {
    out.degenerate = false;
    return out;
  }

  const Mat a = materialize(A);
  const Mat l = materialize(L);
  Mat ala = a.transpose() * lambda.asDiagonal() * a;
  ala = 0.5 * (ala + ala.transpose()).eval();
  Mat ltl = l.transpose() * l;
  ltl = 0.5 * (ltl + ltl.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Mat> es_l(ltl, Eigen::EigenvaluesOnly);
  const Vec ltl_eigs = es_l.eigenvalues();
  const double ltl_max = ltl_eigs.maxCoeff();
  if (!(ltl_max > 0)) throw ParameterError("design_B_scalar: L must be nonzero");
  double ltl_min_pos = ltl_max;
  for (Eigen::Index i = 0; i < ltl_eigs.size(); ++i)
    if (ltl_eigs[i] > 1e-12 * ltl_max) ltl_min_pos = std::min(ltl_min_pos, ltl_eigs[i]);

  Eigen::SelfAdjointEigenSolver<Mat> es_a(ala, Eigen::EigenvaluesOnly);
  const double ala_norm = es_a.eigenvalues().cwiseAbs().maxCoeff();

  const double psd_tol = 1e-12 * (1.0 + ala_norm);
  auto feasible = [&](double c) {
    return min_eigenvalue_symmetric(ala - c * ltl) >= -psd_tol;
  };

  double hi = ala_norm / ltl_min_pos;
  double lo = 0.0;
  if (hi > 0 && feasible(hi)) {
    lo = hi;
  } else {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
  }
  out.c_star = lo;

  if (out.c_star <= 1e-9 * std::max(hi, 1e-300)) {
    out.c_star = 0.0;
    out.degenerate = true;  // model reduces to the plain convex regularizer
    return out;
  }
  out.degenerate = false;
  out.B = LinearMap::scaled(std::sqrt(theta * out.c_star / mu), LinearMap::identity(zdim));
  return out;
}

namespace {

double min_singular_value(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues().minCoeff();
}

double max_singular_value(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues().maxCoeff();
}

bool injective(const Mat& m) {
  if (m.rows() < m.cols()) return false;
  const double mx = max_singular_value(m);
  if (!(mx > 0)) return false;
  return min_singular_value(m) > 1e-10 * mx;
}

}  // namespace

ExistenceCertificate check_existence(const GmeProblem& p, DeclaredLossProperties declared) {
  const bool bounded_below = declared.bounded_below || declared.coercive;

  if (p.delta.bounded()) {
    if (injective(materialize(p.C))) return {ExistenceCondition::iv};
  }
  if (bounded_below) {
    if (injective(materialize(p.L))) return {ExistenceCondition::iii};
  }
  if (declared.coercive) {
    Mat stacked(p.A.out_dim() + p.L.out_dim(), p.dim_x());
    stacked.topRows(p.A.out_dim()) = materialize(p.A);
    stacked.bottomRows(p.L.out_dim()) = materialize(p.L);
    if (injective(stacked)) return {ExistenceCondition::ii};
  }
  // The constraint set is a product of intervals pulled back through a linear
  // map, hence polyhedral; coercivity of f is then enough.
  if (declared.coercive) return {ExistenceCondition::i};
  return {ExistenceCondition::none};
}

ObjectiveBreakdown evaluate_objective(const GmeProblem& p, const Vec& x,
                                      const GmeValueOptions& inner) {
  if (x.size() != p.dim_x()) throw InputError("evaluate_objective: length mismatch");
  if (!x.allFinite()) throw InputError("evaluate_objective: non-finite iterate");
  ObjectiveBreakdown o;
  o.fidelity = p.loss.value(p.A.apply(x));
  o.regularizer = gme_value(p.psi, p.B, p.L.apply(x), inner);
  o.total = o.fidelity + p.mu * o.regularizer;
  const Vec cx = p.C.apply(x);
  o.feasible = p.delta.contains(cx, 1e-9);
  return o;
}

}  // namespace gmeopt
