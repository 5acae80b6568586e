#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

namespace gmeopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Immutable linear operator with forward and adjoint application. Handles are
// cheap to copy and safe to share across threads; composites evaluate lazily,
// nothing is materialized unless materialize() is called.
//
// The DCT kind is the orthonormal type-II transform, so its adjoint is its
// inverse and its operator norm is exactly 1.
class LinearMap {
 public:
  enum class Kind {
    dense,
    identity,
    zero,
    diagonal,
    first_difference,
    dct,
    scaled,
    composed,
    sum,
  };

  LinearMap();  // 0x0 zero map

  static LinearMap identity(Eigen::Index n);
  static LinearMap zero(Eigen::Index out_dim, Eigen::Index in_dim);
  static LinearMap diagonal(Vec d);
  static LinearMap dense(Mat m);
  // (n-1) x n forward difference: (Du)_i = u_{i+1} - u_i.
  static LinearMap first_difference(Eigen::Index n);
  static LinearMap dct(Eigen::Index n);
  static LinearMap scaled(double alpha, const LinearMap& inner);
  // outer ∘ inner; outer.in_dim() must equal inner.out_dim().
  static LinearMap compose(const LinearMap& outer, const LinearMap& inner);
  static LinearMap sum(const LinearMap& lhs, const LinearMap& rhs);

  Vec apply(const Vec& u) const;
  Vec apply_adjoint(const Vec& u) const;
  LinearMap adjoint() const;

  Eigen::Index out_dim() const;
  Eigen::Index in_dim() const;
  Kind kind() const;

  // True when the map is structurally zero (zero kind, zero scale factor, or
  // a composite thereof).
  bool is_zero() const;

  // Closed-form operator norm for kinds that admit one.
  std::optional<double> exact_operator_norm() const;

  struct Node;  // opaque; defined in linops.cpp

 private:
  LinearMap(std::shared_ptr<const Node> node, bool adj);
  std::shared_ptr<const Node> node_;
  bool adjoint_ = false;
};

// Operator norm estimate: closed form when available, otherwise power
// iteration on L*L from a fixed seed-0 start vector, stopping once the
// Rayleigh quotient settles to relative tol. Throws ConvergenceError
// (carrying the last Rayleigh-quotient estimate) on non-convergence.
double operator_norm(const LinearMap& L, double tol = 1e-10, int max_iter = 50000);

// Smallest eigenvalue of a dense symmetric matrix (symmetrized internally;
// rejects asymmetry beyond 1e-10 relative). Intended for desk scale
// (n up to a few thousand).
double min_eigenvalue_symmetric(const Mat& M);

// Dense matrix of L, built by applying L to the standard basis. Refuses to
// allocate more than max_entries.
Mat materialize(const LinearMap& L, std::size_t max_entries = std::size_t{64} << 20);

}  // namespace gmeopt
