#include "gmeopt/linops.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>

#include "gmeopt/errors.hpp"

namespace gmeopt {

struct LinearMap::Node {
  Kind kind;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Mat mat;     // dense, dct (cosine table)
  Vec diag;    // diagonal
  double alpha = 1.0;
  std::vector<LinearMap> children;  // scaled: {inner}; composed: {outer, inner}; sum: {lhs, rhs}
};

LinearMap::LinearMap() : LinearMap(zero(0, 0)) {}

LinearMap::LinearMap(std::shared_ptr<const Node> node, bool adj)
    : node_(std::move(node)), adjoint_(adj) {}

namespace {

std::shared_ptr<const LinearMap::Node> make_node(LinearMap::Node n) {
  return std::make_shared<const LinearMap::Node>(std::move(n));
}

}  // namespace

LinearMap LinearMap::identity(Eigen::Index n) {
  if (n < 0) throw InputError("identity: negative dimension");
  Node nd;
  nd.kind = Kind::identity;
  nd.rows = nd.cols = n;
  return LinearMap(make_node(std::move(nd)), false);
}

LinearMap LinearMap::zero(Eigen::Index out_dim, Eigen::Index in_dim) {
  if (out_dim < 0 || in_dim < 0) throw InputError("zero: negative dimension");
  Node nd;
  nd.kind = Kind::zero;
  nd.rows = out_dim;
  nd.cols = in_dim;
  return LinearMap(make_node(std::move(nd)), false);
}

LinearMap LinearMap::diagonal(Vec d) {
  if (!d.allFinite()) throw InputError("diagonal: non-finite entries");
  Node nd;
  nd.kind = Kind::diagonal;
  nd.rows = nd.cols = d.size();
  nd.diag = std::move(d);
  return LinearMap(make_node(std::move(nd)), false);
}

LinearMap LinearMap::dense(Mat m) {
  if (!m.allFinite()) throw InputError("dense: non-finite entries");
  Node nd;
  nd.kind = Kind::dense;
  nd.rows = m.rows();
  nd.cols = m.cols();
  nd.mat = std::move(m);
  return LinearMap(make_node(std::move(nd)), false);
}

LinearMap LinearMap::first_difference(Eigen::Index n) {
  if (n < 2) throw InputError("first_difference: need n >= 2");
  Node nd;
  nd.kind = Kind::first_difference;
  nd.rows = n - 1;
  nd.cols = n;
  return LinearMap(make_node(std::move(nd)), false);
}

LinearMap LinearMap::dct(Eigen::Index n) {
  if (n < 1) throw InputError("dct: need n >= 1");
  // Orthonormal type-II DCT: C(k,i) = a_k cos(pi (2i+1) k / (2n)).
  Mat c(n, n);
  const double pi = std::acos(-1.0);
  const double a0 = std::sqrt(1.0 / static_cast<double>(n));
  const double ak = std::sqrt(2.0 / static_cast<double>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const double scale = (k == 0) ? a0 : ak;
    for (Eigen::Index i = 0; i < n; ++i) {
      c(k, i) = scale * std::cos(pi * (2.0 * static_cast<double>(i) + 1.0) *
                                 static_cast<double>(k) / (2.0 * static_cast<double>(n)));
    }
  }
  Node nd;
  nd.kind = Kind::dct;
  nd.rows = nd.cols = n;
  nd.mat = std::move(c);
  return LinearMap(make_node(std::move(nd)), false);
}

LinearMap LinearMap::scaled(double alpha, const LinearMap& inner) {
  if (!std::isfinite(alpha)) throw InputError("scaled: non-finite factor");
  Node nd;
  nd.kind = Kind::scaled;
  nd.rows = inner.out_dim();
  nd.cols = inner.in_dim();
  nd.alpha = alpha;
  nd.children = {inner};
  return LinearMap(make_node(std::move(nd)), false);
}

LinearMap LinearMap::compose(const LinearMap& outer, const LinearMap& inner) {
  if (outer.in_dim() != inner.out_dim())
    throw InputError("compose: inner/outer dimension mismatch");
  Node nd;
  nd.kind = Kind::composed;
  nd.rows = outer.out_dim();
  nd.cols = inner.in_dim();
  nd.children = {outer, inner};
  return LinearMap(make_node(std::move(nd)), false);
}

LinearMap LinearMap::sum(const LinearMap& lhs, const LinearMap& rhs) {
  if (lhs.out_dim() != rhs.out_dim() || lhs.in_dim() != rhs.in_dim())
    throw InputError("sum: shape mismatch");
  Node nd;
  nd.kind = Kind::sum;
  nd.rows = lhs.out_dim();
  nd.cols = lhs.in_dim();
  nd.children = {lhs, rhs};
  return LinearMap(make_node(std::move(nd)), false);
}

LinearMap LinearMap::adjoint() const { return LinearMap(node_, !adjoint_); }

Eigen::Index LinearMap::out_dim() const { return adjoint_ ? node_->cols : node_->rows; }
Eigen::Index LinearMap::in_dim() const { return adjoint_ ? node_->rows : node_->cols; }
LinearMap::Kind LinearMap::kind() const { return node_->kind; }

namespace {

void check_len(const Vec& u, Eigen::Index expect, const char* who) {
  if (u.size() != expect) throw InputError(std::string(who) + ": vector length mismatch");
}

Vec forward_apply(const LinearMap::Node& n, const Vec& u);
Vec adjoint_apply(const LinearMap::Node& n, const Vec& u);

Vec forward_apply(const LinearMap::Node& n, const Vec& u) {
  using Kind = LinearMap::Kind;
  switch (n.kind) {
    case Kind::dense:
      return n.mat * u;
    case Kind::identity:
      return u;
    case Kind::zero:
      return Vec::Zero(n.rows);
    case Kind::diagonal:
      return n.diag.cwiseProduct(u);
    case Kind::first_difference:
      return u.tail(n.rows) - u.head(n.rows);
    case Kind::dct:
      return n.mat * u;
    case Kind::scaled:
      return n.alpha * n.children[0].apply(u);
    case Kind::composed:
      return n.children[0].apply(n.children[1].apply(u));
    case Kind::sum:
      return n.children[0].apply(u) + n.children[1].apply(u);
  }
  throw InputError("unreachable operator kind");
}

Vec adjoint_apply(const LinearMap::Node& n, const Vec& u) {
  using Kind = LinearMap::Kind;
  switch (n.kind) {
    case Kind::dense:
      return n.mat.transpose() * u;
    case Kind::identity:
      return u;
    case Kind::zero:
      return Vec::Zero(n.cols);
    case Kind::diagonal:
      return n.diag.cwiseProduct(u);
    case Kind::first_difference: {
      Vec v = Vec::Zero(n.cols);
      v.head(n.rows) -= u;
      v.tail(n.rows) += u;
      return v;
    }
    case Kind::dct:
      return n.mat.transpose() * u;
    case Kind::scaled:
      return n.alpha * n.children[0].apply_adjoint(u);
    case Kind::composed:
      return n.children[1].apply_adjoint(n.children[0].apply_adjoint(u));
    case Kind::sum:
      return n.children[0].apply_adjoint(u) + n.children[1].apply_adjoint(u);
  }
  throw InputError("unreachable operator kind");
}

}  // namespace

Vec LinearMap::apply(const Vec& u) const {
  check_len(u, in_dim(), "apply");
  return adjoint_ ? adjoint_apply(*node_, u) : forward_apply(*node_, u);
}

Vec LinearMap::apply_adjoint(const Vec& u) const {
  check_len(u, out_dim(), "apply_adjoint");
  return adjoint_ ? forward_apply(*node_, u) : adjoint_apply(*node_, u);
}

bool LinearMap::is_zero() const {
  switch (node_->kind) {
    case Kind::zero:
      return true;
    case Kind::scaled:
      return node_->alpha == 0.0 || node_->children[0].is_zero();
    case Kind::composed:
      return node_->children[0].is_zero() || node_->children[1].is_zero();
    case Kind::sum:
      return node_->children[0].is_zero() && node_->children[1].is_zero();
    case Kind::diagonal:
      return node_->diag.size() > 0 && node_->diag.cwiseAbs().maxCoeff() == 0.0;
    default:
      return false;
  }
}

std::optional<double> LinearMap::exact_operator_norm() const {
  // Norms are adjoint-invariant, so the flag is irrelevant here.
  switch (node_->kind) {
    case Kind::identity:
      return 1.0;
    case Kind::zero:
      return 0.0;
    case Kind::diagonal:
      return node_->diag.size() == 0 ? 0.0 : node_->diag.cwiseAbs().maxCoeff();
    case Kind::dct:
      return 1.0;
    case Kind::scaled:
      if (node_->alpha == 0.0) return 0.0;
      if (auto inner = node_->children[0].exact_operator_norm())
        return std::abs(node_->alpha) * *inner;
      return std::nullopt;
    default:
      if (is_zero()) return 0.0;
      return std::nullopt;
  }
}

double operator_norm(const LinearMap& L, double tol, int max_iter) {
  if (tol <= 0) throw ParameterError("operator_norm: tol must be positive");
  if (auto closed = L.exact_operator_norm()) return *closed;
  if (L.in_dim() == 0 || L.out_dim() == 0) return 0.0;

  std::mt19937_64 gen(0);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vec u(L.in_dim());
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = unif(gen);
  double nu = u.norm();
  if (nu == 0.0) u[0] = 1.0, nu = 1.0;
  u /= nu;

  double lambda = 0.0;
  double prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec w = L.apply_adjoint(L.apply(u));
    lambda = u.dot(w);  // Rayleigh quotient of L*L at unit u
    double wn = w.norm();
    if (wn <= std::numeric_limits<double>::min()) return 0.0;
    u = w / wn;
    if (it > 0 && std::abs(lambda - prev) <= tol * std::max(std::abs(lambda), 1e-300))
      return std::sqrt(std::max(lambda, 0.0));
    prev = lambda;
  }
  throw ConvergenceError("operator_norm: power iteration did not converge",
                         std::sqrt(std::max(lambda, 0.0)));
}

double min_eigenvalue_symmetric(const Mat& M) {
  if (M.rows() != M.cols()) throw InputError("min_eigenvalue_symmetric: matrix not square");
  if (M.size() == 0) throw InputError("min_eigenvalue_symmetric: empty matrix");
  if (!M.allFinite()) throw InputError("min_eigenvalue_symmetric: non-finite entries");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale)
    throw InputError("min_eigenvalue_symmetric: matrix is not symmetric");
  Mat s = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(s, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw InputError("min_eigenvalue_symmetric: eigensolver failed");
  return es.eigenvalues().minCoeff();
}

Mat materialize(const LinearMap& L, std::size_t max_entries) {
  const auto rows = static_cast<std::size_t>(L.out_dim());
  const auto cols = static_cast<std::size_t>(L.in_dim());
  if (cols != 0 && rows > max_entries / cols)
    throw ResourceError("materialize: entry budget exceeded");
  Mat m(L.out_dim(), L.in_dim());
  Vec e = Vec::Zero(L.in_dim());
  for (Eigen::Index j = 0; j < L.in_dim(); ++j) {
    e[j] = 1.0;
    m.col(j) = L.apply(e);
    e[j] = 0.0;
  }
  return m;
}

}  // namespace gmeopt
