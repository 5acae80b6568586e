// Independent reference computations for the test suites. Everything here
// deliberately avoids the code paths it is used to check.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracles {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Characteristic polynomial coefficients by Faddeev-LeVerrier:
// p(x) = x^n + c[1] x^{n-1} + ... + c[n].
inline std::vector<double> char_poly(const Mat& a) {
  const Eigen::Index n = a.rows();
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[0] = 1.0;
  Mat mk = Mat::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = a * mk + c[static_cast<std::size_t>(k - 1)] * Mat::Identity(n, n);
    c[static_cast<std::size_t>(k)] = -(a * mk).trace() / static_cast<double>(k);
  }
  return c;
}

// Smallest real root of the characteristic polynomial via companion-matrix
// eigenvalues (general, non-symmetric solver).
inline double min_eig_via_char_poly(const Mat& a) {
  const auto c = char_poly(a);
  const Eigen::Index n = a.rows();
  Mat companion = Mat::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i)
    companion(i, n - 1) = -c[static_cast<std::size_t>(n - i)];
  Eigen::EigenSolver<Mat> es(companion);
  double mn = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) mn = std::min(mn, es.eigenvalues()[i].real());
  return mn;
}

// Composite Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / (2.0 * panels);
  double s = f(a) + f(b);
  for (int i = 1; i < 2 * panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// N(0, s^2) CDF by quadrature of the density from s * (-40).
inline double normal_cdf_quadrature(double t, double s) {
  const double pi = std::acos(-1.0);
  auto dens = [&](double u) {
    return std::exp(-u * u / (2 * s * s)) / (s * std::sqrt(2 * pi));
  };
  const double lo = -40.0 * s;
  if (t <= lo) return 0.0;
  return simpson(dens, lo, t, 4000);
}

// Minimize a univariate function over [lo, hi] on a uniform grid.
inline double grid_min(const std::function<double(double)>& f, double lo, double hi,
                       double step) {
  double best = std::numeric_limits<double>::infinity();
  for (double t = lo; t <= hi + step / 2; t += step) best = std::min(best, f(t));
  return best;
}

inline double grid_argmin(const std::function<double(double)>& f, double lo, double hi,
                          double step) {
  double best = std::numeric_limits<double>::infinity();
  double arg = lo;
  for (double t = lo; t <= hi + step / 2; t += step) {
    const double v = f(t);
    if (v < best) best = v, arg = t;
  }
  return arg;
}

// Central finite difference with the step rule used throughout the tests.
inline double central_diff(const std::function<double(double)>& f, double t) {
  const double h = 1e-6 * std::max(1.0, std::abs(t));
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

inline Vec random_vec(std::mt19937_64& gen, Eigen::Index n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(gen);
  return v;
}

inline Mat random_mat(std::mt19937_64& gen, Eigen::Index r, Eigen::Index c) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Mat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = d(gen);
  return m;
}

}  // namespace oracles
