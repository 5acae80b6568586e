#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gmeopt/gme_model.hpp"
#include "gmeopt/solver.hpp"

namespace gmeopt {

// ---- seeded data generation ----

// Deterministic 6-segment piecewise-constant signal on [5, 40] with exactly
// five jumps, at fractions (0.15, 0.3, 0.5, 0.7, 0.85) of n. Segment levels
// are drawn from the seeded generator and kept in [8, 38], adjacent levels
// at least 1 apart so every jump is unambiguous.
Vec gen_piecewise_constant(Eigen::Index n, std::uint64_t seed);

// Independent Poisson draws with means x_i (all positive).
Vec sample_poisson(const Vec& x, std::uint64_t seed);

// Inverse DCT of a k-sparse standard-normal coefficient vector, rescaled to
// max |x_i| = 0.8.
Vec gen_dct_sparse(Eigen::Index n, Eigen::Index k, std::uint64_t seed);

// y = clip(x + noise) entrywise at +-clip_level, noise ~ N(0, sigma^2).
Vec clip_observe(const Vec& x, double clip_level, double sigma, std::uint64_t seed);

// Noise scale achieving the target SNR in dB for signal x of length m,
// using the exact chi-distribution mean E||eps|| = sigma sqrt(2)
// Gamma((m+1)/2) / Gamma(m/2).
double snr_to_sigma(const Vec& x, double snr_db);

// ---- scenario runners ----

struct PoissonConfig {
  Eigen::Index n = 150;
  std::vector<double> mu_grid = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4};
  double theta = 0.99;  // GME strength; 0 reproduces the convex model
  int trials = 100;
  std::uint64_t seed = 0;
  double delta_lo = 5.0, delta_hi = 40.0;
  double tol = 1e-6;
  long max_iter = 1000000;
  int threads = 0;  // 0: hardware concurrency
};

struct DeclipConfig {
  Eigen::Index n = 256;
  std::vector<double> mu_grid = {1, 2, 4, 7, 12, 20, 35, 60, 100};
  double theta = 0.99;
  int trials = 100;
  std::uint64_t seed = 0;
  double clip_level = 0.4;   // clipping threshold
  double snr_db = 10.0;
  double varpi_factor = 10.0;  // saturation margin = factor * sigma
  Eigen::Index sparsity = 16;  // nonzero DCT coefficients of the target
  double tol = 1e-4;
  long max_iter = 1000000;
  int threads = 0;
};

struct PoissonRow {
  double mu = 0;
  int trial = 0;  // 1-based
  bool cert_ok = true;
  bool converged = false;
  long iterations = 0;
  double ae = 0, se = 0;  // absolute / squared error against the target
  long tv_nonzero = 0;    // #{ i : (D xbar)_i > 1e-4 }
  double objective = 0;
};

struct DeclipRow {
  double mu = 0;
  int trial = 0;
  bool cert_ok = true;
  bool converged = false;
  long iterations = 0;
  double mse = 0;
  double objective = 0;
};

// Runs trials (noise seed = base seed + trial index) against a shared target
// signal (seed = base seed); rows come back sorted by (mu, trial). Trials
// run in parallel; output is independent of thread count.
std::vector<PoissonRow> run_poisson_experiment(const PoissonConfig& cfg);
std::vector<DeclipRow> run_declip_experiment(const DeclipConfig& cfg);

void write_poisson_csv(std::ostream& os, const std::vector<PoissonRow>& rows);
void write_declip_csv(std::ostream& os, const std::vector<DeclipRow>& rows);

// Per-trial problem assembly, shared by the runners and tests.
// Poisson: Pi = delta = [lo, hi]^n, L = first difference, zero-tail
// extrapolation, scalar-designed B (zero when theta = 0).
struct PoissonInstance {
  GmeProblem problem;
  DeclaredLossProperties declared;
};
PoissonInstance make_poisson_instance(const Vec& y, double mu, double theta,
                                      double delta_lo, double delta_hi);

// Declip: L = DCT, C = identity, delta = Pi from the saturation-consistency
// intervals with margin varpi, inverse-designed B.
struct DeclipInstance {
  GmeProblem problem;
  DeclaredLossProperties declared;
};
DeclipInstance make_declip_instance(const Vec& y, double clip_level, double sigma,
                                    double varpi, double mu, double theta);

// Line-oriented `key = value` scenario config; unknown keys are rejected.
PoissonConfig parse_poisson_config(std::istream& is);
DeclipConfig parse_declip_config(std::istream& is);

}  // namespace gmeopt
