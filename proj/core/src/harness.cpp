#include "gmeopt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "gmeopt/csv.hpp"
#include "gmeopt/errors.hpp"
#include "gmeopt/rng.hpp"

namespace gmeopt {

Vec gen_piecewise_constant(Eigen::Index n, std::uint64_t seed) {
  if (n < 12) throw InputError("gen_piecewise_constant: need n >= 12");
  const double fractions[] = {0.15, 0.3, 0.5, 0.7, 0.85};
  std::vector<Eigen::Index> cuts;
  for (double f : fractions)
    cuts.push_back(static_cast<Eigen::Index>(std::llround(f * static_cast<double>(n))));
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (cuts[i] <= 0 || cuts[i] >= n || (i > 0 && cuts[i] <= cuts[i - 1]))
      throw InputError("gen_piecewise_constant: n too small for distinct jump positions");
  }

  Rng rng(seed);
  std::vector<double> levels(6);
  for (std::size_t k = 0; k < levels.size(); ++k) {
    double v = std::clamp(rng.uniform(8.0, 38.0), 8.0, 38.0);
    // Jumps must be unambiguous for the support metric.
    while (k > 0 && std::abs(v - levels[k - 1]) < 1.0)
      v = std::clamp(rng.uniform(8.0, 38.0), 8.0, 38.0);
    levels[k] = v;
  }

  Vec x(n);
  Eigen::Index start = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const Eigen::Index stop = k < cuts.size() ? cuts[k] : n;
    for (Eigen::Index i = start; i < stop; ++i) x[i] = levels[k];
    start = stop;
  }
  return x;
}

Vec sample_poisson(const Vec& x, std::uint64_t seed) {
  Rng rng(seed);
  Vec y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0)) throw InputError("sample_poisson: means must be positive");
    y[i] = static_cast<double>(rng.poisson(x[i]));
  }
  return y;
}

Vec gen_dct_sparse(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  if (k < 1 || k > n) throw InputError("gen_dct_sparse: need 1 <= k <= n");
  Rng rng(seed);
  for (;;) {
    // Partial Fisher-Yates for k distinct coefficient positions.
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto j = i + static_cast<Eigen::Index>(rng.next_u64() %
                                                   static_cast<std::uint64_t>(n - i));
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    Vec coeffs = Vec::Zero(n);
    for (Eigen::Index i = 0; i < k; ++i) coeffs[idx[static_cast<std::size_t>(i)]] = rng.normal();
    const LinearMap dct = LinearMap::dct(n);
    Vec x = dct.apply_adjoint(coeffs);  // inverse of the orthonormal transform
    const double mx = x.cwiseAbs().maxCoeff();
    if (mx > 0) return x * (0.8 / mx);
  }
}

Vec clip_observe(const Vec& x, double clip_level, double sigma, std::uint64_t seed) {
  if (clip_level <= 0) throw ParameterError("clip_observe: clip level must be positive");
  if (sigma < 0) throw ParameterError("clip_observe: sigma must be nonnegative");
  Rng rng(seed);
  Vec y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double u = x[i] + (sigma > 0 ? sigma * rng.normal() : 0.0);
    y[i] = std::abs(u) >= clip_level ? clip_level * (u >= 0 ? 1.0 : -1.0) : u;
  }
  return y;
}

double snr_to_sigma(const Vec& x, double snr_db) {
  const double m = static_cast<double>(x.size());
  const double chi_mean = std::sqrt(2.0) * std::exp(std::lgamma((m + 1.0) / 2.0) -
                                                    std::lgamma(m / 2.0));
  return x.norm() * std::pow(10.0, -snr_db / 20.0) / chi_mean;
}

namespace {

PoissonInstance make_poisson_instance_cached(const Vec& y, double mu, double theta,
                                             double delta_lo, double delta_hi,
                                             const Vec& lambda, double c_star) {
  const Eigen::Index n = y.size();
  const SimpleSet pi = SimpleSet::box(n, delta_lo, delta_hi);
  const SmoothLoss base = poisson_loss(y);
  SmoothLoss f = build_extrapolated(base, pi, ExtrapolationTail::zero());
  LinearMap d = LinearMap::first_difference(n);
  LinearMap b = (theta > 0 && c_star > 0)
                    ? LinearMap::scaled(std::sqrt(theta * c_star / mu),
                                        LinearMap::identity(n - 1))
                    : LinearMap::zero(n - 1, n - 1);
  DeclaredLossProperties declared{base.coercive(), base.bounded_below()};
  ProxFriendly psi = ProxFriendly::l1(n - 1);
  GmeProblem p = make_problem(std::move(f), LinearMap::identity(n), mu, std::move(psi),
                              std::move(d), std::move(b), LinearMap::identity(n),
                              SimpleSet::box(n, delta_lo, delta_hi), lambda);
  p.convexity = check_overall_convexity(p);
  p.existence = check_existence(p, declared);
  return {std::move(p), declared};
}

}  // namespace

PoissonInstance make_poisson_instance(const Vec& y, double mu, double theta,
                                      double delta_lo, double delta_hi) {
  const Eigen::Index n = y.size();
  const SimpleSet pi = SimpleSet::box(n, delta_lo, delta_hi);
  const SmoothLoss base = poisson_loss(y);
  const Vec lambda = relative_strong_convexity_weights(base, pi).lambda;
  double c_star = 0.0;
  if (theta > 0) {
    c_star = design_B_scalar(theta, mu, lambda, LinearMap::identity(n),
                             LinearMap::first_difference(n))
                 .c_star;
  }
  return make_poisson_instance_cached(y, mu, theta, delta_lo, delta_hi, lambda, c_star);
}

DeclipInstance make_declip_instance(const Vec& y, double clip_level, double sigma,
                                    double varpi, double mu, double theta) {
  const Eigen::Index n = y.size();
  const double inf = std::numeric_limits<double>::infinity();
  const SmoothLoss base = clipped_loss(y, clip_level, sigma);

  Vec pi_lo(n), pi_hi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    switch (base.clip_class(i)) {
      case SmoothLoss::ClipClass::unclipped:
        pi_lo[i] = -inf;
        pi_hi[i] = inf;
        break;
      case SmoothLoss::ClipClass::clipped_above:
        pi_lo[i] = clip_level - varpi;
        pi_hi[i] = inf;
        break;
      case SmoothLoss::ClipClass::clipped_below:
        pi_lo[i] = -inf;
        pi_hi[i] = -clip_level + varpi;
        break;
    }
  }
  SimpleSet pi(pi_lo, pi_hi);
  const Vec lambda = relative_strong_convexity_weights(base, pi).lambda;
  SmoothLoss f = build_extrapolated(base, pi, ExtrapolationTail::zero());

  LinearMap dct = LinearMap::dct(n);
  LinearMap b = theta > 0 ? design_B_inverse(theta, mu, lambda, dct)
                          : LinearMap::zero(n, n);
  DeclaredLossProperties declared{base.coercive(), base.bounded_below()};
  ProxFriendly psi = ProxFriendly::l1(n);
  GmeProblem p = make_problem(std::move(f), LinearMap::identity(n), mu, std::move(psi),
                              std::move(dct), std::move(b), LinearMap::identity(n),
                              SimpleSet(pi_lo, pi_hi), lambda);
  p.convexity = check_overall_convexity(p);
  p.existence = check_existence(p, declared);
  return {std::move(p), declared};
}

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

template <typename Fn>
void parallel_trials(int trials, int threads, Fn&& per_trial) {
  const int nt = std::min(resolve_threads(threads), std::max(trials, 1));
  if (nt <= 1) {
    for (int t = 0; t < trials; ++t) per_trial(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nt));
  for (int w = 0; w < nt; ++w) {
    pool.emplace_back([&, w] {
      for (int t = w; t < trials; t += nt) per_trial(t);
    });
  }
  for (auto& th : pool) th.join();
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::vector<PoissonRow> run_poisson_experiment(const PoissonConfig& cfg) {
  if (cfg.mu_grid.empty()) throw InputError("poisson experiment: empty mu grid");
  if (cfg.trials < 1) throw InputError("poisson experiment: trials must be >= 1");
  const Vec xstar = gen_piecewise_constant(cfg.n, cfg.seed);
  const LinearMap d = LinearMap::first_difference(cfg.n);
  const SimpleSet pi = SimpleSet::box(cfg.n, cfg.delta_lo, cfg.delta_hi);

  std::vector<std::vector<PoissonRow>> per_trial_rows(static_cast<std::size_t>(cfg.trials));

  parallel_trials(cfg.trials, cfg.threads, [&](int t) {
    const int trial = t + 1;
    const Vec y = sample_poisson(xstar, cfg.seed + static_cast<std::uint64_t>(trial));
    const SmoothLoss base = poisson_loss(y);
    const Vec lambda = relative_strong_convexity_weights(base, pi).lambda;
    // c* does not depend on mu; design once per trial.
    double c_star = 0.0;
    if (cfg.theta > 0) {
      c_star = design_B_scalar(cfg.theta, 1.0, lambda, LinearMap::identity(cfg.n), d).c_star;
    }

    auto& rows = per_trial_rows[static_cast<std::size_t>(t)];
    for (double mu : cfg.mu_grid) {
      PoissonRow row;
      row.mu = mu;
      row.trial = trial;
      PoissonInstance inst = make_poisson_instance_cached(y, mu, cfg.theta, cfg.delta_lo,
                                                          cfg.delta_hi, lambda, c_star);
      if (!inst.problem.convexity.holds || !inst.problem.existence.certified()) {
        row.cert_ok = false;
        row.ae = row.se = row.objective = kNan;
        rows.push_back(row);
        continue;
      }
      const SolverParams prm = default_params(inst.problem, cfg.tol, cfg.max_iter);
      SolveResult sol = solve(inst.problem, prm, initial_state(inst.problem));
      row.converged = sol.converged;
      row.iterations = sol.iterations;
      row.ae = (sol.x - xstar).lpNorm<1>();
      row.se = (sol.x - xstar).squaredNorm();
      const Vec dx = d.apply(sol.x);
      row.tv_nonzero = (dx.array() > 1e-4).count();
      row.objective = evaluate_objective(inst.problem, sol.x).total;
      rows.push_back(row);
    }
  });

  std::vector<PoissonRow> rows;
  rows.reserve(static_cast<std::size_t>(cfg.trials) * cfg.mu_grid.size());
  for (std::size_t m = 0; m < cfg.mu_grid.size(); ++m)
    for (int t = 0; t < cfg.trials; ++t)
      rows.push_back(per_trial_rows[static_cast<std::size_t>(t)][m]);
  return rows;
}

std::vector<DeclipRow> run_declip_experiment(const DeclipConfig& cfg) {
  if (cfg.mu_grid.empty()) throw InputError("declip experiment: empty mu grid");
  if (cfg.trials < 1) throw InputError("declip experiment: trials must be >= 1");
  const Vec xstar = gen_dct_sparse(cfg.n, cfg.sparsity, cfg.seed);
  const double sigma = snr_to_sigma(xstar, cfg.snr_db);
  const double varpi = cfg.varpi_factor * sigma;

  std::vector<std::vector<DeclipRow>> per_trial_rows(static_cast<std::size_t>(cfg.trials));

  parallel_trials(cfg.trials, cfg.threads, [&](int t) {
    const int trial = t + 1;
    const Vec y =
        clip_observe(xstar, cfg.clip_level, sigma, cfg.seed + static_cast<std::uint64_t>(trial));

    auto& rows = per_trial_rows[static_cast<std::size_t>(t)];
    for (double mu : cfg.mu_grid) {
      DeclipRow row;
      row.mu = mu;
      row.trial = trial;
      DeclipInstance inst =
          make_declip_instance(y, cfg.clip_level, sigma, varpi, mu, cfg.theta);
      if (!inst.problem.convexity.holds || !inst.problem.existence.certified()) {
        row.cert_ok = false;
        row.mse = row.objective = kNan;
        rows.push_back(row);
        continue;
      }
      const SolverParams prm = default_params(inst.problem, cfg.tol, cfg.max_iter);
      SolveResult sol = solve(inst.problem, prm, initial_state(inst.problem));
      row.converged = sol.converged;
      row.iterations = sol.iterations;
      row.mse = (sol.x - xstar).squaredNorm();
      row.objective = evaluate_objective(inst.problem, sol.x).total;
      rows.push_back(row);
    }
  });

  std::vector<DeclipRow> rows;
  rows.reserve(static_cast<std::size_t>(cfg.trials) * cfg.mu_grid.size());
  for (std::size_t m = 0; m < cfg.mu_grid.size(); ++m)
    for (int t = 0; t < cfg.trials; ++t)
      rows.push_back(per_trial_rows[static_cast<std::size_t>(t)][m]);
  return rows;
}

void write_poisson_csv(std::ostream& os, const std::vector<PoissonRow>& rows) {
  os << "mu,trial,status,converged,iterations,ae,se,tv_nonzero,objective\n";
  for (const auto& r : rows) {
    os << format_double(r.mu) << ',' << r.trial << ','
       << (r.cert_ok ? "ok" : "cert_failed") << ',' << (r.converged ? 1 : 0) << ','
       << r.iterations << ',' << format_double(r.ae) << ',' << format_double(r.se) << ','
       << r.tv_nonzero << ',' << format_double(r.objective) << '\n';
  }
}

void write_declip_csv(std::ostream& os, const std::vector<DeclipRow>& rows) {
  os << "mu,trial,status,converged,iterations,mse,objective\n";
  for (const auto& r : rows) {
    os << format_double(r.mu) << ',' << r.trial << ','
       << (r.cert_ok ? "ok" : "cert_failed") << ',' << (r.converged ? 1 : 0) << ','
       << r.iterations << ',' << format_double(r.mse) << ',' << format_double(r.objective)
       << '\n';
  }
}

namespace {

std::map<std::string, std::string> parse_kv(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("malformed config line: '" + line + "'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    if (kv.count(key)) throw InputError("duplicate config key: " + key);
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::vector<double> parse_mu_list(const std::string& text) {
  const Vec v = parse_vector(text);
  std::vector<double> mus(v.data(), v.data() + v.size());
  for (double m : mus)
    if (!(m > 0)) throw InputError("mu values must be positive");
  return mus;
}

template <typename T>
void take_into(std::map<std::string, std::string>& kv, const std::string& key, T& out) {
  auto it = kv.find(key);
  if (it == kv.end()) return;
  if constexpr (std::is_same_v<T, double>) {
    out = parse_double(it->second);
  } else if constexpr (std::is_same_v<T, std::vector<double>>) {
    out = parse_mu_list(it->second);
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    out = static_cast<std::uint64_t>(std::stoull(it->second));
  } else {
    out = static_cast<T>(std::stoll(it->second));
  }
  kv.erase(it);
}

void reject_unknown(const std::map<std::string, std::string>& kv) {
  if (!kv.empty()) throw InputError("unknown config key: " + kv.begin()->first);
}

}  // namespace

PoissonConfig parse_poisson_config(std::istream& is) {
  auto kv = parse_kv(is);
  PoissonConfig cfg;
  take_into(kv, "n", cfg.n);
  take_into(kv, "mu", cfg.mu_grid);
  take_into(kv, "theta", cfg.theta);
  take_into(kv, "trials", cfg.trials);
  take_into(kv, "seed", cfg.seed);
  take_into(kv, "delta_lo", cfg.delta_lo);
  take_into(kv, "delta_hi", cfg.delta_hi);
  take_into(kv, "tol", cfg.tol);
  take_into(kv, "max_iter", cfg.max_iter);
  take_into(kv, "threads", cfg.threads);
  reject_unknown(kv);
  return cfg;
}

DeclipConfig parse_declip_config(std::istream& is) {
  auto kv = parse_kv(is);
  DeclipConfig cfg;
  take_into(kv, "n", cfg.n);
  take_into(kv, "mu", cfg.mu_grid);
  take_into(kv, "theta", cfg.theta);
  take_into(kv, "trials", cfg.trials);
  take_into(kv, "seed", cfg.seed);
  take_into(kv, "clip_level", cfg.clip_level);
  take_into(kv, "snr_db", cfg.snr_db);
  take_into(kv, "varpi_factor", cfg.varpi_factor);
  take_into(kv, "sparsity", cfg.sparsity);
  take_into(kv, "tol", cfg.tol);
  take_into(kv, "max_iter", cfg.max_iter);
  take_into(kv, "threads", cfg.threads);
  reject_unknown(kv);
  return cfg;
}

}  // namespace gmeopt
