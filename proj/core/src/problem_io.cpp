#include "gmeopt/problem_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "gmeopt/csv.hpp"
#include "gmeopt/errors.hpp"

namespace gmeopt {

OperatorSpec OperatorSpec::identity(Eigen::Index n) { return {"identity", n, n, {}}; }
OperatorSpec OperatorSpec::first_difference(Eigen::Index n) {
  return {"first_difference", n - 1, n, {}};
}
OperatorSpec OperatorSpec::dct(Eigen::Index n) { return {"dct", n, n, {}}; }
OperatorSpec OperatorSpec::dense(const Mat& m) {
  OperatorSpec s{"dense", m.rows(), m.cols(), Vec(m.size())};
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) s.payload[i * m.cols() + j] = m(i, j);
  return s;
}

LinearMap OperatorSpec::build() const {
  if (kind == "identity") return LinearMap::identity(rows);
  if (kind == "zero") return LinearMap::zero(rows, cols);
  if (kind == "diagonal") return LinearMap::diagonal(payload);
  if (kind == "first_difference") return LinearMap::first_difference(cols);
  if (kind == "dct") return LinearMap::dct(rows);
  if (kind == "dense") {
    if (payload.size() != rows * cols) throw InputError("dense operator: payload size mismatch");
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = payload[i * cols + j];
    return LinearMap::dense(std::move(m));
  }
  throw InputError("unknown operator kind: " + kind);
}

namespace {

std::string format_operator(const OperatorSpec& s) {
  std::ostringstream os;
  os << s.kind << ' ' << s.rows << ' ' << s.cols;
  if (s.payload.size() > 0) os << ' ' << format_vector(s.payload);
  return os.str();
}

OperatorSpec parse_operator(const std::string& text) {
  std::istringstream is(text);
  OperatorSpec s;
  is >> s.kind >> s.rows >> s.cols;
  if (is.fail()) throw InputError("malformed operator: '" + text + "'");
  std::string rest;
  if (is >> rest) s.payload = parse_vector(rest);
  return s;
}

std::string format_b(const BSpec& b) {
  if (b.mode == "zero") return "zero";
  if (b.mode == "design_scalar" || b.mode == "design_inverse")
    return b.mode + " " + format_double(b.theta);
  if (b.mode == "explicit") return "explicit " + format_operator(b.op);
  throw InputError("unknown B mode: " + b.mode);
}

BSpec parse_b(const std::string& text) {
  std::istringstream is(text);
  BSpec b;
  is >> b.mode;
  if (b.mode == "zero") return b;
  if (b.mode == "design_scalar" || b.mode == "design_inverse") {
    std::string t;
    is >> t;
    b.theta = parse_double(t);
    return b;
  }
  if (b.mode == "explicit") {
    std::string rest;
    std::getline(is, rest);
    b.op = parse_operator(rest);
    return b;
  }
  throw InputError("unknown B mode: " + b.mode);
}

}  // namespace

void write_problem(std::ostream& os, const ProblemSpec& spec) {
  os << "format = gmeopt-problem-1\n";
  os << "loss = " << spec.loss << '\n';
  os << "y = " << format_vector(spec.y) << '\n';
  if (spec.loss == "clipped") {
    os << "clip_level = " << format_double(spec.clip_level) << '\n';
    os << "noise_sigma = " << format_double(spec.noise_sigma) << '\n';
  }
  if (spec.pi_lo.size() > 0) {
    os << "pi_lo = " << format_vector(spec.pi_lo) << '\n';
    os << "pi_hi = " << format_vector(spec.pi_hi) << '\n';
    os << "tail = " << spec.tail << '\n';
  }
  os << "mu = " << format_double(spec.mu) << '\n';
  os << "A = " << format_operator(spec.a) << '\n';
  os << "L = " << format_operator(spec.l) << '\n';
  os << "C = " << format_operator(spec.c) << '\n';
  os << "B = " << format_b(spec.b) << '\n';
  os << "delta_lo = " << format_vector(spec.delta_lo) << '\n';
  os << "delta_hi = " << format_vector(spec.delta_hi) << '\n';
}

void write_problem_file(const std::string& path, const ProblemSpec& spec) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot open for writing: " + path);
  write_problem(f, spec);
}

ProblemSpec read_problem(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw InputError("malformed problem line: '" + line + "'");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (kv.count(key)) throw InputError("duplicate key: " + key);
    kv[key] = val;
  }

  auto take = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw InputError("missing key: " + key);
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_opt = [&](const std::string& key, const std::string& dflt) {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  const std::string fmt = take("format");
  if (fmt != "gmeopt-problem-1") throw InputError("unsupported problem format: " + fmt);

  ProblemSpec spec;
  spec.loss = take("loss");
  spec.y = parse_vector(take("y"));
  if (spec.loss == "clipped") {
    spec.clip_level = parse_double(take("clip_level"));
    spec.noise_sigma = parse_double(take("noise_sigma"));
  }
  if (kv.count("pi_lo")) {
    spec.pi_lo = parse_vector(take("pi_lo"));
    spec.pi_hi = parse_vector(take("pi_hi"));
    spec.tail = take_opt("tail", "zero");
  }
  spec.mu = parse_double(take("mu"));
  spec.a = parse_operator(take("A"));
  spec.l = parse_operator(take("L"));
  spec.c = parse_operator(take("C"));
  spec.b = parse_b(take("B"));
  spec.delta_lo = parse_vector(take("delta_lo"));
  spec.delta_hi = parse_vector(take("delta_hi"));

  if (!kv.empty()) throw InputError("unknown key: " + kv.begin()->first);
  return spec;
}

ProblemSpec read_problem_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open for reading: " + path);
  return read_problem(f);
}

AssembledProblem assemble(const ProblemSpec& spec) {
  SmoothLoss base = [&] {
    if (spec.loss == "quadratic") return quadratic_loss(spec.y);
    if (spec.loss == "poisson") return poisson_loss(spec.y);
    if (spec.loss == "clipped")
      return clipped_loss(spec.y, spec.clip_level, spec.noise_sigma);
    throw InputError("unknown loss kind: " + spec.loss);
  }();

  DeclaredLossProperties declared{base.coercive(), base.bounded_below()};

  LinearMap a = spec.a.build();
  LinearMap l = spec.l.build();
  LinearMap c = spec.c.build();
  SimpleSet delta(spec.delta_lo, spec.delta_hi);

  SmoothLoss f = base;
  Vec lambda;
  if (spec.pi_lo.size() > 0) {
    SimpleSet pi(spec.pi_lo, spec.pi_hi);
    const ExtrapolationTail tail = spec.tail == "cubic_quadratic"
                                       ? ExtrapolationTail::cubic_quadratic()
                                       : ExtrapolationTail::zero();
    f = build_extrapolated(base, pi, tail);
    lambda = relative_strong_convexity_weights(base, pi).lambda;
  } else {
    if (spec.loss != "quadratic")
      throw InputError("assemble: pi_lo/pi_hi required for non-quadratic losses");
    lambda = Vec::Ones(base.dim());
  }

  bool degenerate = false;
  LinearMap b = LinearMap::zero(l.out_dim(), l.out_dim());
  if (spec.b.mode == "zero") {
    b = LinearMap::zero(lambda.size(), l.out_dim());
  } else if (spec.b.mode == "design_inverse") {
    b = design_B_inverse(spec.b.theta, spec.mu, lambda, l);
  } else if (spec.b.mode == "design_scalar") {
    ScalarBDesign d = design_B_scalar(spec.b.theta, spec.mu, lambda, a, l);
    b = d.B;
    degenerate = d.degenerate;
  } else if (spec.b.mode == "explicit") {
    b = spec.b.op.build();
  } else {
    throw InputError("unknown B mode: " + spec.b.mode);
  }

  ProxFriendly psi = ProxFriendly::l1(l.out_dim());
  GmeProblem p = make_problem(std::move(f), std::move(a), spec.mu, std::move(psi),
                              std::move(l), std::move(b), std::move(c), std::move(delta),
                              std::move(lambda));
  p.convexity = check_overall_convexity(p);
  if (!p.convexity.holds)
    throw InputError("assemble: overall-convexity certificate failed (min_eig = " +
                     format_double(p.convexity.min_eig) + ")");
  p.existence = check_existence(p, declared);
  return {std::move(p), declared, degenerate};
}

}  // namespace gmeopt
