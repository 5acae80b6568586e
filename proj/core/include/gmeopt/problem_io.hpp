#pragma once

#include <iosfwd>
#include <string>

#include "gmeopt/gme_model.hpp"

namespace gmeopt {

// Flat description of a linear operator for problem files. Dense payloads
// are row-major CSV.
struct OperatorSpec {
  std::string kind;  // identity | zero | diagonal | first_difference | dct | dense
  Eigen::Index rows = 0, cols = 0;
  Vec payload;  // diagonal entries or dense entries

  static OperatorSpec identity(Eigen::Index n);
  static OperatorSpec first_difference(Eigen::Index n);
  static OperatorSpec dct(Eigen::Index n);
  static OperatorSpec dense(const Mat& m);
  LinearMap build() const;
};

// How the GME matrix is obtained.
struct BSpec {
  std::string mode = "zero";  // zero | design_scalar | design_inverse | explicit
  double theta = 0.0;         // designer modes
  OperatorSpec op;            // explicit mode
};

// Text description of a model instance. Round-trips through a line-oriented
// `key = value` file; vectors and dense blocks are decimal CSV.
struct ProblemSpec {
  std::string loss = "quadratic";  // quadratic | poisson | clipped
  Vec y;
  double clip_level = 0.0;   // clipped
  double noise_sigma = 0.0;  // clipped
  Vec pi_lo, pi_hi;          // empty: no extrapolation
  std::string tail = "zero"; // zero | cubic_quadratic
  double mu = 1.0;
  OperatorSpec a, l, c;
  BSpec b;
  Vec delta_lo, delta_hi;
};

ProblemSpec read_problem(std::istream& is);
ProblemSpec read_problem_file(const std::string& path);
void write_problem(std::ostream& os, const ProblemSpec& spec);
void write_problem_file(const std::string& path, const ProblemSpec& spec);

struct AssembledProblem {
  GmeProblem problem;
  DeclaredLossProperties declared;  // of the original loss
  bool design_degenerate = false;   // scalar designer returned the zero map
};

// Builds, extrapolates, designs B, and certifies (convexity + existence).
// Throws if the overall-convexity certificate fails.
AssembledProblem assemble(const ProblemSpec& spec);

}  // namespace gmeopt
