#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>

namespace gmeopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Shortest round-trip decimal text for a double, locale independent.
// Infinities print as "inf"/"-inf", NaN as "nan".
std::string format_double(double v);
double parse_double(const std::string& token);

// Dense matrices as row-major CSV: one row per line, comma separated.
void write_matrix_csv(std::ostream& os, const Mat& m);
void write_matrix_csv(const std::string& path, const Mat& m);
Mat read_matrix_csv(std::istream& is);
Mat read_matrix_csv(const std::string& path);

// Comma-separated vectors ("1,2.5,-3"), used by config and problem files.
std::string format_vector(const Vec& v);
Vec parse_vector(const std::string& text);

}  // namespace gmeopt
