#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <istream>
#include <string>

#include "scone/complex.hpp"

namespace scone {

/// Text complex format:
///
///   <kind> <n>          kind is "simplicial" or "cubical"
///   edges
///   <tail> <head>       one oriented edge per line, in basis order
///   faces
///   <v0> <v1> <v2> [v3] one oriented 2-cell per line
///   coords              optional
///   <x> <y>             one line per node
///
/// Blank lines and lines starting with '#' are ignored.
OrientedComplex2 parse_complex(std::istream& in);
OrientedComplex2 load_complex(const std::filesystem::path& path);
std::string format_complex(const OrientedComplex2& c);
void save_complex(const OrientedComplex2& c, const std::filesystem::path& path);

/// Chain file: one "<cell index> <value>" pair per line; unlisted cells are 0.
Eigen::VectorXd parse_chain(std::istream& in, int cell_count);
Eigen::VectorXd load_chain(const std::filesystem::path& path, int cell_count);
std::string format_chain(const Eigen::VectorXd& x);
void save_chain(const Eigen::VectorXd& x, const std::filesystem::path& path);

}  // namespace scone
