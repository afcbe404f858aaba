#include "scone/complex_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "scone/error.hpp"

namespace scone {

namespace {

struct LineReader {
  std::istream& in;
  std::size_t lineno = 0;

  // Next non-blank, non-comment line; false at EOF.
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      line = line.substr(first);
      return true;
    }
    return false;
  }
};

template <typename T>
std::vector<T> parse_numbers(const std::string& line, std::size_t lineno) {
  std::istringstream ss(line);
  std::vector<T> out;
  std::string tok;
  while (ss >> tok) {
    T v{};
    const auto* end = tok.data() + tok.size();
    const auto res = std::from_chars(tok.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) throw ParseError(lineno, "cannot parse number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  return out;
}

}  // namespace

OrientedComplex2 parse_complex(std::istream& in) {
  LineReader reader{in};
  std::string line;
  if (!reader.next(line)) throw ParseError(reader.lineno + 1, "missing header '<kind> <node count>'");

  std::istringstream header(line);
  std::string kind_name;
  int n = -1;
  if (!(header >> kind_name >> n) || n < 0) throw ParseError(reader.lineno, "expected header '<kind> <node count>'");
  ComplexKind kind{};
  try {
    kind = complex_kind_from_string(kind_name);
  } catch (const InvalidInput& e) {
    throw ParseError(reader.lineno, e.what());
  }

  if (!reader.next(line) || line != "edges") throw ParseError(reader.lineno, "expected 'edges' section");

  std::vector<Edge> edges;
  std::vector<Face> faces;
  std::vector<Point2> coords;
  enum class Section { edges, faces, coords } section = Section::edges;
  bool saw_faces = false;
  while (reader.next(line)) {
    if (line == "faces") {
      if (section != Section::edges) throw ParseError(reader.lineno, "'faces' section out of order");
      section = Section::faces;
      saw_faces = true;
      continue;
    }
    if (line == "coords") {
      if (section != Section::faces) throw ParseError(reader.lineno, "'coords' must follow 'faces'");
      section = Section::coords;
      continue;
    }
    switch (section) {
      case Section::edges: {
        const auto v = parse_numbers<int>(line, reader.lineno);
        if (v.size() != 2) throw ParseError(reader.lineno, "an edge needs exactly 2 node ids");
        edges.push_back({v[0], v[1]});
        break;
      }
      case Section::faces: {
        const auto v = parse_numbers<int>(line, reader.lineno);
        if (v.size() == 3)
          faces.push_back(Face::triangle(v[0], v[1], v[2]));
        else if (v.size() == 4)
          faces.push_back(Face::square(v[0], v[1], v[2], v[3]));
        else
          throw ParseError(reader.lineno, "a 2-cell needs 3 or 4 node ids");
        break;
      }
      case Section::coords: {
        const auto v = parse_numbers<double>(line, reader.lineno);
        if (v.size() != 2) throw ParseError(reader.lineno, "a coordinate line needs 2 values");
        coords.push_back({v[0], v[1]});
        break;
      }
    }
  }
  if (!saw_faces) throw ParseError(reader.lineno + 1, "missing 'faces' section");
  try {
    return OrientedComplex2::from_cells(kind, n, std::move(edges), std::move(faces), std::move(coords));
  } catch (const InvalidInput& e) {
    throw ParseError(reader.lineno, e.what());
  }
}

OrientedComplex2 load_complex(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open complex file " + path.string());
  return parse_complex(in);
}

std::string format_complex(const OrientedComplex2& c) {
  std::ostringstream out;
  out << to_string(c.kind()) << ' ' << c.node_count() << "\nedges\n";
  for (const auto& e : c.edges()) out << e.tail << ' ' << e.head << '\n';
  out << "faces\n";
  for (const auto& f : c.faces()) {
    for (int k = 0; k < f.size; ++k) out << (k ? " " : "") << f.v[static_cast<std::size_t>(k)];
    out << '\n';
  }
  if (c.has_coords()) {
    out << "coords\n" << std::setprecision(17);
    for (const auto& p : c.coords()) out << p.x << ' ' << p.y << '\n';
  }
  return out.str();
}

void save_complex(const OrientedComplex2& c, const std::filesystem::path& path) {
  open_out(path) << format_complex(c);
}

Eigen::VectorXd parse_chain(std::istream& in, int cell_count) {
  LineReader reader{in};
  Eigen::VectorXd x = Eigen::VectorXd::Zero(cell_count);
  std::string line;
  while (reader.next(line)) {
    std::istringstream ss(line);
    std::string idx_tok, val_tok, extra;
    if (!(ss >> idx_tok >> val_tok) || (ss >> extra))
      throw ParseError(reader.lineno, "expected '<cell index> <value>'");
    const auto idx = parse_numbers<int>(idx_tok, reader.lineno);
    const auto val = parse_numbers<double>(val_tok, reader.lineno);
    if (idx[0] < 0 || idx[0] >= cell_count)
      throw ParseError(reader.lineno, "cell index " + idx_tok + " out of range");
    x[idx[0]] = val[0];
  }
  return x;
}

Eigen::VectorXd load_chain(const std::filesystem::path& path, int cell_count) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open chain file " + path.string());
  return parse_chain(in, cell_count);
}

std::string format_chain(const Eigen::VectorXd& x) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < x.size(); ++i) out << i << ' ' << x[i] << '\n';
  return out.str();
}

void save_chain(const Eigen::VectorXd& x, const std::filesystem::path& path) { open_out(path) << format_chain(x); }

}  // namespace scone
