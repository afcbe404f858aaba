#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "scone/datasets.hpp"
#include "scone/error.hpp"

namespace scone {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "scone-dataset";
constexpr int kVersion = 1;

std::string number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename Range>
std::string int_array(const Range& r) {
  std::string s = "[";
  bool first = true;
  for (int v : r) {
    if (!first) s += ", ";
    s += std::to_string(v);
    first = false;
  }
  return s + "]";
}

void write_rows(std::ostringstream& out, const char* key, const std::vector<std::string>& rows, bool last,
                const char* indent = "  ") {
  out << indent << '"' << key << "\": [";
  if (rows.empty()) {
    out << "]" << (last ? "\n" : ",\n");
    return;
  }
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) out << indent << "  " << rows[i] << (i + 1 < rows.size() ? ",\n" : "\n");
  out << indent << "]" << (last ? "\n" : ",\n");
}

std::vector<std::string> walk_rows(const std::vector<Trajectory>& ts) {
  std::vector<std::string> rows;
  for (const auto& t : ts) {
    std::vector<int> walk = t.nodes;
    walk.push_back(t.target);
    rows.push_back(int_array(walk));
  }
  return rows;
}

std::vector<int> regions(const std::vector<Trajectory>& ts) {
  std::vector<int> r;
  for (const auto& t : ts) r.push_back(t.region);
  return r;
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw InvalidInput(path + "." + key + ": missing field");
  return obj.at(key);
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw InvalidInput(path + ": expected an integer");
  return j.get<int>();
}

std::vector<int> as_ints(const json& j, const std::string& path) {
  if (!j.is_array()) throw InvalidInput(path + ": expected an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<Trajectory> read_walks(const json& doc, const char* key) {
  const auto& arr = field(doc, key, "");
  if (!arr.is_array()) throw InvalidInput(std::string(".") + key + ": expected an array");
  std::vector<Trajectory> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = std::string(".") + key + "[" + std::to_string(i) + "]";
    auto walk = as_ints(arr[i], path);
    if (walk.size() < 3) throw InvalidInput(path + ": a walk needs at least three nodes");
    Trajectory t;
    t.target = walk.back();
    walk.pop_back();
    t.nodes = std::move(walk);
    out.push_back(std::move(t));
  }
  const std::string rkey = std::string(key) + "_regions";
  if (doc.contains(rkey)) {
    const auto r = as_ints(doc.at(rkey), "." + rkey);
    if (r.size() != out.size()) throw InvalidInput("." + rkey + ": length does not match ." + key);
    for (std::size_t i = 0; i < r.size(); ++i) out[i].region = r[i];
  }
  return out;
}

}  // namespace

std::string format_split(const DatasetSplit& split) {
  const auto& c = split.complex;
  std::ostringstream out;
  out << "{\n";
  out << "  \"format\": \"" << kFormat << "\",\n";
  out << "  \"version\": " << kVersion << ",\n";
  out << "  \"seed\": " << split.seed << ",\n";
  out << "  \"manipulation\": \"" << split.manipulation_tag() << "\",\n";
  out << "  \"complex\": {\n";
  out << "    \"kind\": \"" << to_string(c.kind()) << "\",\n";
  out << "    \"nodes\": " << c.node_count() << ",\n";
  std::vector<std::string> rows;
  for (const auto& e : c.edges()) rows.push_back(int_array(std::array<int, 2>{e.tail, e.head}));
  write_rows(out, "edges", rows, false, "    ");
  rows.clear();
  for (const auto& f : c.faces()) rows.push_back(int_array(f.vertices()));
  write_rows(out, "faces", rows, !c.has_coords(), "    ");
  if (c.has_coords()) {
    rows.clear();
    for (const auto& p : c.coords()) rows.push_back("[" + number(p.x) + ", " + number(p.y) + "]");
    write_rows(out, "coords", rows, true, "    ");
  }
  out << "  },\n";
  write_rows(out, "train", walk_rows(split.train), false);
  out << "  \"train_regions\": " << int_array(regions(split.train)) << ",\n";
  write_rows(out, "test", walk_rows(split.test), false);
  out << "  \"test_regions\": " << int_array(regions(split.test)) << "\n";
  out << "}\n";
  return out.str();
}

DatasetSplit parse_split(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ParseError(line, "malformed dataset JSON");
  }
  if (!doc.is_object()) throw ParseError(1, "dataset file must hold a JSON object");
  const auto& format = field(doc, "format", "");
  if (format != kFormat) throw InvalidInput(".format: expected \"" + std::string(kFormat) + "\"");
  if (as_int(field(doc, "version", ""), ".version") != kVersion) throw InvalidInput(".version: unsupported version");

  DatasetSplit split;
  const auto& seed = field(doc, "seed", "");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) throw InvalidInput(".seed: expected an integer");
  split.seed = seed.get<std::uint64_t>();
  const auto& tag = field(doc, "manipulation", "");
  if (!tag.is_string()) throw InvalidInput(".manipulation: expected a string");
  {
    const auto s = tag.get<std::string>();
    std::size_t pos = 0;
    while (pos <= s.size()) {
      const auto next = s.find('+', pos);
      const auto part = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      try {
        const auto m = manipulation_from_string(part);
        if (m != Manipulation::standard) split.manipulations.push_back(m);
      } catch (const InvalidInput& e) {
        throw InvalidInput(std::string(".manipulation: ") + e.what());
      }
      if (next == std::string::npos) break;
      pos = next + 1;
    }
  }

  const auto& cj = field(doc, "complex", "");
  const auto& kind = field(cj, "kind", ".complex");
  if (!kind.is_string()) throw InvalidInput(".complex.kind: expected a string");
  const int n = as_int(field(cj, "nodes", ".complex"), ".complex.nodes");
  std::vector<Edge> edges;
  const auto& ej = field(cj, "edges", ".complex");
  if (!ej.is_array()) throw InvalidInput(".complex.edges: expected an array");
  for (std::size_t i = 0; i < ej.size(); ++i) {
    const auto path = ".complex.edges[" + std::to_string(i) + "]";
    const auto e = as_ints(ej[i], path);
    if (e.size() != 2) throw InvalidInput(path + ": an edge has two nodes");
    edges.push_back({e[0], e[1]});
  }
  std::vector<Face> faces;
  const auto& fj = field(cj, "faces", ".complex");
  if (!fj.is_array()) throw InvalidInput(".complex.faces: expected an array");
  for (std::size_t i = 0; i < fj.size(); ++i) {
    const auto path = ".complex.faces[" + std::to_string(i) + "]";
    const auto f = as_ints(fj[i], path);
    if (f.size() == 3)
      faces.push_back(Face::triangle(f[0], f[1], f[2]));
    else if (f.size() == 4)
      faces.push_back(Face::square(f[0], f[1], f[2], f[3]));
    else
      throw InvalidInput(path + ": a 2-cell has three or four nodes");
  }
  std::vector<Point2> coords;
  if (cj.contains("coords")) {
    const auto& pj = cj.at("coords");
    if (!pj.is_array()) throw InvalidInput(".complex.coords: expected an array");
    for (std::size_t i = 0; i < pj.size(); ++i) {
      const auto& p = pj[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw InvalidInput(".complex.coords[" + std::to_string(i) + "]: expected [x, y]");
      coords.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  }
  try {
    split.complex = OrientedComplex2::from_cells(complex_kind_from_string(kind.get<std::string>()), n, std::move(edges),
                                                 std::move(faces), std::move(coords));
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string(".complex: ") + e.what());
  }
  split.train = read_walks(doc, "train");
  split.test = read_walks(doc, "test");
  validate_split(split);
  return split;
}

void save_split(const DatasetSplit& split, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  out << format_split(split);
  if (!out) throw InvalidInput("failed writing " + path.string());
}

DatasetSplit load_split(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_split(buf.str());
}

}  // namespace scone
