#include "hdx/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "hdx/error.hpp"

namespace hdx {

void write_complex(std::ostream& out, const SimplicialComplex& complex) {
  const int d = complex.dimension();
  out << d << ' ' << complex.vertex_bound() << '\n';
  out << std::setprecision(17);
  const auto& weights = complex.raw_top_weights();
  for (std::size_t t = 0; t < complex.level_size(d); ++t) {
    for (VertexId v : complex.face(d, t)) out << v << ' ';
    out << weights[t] << '\n';
  }
  if (!out) fail(ErrorCode::kIo, "failed writing complex");
}

ComplexPtr read_complex(std::istream& in, const BuildOptions& options) {
  std::string line;
  int d = -1;
  long n = -1;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream header(line);
    if (!(header >> d >> n) || d < 0 || n < 0) fail(ErrorCode::kIo, "complex file: malformed header `d n`");
    break;
  }
  if (d < 0) fail(ErrorCode::kIo, "complex file: missing header");
  std::vector<WeightedFace> top;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::vector<double> fields;
    double x = 0.0;
    while (row >> x) fields.push_back(x);
    if (!row.eof()) fail(ErrorCode::kIo, "complex file line " + std::to_string(line_no) + ": not numeric");
    if (static_cast<int>(fields.size()) != d + 1) {
      fail(ErrorCode::kIo, "complex file line " + std::to_string(line_no) + ": expected " + std::to_string(d) +
                               " vertex ids and a weight");
    }
    std::vector<VertexId> vs;
    for (int p = 0; p < d; ++p) {
      const double v = fields[p];
      if (v < 0 || v >= static_cast<double>(n) || v != static_cast<double>(static_cast<long>(v))) {
        fail(ErrorCode::kIo, "complex file line " + std::to_string(line_no) + ": bad vertex id");
      }
      vs.push_back(static_cast<VertexId>(v));
    }
    top.push_back({make_face(std::move(vs)), fields[d]});
  }
  return SimplicialComplex::build(std::move(top), d, options);
}

void save_complex(const std::filesystem::path& path, const SimplicialComplex& complex) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  write_complex(out, complex);
}

ComplexPtr load_complex(const std::filesystem::path& path, const BuildOptions& options) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  return read_complex(in, options);
}

}  // namespace hdx
