#pragma once

#include <filesystem>
#include <iosfwd>

#include "hdx/complex.hpp"

namespace hdx {

/// Text format: a `d n` header, then one line per top face with its vertex
/// ids followed by its raw weight. n is one more than the largest vertex id.
void write_complex(std::ostream& out, const SimplicialComplex& complex);
ComplexPtr read_complex(std::istream& in, const BuildOptions& options = {});

void save_complex(const std::filesystem::path& path, const SimplicialComplex& complex);
ComplexPtr load_complex(const std::filesystem::path& path, const BuildOptions& options = {});

}  // namespace hdx
