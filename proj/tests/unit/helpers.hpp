#pragma once

#include <doctest.h>

#include "hdx/complex.hpp"
#include "hdx/face_function.hpp"
#include "hdx/generators.hpp"

namespace testing {

// Named vertices for the small hand-checked complexes.
inline constexpr hdx::VertexId a = 0;
inline constexpr hdx::VertexId b = 1;
inline constexpr hdx::VertexId c = 2;
inline constexpr hdx::VertexId d = 3;

inline hdx::ComplexPtr k3() { return hdx::complete_complex(3, 2); }

inline hdx::FaceFunction point_mass(const hdx::ComplexPtr& cx, hdx::Face face) {
  return hdx::FaceFunction::indicator(cx, static_cast<int>(face.size()),
                                      [&](hdx::FaceView f) { return std::equal(f.begin(), f.end(), face.begin(), face.end()); });
}

inline double value(const hdx::FaceFunction& f, hdx::Face face) { return f.at(face); }

}  // namespace testing
