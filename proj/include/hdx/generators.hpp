#pragma once

#include <cstdint>
#include <vector>

#include "hdx/complex.hpp"
#include "hdx/face_function.hpp"

namespace hdx {

/// All d-subsets of {0, ..., n-1}, uniform weights.
ComplexPtr complete_complex(int n, int d, const BuildOptions& options = {});

/// The complete n-partite complex on [n] x {0,1}. Vertex (i, b) with 1-based
/// color i has id 2(i-1) + b, so top faces in lexicographic order enumerate
/// {0,1}^n in binary order with x_1 most significant.
ComplexPtr hypercube_complex(int n);
VertexId hypercube_vertex(int coordinate, int bit);
Face hypercube_face(const std::vector<int>& bits);
/// Inverse of hypercube_face on top faces.
std::vector<int> hypercube_bits(FaceView face);

/// `num_top` distinct random d-subsets of [n] with weights drawn from [0.1, 1].
ComplexPtr random_complex(int n, int d, int num_top, std::uint64_t seed);

/// 1 on k-faces containing tau.
FaceFunction link_indicator(const ComplexPtr& complex, int level, FaceView tau);
/// 1 on faces containing the hypercube vertex (bit, 1); on the hypercube
/// complex at level n this is x -> x_bit.
FaceFunction dictator(const ComplexPtr& complex, int level, int bit);
/// Independent Bernoulli(alpha) values.
FaceFunction random_sparse(const ComplexPtr& complex, int level, double alpha, std::uint64_t seed);
/// Independent uniform values in [-1, 1].
FaceFunction random_real(const ComplexPtr& complex, int level, std::uint64_t seed);

struct AntiTribesParams {
  int n = 0;
  int k = 0;
  double K = 1.0;
  double c = 1.0;
  double c1 = 1.0;
};

/// m = 2cK disjoint consecutive blocks of ceil(c1 n / k) vertices.
std::vector<Face> anti_tribes_tribes(const AntiTribesParams& params);
/// 1 on k-faces meeting every tribe.
FaceFunction anti_tribes_function(const ComplexPtr& complex, int level, const std::vector<Face>& tribes);

struct AntiTribes {
  ComplexPtr complex;
  FaceFunction function;
  std::vector<Face> tribes;
};

/// The k-dimensional complete complex on n vertices with the anti-tribes function on X(k).
AntiTribes generate_anti_tribes(const AntiTribesParams& params, const BuildOptions& options = {});

}  // namespace hdx
