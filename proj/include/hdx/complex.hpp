#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace hdx {

using VertexId = std::uint32_t;

/// A face is a strictly increasing vertex sequence; its level is its length.
using Face = std::vector<VertexId>;
using FaceView = std::span<const VertexId>;

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Sorts `vertices` and rejects duplicates.
Face make_face(std::vector<VertexId> vertices);

struct WeightedFace {
  Face face;
  double weight = 1.0;
};

struct BuildOptions {
  /// Construction fails when the total number of faces over all levels exceeds this.
  std::size_t max_faces = 2'000'000;
};

class SimplicialComplex;
using ComplexPtr = std::shared_ptr<const SimplicialComplex>;

/// A weighted pure simplicial complex (X, Pi) stored level by level.
///
/// Level i holds the faces with i vertices in lexicographic order, so a face's
/// index within its level is its lexicographic rank. X(0) is the empty face.
/// The level measures pi_i are computed once at construction by downward
/// closure from the normalized top-face weights. Instances are immutable; the
/// only mutable state is a lazily filled cache of single-step up/down matrices,
/// guarded for concurrent readers.
class SimplicialComplex {
 public:
  /// Downward closure of the given top faces (all of level d). Duplicate top
  /// faces are merged by summing their weights. Weights are normalized; the raw
  /// (merged) weights are retained.
  static ComplexPtr build(std::vector<WeightedFace> top_faces, int dimension,
                          const BuildOptions& options = {});

  SimplicialComplex(const SimplicialComplex&) = delete;
  SimplicialComplex& operator=(const SimplicialComplex&) = delete;

  int dimension() const { return dimension_; }
  std::size_t level_size(int level) const;
  std::size_t total_faces() const;

  FaceView face(int level, std::size_t index) const;
  Face face_copy(int level, std::size_t index) const;

  /// Lexicographic rank of `face` within level face.size(), if present.
  std::optional<std::size_t> find(FaceView face) const;
  /// As find(), throwing kInvalidArgument when absent.
  std::size_t index_of(FaceView face) const;
  bool contains(FaceView face) const { return find(face).has_value(); }

  const Eigen::VectorXd& pi(int level) const;

  /// Indices (at level - 1) of the faces obtained by deleting the p-th vertex,
  /// in order of p.
  std::span<const std::uint32_t> subfaces(int level, std::size_t index) const;
  /// Indices (at level + 1) of the faces containing this one, ascending.
  std::span<const std::uint32_t> cofaces(int level, std::size_t index) const;

  /// Raw top-face weights in level-d order, as supplied (after merging).
  const std::vector<double>& raw_top_weights() const { return raw_weights_; }

  /// One more than the largest vertex id.
  VertexId vertex_bound() const { return vertex_bound_; }

  /// U_k : C_k -> C_{k+1}, a |X(k+1)| x |X(k)| matrix.
  std::shared_ptr<const SparseMatrix> up_matrix(int k) const;
  /// D_k : C_k -> C_{k-1}, a |X(k-1)| x |X(k)| matrix.
  std::shared_ptr<const SparseMatrix> down_matrix(int k) const;

 private:
  struct Level {
    std::size_t count = 0;
    std::vector<VertexId> vertices;  // count * level entries
    Eigen::VectorXd pi;
    std::vector<std::uint32_t> subfaces;       // count * level entries
    std::vector<std::uint32_t> coface_offsets;  // count + 1 entries
    std::vector<std::uint32_t> cofaces;
  };

  SimplicialComplex() = default;
  void check_level(int level) const;

  int dimension_ = 0;
  VertexId vertex_bound_ = 0;
  std::vector<Level> levels_;
  std::vector<double> raw_weights_;

  mutable std::shared_mutex cache_mutex_;
  mutable std::vector<std::shared_ptr<const SparseMatrix>> up_cache_;
  mutable std::vector<std::shared_ptr<const SparseMatrix>> down_cache_;
};

/// Exact binomial coefficient, converted to double once.
double binomial(int n, int k);

}  // namespace hdx
