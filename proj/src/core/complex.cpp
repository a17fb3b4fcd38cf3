#include "hdx/complex.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <string>

#include "hdx/error.hpp"

namespace hdx {

Face make_face(std::vector<VertexId> vertices) {
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end()) {
    fail(ErrorCode::kInvalidArgument, "face has a repeated vertex");
  }
  return vertices;
}

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  unsigned __int128 value = 1;
  for (int j = 1; j <= k; ++j) {
    value = value * static_cast<unsigned>(n - k + j) / static_cast<unsigned>(j);
  }
  return static_cast<double>(value);
}

namespace {

bool lex_less(FaceView a, FaceView b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

ComplexPtr SimplicialComplex::build(std::vector<WeightedFace> top_faces, int dimension,
                                    const BuildOptions& options) {
  if (top_faces.empty()) fail(ErrorCode::kInvalidArgument, "no top faces given");
  if (dimension < 0) fail(ErrorCode::kInvalidArgument, "negative dimension");

  for (auto& tf : top_faces) {
    tf.face = make_face(std::move(tf.face));
    if (static_cast<int>(tf.face.size()) != dimension) {
      fail(ErrorCode::kInvalidArgument,
           "top face of level " + std::to_string(tf.face.size()) + " in a complex of dimension " +
               std::to_string(dimension));
    }
    if (!(tf.weight > 0.0) || !std::isfinite(tf.weight)) {
      fail(ErrorCode::kInvalidArgument, "top face weights must be positive and finite");
    }
  }

  std::sort(top_faces.begin(), top_faces.end(),
            [](const WeightedFace& a, const WeightedFace& b) { return lex_less(a.face, b.face); });
  std::vector<WeightedFace> merged;
  merged.reserve(top_faces.size());
  for (auto& tf : top_faces) {
    if (!merged.empty() && merged.back().face == tf.face) {
      merged.back().weight += tf.weight;
    } else {
      merged.push_back(std::move(tf));
    }
  }

  std::shared_ptr<SimplicialComplex> cx(new SimplicialComplex());
  cx->dimension_ = dimension;
  cx->levels_.resize(static_cast<std::size_t>(dimension) + 1);
  cx->up_cache_.resize(static_cast<std::size_t>(dimension) + 1);
  cx->down_cache_.resize(static_cast<std::size_t>(dimension) + 1);

  // Faces per level, top down.
  std::vector<std::vector<Face>> faces(static_cast<std::size_t>(dimension) + 1);
  faces[dimension].reserve(merged.size());
  for (const auto& tf : merged) {
    faces[dimension].push_back(tf.face);
    cx->raw_weights_.push_back(tf.weight);
  }
  std::size_t total = merged.size();
  for (int level = dimension - 1; level >= 0; --level) {
    auto& out = faces[level];
    for (const auto& f : faces[level + 1]) {
      for (std::size_t p = 0; p < f.size(); ++p) {
        Face sub;
        sub.reserve(f.size() - 1);
        for (std::size_t q = 0; q < f.size(); ++q) {
          if (q != p) sub.push_back(f[q]);
        }
        out.push_back(std::move(sub));
      }
    }
    std::sort(out.begin(), out.end(), [](const Face& a, const Face& b) { return lex_less(a, b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    total += out.size();
    if (total > options.max_faces) {
      fail(ErrorCode::kInfeasible, "complex exceeds the face cap of " +
                                       std::to_string(options.max_faces) + " faces");
    }
  }
  if (dimension == 0) faces[0].assign(1, Face{});

  VertexId bound = 0;
  for (const auto& f : faces[dimension]) {
    if (!f.empty()) bound = std::max(bound, f.back() + 1);
  }
  cx->vertex_bound_ = bound;

  for (int level = 0; level <= dimension; ++level) {
    auto& lv = cx->levels_[level];
    lv.count = faces[level].size();
    lv.vertices.reserve(lv.count * static_cast<std::size_t>(level));
    for (const auto& f : faces[level]) lv.vertices.insert(lv.vertices.end(), f.begin(), f.end());
  }

  // Subface and coface indices.
  for (int level = 1; level <= dimension; ++level) {
    auto& lv = cx->levels_[level];
    lv.subfaces.resize(lv.count * static_cast<std::size_t>(level));
    std::vector<VertexId> sub(static_cast<std::size_t>(level) - 1);
    for (std::size_t j = 0; j < lv.count; ++j) {
      FaceView f = cx->face(level, j);
      for (int p = 0; p < level; ++p) {
        std::size_t w = 0;
        for (int q = 0; q < level; ++q) {
          if (q != p) sub[w++] = f[q];
        }
        lv.subfaces[j * level + p] = static_cast<std::uint32_t>(cx->index_of(sub));
      }
    }
    auto& below = cx->levels_[level - 1];
    below.coface_offsets.assign(below.count + 1, 0);
    for (std::uint32_t s : lv.subfaces) ++below.coface_offsets[s + 1];
    std::partial_sum(below.coface_offsets.begin(), below.coface_offsets.end(),
                     below.coface_offsets.begin());
    below.cofaces.resize(lv.subfaces.size());
    std::vector<std::uint32_t> fill(below.coface_offsets.begin(), below.coface_offsets.end() - 1);
    for (std::size_t j = 0; j < lv.count; ++j) {
      for (int p = 0; p < level; ++p) {
        below.cofaces[fill[lv.subfaces[j * level + p]]++] = static_cast<std::uint32_t>(j);
      }
    }
  }
  cx->levels_[dimension].coface_offsets.assign(cx->levels_[dimension].count + 1, 0);

  // pi_d is the normalized weight; pi_i(x) = (1/(i+1)) sum_{y > x} pi_{i+1}(y).
  const double weight_sum = std::accumulate(cx->raw_weights_.begin(), cx->raw_weights_.end(), 0.0);
  auto& top = cx->levels_[dimension];
  top.pi.resize(static_cast<Eigen::Index>(top.count));
  for (std::size_t j = 0; j < top.count; ++j) top.pi[j] = cx->raw_weights_[j] / weight_sum;
  for (int level = dimension - 1; level >= 0; --level) {
    auto& lv = cx->levels_[level];
    const auto& up = cx->levels_[level + 1];
    lv.pi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lv.count));
    for (std::size_t j = 0; j < lv.count; ++j) {
      double s = 0.0;
      for (std::uint32_t c : cx->cofaces(level, j)) s += up.pi[c];
      lv.pi[j] = s / (level + 1);
    }
  }
  return cx;
}

void SimplicialComplex::check_level(int level) const {
  if (level < 0 || level > dimension_) {
    fail(ErrorCode::kInvalidArgument, "level " + std::to_string(level) +
                                          " out of range for dimension " +
                                          std::to_string(dimension_));
  }
}

std::size_t SimplicialComplex::level_size(int level) const {
  check_level(level);
  return levels_[level].count;
}

std::size_t SimplicialComplex::total_faces() const {
  std::size_t total = 0;
  for (const auto& lv : levels_) total += lv.count;
  return total;
}

FaceView SimplicialComplex::face(int level, std::size_t index) const {
  check_level(level);
  const auto& lv = levels_[level];
  if (index >= lv.count) fail(ErrorCode::kInvalidArgument, "face index out of range");
  return FaceView(lv.vertices.data() + index * static_cast<std::size_t>(level),
                  static_cast<std::size_t>(level));
}

Face SimplicialComplex::face_copy(int level, std::size_t index) const {
  FaceView f = face(level, index);
  return Face(f.begin(), f.end());
}

std::optional<std::size_t> SimplicialComplex::find(FaceView f) const {
  const int level = static_cast<int>(f.size());
  if (level > dimension_) return std::nullopt;
  const auto& lv = levels_[level];
  if (level == 0) return 0;
  std::size_t lo = 0;
  std::size_t hi = lv.count;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    FaceView m(lv.vertices.data() + mid * static_cast<std::size_t>(level),
               static_cast<std::size_t>(level));
    if (lex_less(m, f)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < lv.count) {
    FaceView m(lv.vertices.data() + lo * static_cast<std::size_t>(level),
               static_cast<std::size_t>(level));
    if (std::equal(m.begin(), m.end(), f.begin(), f.end())) return lo;
  }
  return std::nullopt;
}

std::size_t SimplicialComplex::index_of(FaceView f) const {
  auto idx = find(f);
  if (!idx) {
    std::string s = "{";
    for (std::size_t p = 0; p < f.size(); ++p) s += (p ? " " : "") + std::to_string(f[p]);
    fail(ErrorCode::kInvalidArgument, "face " + s + "} is not in the complex");
  }
  return *idx;
}

const Eigen::VectorXd& SimplicialComplex::pi(int level) const {
  check_level(level);
  return levels_[level].pi;
}

std::span<const std::uint32_t> SimplicialComplex::subfaces(int level, std::size_t index) const {
  check_level(level);
  const auto& lv = levels_[level];
  if (index >= lv.count) fail(ErrorCode::kInvalidArgument, "face index out of range");
  return {lv.subfaces.data() + index * static_cast<std::size_t>(level),
          static_cast<std::size_t>(level)};
}

std::span<const std::uint32_t> SimplicialComplex::cofaces(int level, std::size_t index) const {
  check_level(level);
  const auto& lv = levels_[level];
  if (index >= lv.count) fail(ErrorCode::kInvalidArgument, "face index out of range");
  if (level == dimension_) return {};
  return {lv.cofaces.data() + lv.coface_offsets[index],
          lv.coface_offsets[index + 1] - lv.coface_offsets[index]};
}

std::shared_ptr<const SparseMatrix> SimplicialComplex::up_matrix(int k) const {
  if (k < 0 || k >= dimension_) fail(ErrorCode::kInvalidArgument, "no up operator from level " + std::to_string(k));
  {
    std::shared_lock lock(cache_mutex_);
    if (up_cache_[k]) return up_cache_[k];
  }
  const auto& hi = levels_[k + 1];
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(hi.count * static_cast<std::size_t>(k + 1));
  const double w = 1.0 / (k + 1);
  for (std::size_t j = 0; j < hi.count; ++j) {
    for (std::uint32_t s : subfaces(k + 1, j)) entries.emplace_back(static_cast<int>(j), static_cast<int>(s), w);
  }
  auto m = std::make_shared<SparseMatrix>(static_cast<Eigen::Index>(hi.count),
                                          static_cast<Eigen::Index>(levels_[k].count));
  m->setFromTriplets(entries.begin(), entries.end());
  std::unique_lock lock(cache_mutex_);
  if (!up_cache_[k]) up_cache_[k] = std::move(m);
  return up_cache_[k];
}

std::shared_ptr<const SparseMatrix> SimplicialComplex::down_matrix(int k) const {
  if (k <= 0 || k > dimension_) fail(ErrorCode::kInvalidArgument, "no down operator from level " + std::to_string(k));
  {
    std::shared_lock lock(cache_mutex_);
    if (down_cache_[k]) return down_cache_[k];
  }
  const auto& lo = levels_[k - 1];
  const auto& hi = levels_[k];
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(hi.count * static_cast<std::size_t>(k));
  for (std::size_t j = 0; j < lo.count; ++j) {
    auto cf = cofaces(k - 1, j);
    double mass = 0.0;
    for (std::uint32_t c : cf) mass += hi.pi[c];
    for (std::uint32_t c : cf) entries.emplace_back(static_cast<int>(j), static_cast<int>(c), hi.pi[c] / mass);
  }
  auto m = std::make_shared<SparseMatrix>(static_cast<Eigen::Index>(lo.count),
                                          static_cast<Eigen::Index>(hi.count));
  m->setFromTriplets(entries.begin(), entries.end());
  std::unique_lock lock(cache_mutex_);
  if (!down_cache_[k]) down_cache_[k] = std::move(m);
  return down_cache_[k];
}

}  // namespace hdx
