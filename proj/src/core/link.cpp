#include "hdx/link.hpp"

#include <algorithm>
#include <iterator>

#include "hdx/error.hpp"

namespace hdx {

Face face_union(FaceView a, FaceView b) {
  Face out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Face face_difference(FaceView a, FaceView b) {
  Face out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool faces_disjoint(FaceView a, FaceView b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return true;
}

bool is_subface(FaceView small, FaceView big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<std::uint32_t> top_faces_containing(const SimplicialComplex& complex, FaceView face) {
  const int d = complex.dimension();
  std::vector<std::uint32_t> frontier{static_cast<std::uint32_t>(complex.index_of(face))};
  for (int level = static_cast<int>(face.size()); level < d; ++level) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t j : frontier) {
      auto cf = complex.cofaces(level, j);
      next.insert(next.end(), cf.begin(), cf.end());
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    frontier = std::move(next);
  }
  return frontier;
}

std::size_t LinkView::parent_union_index(int level, std::size_t index) const {
  return base_->index_of(face_union(link_->face(level, index), anchor_));
}

LinkView link(const ComplexPtr& complex, FaceView tau) {
  require(complex != nullptr, "link of a null complex");
  const int d = complex->dimension();
  if (static_cast<int>(tau.size()) > d || !complex->contains(tau)) {
    fail(ErrorCode::kInvalidArgument, "link anchor is not a face of the complex");
  }
  const auto& top_pi = complex->pi(d);
  std::vector<WeightedFace> top;
  for (std::uint32_t t : top_faces_containing(*complex, tau)) {
    top.push_back({face_difference(complex->face(d, t), tau), top_pi[t]});
  }
  auto sub = SimplicialComplex::build(std::move(top), d - static_cast<int>(tau.size()));
  return LinkView(complex, Face(tau.begin(), tau.end()), std::move(sub));
}

FaceFunction restrict_to(const FaceFunction& f, const LinkView& lk) {
  require(f.complex() == lk.base(), "function and link live on different complexes");
  const int j = static_cast<int>(lk.anchor().size());
  if (j > f.level()) {
    fail(ErrorCode::kInvalidArgument, "cannot restrict a level-" + std::to_string(f.level()) +
                                          " function to a level-" + std::to_string(j) + " face");
  }
  const int out_level = f.level() - j;
  const auto& sub = lk.complex();
  Eigen::VectorXd values(static_cast<Eigen::Index>(sub->level_size(out_level)));
  for (std::size_t s = 0; s < sub->level_size(out_level); ++s) {
    values[static_cast<Eigen::Index>(s)] = f[lk.parent_union_index(out_level, s)];
  }
  return FaceFunction(sub, out_level, std::move(values));
}

FaceFunction restrict_to(const FaceFunction& f, FaceView tau) {
  if (static_cast<int>(tau.size()) > f.level()) {
    fail(ErrorCode::kInvalidArgument, "restriction face is above the function level");
  }
  return restrict_to(f, link(f.complex(), tau));
}

FaceFunction localize(const FaceFunction& f, const LinkView& lk) {
  require(f.complex() == lk.base(), "function and link live on different complexes");
  const int k = f.level();
  const auto& sub = lk.complex();
  if (k > sub->dimension()) {
    fail(ErrorCode::kInvalidArgument, "localization needs k + |tau| <= d (k = " + std::to_string(k) +
                                          ", |tau| = " + std::to_string(lk.anchor().size()) + ")");
  }
  Eigen::VectorXd values(static_cast<Eigen::Index>(sub->level_size(k)));
  for (std::size_t s = 0; s < sub->level_size(k); ++s) {
    values[static_cast<Eigen::Index>(s)] = f.at(sub->face(k, s));
  }
  return FaceFunction(sub, k, std::move(values));
}

FaceFunction localize(const FaceFunction& f, FaceView tau) {
  if (f.level() + static_cast<int>(tau.size()) > f.complex()->dimension()) {
    fail(ErrorCode::kInvalidArgument, "localization needs k + |tau| <= d");
  }
  return localize(f, link(f.complex(), tau));
}

}  // namespace hdx
