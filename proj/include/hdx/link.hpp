#pragma once

#include "hdx/complex.hpp"
#include "hdx/face_function.hpp"

namespace hdx {

/// The link (X_tau, Pi_tau) of a face tau.
///
/// Faces of the link keep their vertex ids from the parent, so a link face
/// sigma is disjoint from tau and sigma u tau is a face of the parent. Pi_tau
/// is Pi restricted to top faces containing tau, renormalized.
class LinkView {
 public:
  LinkView(ComplexPtr base, Face anchor, ComplexPtr link)
      : base_(std::move(base)), anchor_(std::move(anchor)), link_(std::move(link)) {}

  const ComplexPtr& base() const { return base_; }
  const Face& anchor() const { return anchor_; }
  const ComplexPtr& complex() const { return link_; }

  /// Parent index of sigma u tau for the link face (level, index).
  std::size_t parent_union_index(int level, std::size_t index) const;

 private:
  ComplexPtr base_;
  Face anchor_;
  ComplexPtr link_;
};

Face face_union(FaceView a, FaceView b);
Face face_difference(FaceView a, FaceView b);
bool faces_disjoint(FaceView a, FaceView b);
bool is_subface(FaceView small, FaceView big);

/// Indices of the top faces of `complex` that contain `face`.
std::vector<std::uint32_t> top_faces_containing(const SimplicialComplex& complex, FaceView face);

LinkView link(const ComplexPtr& complex, FaceView tau);

/// f|_tau on X_tau(k - |tau|): sigma -> f(tau u sigma).
FaceFunction restrict_to(const FaceFunction& f, const LinkView& link);
FaceFunction restrict_to(const FaceFunction& f, FaceView tau);

/// f|^tau on X_tau(k): sigma -> f(sigma); only the measure changes.
FaceFunction localize(const FaceFunction& f, const LinkView& link);
FaceFunction localize(const FaceFunction& f, FaceView tau);

/// Calls fn(subset) for every size-`size` subset of `face`, in lexicographic order.
template <class Fn>
void for_each_subset(FaceView face, int size, Fn&& fn) {
  const int n = static_cast<int>(face.size());
  if (size < 0 || size > n) return;
  std::vector<int> pick(static_cast<std::size_t>(size));
  for (int p = 0; p < size; ++p) pick[p] = p;
  Face subset(static_cast<std::size_t>(size));
  while (true) {
    for (int p = 0; p < size; ++p) subset[p] = face[pick[p]];
    fn(static_cast<const Face&>(subset));
    int p = size - 1;
    while (p >= 0 && pick[p] == n - size + p) --p;
    if (p < 0) break;
    ++pick[p];
    for (int q = p + 1; q < size; ++q) pick[q] = pick[q - 1] + 1;
  }
}

}  // namespace hdx
