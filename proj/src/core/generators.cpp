#include "hdx/generators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hdx/error.hpp"
#include "hdx/link.hpp"
#include "hdx/rng.hpp"

namespace hdx {

namespace {

std::size_t face_count_estimate(int n, int d) {
  double total = 0.0;
  for (int i = 0; i <= d; ++i) total += binomial(n, i);
  return total > 1e18 ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(total);
}

}  // namespace

ComplexPtr complete_complex(int n, int d, const BuildOptions& options) {
  if (n < 0 || d < 0 || d > n) {
    fail(ErrorCode::kInvalidArgument, "complete complex needs 0 <= d <= n (n = " + std::to_string(n) +
                                          ", d = " + std::to_string(d) + ")");
  }
  if (face_count_estimate(n, d) > options.max_faces) {
    fail(ErrorCode::kInfeasible, "complete complex on " + std::to_string(n) + " vertices with d = " +
                                     std::to_string(d) + " exceeds the face cap");
  }
  Face all(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) all[v] = static_cast<VertexId>(v);
  std::vector<WeightedFace> top;
  for_each_subset(all, d, [&](const Face& s) { top.push_back({s, 1.0}); });
  return SimplicialComplex::build(std::move(top), d, options);
}

VertexId hypercube_vertex(int coordinate, int bit) {
  require(coordinate >= 1 && (bit == 0 || bit == 1), "hypercube vertex needs coordinate >= 1 and bit in {0,1}");
  return static_cast<VertexId>(2 * (coordinate - 1) + bit);
}

Face hypercube_face(const std::vector<int>& bits) {
  Face f;
  f.reserve(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) f.push_back(hypercube_vertex(static_cast<int>(i) + 1, bits[i]));
  return f;
}

std::vector<int> hypercube_bits(FaceView face) {
  std::vector<int> bits(face.size());
  for (std::size_t i = 0; i < face.size(); ++i) {
    if (face[i] / 2 != i) fail(ErrorCode::kInvalidArgument, "not a top face of the hypercube complex");
    bits[i] = static_cast<int>(face[i] % 2);
  }
  return bits;
}

ComplexPtr hypercube_complex(int n) {
  require(n >= 1, "hypercube complex needs n >= 1");
  require(n <= 20, "hypercube complex is limited to n <= 20");
  std::vector<WeightedFace> top;
  top.reserve(std::size_t{1} << n);
  std::vector<int> bits(static_cast<std::size_t>(n));
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    for (int i = 0; i < n; ++i) bits[i] = static_cast<int>((x >> (n - 1 - i)) & 1U);
    top.push_back({hypercube_face(bits), 1.0});
  }
  return SimplicialComplex::build(std::move(top), n);
}

ComplexPtr random_complex(int n, int d, int num_top, std::uint64_t seed) {
  require(d >= 1 && d <= n, "random complex needs 1 <= d <= n");
  require(num_top >= 1, "random complex needs at least one top face");
  require(static_cast<double>(num_top) <= binomial(n, d), "more top faces requested than d-subsets exist");
  CounterRng rng(seed, 0x5eed);
  std::set<Face> chosen;
  std::vector<WeightedFace> top;
  std::vector<VertexId> pool(static_cast<std::size_t>(n));
  while (static_cast<int>(top.size()) < num_top) {
    for (int v = 0; v < n; ++v) pool[v] = static_cast<VertexId>(v);
    for (int p = 0; p < d; ++p) {
      const auto q = p + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - p)));
      std::swap(pool[p], pool[q]);
    }
    Face f = make_face(std::vector<VertexId>(pool.begin(), pool.begin() + d));
    if (chosen.insert(f).second) top.push_back({std::move(f), 0.1 + 0.9 * rng.uniform()});
  }
  return SimplicialComplex::build(std::move(top), d);
}

FaceFunction link_indicator(const ComplexPtr& complex, int level, FaceView tau) {
  require(complex->contains(tau), "link indicator anchor is not a face");
  const Face anchor(tau.begin(), tau.end());
  return FaceFunction::indicator(complex, level, [&](FaceView f) { return is_subface(anchor, f); });
}

FaceFunction dictator(const ComplexPtr& complex, int level, int bit) {
  const VertexId v = hypercube_vertex(bit, 1);
  return FaceFunction::indicator(complex, level,
                                 [v](FaceView f) { return std::binary_search(f.begin(), f.end(), v); });
}

FaceFunction random_sparse(const ComplexPtr& complex, int level, double alpha, std::uint64_t seed) {
  require(alpha >= 0.0 && alpha <= 1.0, "density alpha must lie in [0, 1]");
  CounterRng rng(seed, 0xb001);
  FaceFunction f(complex, level);
  Eigen::VectorXd v(static_cast<Eigen::Index>(f.size()));
  for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = rng.uniform() < alpha ? 1.0 : 0.0;
  return FaceFunction(complex, level, std::move(v));
}

FaceFunction random_real(const ComplexPtr& complex, int level, std::uint64_t seed) {
  CounterRng rng(seed, 0x4ea1);
  Eigen::VectorXd v(static_cast<Eigen::Index>(complex->level_size(level)));
  for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = 2.0 * rng.uniform() - 1.0;
  return FaceFunction(complex, level, std::move(v));
}

std::vector<Face> anti_tribes_tribes(const AntiTribesParams& p) {
  if (p.n < 1 || p.k < 1 || p.k > p.n) fail(ErrorCode::kInfeasible, "anti-tribes needs 1 <= k <= n");
  if (p.K < 0.0 || p.c <= 0.0 || p.c1 <= 0.0) fail(ErrorCode::kInfeasible, "anti-tribes needs K >= 0, c > 0, c1 > 0");
  const double m_real = 2.0 * p.c * p.K;
  const double m_round = std::round(m_real);
  if (std::abs(m_real - m_round) > 1e-9) {
    fail(ErrorCode::kInfeasible, "anti-tribes needs 2cK to be an integer (got " + std::to_string(m_real) + ")");
  }
  const auto m = static_cast<int>(m_round);
  const auto size = static_cast<int>(std::ceil(p.c1 * p.n / p.k - 1e-9));
  if (static_cast<long>(m) * size > p.n) {
    fail(ErrorCode::kInfeasible, std::to_string(m) + " tribes of size " + std::to_string(size) +
                                     " do not fit in " + std::to_string(p.n) + " vertices");
  }
  std::vector<Face> tribes(static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) {
    for (int v = 0; v < size; ++v) tribes[t].push_back(static_cast<VertexId>(t * size + v));
  }
  return tribes;
}

FaceFunction anti_tribes_function(const ComplexPtr& complex, int level, const std::vector<Face>& tribes) {
  return FaceFunction::indicator(complex, level, [&](FaceView f) {
    for (const auto& tribe : tribes) {
      if (faces_disjoint(f, tribe)) return false;
    }
    return true;
  });
}

AntiTribes generate_anti_tribes(const AntiTribesParams& params, const BuildOptions& options) {
  auto tribes = anti_tribes_tribes(params);
  auto cx = complete_complex(params.n, params.k, options);
  auto f = anti_tribes_function(cx, params.k, tribes);
  return {std::move(cx), std::move(f), std::move(tribes)};
}

}  // namespace hdx
