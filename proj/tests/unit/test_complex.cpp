#include <sstream>

#include "helpers.hpp"
#include "hdx/error.hpp"
#include "hdx/io.hpp"
#include "hdx/link.hpp"

using namespace hdx;
using namespace testing;
using doctest::Approx;

TEST_CASE("downward closure measures") {
  auto cx = k3();
  CHECK(cx->level_size(0) == 1);
  CHECK(cx->level_size(1) == 3);
  CHECK(cx->level_size(2) == 3);
  CHECK(cx->pi(0)[0] == 1.0);
  for (int v = 0; v < 3; ++v) CHECK(cx->pi(1)[v] == Approx(1.0 / 3));
  for (int e = 0; e < 3; ++e) CHECK(cx->pi(2)[e] == Approx(1.0 / 3));

  auto path = SimplicialComplex::build({{{a, b}, 0.5}, {{b, c}, 0.5}}, 2);
  CHECK(path->pi(1)[path->index_of(Face{a})] == Approx(0.25).epsilon(1e-15));
  CHECK(path->pi(1)[path->index_of(Face{b})] == Approx(0.5).epsilon(1e-15));
  CHECK(path->pi(1)[path->index_of(Face{c})] == Approx(0.25).epsilon(1e-15));

  auto cube = hypercube_complex(2);
  CHECK(cube->level_size(2) == 4);
  CHECK(cube->level_size(1) == 4);
  for (int v = 0; v < 4; ++v) CHECK(cube->pi(1)[v] == Approx(0.25));
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(SimplicialComplex::build({}, 2), Error);
  CHECK_THROWS_AS(SimplicialComplex::build({{{a, b}, 1.0}, {{a, b, c}, 1.0}}, 2), Error);
  CHECK_THROWS_AS(SimplicialComplex::build({{{a, b}, 0.0}}, 2), Error);
  CHECK_THROWS_AS(SimplicialComplex::build({{{a, b}, -1.0}}, 2), Error);
  CHECK_THROWS_AS(make_face({a, a}), Error);
  try {
    complete_complex(40, 6, BuildOptions{1000});
    FAIL("face cap not enforced");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfeasible);
  }
}

TEST_CASE("recurrence, purity and link consistency on random complexes") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto cx = random_complex(9, 3, 25, seed);
    const int dim = cx->dimension();
    for (int i = 0; i < dim; ++i) {
      CHECK(cx->pi(i).sum() == Approx(1.0).epsilon(1e-12));
      for (std::size_t x = 0; x < cx->level_size(i); ++x) {
        auto cf = cx->cofaces(i, x);
        CHECK(!cf.empty());
        double s = 0.0;
        for (auto y : cf) s += cx->pi(i + 1)[y];
        CHECK(std::abs(cx->pi(i)[x] - s / (i + 1)) <= 1e-12);
      }
    }
    for (int level = 0; level < dim; ++level) {
      for (std::size_t t = 0; t < cx->level_size(level); ++t) {
        auto lk = link(cx, cx->face(level, t));
        const auto& sub = lk.complex();
        CHECK(sub->pi(sub->dimension()).sum() == Approx(1.0).epsilon(1e-12));
        for (int sl = 0; sl <= sub->dimension(); ++sl) {
          for (std::size_t s = 0; s < sub->level_size(sl); ++s) {
            CHECK(faces_disjoint(sub->face(sl, s), lk.anchor()));
            CHECK(cx->contains(face_union(sub->face(sl, s), lk.anchor())));
          }
        }
      }
    }
  }
}

TEST_CASE("links") {
  auto cx = k3();
  auto lk = link(cx, Face{a});
  REQUIRE(lk.complex()->level_size(1) == 2);
  CHECK(Face(lk.complex()->face(1, 0).begin(), lk.complex()->face(1, 0).end()) == Face{b});
  CHECK(Face(lk.complex()->face(1, 1).begin(), lk.complex()->face(1, 1).end()) == Face{c});
  CHECK(lk.complex()->pi(1)[0] == Approx(0.5));
  CHECK(lk.complex()->pi(1)[1] == Approx(0.5));

  auto whole = link(cx, Face{});
  CHECK(whole.complex()->level_size(2) == 3);
  CHECK((whole.complex()->pi(1) - cx->pi(1)).cwiseAbs().maxCoeff() < 1e-15);

  auto cube = hypercube_complex(2);
  auto clk = link(cube, Face{hypercube_vertex(1, 0)});
  REQUIRE(clk.complex()->level_size(1) == 2);
  CHECK(clk.complex()->face(1, 0)[0] == hypercube_vertex(2, 0));
  CHECK(clk.complex()->face(1, 1)[0] == hypercube_vertex(2, 1));
  CHECK(clk.complex()->pi(1)[0] == Approx(0.5));

  CHECK_THROWS_AS(link(cx, Face{a, b, c}), Error);
}

TEST_CASE("restriction and localization") {
  auto cx = k3();
  auto f = point_mass(cx, {a, b});
  auto r = restrict_to(f, Face{a});
  CHECK(r.level() == 1);
  CHECK(r.at(Face{b}) == 1.0);
  CHECK(r.at(Face{c}) == 0.0);
  CHECK(restrict_to(f, Face{}).values() == f.values());
  CHECK_THROWS_AS(restrict_to(point_mass(cx, {a}), Face{a, b}), Error);

  auto cube = hypercube_complex(2);
  auto bit1 = dictator(cube, 2, 1);
  auto rb = restrict_to(bit1, Face{hypercube_vertex(1, 1)});
  CHECK(rb.values().minCoeff() == 1.0);

  auto fa = point_mass(cx, {a});
  auto l = localize(fa, Face{b});
  CHECK(l.at(Face{a}) == 1.0);
  CHECK(l.at(Face{c}) == 0.0);
  CHECK(l.mean() == Approx(0.5));
  CHECK(localize(fa, Face{}).values() == fa.values());
  CHECK_THROWS_AS(localize(f, Face{a}), Error);
}

TEST_CASE("inner products") {
  auto cx = k3();
  auto f = point_mass(cx, {a, b});
  CHECK(inner_product(f, f) == Approx(1.0 / 3));
  CHECK(inner_product(f, FaceFunction(cx, 2)) == 0.0);
  for (int level = 0; level <= 2; ++level) {
    auto one = FaceFunction::constant(cx, level, 1.0);
    CHECK(inner_product(one, one) == Approx(1.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(inner_product(f, point_mass(cx, {a})), Error);
}

TEST_CASE("generators") {
  auto cx = complete_complex(3, 2);
  CHECK(cx->level_size(2) == 3);
  CHECK(complete_complex(5, 2)->level_size(2) == 10);

  auto cube = hypercube_complex(3);
  for (std::size_t t = 0; t < cube->level_size(3); ++t) {
    auto bits = hypercube_bits(cube->face(3, t));
    int x = 0;
    for (int bit : bits) x = 2 * x + bit;
    CHECK(static_cast<std::size_t>(x) == t);
    CHECK(Face(cube->face(3, t).begin(), cube->face(3, t).end()) == hypercube_face(bits));
  }

  auto at = generate_anti_tribes({6, 3, 1.0, 1.0, 1.0});
  REQUIRE(at.tribes.size() == 2);
  CHECK(at.tribes[0] == Face{0, 1});
  CHECK(at.tribes[1] == Face{2, 3});
  CHECK(at.function.mean() == Approx(12.0 / 20).epsilon(1e-15));
  CHECK(at.function.is_boolean());

  try {
    anti_tribes_tribes({6, 3, 2.0, 1.0, 1.0});  // 4 tribes of size 2 exceed 6 vertices
    FAIL("infeasible tribes accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfeasible);
  }
}

TEST_CASE("complex file round trip") {
  auto cx = random_complex(8, 3, 20, 7);
  std::stringstream buffer;
  write_complex(buffer, *cx);
  auto back = read_complex(buffer);
  REQUIRE(back->dimension() == cx->dimension());
  for (int level = 0; level <= cx->dimension(); ++level) {
    REQUIRE(back->level_size(level) == cx->level_size(level));
    for (std::size_t t = 0; t < cx->level_size(level); ++t) {
      CHECK(std::equal(cx->face(level, t).begin(), cx->face(level, t).end(), back->face(level, t).begin()));
    }
    CHECK((back->pi(level) - cx->pi(level)).cwiseAbs().maxCoeff() <= 1e-15);
  }

  std::stringstream header_only("2 3\n0 1 1.0\n1 2 x\n");
  CHECK_THROWS_AS(read_complex(header_only), Error);
}
