#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "hdx/error.hpp"
#include "hdx/link.hpp"
#include "hdx/operators.hpp"

using namespace hdx;
using namespace testing;
using doctest::Approx;

namespace {

double entry(const LinearMap& m, Face row, Face col) {
  const auto& cx = m.complex();
  return m.dense()(static_cast<Eigen::Index>(cx->index_of(row)), static_cast<Eigen::Index>(cx->index_of(col)));
}

}  // namespace

TEST_CASE("up and down on K3") {
  auto cx = k3();
  auto dab = down(point_mass(cx, {a, b}));
  CHECK(dab.at(Face{a}) == Approx(0.5));
  CHECK(dab.at(Face{b}) == Approx(0.5));
  CHECK(dab.at(Face{c}) == 0.0);
  for (int level = 0; level < 2; ++level) {
    CHECK(up(FaceFunction::constant(cx, level, 1.0)).values().isOnes(1e-15));
    CHECK(down(FaceFunction::constant(cx, level + 1, 1.0)).values().isOnes(1e-15));
  }
  auto ua = up(point_mass(cx, {a}));
  CHECK(ua.at(Face{a, b}) == Approx(0.5));
  CHECK(ua.at(Face{a, c}) == Approx(0.5));
  CHECK(ua.at(Face{b, c}) == 0.0);
  CHECK_THROWS_AS(up_map(cx, 2), Error);
  CHECK_THROWS_AS(down_map(cx, 0), Error);
}

TEST_CASE("compositions and adjointness") {
  auto cx = k3();
  CHECK(compose_up(cx, 1, 1).dense().isIdentity());
  CHECK(compose_down(cx, 2, 2).dense().isIdentity());
  CHECK(compose_down(cx, 2, 0)(point_mass(cx, {a, b}))[0] == Approx(1.0 / 3));
  CHECK_THROWS_AS(compose_up(cx, 2, 1), Error);
  const double lhs = inner_product(point_mass(cx, {a, b}), up(point_mass(cx, {a})));
  const double rhs = inner_product(down(point_mass(cx, {a, b})), point_mass(cx, {a}));
  CHECK(lhs == Approx(1.0 / 6));
  CHECK(rhs == Approx(1.0 / 6));

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto rc = random_complex(8, 3, 20, seed);
    for (int i = 1; i <= 3; ++i) {
      auto f = random_real(rc, i, seed * 31 + i);
      auto g = random_real(rc, i - 1, seed * 37 + i);
      CHECK(std::abs(inner_product(f, up(g)) - inner_product(down(f), g)) <= 1e-12);
      for (double p : {1.0, 2.0, double(INFINITY)}) {
        CHECK(down(f).norm(p) <= f.norm(p) + 1e-12);
        CHECK(up(g).norm(p) <= g.norm(p) + 1e-12);
      }
    }
  }
}

TEST_CASE("canonical and rectangular walks") {
  auto cx = k3();
  auto n11 = assemble_walk(cx, canonical_walk(1, 1));
  CHECK(entry(n11, {a}, {a}) == Approx(0.5));
  CHECK(entry(n11, {a}, {b}) == Approx(0.25));
  CHECK(entry(n11, {a}, {c}) == Approx(0.25));
  CHECK(n11.apply(Eigen::VectorXd::Ones(3)).isOnes(1e-15));
  const Eigen::RowVectorXd pi = cx->pi(1).transpose();
  CHECK((pi * n11.dense() - pi).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((rectangular_canonical(cx, 1, 1).dense() - n11.dense()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(rectangular_canonical(cx, 2, 1), Error);
  CHECK_THROWS_AS(assemble_walk(cx, canonical_walk(2, 1)), Error);
}

TEST_CASE("swap walk") {
  auto cx = k3();
  auto s = swap_walk(cx, 1, 1);
  CHECK(entry(s.map, {a}, {a}) == 0.0);
  CHECK(entry(s.map, {a}, {b}) == Approx(0.5));
  CHECK(entry(s.map, {a}, {c}) == Approx(0.5));
  CHECK(s.second_singular_value == Approx(0.5).epsilon(1e-12));
  CHECK(swap_walk(complete_complex(6, 2), 1, 1).second_singular_value == Approx(0.2).epsilon(1e-12));
  CHECK_THROWS_AS(swap_walk(cx, 2, 1), Error);
}

TEST_CASE("assemble_walk validation") {
  auto cx = k3();
  CHECK(assemble_walk(cx, identity_walk(1)).dense().isIdentity());
  auto lw = assemble_walk(cx, lower_walk(2));
  CHECK(entry(lw, {a, b}, {a, b}) == Approx(0.5));
  CHECK(entry(lw, {a, b}, {a, c}) == Approx(0.25));
  CHECK(entry(lw, {a, b}, {b, c}) == Approx(0.25));
  WalkSpec mix{1, {{0.5, "UD"}, {0.5, ""}}};
  CHECK_NOTHROW(assemble_walk(cx, mix));
  CHECK(mix.weight() == 1.0);
  CHECK(mix.height() == 1);
  WalkSpec heavy{1, {{2.0, ""}}};
  CHECK_THROWS_AS(assemble_walk(cx, heavy), Error);
  WalkSpec open_word{1, {{1.0, "UU"}}};
  CHECK_THROWS_AS(assemble_walk(cx, open_word), Error);
  // (U D)(D U) is stochastic but only self-adjoint when the two factors commute.
  auto rc = random_complex(7, 3, 15, 3);
  WalkSpec skew{2, {{1.0, "UDDU"}}};
  CHECK(walk_defects(assemble_walk(rc, canonical_walk(2, 1))).asymmetry < 1e-12);
  CHECK_THROWS_AS(assemble_walk(rc, skew), Error);
}

TEST_CASE("noise operator") {
  auto cx = k3();
  auto fa = point_mass(cx, {a});
  auto t = walk_apply(noise_operator(1, 0.5), fa);
  CHECK(t.at(Face{a}) == Approx(2.0 / 3));
  CHECK(t.at(Face{b}) == Approx(1.0 / 6));
  CHECK(assemble_walk(cx, noise_operator(2, 1.0)).dense().isIdentity(1e-15));
  CHECK_THROWS_AS(noise_operator(2, 1.5), Error);
  for (int k = 0; k <= 5; ++k) {
    for (double rho : {0.0, 0.1, 0.5, 0.9, 1.0}) {
      double sum = 0.0;
      for (const auto& term : noise_operator(k, rho).terms) sum += term.coefficient;
      CHECK(sum == Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("influence, stability, expansion") {
  auto cx = k3();
  CHECK(std::abs(influence(FaceFunction::constant(cx, 2, 1.0))) < 1e-15);
  auto cube = hypercube_complex(2);
  auto dict = dictator(cube, 2, 1);
  CHECK(influence(dict) == Approx(0.25).epsilon(1e-12));
  CHECK(dict.variance() == Approx(0.25));
  CHECK_THROWS_AS(laplacian(cx, 0), Error);

  auto fa = point_mass(cx, {a});
  CHECK(stability(fa, 1.0) == Approx(inner_product(fa, fa)));
  CHECK(stability(fa, 0.0) == Approx(fa.mean() * fa.mean()));
  CHECK(stability(fa, 0.5) == Approx(2.0 / 9));

  CHECK(std::abs(edge_expansion(FaceFunction::constant(cx, 2, 1.0), lower_walk(2))) < 1e-15);
  CHECK(edge_expansion(point_mass(cx, {a, b}), lower_walk(2)) == Approx(0.5));
  CHECK_THROWS_AS(edge_expansion(FaceFunction(cx, 2), lower_walk(2)), Error);
}

TEST_CASE("localization operator") {
  auto cx = k3();
  auto one = FaceFunction::constant(cx, 1, 1.0);
  auto r0 = localization_residual(one, Face{b});
  CHECK(std::abs(r0.gamma_value) < 1e-15);
  CHECK(std::abs(r0.local_mean_shift) < 1e-15);
  auto r = localization_residual(point_mass(cx, {a}), Face{b});
  CHECK(r.local_mean_shift == Approx(1.0 / 6));
  CHECK(r.gamma_value == Approx(1.0 / 6));
  CHECK(r.residual <= 1e-9);
  CHECK_THROWS_AS(localization_gamma(cx, 2, 1), Error);
}

TEST_CASE("DDFH residual") {
  auto cx = complete_complex(8, 3);
  for (int i = 1; i <= 3; ++i) CHECK(ddfh_residual(cx, i, i).residual.max_abs() < 1e-14);
  // Vertex links of the complete complex are K_7 graphs: gamma = 1/6.
  CHECK(ddfh_residual(cx, 2, 1).norm <= 1.0 / 6 + 1e-12);
  auto cube = hypercube_complex(3);
  CHECK(std::isfinite(ddfh_residual(cube, 2, 1).norm));
  CHECK_THROWS_AS(ddfh_residual(cx, 1, 2), Error);
}

TEST_CASE("Garland identities") {
  auto cx = k3();
  auto f = point_mass(cx, {a, b});
  auto sides = garland_check_restrict(f, 1);
  CHECK(sides.lhs == Approx(1.0 / 3));
  CHECK(sides.rhs == Approx(1.0 / 3));
  auto zero = garland_check_restrict(FaceFunction(cx, 2), 1);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);

  auto big = complete_complex(7, 3);
  auto g = random_real(big, 3, 5);
  for (int i = 0; i <= 3; ++i) {
    auto s = garland_check_restrict(g, i);
    CHECK(std::abs(s.lhs - s.rhs) <= 1e-12);
  }
  auto h = random_real(big, 1, 6);
  for (int i = 0; i <= 2; ++i) {
    auto s = garland_check_localize(h, i);
    CHECK(std::abs(s.lhs - s.rhs) <= 1e-12);
  }
}

TEST_CASE("operator export round trip") {
  auto cx = complete_complex(5, 3);
  auto m = assemble_walk(cx, canonical_walk(2, 1));
  std::stringstream buffer;
  write_operator(buffer, m);
  auto back = read_operator(buffer, cx);
  CHECK(back.source_level() == 2);
  CHECK(back.target_level() == 2);
  CHECK((back.dense() - m.dense()).cwiseAbs().maxCoeff() == 0.0);
}
