#include <cmath>

#include "helpers.hpp"
#include "hdx/analysis.hpp"
#include "hdx/error.hpp"

using namespace hdx;
using namespace testing;

TEST_CASE("gamma") {
  CHECK(measure_gamma(k3()).gamma == doctest::Approx(0.5).epsilon(1e-12));
  for (int n = 5; n <= 12; ++n) {
    CAPTURE(n);
    CHECK(std::abs(measure_gamma(complete_complex(n, 2)).gamma - 1.0 / (n - 1)) < 1e-9);
    CHECK(std::abs(measure_gamma(complete_complex(n, 3)).gamma - 1.0 / (n - 2)) < 1e-9);
  }
  SUBCASE("single simplex") {
    auto cx = complete_complex(4, 4);
    const auto p = measure_gamma(cx);
    CHECK(p.gamma >= 0.0);
    CHECK(p.gamma <= 1.0);
    CHECK(p.links.size() == 1 + 4 + 6);
  }
  SUBCASE("disconnected link") {
    // Two triangles sharing only vertex 0: the link of 0 is two disjoint edges.
    auto cx = SimplicialComplex::build({{{0, 1, 2}, 1.0}, {{0, 3, 4}, 1.0}}, 3);
    const auto p = measure_gamma(cx);
    CHECK(p.gamma == 1.0);
    REQUIRE(!p.disconnected.empty());
    CHECK(p.disconnected[0] == Face{0});
  }
  CHECK_THROWS_AS(measure_gamma(complete_complex(4, 1)), Error);
  CHECK(measure_gamma(complete_complex(7, 3), 3).gamma == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("approximate eigenvalues and ST-rank") {
  auto cx = complete_complex(10, 2);
  HdLevelSetSolver solver(cx, 2);
  const auto noise = approximate_eigenvalues(assemble_walk(cx, noise_operator(2, 0.5)), solver);
  REQUIRE(noise.strips.size() == 3);
  CHECK(std::abs(noise.strips[0].center - 1.0) < 0.1);
  CHECK(std::abs(noise.strips[1].center - 0.5) < 0.1);
  CHECK(std::abs(noise.strips[2].center - 0.25) < 0.1);
  int assigned = 0;
  for (const auto& s : noise.strips) assigned += s.count;
  CHECK(assigned == static_cast<int>(cx->level_size(2)));
  CHECK(st_rank(noise, 1.0) == 0);
  CHECK(st_rank(noise, 2.0) == 0);
  int previous = st_rank(noise, -1.0);
  CHECK(previous == 3);
  for (double delta = -0.5; delta <= 1.0; delta += 0.05) {
    const int r = st_rank(noise, delta);
    CHECK(r <= previous);
    previous = r;
  }

  auto big = complete_complex(12, 2);
  HdLevelSetSolver big_solver(big, 2);
  const auto lower = approximate_eigenvalues(assemble_walk(big, lower_walk(2)), big_solver);
  CHECK(std::abs(lower.strips[0].center - 1.0) < 1e-9);
  CHECK(std::abs(lower.strips[1].center - 0.5) < 0.1);
  CHECK(std::abs(lower.strips[2].center) < 0.1);

  auto small = complete_complex(14, 2);
  HdLevelSetSolver small_solver(small, 2);
  const auto noise14 = approximate_eigenvalues(assemble_walk(small, noise_operator(2, 0.5)), small_solver);
  for (int i = 0; i < 3; ++i) CHECK(noise14.strips[i].width <= noise.strips[i].width + 1e-9);

  CHECK_THROWS_AS(approximate_eigenvalues(assemble_walk(cx, lower_walk(2)), big_solver), Error);
}

TEST_CASE("pseudorandomness") {
  auto cx = k3();
  const auto zero = pseudorandomness(FaceFunction::constant(cx, 2, 0.0), 1);
  CHECK(zero.eps == 0.0);
  const auto link = pseudorandomness(link_indicator(cx, 2, Face{a}), 1);
  CHECK(link.eps == doctest::Approx(1.0));
  CHECK(link.witness == Face{a});

  auto big = complete_complex(12, 3);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto f = random_sparse(big, 3, 0.2, seed);
    const auto r = pseudorandomness(f, 2);
    CHECK(r.monotone);
    CHECK(r.eps_sq <= r.eps_mean + 1e-15);
    for (std::size_t j = 1; j < r.by_level.size(); ++j) CHECK(r.by_level[j - 1] <= r.by_level[j] + 1e-12);
    CHECK(r.by_level[0] == doctest::Approx(f.mean()));
    const auto g = random_real(big, 3, seed);
    const auto rg = pseudorandomness(g, 2);
    CHECK(rg.monotone);
  }
  // Across n the level-1 value of an alpha-dense random set approaches alpha.
  double gap_small = 0.0;
  double gap_large = 0.0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    gap_small += std::abs(pseudorandomness(random_sparse(complete_complex(8, 3), 3, 0.3, seed), 1).eps - 0.3);
    gap_large += std::abs(pseudorandomness(random_sparse(complete_complex(16, 3), 3, 0.3, seed), 1).eps - 0.3);
  }
  CHECK(gap_large < gap_small);
  CHECK_THROWS_AS(pseudorandomness(FaceFunction::constant(cx, 2, 1.0), 3), Error);
}

TEST_CASE("hypercontractivity and level-i checks") {
  auto cx = complete_complex(8, 3);
  const auto constant = check_hypercontractivity(FaceFunction::constant(cx, 3, 1.0), 1, 0.2);
  CHECK(constant.lhs < 1e-20);
  CHECK(constant.status == Status::kPass);
  const auto link = check_hypercontractivity(link_indicator(cx, 3, Face{0}), 1, 0.2);
  CHECK(link.status == Status::kNotApplicable);
  const auto sparse = check_hypercontractivity(random_sparse(cx, 3, 0.1, 3), 1, 0.2);
  CHECK(sparse.status == Status::kPass);
  CHECK(sparse.fitted_constants["ratio"].get<double>() > 0.0);

  auto tri = complete_complex(3, 1);
  const auto level1 = check_level_i(point_mass(tri, {a}), 1);
  CHECK(level1.lhs == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
  const auto one = check_level_i(FaceFunction::constant(cx, 3, 1.0), 2);
  CHECK(std::abs(one.lhs) < 1e-12);
  CHECK_THROWS_AS(check_level_i(random_real(cx, 3, 1), 1), Error);
}

TEST_CASE("expansion theorem check") {
  auto cx = complete_complex(10, 4);
  const auto walk = assemble_walk(cx, canonical_walk(3, 1));
  HdLevelSetSolver solver(cx, 3);
  const auto strips = approximate_eigenvalues(walk, solver);
  const double gamma = measure_gamma(cx).gamma;
  const auto link = check_expansion_theorem(link_indicator(cx, 3, Face{0}), walk, strips, 0.2, gamma);
  CHECK(link.status == Status::kNotApplicable);
  CHECK(link.note == "consistent (non-pseudorandom witness)");
  const auto sparse = check_expansion_theorem(random_sparse(cx, 3, 0.2, 7), walk, strips, 0.3, gamma);
  CHECK(sparse.status == Status::kPass);
  const auto none = check_expansion_theorem(random_sparse(cx, 3, 0.2, 7), walk, strips, 1.0, gamma);
  CHECK(none.status == Status::kNotApplicable);
  // A dense set cannot meet the bound once both constants are zeroed.
  const auto strict = check_expansion_theorem(random_sparse(cx, 3, 0.6, 7), walk, strips, 0.6, gamma,
                                              ExpansionConstants{0.0, 0.0});
  CHECK(strict.status == Status::kFail);
}

TEST_CASE("Bourgain") {
  auto cx = complete_complex(8, 3);
  const Face tau{2, 5};
  const auto link = check_bourgain(link_indicator(cx, 3, tau), 3.0);
  CHECK(link.status == Status::kPass);
  CHECK(link.lhs == doctest::Approx(1.0));
  CHECK(link.witnesses["face"].get<Face>() == tau);

  auto cube = hypercube_complex(3);
  const auto dict = dictator(cube, 3, 1);
  CHECK(influence(dict) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(dict.variance() == doctest::Approx(0.25).epsilon(1e-12));
  const auto v = check_bourgain(dict, 1.0);
  CHECK(v.status == Status::kPass);
  CHECK(v.witnesses["level"] == 1);
  CHECK(v.lhs == doctest::Approx(1.0));

  const auto sparse = check_bourgain(random_sparse(cx, 3, 0.3, 4), 0.1);
  CHECK(sparse.status == Status::kHypothesisNotMet);
}

TEST_CASE("noise sensitivity and noise hypercontractivity") {
  auto cx = complete_complex(14, 3);
  const auto zero = check_noise_sensitivity(FaceFunction::constant(cx, 3, 0.0), 0.5, 0.3, 0.1);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.status == Status::kPass);
  const auto f = random_sparse(cx, 3, 0.05, 11);
  const auto rho0 = check_noise_sensitivity(f, 0.0, 0.9, 1.0 / 12);
  CHECK(rho0.lhs == doctest::Approx(f.mean()).epsilon(1e-12));
  const auto half = check_noise_sensitivity(f, 0.5, 0.3, 1.0 / 12);
  CHECK(half.params["r"] == 2);
  CHECK((half.status == Status::kPass || half.status == Status::kHypothesisNotMet));

  const auto flat = check_noise_hypercontractivity(FaceFunction::constant(cx, 3, 0.5));
  CHECK(flat.status == Status::kNotApplicable);
  auto mid = complete_complex(12, 3);
  // A degree-1 function: the lift of a sparse vertex function.
  const auto vertex_set = random_sparse(mid, 1, 0.25, 5);
  const auto degree1 = compose_up(mid, 1, 3)(vertex_set);
  CHECK(degree(degree1) == 1);
  const auto nh = check_noise_hypercontractivity(degree1);
  CHECK(nh.witnesses["sweep"].size() == 9);
  CHECK(nh.witnesses["lhs_monotone_in_rho"].get<bool>());
}

TEST_CASE("influence, swap, DDFH and localization checks") {
  auto cx = complete_complex(9, 3);
  const double gamma = measure_gamma(cx).gamma;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    CHECK(check_influence_bounds(random_sparse(cx, 3, 0.3, seed), gamma).status == Status::kPass);
  }
  CHECK(check_swap_bound(k3(), 1, 1, 0.5).lhs == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(check_swap_bound(k3(), 1, 1, 0.5).status == Status::kPass);
  CHECK(check_swap_bound(cx, 1, 2, gamma).status == Status::kPass);
  CHECK(check_ddfh_bound(cx, 3, 1, gamma).status == Status::kPass);
  CHECK(check_localization(random_real(cx, 2, 4), 1, gamma).status == Status::kPass);
}

TEST_CASE("anti-tribes") {
  AntiTribesParams small{6, 3, 1.0, 1.0, 1.0};
  const auto tribes = anti_tribes_tribes(small);
  REQUIRE(tribes.size() == 2);
  CHECK(tribes[0] == Face{0, 1});
  CHECK(tribes[1] == Face{2, 3});
  const auto exact = anti_tribes_exact(small);
  CHECK(exact.mean == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(anti_tribes_link_density(small, 0, 0) == doctest::Approx(0.6).epsilon(1e-12));
  for (const auto& d : exact.densities) CHECK(d.density == doctest::Approx(d.analytic).epsilon(1e-12));

  AntiTribesParams none{6, 3, 0.0, 1.0, 1.0};
  const auto flat = anti_tribes_exact(none);
  CHECK(flat.influence == doctest::Approx(0.0));
  CHECK(flat.variance == doctest::Approx(0.0));
  CHECK(anti_tribes_verdict(flat).status == Status::kPass);

  AntiTribesParams mid{10, 5, 1.0, 1.0, 1.0};
  const auto ex = anti_tribes_exact(mid);
  const auto mc = anti_tribes_monte_carlo(mid, 20000, 9);
  CHECK(std::abs(ex.mean - mc.mean) <= 3 * mc.mean_se);
  CHECK(std::abs(ex.influence - mc.influence) <= 3 * mc.influence_se);
  const auto again = anti_tribes_monte_carlo(mid, 20000, 9);
  CHECK(to_json(again).dump() == to_json(mc).dump());
  CHECK_THROWS_AS(anti_tribes_monte_carlo(mid, 100, 9), Error);
  CHECK_THROWS_AS(anti_tribes_exact(AntiTribesParams{30, 15, 1.0, 1.0, 1.0}), Error);
  CHECK_THROWS_AS(anti_tribes_tribes(AntiTribesParams{6, 3, 0.75, 1.0, 1.0}), Error);
}
