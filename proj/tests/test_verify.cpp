#include "doctest.h"

#include "vortexlab/configs.hpp"
#include "vortexlab/verify.hpp"

#include <sstream>

using namespace vlab;

TEST_CASE("lattice counts for the covering") {
    CHECK(lattice_points_in_closed_disc(2.0) == 13);
    CHECK(lattice_points_in_open_disc(2.0) == 9);
    CHECK(max_lattice_points_in_open_disc(1.0) == 4);
    CHECK(max_lattice_points_in_open_disc(2.0) == 14);
    const auto cov = build_covering(Region::ball({0.0, 0.0}, 1.0));
    CHECK(cov.overlap_number == 14);
    CHECK(cov.lattice_count == 13);
    CHECK(cov.neighbor_bound == 193);
    CHECK(cov.rho == doctest::Approx(1.0 / (32.0 * 193.0)));
    const auto a = cov.alphas_containing({0.01, 0.02});
    CHECK(a.size() >= 9);
    CHECK(a.size() <= 14);
    for (const auto& al : a) CHECK(distance(Covering::center(al), {0.01, 0.02}) < Covering::kRadius);
}

TEST_CASE("localized construction keeps disjoint balls") {
    const PointConfig cfg({{0.0, 0.0}, {1e-4, 0.0}, {0.5, 0.5}, {3.0, -1.0}});
    const auto U = Region::ball({0.0, 0.0}, 2.0);
    const auto lambda = points_in_hat(cfg, U);
    CHECK(lambda.size() == 3);
    const auto lc = localized_construction(lambda, U);
    CHECK(lc.eta <= 0.5 * lc.rho / 3.0);
    CHECK(lc.components == 2);
    CHECK(lc.kept.size() == 2);
    std::size_t covered = 0;
    for (const auto& kb : lc.kept) covered += kb.points.size();
    CHECK(covered == 3);
    std::ostringstream svg;
    write_construction_svg(svg, lc, lambda);
    CHECK(svg.str().find("<svg") != std::string::npos);
    CHECK_THROWS_AS(points_in_hat(PointConfig({{10.0, 10.0}}), U), Error);
}

TEST_CASE("n prime counts points near the ramp") {
    const auto chi = make_standard_cutoff(Region::ball({0.0, 0.0}, 5.0));
    // band 0 < χ ≤ ½ is 4.5 ≤ |x| < 5
    CHECK(n_prime(PointConfig({{0.0, 0.0}, {3.9, 0.0}, {4.2, 0.0}, {5.4, 0.0}, {5.8, 0.0}}), chi) == 2);
}

TEST_CASE("main inequality on a single vortex") {
    const auto rep = check_theorem_main(PointConfig({{0.0, 0.0}}), {BackgroundKind::zero},
                                        Region::ball({0.0, 0.0}, 2.0));
    CHECK(rep.n == 1);
    CHECK(rep.W == doctest::Approx(M_PI * (2.0 * std::log(2.0) - 1.0)).epsilon(1e-3));
    CHECK(rep.G_bound_holds);
    CHECK(rep.G_norm_sq_over_n == doctest::Approx(4.0 * M_PI).epsilon(0.02));
    CHECK(rep.rhs_without_constant == doctest::Approx(3.0));
    CHECK(std::isfinite(rep.implied_C_beta));
    CHECK(to_json(rep)["C_star"] == 14);
}

TEST_CASE("corollary checks") {
    const auto cfg = hex_shells(1);
    const auto U = Region::ball({0.0, 0.0}, std::sqrt(14.0));
    CorollaryOptions o;
    o.h = 1.0 / 8.0;
    const auto rec = check_corollary(cfg, {BackgroundKind::lebesgue}, U, 1.5, o);
    CHECK(rec.chain_holds);
    CHECK(rec.lp > 0.0);
    CHECK(rec.quasi <= rec.norm);
    CHECK(rec.baseline_bound > 0.0);
    CHECK_THROWS_AS(check_corollary(cfg, {BackgroundKind::lebesgue}, U, 1.96, o), Error);
}

TEST_CASE("ball-level lower bound") {
    const PointConfig cfg({{0.0, 0.0}, {0.3, 0.1}, {-0.2, 0.25}});
    const double eta = 0.02;
    const auto tr = grow(initial_collection(cfg, eta), 0.5);
    const auto j = synthetic_j(cfg, {BackgroundKind::lebesgue});
    const auto rec = check_annulus_bounds(tr, j, eta, 0, {BackgroundKind::lebesgue}, 1e-4);
    CHECK(rec.n_B == 3);
    CHECK(rec.holds);
    CHECK(rec.circles_hold);
    CHECK_THROWS_AS(check_annulus_bounds(grow(initial_collection(cfg, eta), 0.5), j, 2.0 * eta, 0,
                                         {BackgroundKind::lebesgue}),
                    Error);
}

TEST_CASE("log-log slope") {
    CHECK(loglog_slope({1.0, 2.0, 4.0, 8.0}, {3.0, 3.0 * std::pow(2.0, 0.7), 3.0 * std::pow(4.0, 0.7),
                                              3.0 * std::pow(8.0, 0.7)}) == doctest::Approx(0.7));
    CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), Error);
}
