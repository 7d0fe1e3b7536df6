#include "doctest.h"

#include "vortexlab/configs.hpp"
#include "vortexlab/core.hpp"

using namespace vlab;

TEST_CASE("perp rotates clockwise") {
    const Point2 v = perp({1.0, 0.0});
    CHECK(v.x == 0.0);
    CHECK(v.y == -1.0);
    CHECK(dot(perp({0.3, -2.0}), {0.3, -2.0}) == 0.0);
}

TEST_CASE("point configurations validate their input") {
    CHECK_THROWS_AS(PointConfig({{0.0, 0.0}, {0.0, 0.0}}), Error);
    CHECK_THROWS_AS(PointConfig({{std::nan(""), 0.0}}), Error);
    const PointConfig c({{0.0, 0.0}, {3.0, 4.0}, {10.0, 0.0}});
    CHECK(c.eta0() == doctest::Approx(2.5));
    CHECK(separation(c) == doctest::Approx(5.0));
    CHECK(std::isinf(PointConfig({{1.0, 1.0}}).eta0()));
}

TEST_CASE("background names and masses") {
    for (auto k : {BackgroundKind::zero, BackgroundKind::lebesgue, BackgroundKind::line}) {
        CHECK(background_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(background_from_string("uniform"), Error);
    const BackgroundMeasure line{BackgroundKind::line};
    CHECK(line.disc_mass({5.0, 0.6}, 1.0) == doctest::Approx(1.6));
    CHECK(line.disc_mass({5.0, 1.5}, 1.0) == 0.0);
    const BackgroundMeasure leb{BackgroundKind::lebesgue};
    CHECK(leb.disc_mass({0.0, 0.0}, 2.0) == doctest::Approx(4.0 * M_PI));
    // m(B(x, r)) ≤ π M r for r < 1
    for (double r : {0.1, 0.5, 0.99}) {
        CHECK(line.disc_mass({0.0, 0.0}, r) <= M_PI * line.density_bound() * r + 1e-15);
        CHECK(leb.disc_mass({0.0, 0.0}, r) <= M_PI * leb.density_bound() * r + 1e-15);
    }
}

TEST_CASE("regions report signed depth") {
    const auto b = Region::ball({1.0, 1.0}, 2.0);
    CHECK(b.signed_depth({1.0, 1.0}) == doctest::Approx(2.0));
    CHECK(b.signed_depth({4.0, 1.0}) == doctest::Approx(-1.0));
    CHECK(b.hat_contains({3.5, 1.0}));
    CHECK_FALSE(b.hat_contains({4.5, 1.0}));
    const auto r = Region::rectangle({0.0, 0.0}, {4.0, 2.0});
    CHECK(r.signed_depth({1.0, 0.5}) == doctest::Approx(0.5));
    CHECK(r.signed_depth({6.0, 5.0}) == doctest::Approx(-std::hypot(2.0, 3.0)));
    CHECK(r.area() == doctest::Approx(8.0));
    CHECK(r.inradius() == doctest::Approx(1.0));
    CHECK_THROWS_AS(Region::ball({0.0, 0.0}, -1.0), Error);
    CHECK_THROWS_AS(Region::rectangle({0.0, 0.0}, {0.0, 1.0}), Error);
}

TEST_CASE("standard cutoff ramps over unit depth") {
    const auto chi = make_standard_cutoff(Region::ball({0.0, 0.0}, 2.0));
    CHECK(chi({0.0, 0.0}) == 1.0);
    CHECK(chi({1.5, 0.0}) == doctest::Approx(0.5));
    CHECK(chi({2.5, 0.0}) == 0.0);
    CHECK(chi.lipschitz() == doctest::Approx(1.0));
    const auto smooth = make_standard_cutoff(Region::ball({0.0, 0.0}, 2.0), 2.0, CutoffProfile::smooth);
    CHECK(smooth({1.5, 0.0}) == doctest::Approx(1.0));
    CHECK(smooth.lipschitz() == doctest::Approx(3.0));
    CHECK(chi.scaled(3.0)({0.0, 0.0}) == doctest::Approx(3.0));
}

TEST_CASE("lattice generators hit the neutral density") {
    CHECK(hex_spacing() * hex_spacing() * std::sqrt(3.0) / 2.0 == doctest::Approx(2.0 * M_PI));
    CHECK(square_spacing() * square_spacing() == doctest::Approx(2.0 * M_PI));
    CHECK(std::isinf(hex_shells(0).eta0()));
    for (int s = 1; s <= 4; ++s) {
        const auto c = hex_shells(s);
        CHECK(c.size() == static_cast<std::size_t>(1 + 3 * s * (s + 1)));
        CHECK(hex_shells_for_count(c.size()) == s);
        CHECK(c.eta0() == doctest::Approx(hex_spacing() / 2.0).epsilon(1e-9));
    }
    CHECK_THROWS_AS(hex_shells_for_count(8), Error);
    CHECK(line_lattice(10.0).size() == 3);
    const auto sq = square_lattice_in_ball(6.0);
    for (const auto& p : sq.points()) CHECK(norm(p) < 6.0);
}

TEST_CASE("random configurations are seeded and separated") {
    const auto U = Region::ball({0.0, 0.0}, 5.0);
    const auto a = uniform_in_region(U, 20, 42, 0.5);
    const auto b = uniform_in_region(U, 20, 42, 0.5);
    REQUIRE(a.size() == 20);
    CHECK(a.points() == b.points());
    CHECK(separation(a) >= 0.5);
    for (const auto& p : a.points()) CHECK(U.contains(p));
    const auto poi = poisson_in_region(U, 0.5, 7, 0.2);
    CHECK(poi.size() > 10);
}

TEST_CASE("configuration JSON round trip and errors") {
    const PointConfig c({{0.0, 1.0}, {2.0, -1.0}});
    const auto doc = config_to_json(c, {BackgroundKind::line}, Region::rectangle({-1.0, -2.0}, {3.0, 2.0}));
    const auto in = parse_config_json(doc);
    CHECK(in.config.points() == c.points());
    CHECK(in.background.kind == BackgroundKind::line);
    REQUIRE(in.region);
    CHECK(in.region->area() == doctest::Approx(16.0));
    CHECK_THROWS_AS(parse_config_json(nlohmann::json::parse(R"({"points": [[0, 0], [1]]})")), Error);
    CHECK_THROWS_AS(parse_config_json(nlohmann::json::parse(R"({"points": [[0, 0]], "background": {"kind": "x"}})")),
                    Error);
    CHECK_THROWS_AS(parse_config_json(nlohmann::json::parse(R"([1, 2])")), Error);
}
