#include "doctest.h"

#include "vortexlab/fields.hpp"

#include <sstream>

using namespace vlab;

TEST_CASE("unit vortex and backgrounds") {
    const Point2 v = vortex_at({2.0, 0.0}, {0.0, 0.0});
    CHECK(v.x == doctest::Approx(0.0));
    CHECK(v.y == doctest::Approx(-0.5));
    const Point2 b = background_at({0.0, 2.0}, BackgroundKind::lebesgue);
    CHECK(b.x == doctest::Approx(-1.0));
    CHECK(background_at({3.0, -1.0}, BackgroundKind::line).x == doctest::Approx(0.5));
    CHECK(norm(background_at({3.0, -1.0}, BackgroundKind::zero)) == 0.0);
}

TEST_CASE("circulation of synthetic fields") {
    const PointConfig cfg({{0.0, 0.0}, {1.0, 0.5}, {-2.0, 0.0}});
    for (auto kind : {BackgroundKind::zero, BackgroundKind::lebesgue, BackgroundKind::line}) {
        const BackgroundMeasure bg{kind};
        const auto j = synthetic_j(cfg, bg);
        for (const auto& [c, r] : std::vector<std::pair<Point2, double>>{{{0.1, 0.2}, 0.7}, {{0.0, 0.1}, 1.5}, {{-1.0, 0.3}, 3.0}}) {
            CHECK(circulation(j, c, r) == doctest::Approx(expected_circulation(cfg, bg, c, r)).epsilon(1e-9));
        }
    }
    CHECK(expected_circulation(cfg, {BackgroundKind::zero}, {0.0, 0.0}, 1.0) == doctest::Approx(2.0 * M_PI));
}

TEST_CASE("field evaluation rejects poles") {
    const auto j = synthetic_j(PointConfig({{1.0, 1.0}}), {BackgroundKind::zero});
    CHECK_THROWS_AS(j({1.0, 1.0}), Error);
    const auto s = j.split({1.5, 1.0}, {1.0, 1.0});
    CHECK(s.singular == doctest::Approx(1.0));
    CHECK(norm(j.remainder({1.5, 1.0}, {1.0, 1.0})) == doctest::Approx(0.0));
}

TEST_CASE("annulus and ball terms") {
    AnalyticField f;
    f.add_annulus({{0.0, 0.0}, 1.0, 2.0}).add_ball({{5.0, 0.0}, 0.5});
    CHECK(norm(f({0.5, 0.0})) == 0.0);
    CHECK(norm(f({1.5, 0.0})) == doctest::Approx(1.0 / 1.5));
    CHECK(norm(f({2.0, 0.0})) == doctest::Approx(0.5));
    CHECK(norm(f({5.25, 0.0})) == doctest::Approx(4.0));
    CHECK(circulation(f, {0.0, 0.0}, 1.7) == doctest::Approx(2.0 * M_PI));
    CHECK(f.restricted_to({{5.0, 0.0}, 1.0}).terms().size() == 1);
}

TEST_CASE("G reproduces the unit vortices of the growth") {
    const PointConfig cfg({{0.0, 0.0}, {2.0, 0.0}});
    const double eta = 0.05;
    const auto tr = grow(initial_collection(cfg, eta), 3.0);
    const auto a = annuli_from_trace(tr);
    const auto G = make_G(tr, a, eta);
    // Circles inside a single annulus carry circulation 2π per enclosed point.
    CHECK(circulation(G, {0.0, 0.0}, 0.5) == doctest::Approx(2.0 * M_PI).epsilon(1e-9));
    // The merged ball's annulus is one unit vortex about the merged center.
    const auto root = tr.final_collection()[0];
    CHECK(circulation(G, root.center, 0.5 * (root.radius + 2.0)) == doctest::Approx(2.0 * M_PI).epsilon(1e-9));
    CHECK_THROWS_AS(make_G(tr, a, 1.0), Error);
}

TEST_CASE("periodic lattice field") {
    for (auto kind : {LatticeKind::square, LatticeKind::hex}) {
        AnalyticField j;
        j.add_neutral_lattice(kind, {0.2, -0.1});
        CHECK(j.periodic());
        const double a = lattice_spacing(kind);
        const Point2 e2 = kind == LatticeKind::hex ? Point2{a / 2.0, a * std::sqrt(3.0) / 2.0} : Point2{0.0, a};
        const Point2 x{0.7, 1.9};
        CHECK(norm(j(x) - j(x + Point2{a, 0.0})) < 1e-11);
        CHECK(norm(j(x) - j(x - e2 * 3.0)) < 1e-11);
        const Point2 c{0.31, -0.4};
        const double R = 4.3;
        const auto poles = j.poles_in({{c.x - R - 1.0, c.y - R - 1.0}, {c.x + R + 1.0, c.y + R + 1.0}});
        CHECK(circulation(j, c, R) ==
              doctest::Approx(expected_circulation(PointConfig(poles), {BackgroundKind::lebesgue}, c, R)).epsilon(1e-8));
        // remainder is smooth at the pole
        const Point2 p = poles.front();
        CHECK(j.has_unit_vortex_at(p));
        CHECK(norm(j.remainder(p + Point2{1e-6, 0.0}, p) - j.remainder(p + Point2{0.0, 1e-6}, p)) < 1e-5);
    }
}

TEST_CASE("periodic chain field") {
    AnalyticField j;
    j.add_neutral_chain({0.0, 5.0});
    const double L = 4.0 * M_PI;
    const Point2 x{0.3, 0.8};
    CHECK(norm(j(x) - j(x + Point2{L, 0.0})) < 1e-11);
    CHECK(j.has_line_background());
    const auto poles = j.poles_in({{-10.0, -2.0}, {10.0, 2.0}});
    CHECK(circulation(j, {1.0, 0.2}, 6.5) ==
          doctest::Approx(expected_circulation(PointConfig(poles), {BackgroundKind::line}, {1.0, 0.2}, 6.5)).epsilon(1e-8));
    CHECK_THROWS_AS(AnalyticField().add_neutral_chain({}), Error);
}

TEST_CASE("field CSV marks poles") {
    const auto j = synthetic_j(PointConfig({{0.0, 0.0}}), {BackgroundKind::zero});
    std::ostringstream out;
    write_field_csv(out, j, {{-1.0, -1.0}, {1.0, 1.0}}, 3, 3);
    CHECK(out.str().find("nan") != std::string::npos);
}
