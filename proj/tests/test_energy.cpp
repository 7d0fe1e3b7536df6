#include "doctest.h"

#include "vortexlab/energy.hpp"
#include "vortexlab/quadrature.hpp"
#include "vortexlab/verify.hpp"

using namespace vlab;

namespace {
const double kTentOracle = M_PI * (2.0 * std::log(2.0) - 1.0);
}

TEST_CASE("pole bump") {
    CHECK(pole_bump(0.2) == 1.0);
    CHECK(pole_bump(0.5) == 1.0);
    CHECK(pole_bump(1.0) == 0.0);
    CHECK(pole_bump(0.75) == doctest::Approx(0.5));
    const auto r = pole_disc_radii({{0.0, 0.0}, {0.5, 0.0}, {10.0, 0.0}});
    CHECK(r[0] == doctest::Approx(0.225));
    CHECK(r[2] == doctest::Approx(0.5));
}

TEST_CASE("single vortex under the tent cutoff") {
    const PointConfig one({{0.3, -0.2}});
    const auto chi = make_standard_cutoff(Region::ball({0.3, -0.2}, 2.0));
    const auto j = synthetic_j(one, {BackgroundKind::zero});
    const auto r = renormalized_energy(j, chi, one, 1e-5);
    CHECK(r.W_estimate == doctest::Approx(kTentOracle).epsilon(1e-5));
    CHECK(r.active_poles == 1);
    // linear in χ
    const auto r2 = renormalized_energy(j, chi.scaled(2.5), one, 1e-5);
    CHECK(r2.W_estimate == doctest::Approx(2.5 * kTentOracle).epsilon(1e-5));
}

TEST_CASE("vortex-antivortex free of cutoff effects") {
    // Two unit vortices: W for a large disc grows like 2π log R; compare to the
    // direct η-truncated integral at small η.
    const PointConfig two({{-0.5, 0.0}, {0.5, 0.0}});
    const auto chi = make_standard_cutoff(Region::ball({0.0, 0.0}, 3.0));
    const auto j = synthetic_j(two, {BackgroundKind::zero});
    const auto r = renormalized_energy(j, chi, two, 1e-4);
    const double eta = 1e-3;
    CubatureOptions o;
    o.abs_tol = 1e-5;
    o.must_split = [&](const Box& b) {
        for (const auto& p : two.points()) {
            if (b.inflated(0.0).contains(p) && b.width() > 1e-4) return true;
        }
        return false;
    };
    auto f = [&](const Point2& x) {
        for (const auto& p : two.points()) {
            if (distance(x, p) <= eta) return 0.0;
        }
        return 0.5 * chi(x) * norm_sq(j(x));
    };
    const auto direct = adaptive_cubature(f, {{-3.0, -3.0}, {3.0, 3.0}}, o);
    // I(η) − W = O(η) for this smooth χ near the points
    CHECK(direct.value + 2.0 * M_PI * std::log(eta) == doctest::Approx(r.W_estimate).epsilon(1e-3));
}

TEST_CASE("comparison defect of a single growing ball") {
    // j = G on B(0, r), so ½∫χ|j − G|² = π(−log r + 2 log 2 − 1) = W − π log r.
    const PointConfig one({{0.0, 0.0}});
    const auto chi = make_standard_cutoff(Region::ball({0.0, 0.0}, 2.0));
    const auto j = synthetic_j(one, {BackgroundKind::zero});
    const double eta = 0.01;
    const double r = 0.4;
    const auto tr = grow({{{0.0, 0.0}, eta}}, r);
    const double D = comparison_defect(j, chi, one.points(), eta, annuli_from_trace(tr), 1e-9);
    CHECK(D == doctest::Approx(-M_PI * std::log(r)).epsilon(1e-6));
}

TEST_CASE("periodic lattices converge to the cell energy density") {
    const auto d = lattice_energy_density(LatticeKind::square, 4.0, 2, 1e-3);
    CHECK(d.shifts == 4);
    CHECK(d.min <= d.density);
    CHECK(d.density <= d.max);
    CHECK(d.measure == doctest::Approx(16.0 * M_PI));
}

TEST_CASE("energy errors") {
    const PointConfig one({{0.0, 0.0}});
    const auto chi = make_standard_cutoff(Region::ball({0.0, 0.0}, 2.0));
    CHECK_THROWS_AS(renormalized_energy(synthetic_j(one, {BackgroundKind::zero}), chi, one, -1.0), Error);
    CHECK_THROWS_AS(renormalized_energy(AnalyticField().add_vortex({1.0, 0.0}), chi, one, 1e-3), Error);
}
